//! On-disk pyramid format: one raw file of little-endian (re, im) f64 pairs
//! per subband plus a JSON manifest.

use crate::error::{Error, Result};
use crate::transform::pyramid::{Band2D, Pyramid2D};
use crate::transform::signal::Signal2D;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Serialize, Deserialize)]
pub struct PyramidManifest {
    pub bank_name: String,
    pub n: u32,
    pub levels: usize,
    pub height: usize,
    pub width: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tree_variant: Option<String>,
    pub subbands: Vec<SubbandEntry>,
    pub lowpass: SubbandEntry,
}

#[derive(Serialize, Deserialize)]
pub struct SubbandEntry {
    pub level: usize,
    pub label: String,
    pub height: usize,
    pub width: usize,
    pub file: String,
}

fn write_raw(path: &Path, s: &Signal2D) -> Result<()> {
    let mut bytes = Vec::with_capacity(16 * s.data.len());
    for c in &s.data {
        bytes.extend_from_slice(&c.re.to_le_bytes());
        bytes.extend_from_slice(&c.im.to_le_bytes());
    }
    fs::write(path, bytes)?;
    Ok(())
}

fn read_raw(path: &Path, height: usize, width: usize) -> Result<Signal2D> {
    let bytes = fs::read(path)?;
    if bytes.len() != 16 * height * width {
        return Err(Error::shape(format!(
            "{} has {} bytes, expected {}",
            path.display(),
            bytes.len(),
            16 * height * width
        )));
    }
    let data = bytes
        .chunks_exact(16)
        .map(|ch| {
            Complex64::new(
                f64::from_le_bytes(ch[..8].try_into().unwrap()),
                f64::from_le_bytes(ch[8..].try_into().unwrap()),
            )
        })
        .collect();
    Ok(Signal2D {
        height,
        width,
        data,
        declared_real: false,
    })
}

fn file_name(level: usize, label: &str) -> String {
    let safe: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("L{level}_{safe}.f64")
}

pub fn write_pyramid(p: &Pyramid2D, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut subbands = Vec::new();
    for (li, level) in p.levels.iter().enumerate() {
        for band in level {
            let file = file_name(li + 1, &band.label);
            write_raw(&dir.join(&file), &band.data)?;
            subbands.push(SubbandEntry {
                level: li + 1,
                label: band.label.clone(),
                height: band.data.height,
                width: band.data.width,
                file,
            });
        }
    }
    let low_file = "lowpass.f64".to_string();
    write_raw(&dir.join(&low_file), &p.lowpass)?;
    let manifest = PyramidManifest {
        bank_name: p.bank_name.clone(),
        n: p.n,
        levels: p.levels.len(),
        height: p.levels.first().map(|l| l[0].data.height * 2).unwrap_or(0),
        width: p.levels.first().map(|l| l[0].data.width * 2).unwrap_or(0),
        tree_variant: None,
        subbands,
        lowpass: SubbandEntry {
            level: p.levels.len(),
            label: "lowpass".to_string(),
            height: p.lowpass.height,
            width: p.lowpass.width,
            file: low_file,
        },
    };
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(())
}

pub fn read_pyramid(dir: &Path) -> Result<Pyramid2D> {
    let manifest: PyramidManifest =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
    let mut levels: Vec<Vec<Band2D>> = (0..manifest.levels).map(|_| Vec::new()).collect();
    for e in &manifest.subbands {
        if e.level == 0 || e.level > manifest.levels {
            return Err(Error::shape(format!("bad level {} in manifest", e.level)));
        }
        levels[e.level - 1].push(Band2D {
            label: e.label.clone(),
            data: read_raw(&dir.join(&e.file), e.height, e.width)?,
        });
    }
    let lowpass = read_raw(
        &dir.join(&manifest.lowpass.file),
        manifest.lowpass.height,
        manifest.lowpass.width,
    )?;
    Ok(Pyramid2D {
        bank_name: manifest.bank_name,
        n: manifest.n,
        levels,
        lowpass,
    })
}
