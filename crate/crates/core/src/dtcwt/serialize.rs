//! On-disk format for dual-tree coefficients: the pyramid layout (raw
//! little-endian (re, im) f64 pairs per subband + JSON manifest) with a
//! `tree_variant` manifest field.

use crate::dtcwt::{BandType, DtBand, DtBandId, DtCoeffs, DtLevel, FirstLevelKind, PairCombo};
use crate::error::{Error, Result};
use crate::transform::{Signal2D, SubbandEntry};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fs;
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct DtManifest {
    tree_variant: String,
    levels: usize,
    height: usize,
    width: usize,
    subbands: Vec<SubbandEntry>,
    lowpass: Vec<SubbandEntry>,
}

impl DtBandId {
    /// Inverse of [`DtBandId::label`].
    pub fn parse_label(label: &str) -> Option<DtBandId> {
        if let Some(rest) = label.strip_prefix("ctf_") {
            let (row_tok, col_tok) = rest.split_once('_')?;
            let strip = |t: &str| -> (String, bool) {
                if t.len() > 1 && t.ends_with('s') {
                    (t[..t.len() - 1].to_string(), true)
                } else {
                    (t.to_string(), false)
                }
            };
            let (row, row_shift) = strip(row_tok);
            let (col, col_shift) = strip(col_tok);
            return Some(DtBandId::FirstLevelCtf {
                row,
                row_shift,
                col,
                col_shift,
            });
        }
        let (t, c) = label.split_once('_')?;
        let btype = match t {
            "ab" => BandType::LowHigh,
            "ba" => BandType::HighLow,
            "bb" => BandType::HighHigh,
            _ => return None,
        };
        let combo = match c {
            "pp" => PairCombo::Pp,
            "nn" => PairCombo::Nn,
            "pn" => PairCombo::Pn,
            "np" => PairCombo::Np,
            _ => return None,
        };
        Some(DtBandId::Oriented { btype, combo })
    }
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
        return Err(Error::shape(format!("{} has wrong size", path.display())));
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

pub fn write_dtcoeffs(c: &DtCoeffs, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut subbands = Vec::new();
    for (li, level) in c.levels.iter().enumerate() {
        for band in &level.bands {
            let file = format!("L{}_{}.f64", li + 1, band.id.label());
            write_raw(&dir.join(&file), &band.data)?;
            subbands.push(SubbandEntry {
                level: li + 1,
                label: band.id.label(),
                height: band.data.height,
                width: band.data.width,
                file,
            });
        }
    }
    let mut lowpass = Vec::new();
    for (i, s) in c.lowpass.iter().enumerate() {
        let name = format!("ll_{}{}.f64", i / 2 + 1, i % 2 + 1);
        write_raw(&dir.join(&name), s)?;
        lowpass.push(SubbandEntry {
            level: c.levels.len(),
            label: format!("ll_{}{}", i / 2 + 1, i % 2 + 1),
            height: s.height,
            width: s.width,
            file: name,
        });
    }
    let manifest = DtManifest {
        tree_variant: match &c.first_level {
            FirstLevelKind::Standard => "standard".to_string(),
            FirstLevelKind::Tpctf { n } => format!("tpctf{n}"),
        },
        levels: c.levels.len(),
        height: c.height,
        width: c.width,
        subbands,
        lowpass,
    };
    fs::write(
        dir.join("manifest.json"),
        serde_json::to_string_pretty(&manifest)?,
    )?;
    Ok(())
}

pub fn read_dtcoeffs(dir: &Path) -> Result<DtCoeffs> {
    let manifest: DtManifest =
        serde_json::from_str(&fs::read_to_string(dir.join("manifest.json"))?)?;
    let mut levels: Vec<DtLevel> = (0..manifest.levels)
        .map(|_| DtLevel { bands: Vec::new() })
        .collect();
    for e in &manifest.subbands {
        let id = DtBandId::parse_label(&e.label)
            .ok_or_else(|| Error::shape(format!("bad band label {}", e.label)))?;
        if e.level == 0 || e.level > manifest.levels {
            return Err(Error::shape(format!("bad level {}", e.level)));
        }
        levels[e.level - 1].bands.push(DtBand {
            id,
            data: read_raw(&dir.join(&e.file), e.height, e.width)?,
        });
    }
    if manifest.lowpass.len() != 4 {
        return Err(Error::shape("expected 4 low-pass subbands".to_string()));
    }
    let lowpass = manifest
        .lowpass
        .iter()
        .map(|e| read_raw(&dir.join(&e.file), e.height, e.width))
        .collect::<Result<Vec<_>>>()?;
    let first_level = if manifest.tree_variant == "standard" {
        FirstLevelKind::Standard
    } else if let Some(n) = manifest.tree_variant.strip_prefix("tpctf") {
        FirstLevelKind::Tpctf {
            n: n.parse()
                .map_err(|_| Error::shape("bad tree_variant".to_string()))?,
        }
    } else {
        return Err(Error::shape(format!(
            "unknown tree_variant {}",
            manifest.tree_variant
        )));
    };
    Ok(DtCoeffs {
        height: manifest.height,
        width: manifest.width,
        levels,
        lowpass,
        first_level,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_ctf, CtfParams};
    use crate::denoise::standard_normals;
    use crate::dtcwt::{dtcwt_decompose, dtcwt_reconstruct, DtFilterSet};

    #[test]
    fn dt_coefficient_round_trip() {
        let img = Signal2D::from_real(32, 32, &standard_normals(3, 1024));
        let fs = DtFilterSet::kingsbury();
        let bank = build_ctf(&CtfParams::published(6).unwrap(), 64).unwrap();
        for first in [None, Some(&bank)] {
            let c = dtcwt_decompose(&img, &fs, 2, first).unwrap();
            let dir = std::env::temp_dir().join(format!(
                "tpctf_dt_{}_{}",
                std::process::id(),
                first.map(|_| "h").unwrap_or("s")
            ));
            write_dtcoeffs(&c, &dir).unwrap();
            let back = read_dtcoeffs(&dir).unwrap();
            std::fs::remove_dir_all(&dir).ok();
            assert_eq!(back.first_level, c.first_level);
            let r = dtcwt_reconstruct(&back, &fs, first).unwrap();
            let num: f64 = img
                .data
                .iter()
                .zip(&r.data)
                .map(|(a, b)| (a - b).norm_sqr())
                .sum();
            assert!((num / img.norm_sqr()).sqrt() < 1e-9);
        }
    }
}
