//! JSON import/export of one-dimensional filter banks.

use crate::construction::ctf::FilterBank1D;
use crate::error::{Error, Result};
use crate::filters::{FilterRole, FreqFilter};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Serialize, Deserialize)]
struct BankDoc {
    name: String,
    n: u32,
    grid_size: usize,
    warnings: Vec<String>,
    filters: Vec<FilterDoc>,
}

#[derive(Serialize, Deserialize)]
struct FilterDoc {
    label: String,
    role: FilterRole,
    direction_deg: Option<f64>,
    freq_re: Vec<f64>,
    freq_im: Vec<f64>,
}

fn filter_doc(f: &FreqFilter) -> FilterDoc {
    FilterDoc {
        label: f.label.clone(),
        role: f.role,
        direction_deg: None,
        freq_re: f.samples().iter().map(|c| c.re).collect(),
        freq_im: f.samples().iter().map(|c| c.im).collect(),
    }
}

pub fn bank_to_json(bank: &FilterBank1D) -> Result<String> {
    let doc = BankDoc {
        name: bank.name.clone(),
        n: bank.n,
        grid_size: bank.grid_size,
        warnings: bank.warnings.clone(),
        filters: bank
            .lowpass
            .iter()
            .chain(bank.highpass.iter())
            .map(filter_doc)
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc)?)
}

pub fn bank_from_json(text: &str) -> Result<FilterBank1D> {
    let doc: BankDoc = serde_json::from_str(text)?;
    let mut lowpass = Vec::new();
    let mut highpass = Vec::new();
    for fd in doc.filters {
        if fd.freq_re.len() != doc.grid_size || fd.freq_im.len() != doc.grid_size {
            return Err(Error::grid(format!(
                "filter {} has {} samples, expected {}",
                fd.label,
                fd.freq_re.len(),
                doc.grid_size
            )));
        }
        let samples: Vec<Complex64> = fd
            .freq_re
            .iter()
            .zip(&fd.freq_im)
            .map(|(&re, &im)| Complex64::new(re, im))
            .collect();
        let f = FreqFilter::new(fd.label, fd.role, samples)?;
        match f.role {
            FilterRole::Lowpass => lowpass.push(f),
            FilterRole::Highpass => highpass.push(f),
        }
    }
    if lowpass.is_empty() || highpass.is_empty() {
        return Err(Error::param("bank needs low-pass and high-pass filters"));
    }
    Ok(FilterBank1D {
        name: doc.name,
        n: doc.n,
        grid_size: doc.grid_size,
        lowpass,
        highpass,
        params: None,
        warnings: doc.warnings,
    })
}

pub fn write_bank(bank: &FilterBank1D, path: &Path) -> Result<()> {
    std::fs::write(path, bank_to_json(bank)?)?;
    Ok(())
}

pub fn read_bank(path: &Path) -> Result<FilterBank1D> {
    bank_from_json(&std::fs::read_to_string(path)?)
}
