//! Multilevel decimated framelet decomposition and reconstruction.
//!
//! Each analysis level computes `2^{-d/2} T_f` per channel; synthesis runs
//! the adjoint. For a tight bank the composition is the identity and the
//! coefficient set carries exactly the signal energy.

use crate::construction::{FilterBank1D, FilterBank2D};
use crate::error::{Error, Result};
use crate::fft;
use crate::filters::resample_symbol;
use crate::transform::ops::{fold_spectrum_1d, fold_spectrum_2d, unfold_spectrum_1d, unfold_spectrum_2d};
use crate::transform::signal::{Signal1D, Signal2D};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone)]
pub struct Band1D {
    pub label: String,
    pub data: Signal1D,
}

/// Coefficients of a J-level 1-D decomposition.
#[derive(Debug, Clone)]
pub struct Pyramid1D {
    pub bank_name: String,
    /// levels[j - 1] holds the level-j high-pass subbands, finest first.
    pub levels: Vec<Vec<Band1D>>,
    pub lowpass: Signal1D,
}

/// One-dimensional decomposition using `{a; b_1 ... b_s}` (for even-n banks
/// the split pair participates only in the 2-D assembly).
pub fn decompose_1d(v: &Signal1D, bank: &FilterBank1D, levels: usize) -> Result<Pyramid1D> {
    if levels == 0 || !v.len().is_multiple_of(1 << levels) {
        return Err(Error::shape(format!(
            "length {} not divisible by 2^{levels}",
            v.len()
        )));
    }
    let mut cur = v.data.clone();
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        let n = cur.len();
        let mut spec = cur;
        fft::fft(&mut spec, false);
        let mut bands = Vec::with_capacity(bank.highpass.len());
        for b in &bank.highpass {
            let sym = resample_symbol(b.samples(), n)?;
            let mut w = fold_spectrum_1d(&spec, &sym);
            fft::fft(&mut w, true);
            for c in w.iter_mut() {
                *c *= FRAC_1_SQRT_2;
            }
            bands.push(Band1D {
                label: b.label.clone(),
                data: Signal1D {
                    data: w,
                    declared_real: false,
                },
            });
        }
        let sym = resample_symbol(bank.a().samples(), n)?;
        let mut low = fold_spectrum_1d(&spec, &sym);
        fft::fft(&mut low, true);
        for c in low.iter_mut() {
            *c *= FRAC_1_SQRT_2;
        }
        out.push(bands);
        cur = low;
    }
    Ok(Pyramid1D {
        bank_name: bank.name.clone(),
        levels: out,
        lowpass: Signal1D {
            data: cur,
            declared_real: false,
        },
    })
}

pub fn reconstruct_1d(p: &Pyramid1D, bank: &FilterBank1D) -> Result<Signal1D> {
    let mut cur = p.lowpass.data.clone();
    for bands in p.levels.iter().rev() {
        let n = cur.len() * 2;
        let mut spec = vec![Complex64::default(); n];
        let mut low = cur;
        fft::fft(&mut low, false);
        let sym = resample_symbol(bank.a().samples(), n)?;
        unfold_spectrum_1d(&mut spec, &low, &sym);
        for band in bands {
            let b = bank
                .filter_by_label(&band.label)
                .ok_or_else(|| Error::shape(format!("bank has no filter {}", band.label)))?;
            if band.data.len() * 2 != n {
                return Err(Error::shape("subband size mismatch".to_string()));
            }
            let mut w = band.data.data.clone();
            fft::fft(&mut w, false);
            let sym = resample_symbol(b.samples(), n)?;
            unfold_spectrum_1d(&mut spec, &w, &sym);
        }
        fft::fft(&mut spec, true);
        for c in spec.iter_mut() {
            *c *= FRAC_1_SQRT_2;
        }
        cur = spec;
    }
    Ok(Signal1D {
        data: cur,
        declared_real: false,
    })
}

#[derive(Debug, Clone)]
pub struct Band2D {
    pub label: String,
    pub data: Signal2D,
}

/// Coefficients of a J-level 2-D decomposition.
#[derive(Debug, Clone)]
pub struct Pyramid2D {
    pub bank_name: String,
    pub n: u32,
    pub levels: Vec<Vec<Band2D>>,
    pub lowpass: Signal2D,
}

impl Pyramid2D {
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn band(&self, level: usize, label: &str) -> Option<&Band2D> {
        self.levels[level - 1].iter().find(|b| b.label == label)
    }
}

/// Two-dimensional decomposition with the bank's low-pass channel `a (x) a`
/// and its high-pass channels.
pub fn decompose_2d(v: &Signal2D, bank: &FilterBank2D, levels: usize) -> Result<Pyramid2D> {
    if levels == 0 || !v.height.is_multiple_of(1 << levels) || !v.width.is_multiple_of(1 << levels) {
        return Err(Error::shape(format!(
            "{}x{} not divisible by 2^{levels}",
            v.height, v.width
        )));
    }
    let mut cur = v.clone();
    let mut out = Vec::with_capacity(levels);
    for _ in 0..levels {
        let (h, w) = (cur.height, cur.width);
        let mut spec = cur.data;
        fft::fft2(&mut spec, h, w, false);
        let mut bands = Vec::with_capacity(bank.highpass.len());
        for f in &bank.highpass {
            let rsym = resample_symbol(f.row.samples(), h)?;
            let csym = resample_symbol(f.col.samples(), w)?;
            let mut sub = fold_spectrum_2d(&spec, h, w, &rsym, &csym);
            fft::fft2(&mut sub, h / 2, w / 2, true);
            for c in sub.iter_mut() {
                *c *= 0.5;
            }
            bands.push(Band2D {
                label: f.label.clone(),
                data: Signal2D {
                    height: h / 2,
                    width: w / 2,
                    data: sub,
                    declared_real: false,
                },
            });
        }
        let rsym = resample_symbol(bank.lowpass.row.samples(), h)?;
        let csym = resample_symbol(bank.lowpass.col.samples(), w)?;
        let mut low = fold_spectrum_2d(&spec, h, w, &rsym, &csym);
        fft::fft2(&mut low, h / 2, w / 2, true);
        for c in low.iter_mut() {
            *c *= 0.5;
        }
        out.push(bands);
        cur = Signal2D {
            height: h / 2,
            width: w / 2,
            data: low,
            declared_real: false,
        };
    }
    Ok(Pyramid2D {
        bank_name: bank.name.clone(),
        n: bank.n,
        levels: out,
        lowpass: cur,
    })
}

pub fn reconstruct_2d(p: &Pyramid2D, bank: &FilterBank2D) -> Result<Signal2D> {
    let mut cur = p.lowpass.clone();
    for bands in p.levels.iter().rev() {
        let (h, w) = (cur.height * 2, cur.width * 2);
        let mut spec = vec![Complex64::default(); h * w];
        let mut low = cur.data;
        fft::fft2(&mut low, h / 2, w / 2, false);
        let rsym = resample_symbol(bank.lowpass.row.samples(), h)?;
        let csym = resample_symbol(bank.lowpass.col.samples(), w)?;
        unfold_spectrum_2d(&mut spec, h, w, &low, &rsym, &csym);
        for band in bands {
            let f = bank
                .highpass_by_label(&band.label)
                .ok_or_else(|| Error::shape(format!("bank has no filter {}", band.label)))?;
            if band.data.height * 2 != h || band.data.width * 2 != w {
                return Err(Error::shape("subband size mismatch".to_string()));
            }
            let mut sub = band.data.data.clone();
            fft::fft2(&mut sub, h / 2, w / 2, false);
            let rsym = resample_symbol(f.row.samples(), h)?;
            let csym = resample_symbol(f.col.samples(), w)?;
            unfold_spectrum_2d(&mut spec, h, w, &sub, &rsym, &csym);
        }
        fft::fft2(&mut spec, h, w, true);
        for c in spec.iter_mut() {
            *c *= 0.5;
        }
        cur = Signal2D {
            height: h,
            width: w,
            data: spec,
            declared_real: false,
        };
    }
    Ok(cur)
}

/// Total squared magnitude over all subbands including the final low-pass.
pub fn energy_2d(p: &Pyramid2D) -> f64 {
    let mut e = p.lowpass.norm_sqr();
    for level in &p.levels {
        for band in level {
            e += band.data.norm_sqr();
        }
    }
    e
}

pub fn energy_1d(p: &Pyramid1D) -> f64 {
    let mut e = p.lowpass.norm_sqr();
    for level in &p.levels {
        for band in level {
            e += band.data.norm_sqr();
        }
    }
    e
}

/// Keep the shape of a pyramid but zero every coefficient.
pub fn zero_like(p: &Pyramid2D) -> Pyramid2D {
    let mut q = p.clone();
    for level in q.levels.iter_mut() {
        for band in level.iter_mut() {
            band.data.data.fill(Complex64::default());
        }
    }
    q.lowpass.data.fill(Complex64::default());
    q
}
