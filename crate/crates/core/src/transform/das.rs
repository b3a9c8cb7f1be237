//! Multilevel filters and discrete affine system generators.

use crate::construction::{FilterBank1D, FilterBank2D};
use crate::error::{Error, Result};
use crate::fft;
use crate::filters::resample_symbol;
use crate::transform::signal::Signal2D;
use num_complex::Complex64;

/// Product of dilated symbols on an `len`-point grid:
/// `out[k] = scale * prod_i f_i[(k << t_i) mod len]`.
pub(crate) fn product_symbol(
    len: usize,
    factors: &[(&[Complex64], u32)],
    scale: f64,
) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(scale, 0.0); len];
    for (sym, t) in factors {
        debug_assert_eq!(sym.len(), len);
        for (k, o) in out.iter_mut().enumerate() {
            *o *= sym[(k << t) % len];
        }
    }
    out
}

/// Multilevel symbol on the signal grid: `2^{j/2} a^(xi) ... a^(2^{j-2} xi)
/// last^(2^{j-1} xi)` (per axis, so `d = 1` scaling).
pub fn multilevel_symbol_1d(
    low: &[Complex64],
    last: &[Complex64],
    j: usize,
) -> Result<Vec<Complex64>> {
    let len = low.len();
    if j == 0 || !len.is_multiple_of(1usize << j) {
        return Err(Error::grid(format!(
            "level {j} incompatible with grid of {len}"
        )));
    }
    let mut factors: Vec<(&[Complex64], u32)> = Vec::with_capacity(j);
    for t in 0..j - 1 {
        factors.push((low, t as u32));
    }
    factors.push((last, (j - 1) as u32));
    Ok(product_symbol(len, &factors, 2f64.powf(j as f64 / 2.0)))
}

/// A generator of the discrete affine system: one multilevel filter living on
/// the shift lattice `2^level Z^d`.
#[derive(Debug, Clone)]
pub struct DasGenerator1D {
    pub level: usize,
    pub label: String,
    /// Time-domain samples on the signal grid (periodized).
    pub time: Vec<Complex64>,
    pub shift_stride: usize,
}

#[derive(Debug, Clone)]
pub struct DasGenerator2D {
    pub level: usize,
    pub label: String,
    pub direction_deg: Option<f64>,
    pub time: Signal2D,
    pub shift_stride: usize,
}

/// The level-`j` multilevel filter of a 1-D bank channel on an `len` grid.
pub fn multilevel_filter_1d(
    bank: &FilterBank1D,
    j: usize,
    label: &str,
    len: usize,
) -> Result<DasGenerator1D> {
    let low = resample_symbol(bank.a().samples(), len)?;
    let which = bank
        .filter_by_label(label)
        .ok_or_else(|| Error::param(format!("no filter labeled {label}")))?;
    let last = resample_symbol(which.samples(), len)?;
    let mut sym = multilevel_symbol_1d(&low, &last, j)?;
    fft::fft(&mut sym, true);
    Ok(DasGenerator1D {
        level: j,
        label: label.to_string(),
        time: sym,
        shift_stride: 1 << j,
    })
}

/// All generators of the `levels`-level discrete affine system of a 1-D bank:
/// the final low-pass `a_J` plus every high-pass `b_{l,j}`, `j = 1..J`.
pub fn das_generators_1d(
    bank: &FilterBank1D,
    levels: usize,
    len: usize,
) -> Result<Vec<DasGenerator1D>> {
    let mut out = vec![multilevel_filter_1d(bank, levels, &bank.a().label.clone(), len)?];
    for j in 1..=levels {
        for b in &bank.highpass {
            out.push(multilevel_filter_1d(bank, j, &b.label.clone(), len)?);
        }
    }
    Ok(out)
}

/// Generators of the 2-D system: separable products of per-axis multilevel
/// symbols, returned in the time domain.
pub fn das_generators_2d(
    bank: &FilterBank2D,
    levels: usize,
    len: usize,
) -> Result<Vec<DasGenerator2D>> {
    let low = resample_symbol(bank.lowpass.row.samples(), len)?;
    let gen = |label: &str, dir: Option<f64>, row: &[Complex64], col: &[Complex64], j: usize| -> Result<DasGenerator2D> {
        let mut rsym = multilevel_symbol_1d(&low, row, j)?;
        let mut csym = multilevel_symbol_1d(&low, col, j)?;
        fft::fft(&mut rsym, true);
        fft::fft(&mut csym, true);
        let mut time = Signal2D::zeros(len, len);
        for (i, r) in rsym.iter().enumerate() {
            for (k, c) in csym.iter().enumerate() {
                time.data[i * len + k] = r * c;
            }
        }
        Ok(DasGenerator2D {
            level: j,
            label: label.to_string(),
            direction_deg: dir,
            time,
            shift_stride: 1 << j,
        })
    };
    let lp_row = resample_symbol(bank.lowpass.row.samples(), len)?;
    let lp_col = resample_symbol(bank.lowpass.col.samples(), len)?;
    let mut out = vec![gen(&bank.lowpass.label.clone(), None, &lp_row, &lp_col, levels)?];
    for j in 1..=levels {
        for f in &bank.highpass {
            let row = resample_symbol(f.row.samples(), len)?;
            let col = resample_symbol(f.col.samples(), len)?;
            out.push(gen(&f.label, f.direction_deg, &row, &col, j)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::haar_bank;

    #[test]
    fn level_one_is_sqrt2_times_filter() {
        let bank = haar_bank(16).unwrap();
        let g = multilevel_filter_1d(&bank, 1, "a", 16).unwrap();
        assert!((g.time[0].re - 2f64.sqrt() * 0.5).abs() < 1e-12);
        assert!((g.time[1].re - 2f64.sqrt() * 0.5).abs() < 1e-12);
        for k in 2..16 {
            assert!(g.time[k].norm() < 1e-12);
        }
    }

    #[test]
    fn haar_level_two_lowpass() {
        // a + a upsampled, scaled by 2: constant 1/2 on [0, 3]
        let bank = haar_bank(16).unwrap();
        let g = multilevel_filter_1d(&bank, 2, "a", 16).unwrap();
        for k in 0..4 {
            assert!((g.time[k].re - 0.5).abs() < 1e-12, "k={k}");
        }
        for k in 4..16 {
            assert!(g.time[k].norm() < 1e-12);
        }
        assert_eq!(g.shift_stride, 4);
    }

    #[test]
    fn level_too_deep_rejected() {
        let bank = haar_bank(16).unwrap();
        assert!(multilevel_filter_1d(&bank, 5, "a", 16).is_err());
    }
}
