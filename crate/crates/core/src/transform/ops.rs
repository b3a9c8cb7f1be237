//! Transition and subdivision operators, computed in the frequency domain
//! with periodic boundary handling.
//!
//! `T_a v = 2^d (v * a^star) downsample 2`, `S_a v = 2^d (v upsample 2) * a`.
//! The `2^{-d/2}` analysis/synthesis normalization of the multilevel
//! transform is applied by the pyramid driver, not here.

use crate::error::{Error, Result};
use crate::fft;
use crate::filters::FreqFilter;
use crate::transform::signal::{Signal1D, Signal2D};
use num_complex::Complex64;

/// One-axis analysis fold in the DFT domain:
/// `out[m] = X[m] conj(F[m]) + X[m + N/2] conj(F[m + N/2])`.
///
/// This is the spectrum of `T_f v` (the `2^d` and the downsampling average
/// cancel to unit weight per alias term).
pub(crate) fn fold_spectrum_1d(spec: &[Complex64], sym: &[Complex64]) -> Vec<Complex64> {
    let n = spec.len();
    let h = n / 2;
    (0..h)
        .map(|m| spec[m] * sym[m].conj() + spec[m + h] * sym[m + h].conj())
        .collect()
}

/// One-axis synthesis in the DFT domain: `X[m] += 2 W[m mod N/2] F[m]`,
/// the spectrum of `S_f w`.
pub(crate) fn unfold_spectrum_1d(spec: &mut [Complex64], half: &[Complex64], sym: &[Complex64]) {
    let n = spec.len();
    let h = n / 2;
    for m in 0..n {
        spec[m] += 2.0 * half[m % h] * sym[m];
    }
}

/// 2-D analysis fold with separable symbol `row (x) col`.
pub(crate) fn fold_spectrum_2d(
    spec: &[Complex64],
    height: usize,
    width: usize,
    row: &[Complex64],
    col: &[Complex64],
) -> Vec<Complex64> {
    let (hh, hw) = (height / 2, width / 2);
    let mut out = vec![Complex64::default(); hh * hw];
    for m1 in 0..hh {
        for e1 in [0, hh] {
            let rf = row[m1 + e1].conj();
            let base = (m1 + e1) * width;
            for m2 in 0..hw {
                let acc = spec[base + m2] * col[m2].conj() + spec[base + m2 + hw] * col[m2 + hw].conj();
                out[m1 * hw + m2] += rf * acc;
            }
        }
    }
    out
}

/// 2-D synthesis: `X[m1, m2] += 4 W[m1 mod H/2, m2 mod W/2] row[m1] col[m2]`.
pub(crate) fn unfold_spectrum_2d(
    spec: &mut [Complex64],
    height: usize,
    width: usize,
    half: &[Complex64],
    row: &[Complex64],
    col: &[Complex64],
) {
    let (hh, hw) = (height / 2, width / 2);
    for (m1, rv) in row.iter().enumerate() {
        let r = 4.0 * rv;
        let hbase = (m1 % hh) * hw;
        let base = m1 * width;
        for m2 in 0..width {
            spec[base + m2] += r * half[hbase + m2 % hw] * col[m2];
        }
    }
}

fn even(n: usize, what: &str) -> Result<()> {
    if !n.is_multiple_of(2) || n == 0 {
        return Err(Error::shape(format!("{what} length {n} must be even")));
    }
    Ok(())
}

/// Transition operator along a 1-D signal.
pub fn transition_1d(v: &Signal1D, a: &FreqFilter) -> Result<Signal1D> {
    even(v.len(), "signal")?;
    let sym = a.resample(v.len())?;
    let mut spec = v.data.clone();
    fft::fft(&mut spec, false);
    let mut out = fold_spectrum_1d(&spec, &sym);
    fft::fft(&mut out, true);
    Ok(Signal1D {
        data: out,
        declared_real: false,
    })
}

/// Subdivision operator along a 1-D signal (output twice the length).
pub fn subdivision_1d(v: &Signal1D, a: &FreqFilter) -> Result<Signal1D> {
    let n = 2 * v.len();
    let sym = a.resample(n)?;
    let mut half = v.data.clone();
    fft::fft(&mut half, false);
    let mut spec = vec![Complex64::default(); n];
    unfold_spectrum_1d(&mut spec, &half, &sym);
    fft::fft(&mut spec, true);
    Ok(Signal1D {
        data: spec,
        declared_real: false,
    })
}

/// Transition operator on a 2-D signal with separable filter `row (x) col`.
pub fn transition_2d(v: &Signal2D, row: &FreqFilter, col: &FreqFilter) -> Result<Signal2D> {
    even(v.height, "height")?;
    even(v.width, "width")?;
    let rsym = row.resample(v.height)?;
    let csym = col.resample(v.width)?;
    let mut spec = v.data.clone();
    fft::fft2(&mut spec, v.height, v.width, false);
    let mut out = fold_spectrum_2d(&spec, v.height, v.width, &rsym, &csym);
    fft::fft2(&mut out, v.height / 2, v.width / 2, true);
    Ok(Signal2D {
        height: v.height / 2,
        width: v.width / 2,
        data: out,
        declared_real: false,
    })
}

/// Subdivision operator on a 2-D signal (output doubles each axis).
pub fn subdivision_2d(v: &Signal2D, row: &FreqFilter, col: &FreqFilter) -> Result<Signal2D> {
    let (height, width) = (2 * v.height, 2 * v.width);
    let rsym = row.resample(height)?;
    let csym = col.resample(width)?;
    let mut half = v.data.clone();
    fft::fft2(&mut half, v.height, v.width, false);
    let mut spec = vec![Complex64::default(); height * width];
    unfold_spectrum_2d(&mut spec, height, width, &half, &rsym, &csym);
    fft::fft2(&mut spec, height, width, true);
    Ok(Signal2D {
        height,
        width,
        data: spec,
        declared_real: false,
    })
}
