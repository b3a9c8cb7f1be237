//! Verification of the tight framelet filter bank conditions.

use crate::construction::{FilterBank1D, FilterBank2D};
use crate::error::{Error, Result};
use crate::filters::FreqFilter;
use num_complex::Complex64;
use serde::Serialize;

/// Residuals of the two frame conditions on the grid.
#[derive(Debug, Clone, Serialize)]
pub struct FrameReport {
    /// Max of `|sum_f |f^(xi)|^2 - 1|`.
    pub max_residual_pr1: f64,
    /// Max of `|sum_f f^(xi) conj(f^(xi + pi omega))|` over `omega != 0`.
    pub max_residual_pr0: f64,
    pub grid_size: usize,
    pub pass: bool,
}

fn report(pr1: f64, pr0: f64, grid_size: usize, tol: f64) -> FrameReport {
    FrameReport {
        max_residual_pr1: pr1,
        max_residual_pr0: pr0,
        grid_size,
        pass: pr1 <= tol && pr0 <= tol,
    }
}

/// Check the one-dimensional bank. For even n the split low-pass pair stands
/// in for `a`, which it reproduces through `|a|^2 = |a^p|^2 + |a^n|^2`.
pub fn check_tight_frame_1d(bank: &FilterBank1D, tol: f64) -> Result<FrameReport> {
    check_filters_1d(&bank.tight_system(), tol)
}

/// Check an explicit list of one-dimensional filters as a tight system.
pub fn check_filters_1d(filters: &[&FreqFilter], tol: f64) -> Result<FrameReport> {
    let n = filters
        .first()
        .ok_or_else(|| Error::param("empty filter list"))?
        .grid_size();
    if filters.iter().any(|f| f.grid_size() != n) {
        return Err(Error::grid("filters must share one grid"));
    }
    let mut pr1 = 0.0f64;
    let mut pr0 = 0.0f64;
    for k in 0..n {
        let mut unit = 0.0;
        let mut shift = Complex64::default();
        for f in filters {
            let s = f.samples();
            unit += s[k].norm_sqr();
            shift += s[k] * s[(k + n / 2) % n].conj();
        }
        pr1 = pr1.max((unit - 1.0).abs());
        pr0 = pr0.max(shift.norm());
    }
    Ok(report(pr1, pr0, n, tol))
}

/// Check the two-dimensional bank over the full grid and all three nonzero
/// half-shifts.
pub fn check_tight_frame_2d(bank: &FilterBank2D, tol: f64) -> Result<FrameReport> {
    let n = bank.lowpass.row.grid_size();
    for f in bank.channels() {
        if f.row.grid_size() != n || f.col.grid_size() != n {
            return Err(Error::grid("filters must share one grid"));
        }
    }
    let h = n / 2;
    // Accumulate per-row outer products of the per-axis sample vectors.
    let mut unit = vec![0.0f64; n * n];
    let mut shifts = [
        vec![Complex64::default(); n * n],
        vec![Complex64::default(); n * n],
        vec![Complex64::default(); n * n],
    ];
    for f in bank.channels() {
        let r = f.row.samples();
        let c = f.col.samples();
        let r2: Vec<f64> = r.iter().map(|v| v.norm_sqr()).collect();
        let c2: Vec<f64> = c.iter().map(|v| v.norm_sqr()).collect();
        let rs: Vec<Complex64> = (0..n).map(|k| r[k] * r[(k + h) % n].conj()).collect();
        let cs: Vec<Complex64> = (0..n).map(|k| c[k] * c[(k + h) % n].conj()).collect();
        for k1 in 0..n {
            let base = k1 * n;
            for k2 in 0..n {
                unit[base + k2] += r2[k1] * c2[k2];
                shifts[0][base + k2] += Complex64::new(r2[k1], 0.0) * cs[k2];
                shifts[1][base + k2] += rs[k1] * c2[k2];
                shifts[2][base + k2] += rs[k1] * cs[k2];
            }
        }
    }
    let pr1 = unit.iter().map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
    let pr0 = shifts
        .iter()
        .flat_map(|s| s.iter())
        .map(|v| v.norm())
        .fold(0.0, f64::max);
    Ok(report(pr1, pr0, n, tol))
}

/// Pointwise residual of the 2x2 orthogonal wavelet filter bank identity.
pub fn orthogonal_wavelet_residual(a: &FreqFilter, b: &FreqFilter) -> Result<f64> {
    let n = a.grid_size();
    if b.grid_size() != n {
        return Err(Error::grid("filters must share one grid"));
    }
    let h = n / 2;
    let (sa, sb) = (a.samples(), b.samples());
    let mut worst = 0.0f64;
    for k in 0..n {
        let (a0, b0) = (sa[k], sb[k]);
        let (a1, b1) = (sa[(k + h) % n], sb[(k + h) % n]);
        let d00 = (a0.norm_sqr() + b0.norm_sqr() - 1.0).abs();
        let d11 = (a1.norm_sqr() + b1.norm_sqr() - 1.0).abs();
        let off = (a0 * a1.conj() + b0 * b1.conj()).norm();
        worst = worst.max(d00).max(d11).max(off);
    }
    Ok(worst)
}

/// True when `{a; b}` satisfies the orthogonal wavelet filter bank identity
/// pointwise within `tol`.
pub fn check_orthogonal_wavelet(a: &FreqFilter, b: &FreqFilter, tol: f64) -> Result<bool> {
    Ok(orthogonal_wavelet_residual(a, b)? <= tol)
}
