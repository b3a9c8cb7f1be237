//! Frequency-based (bandlimited) orthogonal low-pass filters with an exact
//! half-sample shift between the correlated pair.

use crate::construction::blend::bump;
use crate::error::{Error, Result};
use crate::filters::{xi_centered, FilterRole, FreqFilter};
use num_complex::Complex64;
use std::f64::consts::FRAC_PI_2;

/// Builds the triple `(a0, a1, a2)` with `a0 = a1` the bump window on
/// `[-pi/2, pi/2]` and `a2^(xi) = exp(-i xi / 2) a1^(xi)` on `[-pi, pi)`.
/// With `eps = pi/6` the filter `a0` is the Meyer orthogonal low-pass filter.
pub fn build_meyer_orthogonal(
    eps: f64,
    m: u32,
    grid_size: usize,
) -> Result<(FreqFilter, FreqFilter, FreqFilter)> {
    if !(eps > 0.0 && eps <= FRAC_PI_2) {
        return Err(Error::param("meyer window requires 0 < eps <= pi/2"));
    }
    if grid_size < 8 || !grid_size.is_multiple_of(2) {
        return Err(Error::grid("grid size must be even and at least 8"));
    }
    let samples: Vec<Complex64> = (0..grid_size)
        .map(|k| {
            let x = xi_centered(k, grid_size);
            let v = bump(-FRAC_PI_2, FRAC_PI_2, eps, eps, m, x)?;
            Ok(Complex64::new(v, 0.0))
        })
        .collect::<Result<_>>()?;
    let a0 = FreqFilter::new("a0", FilterRole::Lowpass, samples)?;
    let mut a1 = a0.clone();
    a1.label = "a1".to_string();
    let a2_samples: Vec<Complex64> = a1
        .samples()
        .iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::from_polar(1.0, -xi_centered(k, grid_size) / 2.0))
        .collect();
    let a2 = FreqFilter::new("a2", FilterRole::Lowpass, a2_samples)?;
    Ok((a0, a1, a2))
}

/// Max pointwise deviation from `|a^(xi)|^2 + |a^(xi+pi)|^2 = 1`.
pub fn orthogonality_residual(a: &FreqFilter) -> f64 {
    let s = a.samples();
    let n = s.len();
    (0..n)
        .map(|k| (s[k].norm_sqr() + s[(k + n / 2) % n].norm_sqr() - 1.0).abs())
        .fold(0.0, f64::max)
}
