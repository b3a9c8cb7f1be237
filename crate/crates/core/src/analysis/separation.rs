//! Frequency-separation diagnostics: the first-level identity, the four
//! separation factors, the half-shift condition and the floor-sum identity.

use crate::analysis::frame::orthogonal_wavelet_residual;
use crate::error::{Error, Result};
use crate::filters::{highpass_symbol, xi, xi_centered, FreqFilter};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::{PI, SQRT_2};

/// `sgn` with `sgn(0) = 1`.
fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// `sqrt(1 + sin xi)`
    Sin,
    /// `(1 + sgn xi)/sqrt(2)`
    Ideal,
    /// `sqrt(1 + sin(xi/2))`
    HalfSin,
    /// `sqrt(1 + cos(xi/2) sgn xi)`
    HalfCosSgn,
}

pub const FACTOR_KINDS: [FactorKind; 4] = [
    FactorKind::Sin,
    FactorKind::Ideal,
    FactorKind::HalfSin,
    FactorKind::HalfCosSgn,
];

pub fn separation_factor(kind: FactorKind, xi: f64) -> f64 {
    match kind {
        FactorKind::Sin => (1.0 + xi.sin()).max(0.0).sqrt(),
        FactorKind::Ideal => (1.0 + sgn(xi)) / SQRT_2,
        FactorKind::HalfSin => (1.0 + (xi / 2.0).sin()).max(0.0).sqrt(),
        FactorKind::HalfCosSgn => (1.0 + (xi / 2.0).cos() * sgn(xi)).max(0.0).sqrt(),
    }
}

/// Factor curves sampled at `count` bin centers of `[-pi, pi)`.
pub fn factor_curves(count: usize) -> Vec<(f64, [f64; 4])> {
    let h = 2.0 * PI / count as f64;
    (0..count)
        .map(|k| {
            let x = -PI + (k as f64 + 0.5) * h;
            let mut vals = [0.0; 4];
            for (i, kind) in FACTOR_KINDS.iter().enumerate() {
                vals[i] = separation_factor(*kind, x);
            }
            (x, vals)
        })
        .collect()
}

/// Integral of the squared factor over one period, by the periodic trapezoid
/// rule on bin centers (exact placement of the jump of the ideal factor).
pub fn factor_squared_integral(kind: FactorKind, count: usize) -> f64 {
    let h = 2.0 * PI / count as f64;
    (0..count)
        .map(|k| {
            let x = -PI + (k as f64 + 0.5) * h;
            separation_factor(kind, x).powi(2) * h
        })
        .sum()
}

#[derive(Debug, Clone, Serialize)]
pub struct SeparationReport {
    /// Max over the grid of `| |b1p^(xi+pi)|^2 + |b1n^(xi)|^2 - (1 - sin xi) |`.
    pub pointwise_dev: f64,
    /// Trapezoid integral of the left-hand side over `[0, pi]`.
    pub integral: f64,
    pub grid_size: usize,
    /// The four separation factors sampled alongside, for plotting.
    pub factor_curves: Vec<(f64, [f64; 4])>,
}

/// First-level frequency-separation identity of the paired high-pass
/// filters built from an orthogonal low-pass filter `a0`.
pub fn separation_level1(a0: &FreqFilter) -> Result<SeparationReport> {
    if orthogonal_wavelet_residual(a0, &a0.highpass_companion("b0"))? > 1e-8 {
        return Err(Error::param(
            "separation_level1 requires an orthogonal low-pass filter",
        ));
    }
    let n = a0.grid_size();
    let b0 = highpass_symbol(a0.samples());
    // b1p^(xi) = b0^(xi) (1 + i e^{-i xi}) / sqrt(2); |b1n^(xi)| = |b1p^(-xi)|
    let bp: Vec<Complex64> = b0
        .iter()
        .enumerate()
        .map(|(k, v)| v * (1.0 + Complex64::i() * Complex64::from_polar(1.0, -xi(k, n))) / SQRT_2)
        .collect();
    let lhs: Vec<f64> = (0..n)
        .map(|k| bp[(k + n / 2) % n].norm_sqr() + bp[(n - k) % n].norm_sqr())
        .collect();
    let pointwise_dev = (0..n)
        .map(|k| (lhs[k] - (1.0 - xi_centered(k, n).sin())).abs())
        .fold(0.0, f64::max);
    let h = 2.0 * PI / n as f64;
    let mut integral = 0.5 * (lhs[0] + lhs[n / 2]);
    for v in lhs.iter().take(n / 2).skip(1) {
        integral += v;
    }
    integral *= h;
    Ok(SeparationReport {
        pointwise_dev,
        integral,
        grid_size: n,
        factor_curves: factor_curves(n),
    })
}

/// `theta(xi) = -xi/2 + pi * floor((xi + pi) / (2 pi))`.
pub fn theta_phase(xi: f64) -> f64 {
    -xi / 2.0 + PI * ((xi + PI) / (2.0 * PI)).floor()
}

/// Max over the grid of `|a2^(xi) - e^{i theta(xi)} a1^(xi)|`.
pub fn half_shift_deviation(a1: &FreqFilter, a2: &FreqFilter) -> Result<f64> {
    let n = a1.grid_size();
    if a2.grid_size() != n {
        return Err(Error::grid("filters must share one grid"));
    }
    Ok((0..n)
        .map(|k| {
            let x = xi_centered(k, n);
            (a2.samples()[k] - Complex64::from_polar(1.0, theta_phase(x)) * a1.samples()[k]).norm()
        })
        .fold(0.0, f64::max))
}

/// Both sides of the terminating floor-sum identity
/// `sum_{l=1..terms} floor(2^-l xi + 1/2) = floor(xi) + (1 - sgn xi)/2`.
pub fn theta_identity_check(xi: f64, terms: u32) -> (f64, f64) {
    let mut lhs = 0.0;
    for l in 1..=terms {
        lhs += (xi / (2f64.powi(l as i32)) + 0.5).floor();
    }
    let rhs = xi.floor() + (1.0 - sgn(xi)) / 2.0;
    (lhs, rhs)
}
