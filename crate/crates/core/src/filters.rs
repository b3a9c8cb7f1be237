//! Filter representations: finitely supported taps and frequency-sampled symbols.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Grid frequency `xi_k = 2*pi*k/n` in DFT order.
pub fn xi(k: usize, n: usize) -> f64 {
    2.0 * PI * k as f64 / n as f64
}

/// Grid frequency mapped to the fundamental interval `[-pi, pi)`.
pub fn xi_centered(k: usize, n: usize) -> f64 {
    let x = xi(k, n);
    if x >= PI {
        x - 2.0 * PI
    } else {
        x
    }
}

/// A finitely supported filter: complex taps starting at an integer offset.
///
/// Canonical form keeps the first and last tap nonzero; interior zeros are
/// preserved.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFilter {
    offset: i64,
    coeffs: Vec<Complex64>,
}

impl TimeFilter {
    pub fn new(offset: i64, coeffs: Vec<Complex64>) -> Result<Self> {
        let first = coeffs.iter().position(|c| c.norm() != 0.0);
        let last = coeffs.iter().rposition(|c| c.norm() != 0.0);
        match (first, last) {
            (Some(a), Some(b)) => Ok(TimeFilter {
                offset: offset + a as i64,
                coeffs: coeffs[a..=b].to_vec(),
            }),
            _ => Err(Error::param("filter has no nonzero coefficients")),
        }
    }

    pub fn from_real(offset: i64, taps: &[f64]) -> Result<Self> {
        Self::new(offset, taps.iter().map(|&t| Complex64::new(t, 0.0)).collect())
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Inclusive support bounds `[first, last]`.
    pub fn support(&self) -> (i64, i64) {
        (self.offset, self.offset + self.coeffs.len() as i64 - 1)
    }

    /// Tap at absolute index `k` (zero outside the support).
    pub fn at(&self, k: i64) -> Complex64 {
        let i = k - self.offset;
        if i < 0 || i as usize >= self.coeffs.len() {
            Complex64::default()
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn l1_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }

    pub fn sum(&self) -> Complex64 {
        self.coeffs.iter().sum()
    }

    /// Adjoint filter `a*(k) = conj(a(-k))`.
    pub fn adjoint(&self) -> Self {
        let mut coeffs: Vec<Complex64> = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        let offset = -(self.offset + self.coeffs.len() as i64 - 1);
        // trimming is preserved by reversal
        TimeFilter {
            offset,
            coeffs: std::mem::take(&mut coeffs),
        }
    }

    /// The filter shifted by `k`: `a(. - k)`.
    pub fn shifted(&self, k: i64) -> Self {
        TimeFilter {
            offset: self.offset + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// Symbol samples `sum_k a(k) exp(-i k xi_j)` on an `n`-point grid.
    pub fn symbol(&self, n: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::default(); n];
        for (j, o) in out.iter_mut().enumerate() {
            let x = xi(j, n);
            let mut acc = Complex64::default();
            for (i, c) in self.coeffs.iter().enumerate() {
                let k = self.offset + i as i64;
                acc += c * Complex64::from_polar(1.0, -(k as f64) * x);
            }
            *o = acc;
        }
        out
    }

    /// High-pass companion via `b^(xi) = e^{-i xi} conj(a^(xi + pi))`,
    /// i.e. `b(k) = (-1)^{1-k} conj(a(1-k))`.
    pub fn highpass_companion(&self) -> Self {
        let (lo, hi) = self.support();
        let (blo, bhi) = (1 - hi, 1 - lo);
        let coeffs = (blo..=bhi)
            .map(|k| {
                let sign = if (1 - k).rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                sign * self.at(1 - k).conj()
            })
            .collect();
        TimeFilter { offset: blo, coeffs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FilterRole {
    Lowpass,
    Highpass,
}

/// A 2*pi-periodic filter given by its symbol sampled at `xi_k = 2 pi k / N`
/// in standard DFT order.
#[derive(Debug, Clone, PartialEq)]
pub struct FreqFilter {
    pub label: String,
    pub role: FilterRole,
    samples: Vec<Complex64>,
}

impl FreqFilter {
    pub fn new(label: impl Into<String>, role: FilterRole, samples: Vec<Complex64>) -> Result<Self> {
        if samples.is_empty() || !samples.len().is_multiple_of(2) {
            return Err(Error::grid("frequency grid must be even and nonempty"));
        }
        if samples.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::param("filter samples must be finite"));
        }
        Ok(FreqFilter {
            label: label.into(),
            role,
            samples,
        })
    }

    pub fn from_time(tf: &TimeFilter, label: impl Into<String>, role: FilterRole, n: usize) -> Result<Self> {
        FreqFilter::new(label, role, tf.symbol(n))
    }

    pub fn grid_size(&self) -> usize {
        self.samples.len()
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    /// Adjoint: samples conjugated pointwise.
    pub fn adjoint(&self) -> Self {
        FreqFilter {
            label: self.label.clone(),
            role: self.role,
            samples: self.samples.iter().map(|c| c.conj()).collect(),
        }
    }

    /// Shift by integer `k`: samples multiplied by `exp(-i k xi_j)`.
    pub fn shifted(&self, k: i64) -> Self {
        let n = self.samples.len();
        let samples = self
            .samples
            .iter()
            .enumerate()
            .map(|(j, c)| c * Complex64::from_polar(1.0, -(k as f64) * xi(j, n)))
            .collect();
        FreqFilter {
            label: self.label.clone(),
            role: self.role,
            samples,
        }
    }

    /// Conjugate mirror `g^(xi) = conj(f^(-xi))`; for real symbols this is the
    /// sample-order mirror.
    pub fn conj_mirror(&self, label: impl Into<String>) -> Self {
        let n = self.samples.len();
        let samples = (0..n).map(|k| self.samples[(n - k) % n].conj()).collect();
        FreqFilter {
            label: label.into(),
            role: self.role,
            samples,
        }
    }

    /// Exact subsampling onto a coarser grid whose size divides this one.
    pub fn resample(&self, len: usize) -> Result<Vec<Complex64>> {
        resample_symbol(&self.samples, len)
    }

    /// True when `conj(s[k]) == s[(N-k) mod N]` within `tol` (real in time).
    pub fn is_conj_symmetric(&self, tol: f64) -> bool {
        let n = self.samples.len();
        (0..n).all(|k| (self.samples[k].conj() - self.samples[(n - k) % n]).norm() <= tol)
    }

    /// l2 norm of the underlying sequence (Parseval on the grid).
    pub fn l2_norm(&self) -> f64 {
        symbol_l2_norm(&self.samples)
    }

    /// High-pass companion `b^(xi) = e^{-i xi} conj(a^(xi + pi))` on the grid.
    pub fn highpass_companion(&self, label: impl Into<String>) -> Self {
        FreqFilter {
            label: label.into(),
            role: FilterRole::Highpass,
            samples: highpass_symbol(&self.samples),
        }
    }
}

/// `b[k] = exp(-i xi_k) * conj(a[(k + N/2) mod N])`.
pub fn highpass_symbol(a: &[Complex64]) -> Vec<Complex64> {
    let n = a.len();
    (0..n)
        .map(|k| Complex64::from_polar(1.0, -xi(k, n)) * a[(k + n / 2) % n].conj())
        .collect()
}

/// Exact stride subsampling of a symbol onto `len` points.
pub fn resample_symbol(samples: &[Complex64], len: usize) -> Result<Vec<Complex64>> {
    let n = samples.len();
    if len == 0 || !n.is_multiple_of(len) {
        return Err(Error::grid(format!(
            "cannot resample grid of {n} onto {len} points"
        )));
    }
    let stride = n / len;
    Ok((0..len).map(|k| samples[k * stride]).collect())
}

/// Sequence l2 norm from symbol samples: sqrt(mean |F|^2).
pub fn symbol_l2_norm(samples: &[Complex64]) -> f64 {
    (samples.iter().map(|c| c.norm_sqr()).sum::<f64>() / samples.len() as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn haar_a() -> TimeFilter {
        TimeFilter::from_real(0, &[0.5, 0.5]).unwrap()
    }

    #[test]
    fn adjoint_of_haar() {
        let a = haar_a().adjoint();
        assert_eq!(a.support(), (-1, 0));
        assert_eq!(a.at(-1), Complex64::new(0.5, 0.0));
        assert_eq!(a.at(0), Complex64::new(0.5, 0.0));
    }

    #[test]
    fn adjoint_is_involution() {
        let f = TimeFilter::new(
            -2,
            vec![
                Complex64::new(1.0, 2.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-0.5, 0.25),
            ],
        )
        .unwrap();
        assert_eq!(f.adjoint().adjoint(), f);
    }

    #[test]
    fn real_symmetric_filter_is_self_adjoint() {
        let f = TimeFilter::from_real(-1, &[0.25, 0.5, 0.25]).unwrap();
        assert_eq!(f.adjoint(), f);
    }

    #[test]
    fn shift_moves_delta() {
        let d = TimeFilter::from_real(0, &[1.0]).unwrap();
        assert_eq!(d.shifted(1).support(), (1, 1));
        assert_eq!(d.shifted(1).shifted(-1), d);
    }

    #[test]
    fn freq_shift_theorem() {
        let f = TimeFilter::from_real(0, &[0.3, 0.7]).unwrap();
        let n = 16;
        let shifted_syms = f.shifted(3).symbol(n);
        let ff = FreqFilter::from_time(&f, "f", FilterRole::Lowpass, n).unwrap();
        let via_freq = ff.shifted(3);
        for (k, s) in shifted_syms.iter().enumerate() {
            assert!((s - via_freq.samples()[k]).norm() < 1e-12);
        }
        let back = via_freq.shifted(-3);
        for k in 0..n {
            assert!((back.samples()[k] - ff.samples()[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn trims_to_canonical_form() {
        let f = TimeFilter::from_real(-3, &[0.0, 1.0, 0.0, 2.0, 0.0]).unwrap();
        assert_eq!(f.support(), (-2, 0));
        assert_eq!(f.at(-1), Complex64::default());
        assert!(TimeFilter::from_real(0, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn highpass_companion_of_haar() {
        let b = haar_a().highpass_companion();
        // b(k) = (-1)^{1-k} a(1-k): b(0) = -a(1) = -1/2, b(1) = a(0) = 1/2
        assert_eq!(b.support(), (0, 1));
        assert!((b.at(0) - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        assert!((b.at(1) - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        // symbol matches the frequency-domain rule
        let n = 32;
        let want = highpass_symbol(&haar_a().symbol(n));
        let got = b.symbol(n);
        for k in 0..n {
            assert!((want[k] - got[k]).norm() < 1e-12);
        }
    }
}
