//! Sum rules, vanishing moments and the smoothness exponent of finitely
//! supported filters.

use crate::error::{Error, Result};
use crate::filters::TimeFilter;
use nalgebra::DMatrix;
use num_complex::Complex64;

fn moment(f: &TimeFilter, order: u32, alternating: bool) -> Complex64 {
    let mut acc = Complex64::default();
    for (i, c) in f.coeffs().iter().enumerate() {
        let k = f.offset() + i as i64;
        let sign = if alternating && k.rem_euclid(2) == 1 {
            -1.0
        } else {
            1.0
        };
        acc += sign * c * (k as f64).powi(order as i32);
    }
    acc
}

/// Largest `m` with `a^(xi + pi) = O(|xi|^m)`: alternating moment sums
/// through order `m - 1` vanish relative to the l1 norm.
pub fn sum_rules(a: &TimeFilter, tol: f64) -> usize {
    let bound = tol * a.l1_norm();
    let cap = a.coeffs().len() as u32;
    for j in 0..=cap {
        if moment(a, j, true).norm() > bound {
            return j as usize;
        }
    }
    cap as usize
}

/// Largest `n` with `b^(xi) = O(|xi|^n)`: plain moment sums through order
/// `n - 1` vanish relative to the l1 norm.
pub fn vanishing_moments(b: &TimeFilter, tol: f64) -> usize {
    let bound = tol * b.l1_norm();
    let cap = b.coeffs().len() as u32;
    for j in 0..=cap {
        if moment(b, j, false).norm() > bound {
            return j as usize;
        }
    }
    cap as usize
}

/// Exact polynomial division of the symbol by `(1 + e^{-i xi})`, dropping the
/// order-epsilon remainder left by rounded tap values.
fn divide_one_plus_z(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut u = Vec::with_capacity(coeffs.len() - 1);
    let mut prev = Complex64::default();
    for c in &coeffs[..coeffs.len() - 1] {
        let q = c - prev;
        u.push(q);
        prev = q;
    }
    u
}

/// Smoothness exponent `sm(a) = -1/2 - log2 sqrt(rho)`, where `rho` is the
/// spectral radius of the transfer matrix `(v(2j - k))` built from
/// `|u^(xi)|^2 = sum_k v(k) e^{-i k xi}` and `a^(xi) = (1 + e^{-i xi})^m u^(xi)`.
pub fn smoothness_exponent(a: &TimeFilter) -> Result<f64> {
    let m = sum_rules(a, 1e-8);
    if m == 0 {
        return Err(Error::param(
            "smoothness exponent requires at least one sum rule",
        ));
    }
    let mut u: Vec<Complex64> = a.coeffs().to_vec();
    for _ in 0..m {
        if u.len() < 2 {
            return Err(Error::param("filter too short after deconvolution"));
        }
        u = divide_one_plus_z(&u);
    }
    let len = u.len();
    let kmax = len as i64 - 1; // one-sided support bound of the autocorrelation
    let v = |k: i64| -> f64 {
        // v(k) = sum_l u(l + k) conj(u(l))
        let mut acc = Complex64::default();
        for l in 0..len as i64 {
            let lk = l + k;
            if lk >= 0 && lk < len as i64 {
                acc += u[lk as usize] * u[l as usize].conj();
            }
        }
        acc.re
    };
    let dim = (2 * kmax + 1) as usize;
    let mut t = DMatrix::<f64>::zeros(dim, dim);
    for (ji, j) in (-kmax..=kmax).enumerate() {
        for (ki, k) in (-kmax..=kmax).enumerate() {
            let idx = 2 * j - k;
            if idx.abs() <= kmax {
                t[(ji, ki)] = v(idx);
            }
        }
    }
    let rho = t
        .complex_eigenvalues()
        .iter()
        .map(|e| e.norm())
        .fold(0.0, f64::max);
    if rho <= 0.0 {
        return Err(Error::param("transfer matrix has zero spectral radius"));
    }
    Ok(-0.5 - rho.sqrt().log2())
}
