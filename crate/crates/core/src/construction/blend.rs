//! Polynomial blend `P_m` and the frequency bump window built from it.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// `P_m(x) = (1-x)^m sum_{j<m} C(m+j-1, j) x^j`, the blend with
/// `P_m(x) + P_m(1-x) = 1`.
pub fn spline_blend(m: u32, x: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::param("spline_blend requires m >= 1"));
    }
    let mut coeff = 1.0; // C(m-1, 0)
    let mut pow = 1.0;
    let mut sum = 0.0;
    for j in 0..m {
        if j > 0 {
            // C(m+j-1, j) = C(m+j-2, j-1) * (m+j-1)/j
            coeff *= (m + j - 1) as f64 / j as f64;
            pow *= x;
        }
        sum += coeff * pow;
    }
    Ok((1.0 - x).powi(m as i32) * sum)
}

/// Falling edge at `c` with half-width `eps`: 1 left of `c-eps`, 0 right of
/// `c+eps`, `sin(pi/2 P_m((x-c+eps)/(2 eps)))` inside. Squares of a falling
/// edge and its point mirror sum to one across the transition.
pub fn falling_edge(c: f64, eps: f64, m: u32, x: f64) -> f64 {
    if x <= c - eps {
        1.0
    } else if x >= c + eps {
        0.0
    } else {
        let t = (x - c + eps) / (2.0 * eps);
        (FRAC_PI_2 * spline_blend(m, t).expect("m >= 1")).sin()
    }
}

/// The four-branch bump window on `[c_l, c_r]` with transition half-widths
/// `eps_l`, `eps_r`.
pub fn bump(c_l: f64, c_r: f64, eps_l: f64, eps_r: f64, m: u32, xi: f64) -> Result<f64> {
    if m == 0 {
        return Err(Error::param("bump requires m >= 1"));
    }
    if !c_l.is_finite() || !c_r.is_finite() || c_l >= c_r {
        return Err(Error::param("bump requires c_l < c_r"));
    }
    if eps_l <= 0.0 || eps_r <= 0.0 {
        return Err(Error::param("bump requires positive transition widths"));
    }
    if eps_l + eps_r > c_r - c_l {
        return Err(Error::param(
            "bump requires eps_l + eps_r <= c_r - c_l (edges must not overlap)",
        ));
    }
    let v = if xi <= c_l - eps_l || xi >= c_r + eps_r {
        0.0
    } else if xi < c_l + eps_l {
        let t = (c_l + eps_l - xi) / (2.0 * eps_l);
        (FRAC_PI_2 * spline_blend(m, t)?).sin()
    } else if xi <= c_r - eps_r {
        1.0
    } else {
        let t = (xi - c_r + eps_r) / (2.0 * eps_r);
        (FRAC_PI_2 * spline_blend(m, t)?).sin()
    };
    Ok(v)
}
