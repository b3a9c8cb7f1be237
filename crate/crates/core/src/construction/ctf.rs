//! Construction of the complex tight framelet filter banks CTF_n.
//!
//! All filters are designed in the frequency domain from bump windows. The
//! squared symbols telescope to an exact partition of unity, and every
//! filter's support arc is kept within a half period so the shift
//! orthogonality condition holds exactly on the grid.

use crate::construction::blend::falling_edge;
use crate::error::{Error, Result};
use crate::filters::{xi_centered, FilterRole, FreqFilter};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Design parameters of a CTF_n bank.
///
/// Breakpoints are `c_1 < ... < c_s < c_{s+1} = pi` with transition
/// half-widths `eps_1 ... eps_s`; even `n` additionally splits the low-pass
/// at the origin with half-width `eps0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CtfParams {
    pub n: u32,
    pub c: Vec<f64>,
    pub eps: Vec<f64>,
    pub eps0: Option<f64>,
    pub m: u32,
}

impl CtfParams {
    /// Number of high-pass pairs: `s = (n-1)/2` for odd n, `(n-2)/2` for even.
    pub fn band_count(&self) -> usize {
        self.c.len()
    }

    /// Equally spaced breakpoints `c_l = c_1 + (pi - c_1)(l-1)/s` with a
    /// single transition width.
    pub fn special(n: u32, c1: f64, eps1: f64, eps0: Option<f64>, m: u32) -> Result<Self> {
        if n < 3 {
            return Err(Error::param("CTF_n requires n >= 3"));
        }
        if m == 0 {
            return Err(Error::param("smoothness order m must be >= 1"));
        }
        if !(c1 > 0.0 && c1 < PI) || !c1.is_finite() {
            return Err(Error::param("c1 must lie in (0, pi)"));
        }
        if !eps1.is_finite() || eps1 <= 0.0 {
            return Err(Error::param("eps1 must be positive"));
        }
        let even = n.is_multiple_of(2);
        if even {
            match eps0 {
                Some(e) if e > 0.0 && e.is_finite() => {}
                _ => return Err(Error::param("even n requires positive eps0")),
            }
        }
        let s = if even { (n - 2) / 2 } else { (n - 1) / 2 } as usize;
        let c = (0..s)
            .map(|l| c1 + (PI - c1) * l as f64 / s as f64)
            .collect();
        Ok(CtfParams {
            n,
            c,
            eps: vec![eps1; s],
            eps0: if even { eps0 } else { None },
            m,
        })
    }

    /// The published parameter choices for n = 3, 4, 6.
    pub fn published(n: u32) -> Result<Self> {
        match n {
            3 => Self::special(3, 33.0 / 32.0, 69.0 / 128.0, None, 2),
            // The printed value 291/128 exceeds pi/2 and cannot satisfy the
            // design constraints; 291/256 does, with the same near-boundary
            // slack as the n = 3 and n = 6 choices.
            4 => Self::special(4, 291.0 / 256.0, 27.0 / 64.0, Some(35.0 / 128.0), 2),
            6 => Self::special(6, 119.0 / 128.0, 81.0 / 128.0, Some(35.0 / 128.0), 2),
            _ => Err(Error::param(format!(
                "no published parameters for n = {n}; use CtfParams::special"
            ))),
        }
    }

    /// Transition half-width of the closing edge at `pi`: the largest value
    /// not exceeding `eps_s` that keeps the top band's support arc within a
    /// half period. Degenerate parameters (eps_s >= c_s) fall back to `eps_s`
    /// and surface through the constraint warnings and the frame check.
    pub fn closing_eps(&self) -> f64 {
        let s = self.band_count();
        let e = self.eps[s - 1];
        let capped = self.c[s - 1] - e;
        if capped > 0.0 {
            e.min(capped)
        } else {
            e
        }
    }

    /// Soft design-constraint violations. These do not abort construction;
    /// they are recorded on the built bank.
    pub fn constraint_warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        let s = self.band_count();
        let c1 = self.c[0];
        let e1 = self.eps[0];
        if e1 > c1.min(FRAC_PI_2 - c1) {
            w.push(format!(
                "eps1 = {e1:.6} exceeds min(c1, pi/2 - c1) = {:.6}",
                c1.min(FRAC_PI_2 - c1)
            ));
        }
        let mut cs: Vec<f64> = self.c.clone();
        cs.push(PI);
        let mut eps: Vec<f64> = self.eps.clone();
        eps.push(self.closing_eps());
        for l in 0..s {
            let lhs = (cs[l + 1] - cs[l]) + eps[l + 1] + eps[l];
            if lhs > PI + 1e-12 {
                w.push(format!(
                    "band {}: (c_{} - c_{}) + eps sum = {lhs:.6} exceeds pi",
                    l + 1,
                    l + 2,
                    l + 1
                ));
            }
        }
        if let Some(e0) = self.eps0 {
            if e0 >= c1 - e1 {
                w.push(format!(
                    "eps0 = {e0:.6} must be below c1 - eps1 = {:.6}",
                    c1 - e1
                ));
            }
        }
        for l in 1..s {
            if cs[l] <= cs[l - 1] {
                w.push("breakpoints are not increasing".to_string());
            }
        }
        w
    }
}

/// A one-dimensional tight framelet filter bank on a uniform frequency grid.
///
/// `lowpass` holds `a` (and for even n additionally the split pair
/// `a^p, a^n`); `highpass` holds `b^{1,p} ... b^{s,p}, b^{1,n} ... b^{s,n}`.
#[derive(Debug, Clone)]
pub struct FilterBank1D {
    pub name: String,
    pub n: u32,
    pub grid_size: usize,
    pub lowpass: Vec<FreqFilter>,
    pub highpass: Vec<FreqFilter>,
    pub params: Option<CtfParams>,
    pub warnings: Vec<String>,
}

impl FilterBank1D {
    /// The real symmetric low-pass filter `a`.
    pub fn a(&self) -> &FreqFilter {
        &self.lowpass[0]
    }

    /// The split low-pass pair for even n.
    pub fn split_pair(&self) -> Option<(&FreqFilter, &FreqFilter)> {
        if self.lowpass.len() == 3 {
            Some((&self.lowpass[1], &self.lowpass[2]))
        } else {
            None
        }
    }

    /// The filters forming the tight system: split pair for even n, else `a`,
    /// plus all high-pass filters.
    pub fn tight_system(&self) -> Vec<&FreqFilter> {
        let mut v: Vec<&FreqFilter> = Vec::new();
        if let Some((ap, an)) = self.split_pair() {
            v.push(ap);
            v.push(an);
        } else {
            v.push(self.a());
        }
        v.extend(self.highpass.iter());
        v
    }

    pub fn filter_by_label(&self, label: &str) -> Option<&FreqFilter> {
        self.lowpass
            .iter()
            .chain(self.highpass.iter())
            .find(|f| f.label == label)
    }
}

fn periodized<F: Fn(f64) -> f64>(f: F, x: f64) -> f64 {
    f(x) + f(x + 2.0 * PI) + f(x - 2.0 * PI)
}

/// Build the CTF_n bank on an `grid_size`-point frequency grid.
pub fn build_ctf(params: &CtfParams, grid_size: usize) -> Result<FilterBank1D> {
    if grid_size < 8 || !grid_size.is_multiple_of(2) {
        return Err(Error::grid("grid size must be even and at least 8"));
    }
    let s = params.band_count();
    let m = params.m;
    let mut widths: Vec<f64> = params.eps.clone();
    widths.push(params.closing_eps());
    {
        let mut all = widths.clone();
        if let Some(e0) = params.eps0 {
            all.push(e0);
        }
        for e in all {
            if grid_size as f64 * e / (2.0 * PI) < 2.0 {
                return Err(Error::grid(format!(
                    "grid of {grid_size} too coarse to resolve transition width {e:.6}"
                )));
            }
        }
    }
    let mut cs: Vec<f64> = params.c.clone();
    cs.push(PI);

    let xis: Vec<f64> = (0..grid_size).map(|k| xi_centered(k, grid_size)).collect();
    let real = |v: Vec<f64>| v.into_iter().map(|x| Complex64::new(x, 0.0)).collect();

    // Squared symbols telescope between consecutive extended falling edges,
    // which reduces to the plain bump window whenever the edges are disjoint.
    let band = |lo: Option<(f64, f64)>, hi: (f64, f64)| -> Vec<f64> {
        xis.iter()
            .map(|&x| {
                periodized(
                    |y| {
                        let fh = falling_edge(hi.0, hi.1, m, y);
                        let fl = match lo {
                            Some((c, e)) => falling_edge(c, e, m, y),
                            None => 0.0,
                        };
                        (fh * fh - fl * fl).max(0.0).sqrt()
                    },
                    x,
                )
            })
            .collect()
    };

    let a_vals: Vec<f64> = xis
        .iter()
        .map(|&x| periodized(|y| falling_edge(cs[0], widths[0], m, y.abs()), x))
        .collect();
    let mut lowpass = vec![FreqFilter::new("a", FilterRole::Lowpass, real(a_vals))?];

    if params.n.is_multiple_of(2) {
        let e0 = params.eps0.expect("validated");
        let ap = band(Some((0.0, e0)), (cs[0], widths[0]));
        let ap = FreqFilter::new("ap", FilterRole::Lowpass, real(ap))?;
        let an = ap.conj_mirror("an");
        lowpass.push(ap);
        lowpass.push(an);
    }

    let mut pos = Vec::with_capacity(s);
    for l in 0..s {
        let bp = band(Some((cs[l], widths[l])), (cs[l + 1], widths[l + 1]));
        pos.push(FreqFilter::new(
            format!("b{}p", l + 1),
            FilterRole::Highpass,
            real(bp),
        )?);
    }
    let neg: Vec<FreqFilter> = pos
        .iter()
        .enumerate()
        .map(|(l, f)| f.conj_mirror(format!("b{}n", l + 1)))
        .collect();
    let mut highpass = pos;
    highpass.extend(neg);

    Ok(FilterBank1D {
        name: format!("ctf{}", params.n),
        n: params.n,
        grid_size,
        lowpass,
        highpass,
        params: Some(params.clone()),
        warnings: params.constraint_warnings(),
    })
}

/// The Haar orthogonal pair `{a; b}` as a two-filter bank on a grid.
pub fn haar_bank(grid_size: usize) -> Result<FilterBank1D> {
    let a = crate::filters::TimeFilter::from_real(0, &[0.5, 0.5])?;
    let b = crate::filters::TimeFilter::from_real(0, &[0.5, -0.5])?;
    Ok(FilterBank1D {
        name: "haar".to_string(),
        n: 2,
        grid_size,
        lowpass: vec![FreqFilter::from_time(&a, "a", FilterRole::Lowpass, grid_size)?],
        highpass: vec![FreqFilter::from_time(&b, "b", FilterRole::Highpass, grid_size)?],
        params: None,
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::check_tight_frame_1d;

    #[test]
    fn published_values() {
        let p3 = CtfParams::published(3).unwrap();
        assert_eq!(p3.c, vec![33.0 / 32.0]);
        assert_eq!(p3.eps, vec![69.0 / 128.0]);
        assert!(p3.eps0.is_none());
        let p6 = CtfParams::published(6).unwrap();
        assert_eq!(p6.c[0], 119.0 / 128.0);
        assert_eq!(p6.eps0, Some(35.0 / 128.0));
        assert_eq!(p6.eps, vec![81.0 / 128.0; 2]);
        assert!(CtfParams::published(5).is_err());
    }

    #[test]
    fn special_spacing_for_n5() {
        let c1 = 0.9;
        let p = CtfParams::special(5, c1, 0.3, None, 2).unwrap();
        assert_eq!(p.band_count(), 2);
        assert!((p.c[1] - (c1 + (PI - c1) / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn bank_structure_n3() {
        let bank = build_ctf(&CtfParams::published(3).unwrap(), 1024).unwrap();
        assert_eq!(bank.lowpass.len(), 1);
        assert_eq!(bank.highpass.len(), 2);
        assert!(bank.warnings.is_empty(), "{:?}", bank.warnings);
        let rep = check_tight_frame_1d(&bank, 1e-8).unwrap();
        assert!(rep.pass, "{rep:?}");
    }

    #[test]
    fn bank_structure_n6() {
        let bank = build_ctf(&CtfParams::published(6).unwrap(), 1024).unwrap();
        assert_eq!(bank.lowpass.len(), 3);
        assert_eq!(bank.highpass.len(), 4);
        let labels: Vec<&str> = bank.highpass.iter().map(|f| f.label.as_str()).collect();
        assert_eq!(labels, ["b1p", "b2p", "b1n", "b2n"]);
    }

    #[test]
    fn lowpass_is_one_at_dc() {
        for n in [3, 4, 6] {
            let bank = build_ctf(&CtfParams::published(n).unwrap(), 256).unwrap();
            assert_eq!(bank.a().samples()[0], Complex64::new(1.0, 0.0));
        }
    }

    #[test]
    fn printed_n4_value_warns_but_builds() {
        let p = CtfParams::special(4, 291.0 / 128.0, 27.0 / 64.0, Some(35.0 / 128.0), 2).unwrap();
        let bank = build_ctf(&p, 1024).unwrap();
        assert!(!bank.warnings.is_empty());
    }

    #[test]
    fn coarse_grid_rejected() {
        let p = CtfParams::published(6).unwrap();
        assert!(build_ctf(&p, 16).is_err());
        assert!(build_ctf(&p, 127).is_err());
    }

    #[test]
    fn conjugate_pair_relation() {
        let bank = build_ctf(&CtfParams::published(6).unwrap(), 512).unwrap();
        let n = bank.grid_size;
        for l in 0..2 {
            let bp = bank.highpass[l].samples();
            let bn = bank.highpass[l + 2].samples();
            for k in 0..n {
                assert!((bn[k] - bp[(n - k) % n].conj()).norm() < 1e-12);
            }
        }
        let (ap, an) = bank.split_pair().unwrap();
        for k in 0..n {
            assert!((an.samples()[k] - ap.samples()[(n - k) % n].conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn symbols_are_real_valued_windows() {
        let bank = build_ctf(&CtfParams::published(4).unwrap(), 512).unwrap();
        assert!(bank.a().is_conj_symmetric(1e-12));
        for f in bank.tight_system() {
            for v in f.samples() {
                assert!(v.im == 0.0 && v.re >= 0.0 && v.re <= 1.0 + 1e-12);
            }
        }
    }
}
