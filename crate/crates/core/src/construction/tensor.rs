//! Tensor-product assembly of two-dimensional filter banks.

use crate::construction::ctf::FilterBank1D;
use crate::error::{Error, Result};
use crate::filters::{xi_centered, FilterRole, FreqFilter};
use num_complex::Complex64;

/// A separable 2-D filter: outer product of a row factor (first axis) and a
/// column factor (second axis).
#[derive(Debug, Clone)]
pub struct Filter2D {
    pub label: String,
    pub role: FilterRole,
    /// Orientation label in degrees, `None` for the low-pass. Metadata only.
    pub direction_deg: Option<f64>,
    pub row: FreqFilter,
    pub col: FreqFilter,
}

impl Filter2D {
    pub fn new(row: &FreqFilter, col: &FreqFilter, role: FilterRole) -> Self {
        let label = format!("{}*{}", row.label, col.label);
        let direction_deg = match role {
            FilterRole::Lowpass => None,
            FilterRole::Highpass => Some(direction_deg(row, col)),
        };
        Filter2D {
            label,
            role,
            direction_deg,
            row: row.clone(),
            col: col.clone(),
        }
    }

    /// Sample of the 2-D symbol at grid point `(k1, k2)`.
    pub fn at(&self, k1: usize, k2: usize) -> Complex64 {
        self.row.samples()[k1] * self.col.samples()[k2]
    }
}

/// Signed spectral centroid of a symbol over `[-pi, pi)`. The bin at `-pi`
/// sits on both ends of the interval and contributes zero, which keeps the
/// centroid exactly antisymmetric under conjugate mirroring.
pub fn spectral_centroid(f: &FreqFilter) -> f64 {
    let s = f.samples();
    let n = s.len();
    let mut num = 0.0;
    let mut den = 0.0;
    for (k, v) in s.iter().enumerate() {
        let w = v.norm_sqr();
        if k != n / 2 {
            num += w * xi_centered(k, n);
        }
        den += w;
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Orientation of the outer product from the factor centroids, folded into
/// `(-90, 90]` degrees so conjugate mirrors share a label.
pub fn direction_deg(row: &FreqFilter, col: &FreqFilter) -> f64 {
    let cr = spectral_centroid(row);
    let cc = spectral_centroid(col);
    let mut deg = cc.atan2(cr).to_degrees();
    if deg > 90.0 {
        deg -= 180.0;
    }
    if deg <= -90.0 {
        deg += 180.0;
    }
    deg
}

/// A two-dimensional tight framelet filter bank with a single low-pass
/// channel `a (x) a`.
#[derive(Debug, Clone)]
pub struct FilterBank2D {
    pub name: String,
    pub n: u32,
    pub grid_size: usize,
    pub lowpass: Filter2D,
    pub highpass: Vec<Filter2D>,
}

impl FilterBank2D {
    pub fn channels(&self) -> impl Iterator<Item = &Filter2D> {
        std::iter::once(&self.lowpass).chain(self.highpass.iter())
    }

    pub fn highpass_by_label(&self, label: &str) -> Option<&Filter2D> {
        self.highpass.iter().find(|f| f.label == label)
    }
}

/// Assemble the 2-D bank from a 1-D bank.
///
/// For a bank with a single low-pass filter the high-pass part is every
/// tensor product except `a (x) a`. For an even-n bank with the split pair
/// the mixed products use the split factors on either axis, so the high-pass
/// part is `{a^p, a^n} (x) {b} ∪ {b} (x) {a^p, a^n} ∪ {b} (x) {b}`,
/// `4s(s+2)` filters in total.
pub fn tensor_bank_2d(bank: &FilterBank1D) -> Result<FilterBank2D> {
    if bank.lowpass.is_empty() || bank.highpass.is_empty() {
        return Err(Error::param("bank must have low-pass and high-pass filters"));
    }
    let a = bank.a();
    let lowpass = Filter2D::new(a, a, FilterRole::Lowpass);
    let mut highpass = Vec::new();
    match bank.split_pair() {
        None => {
            let all: Vec<&FreqFilter> = std::iter::once(a).chain(bank.highpass.iter()).collect();
            for (i, u) in all.iter().enumerate() {
                for (j, v) in all.iter().enumerate() {
                    if i == 0 && j == 0 {
                        continue;
                    }
                    highpass.push(Filter2D::new(u, v, FilterRole::Highpass));
                }
            }
        }
        Some((ap, an)) => {
            let splits = [ap, an];
            for u in splits {
                for b in &bank.highpass {
                    highpass.push(Filter2D::new(u, b, FilterRole::Highpass));
                }
            }
            for b in &bank.highpass {
                for u in splits {
                    highpass.push(Filter2D::new(b, u, FilterRole::Highpass));
                }
            }
            for b1 in &bank.highpass {
                for b2 in &bank.highpass {
                    highpass.push(Filter2D::new(b1, b2, FilterRole::Highpass));
                }
            }
        }
    }
    Ok(FilterBank2D {
        name: format!("{}-2d", bank.name),
        n: bank.n,
        grid_size: bank.grid_size,
        lowpass,
        highpass,
    })
}
