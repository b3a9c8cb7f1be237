//! Bivariate shrinkage of subband coefficients with a locally adaptive
//! variance estimate.
//!
//! Each coefficient is shrunk jointly with its parent at the next coarser
//! level: with `R = sqrt(|y1|^2 + |y2|^2)`, local signal deviation
//! `shat = sqrt(max(mean_{window}|y1|^2 - sigma_b^2, 0))` and subband noise
//! deviation `sigma_b`, the magnitude factor is
//! `max(R - sqrt(3) sigma_b^2 / shat, 0) / R`. Phase is preserved; the
//! low-pass band passes through untouched.

use crate::construction::{FilterBank1D, FilterBank2D};
use crate::dtcwt::{
    dtcwt_multilevel_filters, DtBandId, DtCoeffs, DtFilterSet, FirstLevelKind,
};
use crate::error::{Error, Result};
use crate::filters::{resample_symbol, symbol_l2_norm, xi_centered};
use crate::transform::{multilevel_symbol_1d, Pyramid2D, Signal2D};
use num_complex::Complex64;
use std::collections::HashMap;

/// Periodic box mean of `values` over a `window x window` neighborhood.
fn box_mean_periodic(values: &[f64], h: usize, w: usize, window: usize) -> Vec<f64> {
    let k = (window / 2) as isize;
    // integral image of the wrap-padded field
    let ph = h + window - 1;
    let pw = w + window - 1;
    let mut integral = vec![0.0f64; (ph + 1) * (pw + 1)];
    for i in 0..ph {
        let src_i = (i as isize - k).rem_euclid(h as isize) as usize;
        for j in 0..pw {
            let src_j = (j as isize - k).rem_euclid(w as isize) as usize;
            let v = values[src_i * w + src_j];
            integral[(i + 1) * (pw + 1) + (j + 1)] = v
                + integral[i * (pw + 1) + (j + 1)]
                + integral[(i + 1) * (pw + 1) + j]
                - integral[i * (pw + 1) + j];
        }
    }
    let area = (window * window) as f64;
    let mut out = vec![0.0f64; h * w];
    for i in 0..h {
        for j in 0..w {
            let (r1, c1) = (i + window, j + window);
            out[i * w + j] = (integral[r1 * (pw + 1) + c1] - integral[i * (pw + 1) + c1]
                - integral[r1 * (pw + 1) + j]
                + integral[i * (pw + 1) + j])
                / area;
        }
    }
    out
}

/// Shrink one subband given its (already upsampled) parent magnitudes.
fn shrink_band(
    band: &Signal2D,
    parent_mag: Option<&Vec<f64>>,
    sigma_b: f64,
    window: usize,
) -> Signal2D {
    let (h, w) = (band.height, band.width);
    let mag2: Vec<f64> = band.data.iter().map(|c| c.norm_sqr()).collect();
    let local = box_mean_periodic(&mag2, h, w, window);
    let mut out = Signal2D::zeros(h, w);
    out.declared_real = band.declared_real;
    let sb2 = sigma_b * sigma_b;
    let thr_num = 3.0f64.sqrt() * sb2;
    for i in 0..h * w {
        let shat = (local[i] - sb2).max(0.0).sqrt();
        if shat == 0.0 {
            continue; // fully attributed to noise
        }
        let y2 = parent_mag.map_or(0.0, |p| p[i]);
        let r = (mag2[i] + y2 * y2).sqrt();
        if r == 0.0 {
            continue;
        }
        let factor = (r - thr_num / shat).max(0.0) / r;
        out.data[i] = band.data[i] * factor;
    }
    out
}

/// Nearest-neighbor upsampled parent magnitudes aligned with a child band.
fn parent_magnitudes(parent: &Signal2D, child_h: usize, child_w: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; child_h * child_w];
    for i in 0..child_h {
        let pi = (i / 2).min(parent.height - 1);
        for j in 0..child_w {
            let pj = (j / 2).min(parent.width - 1);
            out[i * child_w + j] = parent.data[pi * parent.width + pj].norm();
        }
    }
    out
}

fn check_window(window: usize) -> Result<()> {
    if window < 3 || window.is_multiple_of(2) {
        return Err(Error::param("window must be odd and at least 3"));
    }
    Ok(())
}

/// Noise amplitude per subband of a framelet pyramid: `sigma_n` times the
/// l2 norm of the subband's multilevel filter.
pub fn pyramid_subband_gains(
    bank: &FilterBank2D,
    levels: usize,
    height: usize,
    width: usize,
) -> Result<HashMap<(usize, String), f64>> {
    let mut axis_norm: HashMap<(usize, String, usize), f64> = HashMap::new();
    let mut norms_for = |len: usize| -> Result<()> {
        let low = resample_symbol(bank.lowpass.row.samples(), len)?;
        for f in bank.channels() {
            for (axis_f, key) in [(&f.row, f.row.label.clone()), (&f.col, f.col.label.clone())] {
                for j in 1..=levels {
                    if axis_norm.contains_key(&(j, key.clone(), len)) {
                        continue;
                    }
                    let sym = resample_symbol(axis_f.samples(), len)?;
                    let ml = multilevel_symbol_1d(&low, &sym, j)?;
                    axis_norm.insert((j, key.clone(), len), symbol_l2_norm(&ml));
                }
            }
        }
        Ok(())
    };
    norms_for(height)?;
    if width != height {
        norms_for(width)?;
    }
    let mut out = HashMap::new();
    for f in &bank.highpass {
        for j in 1..=levels {
            let g = axis_norm[&(j, f.row.label.clone(), height)]
                * axis_norm[&(j, f.col.label.clone(), width)];
            out.insert((j, f.label.clone()), g);
        }
    }
    Ok(out)
}

/// Bivariate shrinkage over a framelet pyramid. Parents pair by identical
/// subband label at the next coarser level; the deepest level has no parent.
pub fn bivariate_shrink_pyramid(
    p: &Pyramid2D,
    bank: &FilterBank2D,
    sigma_n: f64,
    window: usize,
) -> Result<Pyramid2D> {
    check_window(window)?;
    let levels = p.level_count();
    let (h, w) = (
        p.levels[0][0].data.height * 2,
        p.levels[0][0].data.width * 2,
    );
    let gains = pyramid_subband_gains(bank, levels, h, w)?;
    let mut out = p.clone();
    for j in 1..=levels {
        for (bi, band) in p.levels[j - 1].iter().enumerate() {
            let sigma_b = sigma_n
                * gains
                    .get(&(j, band.label.clone()))
                    .copied()
                    .ok_or_else(|| Error::shape(format!("no gain for {}", band.label)))?;
            let parent = if j < levels {
                p.band(j + 1, &band.label)
                    .map(|pb| parent_magnitudes(&pb.data, band.data.height, band.data.width))
            } else {
                None
            };
            out.levels[j - 1][bi].data =
                shrink_band(&band.data, parent.as_ref(), sigma_b, window);
        }
    }
    Ok(out)
}

/// Spectral direction descriptor used to match hybrid first-level bands to
/// oriented parents.
fn direction_vector(row_sym: &[Complex64], col_sym: &[Complex64]) -> (f64, f64) {
    let centroid = |s: &[Complex64]| {
        let n = s.len();
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, v) in s.iter().enumerate() {
            let w = v.norm_sqr();
            // the -pi bin sits on both interval ends and contributes zero,
            // keeping mirrored filters exactly antisymmetric
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
    };
    (centroid(row_sym), centroid(col_sym))
}

fn angle_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    let na = (a.0 * a.0 + a.1 * a.1).sqrt();
    let nb = (b.0 * b.0 + b.1 * b.1).sqrt();
    if na == 0.0 || nb == 0.0 {
        return f64::INFINITY;
    }
    let dot = (a.0 * b.0 + a.1 * b.1) / (na * nb);
    dot.clamp(-1.0, 1.0).acos()
}

struct DtGains {
    /// (level, band label) -> sigma gain
    by_band: HashMap<(usize, String), f64>,
    /// hybrid level-1 band label -> parent oriented band id at level 2
    hybrid_parents: HashMap<String, DtBandId>,
}

fn dt_gains(
    coeffs: &DtCoeffs,
    filters: &DtFilterSet,
    first_level: Option<&FilterBank1D>,
    height: usize,
    width: usize,
) -> Result<DtGains> {
    let levels = coeffs.level_count();
    let mut by_band = HashMap::new();
    let mut hybrid_parents = HashMap::new();
    let first_row: Option<Vec<Complex64>> = match first_level {
        Some(b) => Some(resample_symbol(b.a().samples(), height)?),
        None => None,
    };
    let first_col: Option<Vec<Complex64>> = match first_level {
        Some(b) => Some(resample_symbol(b.a().samples(), width)?),
        None => None,
    };
    // oriented levels
    let mut parent_dirs: Vec<(DtBandId, (f64, f64))> = Vec::new();
    for j in 1..=levels {
        let is_hybrid_level1 = j == 1 && first_level.is_some();
        if is_hybrid_level1 {
            continue;
        }
        let ml_row = dtcwt_multilevel_filters(filters, j, height, first_row.as_deref())?;
        let ml_col = if width == height && first_row == first_col {
            None
        } else {
            Some(dtcwt_multilevel_filters(filters, j, width, first_col.as_deref())?)
        };
        let mc = ml_col.as_ref().unwrap_or(&ml_row);
        use crate::dtcwt::{BandType, PairCombo};
        for btype in BandType::ALL {
            for combo in [PairCombo::Pp, PairCombo::Nn, PairCombo::Pn, PairCombo::Np] {
                let (rp, rn) = match btype {
                    BandType::LowHigh => (&ml_row.apj, &ml_row.anj),
                    BandType::HighLow | BandType::HighHigh => (&ml_row.bpj, &ml_row.bnj),
                };
                let (cp, cn) = match btype {
                    BandType::HighLow => (&mc.apj, &mc.anj),
                    BandType::LowHigh | BandType::HighHigh => (&mc.bpj, &mc.bnj),
                };
                let (r, c) = match combo {
                    PairCombo::Pp => (rp, cp),
                    PairCombo::Nn => (rn, cn),
                    PairCombo::Pn => (rp, cn),
                    PairCombo::Np => (rn, cp),
                };
                let id = DtBandId::Oriented { btype, combo };
                by_band.insert((j, id.label()), symbol_l2_norm(r) * symbol_l2_norm(c));
                if j == 2 && first_level.is_some() {
                    parent_dirs.push((id.clone(), direction_vector(r, c)));
                }
            }
        }
    }
    // hybrid first level: gains are plain filter-norm products, parents by
    // nearest direction among the level-2 oriented bands
    if let Some(bank) = first_level {
        for band in &coeffs.levels[0].bands {
            if let DtBandId::FirstLevelCtf { row, col, .. } = &band.id {
                let rsym = resample_symbol(
                    bank.filter_by_label(row)
                        .ok_or_else(|| Error::shape(format!("no CTF filter {row}")))?
                        .samples(),
                    height,
                )?;
                let csym = resample_symbol(
                    bank.filter_by_label(col)
                        .ok_or_else(|| Error::shape(format!("no CTF filter {col}")))?
                        .samples(),
                    width,
                )?;
                by_band.insert(
                    (1, band.id.label()),
                    symbol_l2_norm(&rsym) * symbol_l2_norm(&csym),
                );
                if levels >= 2 {
                    let dir = direction_vector(&rsym, &csym);
                    let best = parent_dirs
                        .iter()
                        .min_by(|x, y| {
                            angle_distance(dir, x.1)
                                .total_cmp(&angle_distance(dir, y.1))
                        })
                        .map(|(id, _)| id.clone())
                        .ok_or_else(|| Error::shape("no oriented level-2 bands"))?;
                    hybrid_parents.insert(band.id.label(), best);
                }
            }
        }
    }
    Ok(DtGains {
        by_band,
        hybrid_parents,
    })
}

/// Bivariate shrinkage over dual-tree coefficients. Oriented bands pair with
/// the same orientation at the next coarser level; hybrid first-level bands
/// pair with the nearest-direction oriented band at level 2. The four real
/// low-pass subbands pass through.
pub fn bivariate_shrink_dtcwt(
    coeffs: &DtCoeffs,
    filters: &DtFilterSet,
    first_level: Option<&FilterBank1D>,
    sigma_n: f64,
    window: usize,
) -> Result<DtCoeffs> {
    check_window(window)?;
    match (&coeffs.first_level, first_level) {
        (FirstLevelKind::Standard, None) => {}
        (FirstLevelKind::Tpctf { n }, Some(b)) if *n == b.n => {}
        _ => return Err(Error::param("first_level bank must match analysis")),
    }
    let levels = coeffs.level_count();
    let gains = dt_gains(coeffs, filters, first_level, coeffs.height, coeffs.width)?;
    let mut out = coeffs.clone();
    for j in 1..=levels {
        for (bi, band) in coeffs.levels[j - 1].bands.iter().enumerate() {
            let g = gains
                .by_band
                .get(&(j, band.id.label()))
                .copied()
                .ok_or_else(|| Error::shape(format!("no gain for {}", band.id.label())))?;
            let parent = if j < levels {
                let pid = match &band.id {
                    DtBandId::Oriented { .. } => Some(band.id.clone()),
                    DtBandId::FirstLevelCtf { .. } => gains.hybrid_parents.get(&band.id.label()).cloned(),
                };
                pid.and_then(|id| coeffs.band(j + 1, &id))
                    .map(|pb| parent_magnitudes(&pb.data, band.data.height, band.data.width))
            } else {
                None
            };
            out.levels[j - 1].bands[bi].data =
                shrink_band(&band.data, parent.as_ref(), sigma_n * g, window);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_ctf, tensor_bank_2d, CtfParams};
    use crate::denoise::standard_normals;
    use crate::transform::decompose_2d;

    #[test]
    fn window_validation() {
        let bank2 =
            tensor_bank_2d(&build_ctf(&CtfParams::published(3).unwrap(), 32).unwrap()).unwrap();
        let img = Signal2D::from_real(32, 32, &standard_normals(1, 1024));
        let p = decompose_2d(&img, &bank2, 1).unwrap();
        assert!(bivariate_shrink_pyramid(&p, &bank2, 10.0, 4).is_err());
        assert!(bivariate_shrink_pyramid(&p, &bank2, 10.0, 1).is_err());
        assert!(bivariate_shrink_pyramid(&p, &bank2, 10.0, 7).is_ok());
    }

    #[test]
    fn zero_sigma_is_identity() {
        let bank2 =
            tensor_bank_2d(&build_ctf(&CtfParams::published(4).unwrap(), 64).unwrap()).unwrap();
        let img = Signal2D::from_real(64, 64, &standard_normals(2, 4096));
        let p = decompose_2d(&img, &bank2, 2).unwrap();
        let q = bivariate_shrink_pyramid(&p, &bank2, 0.0, 7).unwrap();
        for (a, b) in p.levels.iter().flatten().zip(q.levels.iter().flatten()) {
            for (x, y) in a.data.data.iter().zip(&b.data.data) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn shrinkage_is_a_contraction_preserving_phase() {
        let bank2 =
            tensor_bank_2d(&build_ctf(&CtfParams::published(6).unwrap(), 64).unwrap()).unwrap();
        let img = Signal2D::from_real(
            64,
            64,
            &standard_normals(3, 4096).iter().map(|x| 30.0 * x).collect::<Vec<_>>(),
        );
        let p = decompose_2d(&img, &bank2, 2).unwrap();
        let q = bivariate_shrink_pyramid(&p, &bank2, 10.0, 7).unwrap();
        for (a, b) in p.levels.iter().flatten().zip(q.levels.iter().flatten()) {
            for (x, y) in a.data.data.iter().zip(&b.data.data) {
                assert!(y.norm() <= x.norm() * (1.0 + 1e-12));
                if y.norm() > 1e-12 {
                    let phase = (y / x).arg().abs();
                    assert!(phase < 1e-10, "phase changed by {phase}");
                }
            }
        }
        for (x, y) in p.lowpass.data.iter().zip(&q.lowpass.data) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn hand_computed_factor() {
        // y1 = 10, parent 6, sigma_b = 4, local variance arranged so that
        // shat = 5: factor = (sqrt(136) - sqrt(3) * 16 / 5) / sqrt(136).
        let h = 8;
        let w = 8;
        let mut band = Signal2D::zeros(h, w);
        // 7x7 window around (0,0) must average |y1|^2 = 41 = shat^2 + sigma_b^2
        let rest = ((41.0f64 * 49.0 - 100.0) / 48.0).sqrt();
        for v in band.data.iter_mut() {
            *v = Complex64::new(rest, 0.0);
        }
        band.data[0] = Complex64::new(10.0, 0.0);
        let parent = vec![6.0f64; h * w];
        let out = shrink_band(&band, Some(&parent), 4.0, 7);
        let r = 136.0f64.sqrt();
        let factor = (r - 3.0f64.sqrt() * 16.0 / 5.0) / r;
        assert!((out.data[0].re - 10.0 * factor).abs() < 1e-9, "{}", out.data[0].re);
        assert!((10.0 * factor - 5.24729).abs() < 1e-5);
    }

    #[test]
    fn below_threshold_zeroes_exactly() {
        let h = 8;
        let w = 8;
        let mut band = Signal2D::zeros(h, w);
        for v in band.data.iter_mut() {
            *v = Complex64::new(0.5, 0.0);
        }
        let out = shrink_band(&band, None, 2.0, 7);
        assert!(out.data.iter().all(|c| c.norm() == 0.0));
    }
}
