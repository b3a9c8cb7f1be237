//! Dual-tree complex wavelet transform.
//!
//! Two correlated orthogonal wavelet trees run per axis (four trees in 2-D);
//! matching real subbands are mixed by averages and differences into complex
//! oriented subbands. The union of the four trees scaled by 1/2 is a tight
//! frame, so analysis preserves energy and synthesis is the adjoint.
//!
//! The hybrid variant replaces the first level by the undecimated framelet
//! bank `2^{-1/2} {a, a(.-1); b's, b(.-1)'s}` built from a CTF_n bank; its
//! two low-pass branches seed tree one and tree two per axis.

mod serialize;

pub use serialize::{read_dtcoeffs, write_dtcoeffs};

use crate::construction::{kingsbury_filters, FilterBank1D};
use crate::error::{Error, Result};
use crate::fft;
use crate::filters::{highpass_symbol, resample_symbol, xi, FreqFilter};
use crate::transform::{fold_spectrum_2d, product_symbol, unfold_spectrum_2d, Signal2D};
use num_complex::Complex64;
use std::collections::HashMap;
use std::f64::consts::{FRAC_PI_2, SQRT_2};

/// Which filter family drives the trees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DtSource {
    /// Finitely supported taps (almost-symmetric initial pair + q-shift tree pair).
    Kingsbury,
    /// Frequency-based bump filters with an exact half-sample shift.
    Meyer { eps: f64, m: u32 },
}

/// Per-grid symbols of the six tree filters.
#[derive(Debug, Clone)]
pub struct DtSymbols {
    pub a0: Vec<Complex64>,
    pub b0: Vec<Complex64>,
    pub a1: Vec<Complex64>,
    pub b1: Vec<Complex64>,
    pub a2: Vec<Complex64>,
    pub b2: Vec<Complex64>,
}

/// The three orthogonal wavelet filter banks of a dual-tree transform.
#[derive(Debug, Clone)]
pub struct DtFilterSet {
    pub source: DtSource,
}

impl DtFilterSet {
    pub fn kingsbury() -> Self {
        DtFilterSet {
            source: DtSource::Kingsbury,
        }
    }

    pub fn meyer(eps: f64, m: u32) -> Result<Self> {
        if !(eps > 0.0 && eps <= FRAC_PI_2) {
            return Err(Error::param("meyer window requires 0 < eps <= pi/2"));
        }
        if m == 0 {
            return Err(Error::param("meyer window requires m >= 1"));
        }
        Ok(DtFilterSet {
            source: DtSource::Meyer { eps, m },
        })
    }

    /// Grid symbols, normalized per frequency pair so each `{a; b}` bank is
    /// exactly orthogonal on the grid (absorbs the 1e-8 rounding of the
    /// printed q-shift taps).
    pub fn symbols(&self, len: usize) -> Result<DtSymbols> {
        let (a0, a1, a2) = match self.source {
            DtSource::Kingsbury => {
                let k = kingsbury_filters();
                let mut a0 = k.a0.symbol(len);
                let mut a1 = k.a1.symbol(len);
                let mut a2 = k.a2.symbol(len);
                normalize_pairwise(&mut a0);
                normalize_pairwise(&mut a1);
                normalize_pairwise(&mut a2);
                (a0, a1, a2)
            }
            DtSource::Meyer { eps, m } => {
                let (a0, a1, a2) = crate::construction::build_meyer_orthogonal(eps, m, len)?;
                (
                    a0.samples().to_vec(),
                    a1.samples().to_vec(),
                    a2.samples().to_vec(),
                )
            }
        };
        Ok(DtSymbols {
            b0: highpass_symbol(&a0),
            b1: highpass_symbol(&a1),
            b2: highpass_symbol(&a2),
            a0,
            a1,
            a2,
        })
    }
}

/// Scale the symbol pairs `(xi, xi + pi)` to unit energy.
fn normalize_pairwise(sym: &mut [Complex64]) {
    let n = sym.len();
    let h = n / 2;
    for k in 0..h {
        let s = (sym[k].norm_sqr() + sym[k + h].norm_sqr()).sqrt();
        if s > 0.0 {
            sym[k] /= s;
            sym[k + h] /= s;
        }
    }
}

/// Averages and differences: `p = (x + i y)/sqrt(2)`, `n = (x - i y)/sqrt(2)`.
pub fn pair_complex(x: &Signal2D, y: &Signal2D) -> Result<(Signal2D, Signal2D)> {
    if x.height != y.height || x.width != y.width {
        return Err(Error::shape("pair_complex requires equal shapes"));
    }
    let mut p = Signal2D::zeros(x.height, x.width);
    let mut n = Signal2D::zeros(x.height, x.width);
    for i in 0..x.data.len() {
        let iy = Complex64::i() * y.data[i];
        p.data[i] = (x.data[i] + iy) / SQRT_2;
        n.data[i] = (x.data[i] - iy) / SQRT_2;
    }
    Ok((p, n))
}

/// Inverse of [`pair_complex`].
pub fn unpair_complex(p: &Signal2D, n: &Signal2D) -> Result<(Signal2D, Signal2D)> {
    if p.height != n.height || p.width != n.width {
        return Err(Error::shape("unpair_complex requires equal shapes"));
    }
    let mut x = Signal2D::zeros(p.height, p.width);
    let mut y = Signal2D::zeros(p.height, p.width);
    for i in 0..p.data.len() {
        x.data[i] = (p.data[i] + n.data[i]) / SQRT_2;
        y.data[i] = (p.data[i] - n.data[i]) * Complex64::new(0.0, -1.0) / SQRT_2;
    }
    Ok((x, y))
}

/// Which of the four sign combinations a complex subband carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairCombo {
    Pp,
    Nn,
    Pn,
    Np,
}

/// Axis filter kind of an oriented subband (low-pass or high-pass per axis).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BandType {
    /// row low-pass, column high-pass
    LowHigh,
    /// row high-pass, column low-pass
    HighLow,
    /// high-pass on both axes
    HighHigh,
}

impl BandType {
    pub const ALL: [BandType; 3] = [BandType::LowHigh, BandType::HighLow, BandType::HighHigh];
}

/// Identity of a dual-tree subband.
#[derive(Debug, Clone, PartialEq)]
pub enum DtBandId {
    Oriented { btype: BandType, combo: PairCombo },
    /// Hybrid first level: a CTF channel with per-axis shift phase.
    FirstLevelCtf {
        row: String,
        row_shift: bool,
        col: String,
        col_shift: bool,
    },
}

impl DtBandId {
    /// Orientation label: `+-15, +-45, +-75` degrees for oriented bands.
    pub fn angle_deg(&self) -> Option<i32> {
        match self {
            DtBandId::Oriented { btype, combo } => {
                let mag = match btype {
                    BandType::HighLow => 15,
                    BandType::LowHigh => 75,
                    BandType::HighHigh => 45,
                };
                let sign = match combo {
                    PairCombo::Pp | PairCombo::Nn => 1,
                    PairCombo::Pn | PairCombo::Np => -1,
                };
                Some(sign * mag)
            }
            DtBandId::FirstLevelCtf { .. } => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            DtBandId::Oriented { btype, combo } => {
                let t = match btype {
                    BandType::LowHigh => "ab",
                    BandType::HighLow => "ba",
                    BandType::HighHigh => "bb",
                };
                let c = match combo {
                    PairCombo::Pp => "pp",
                    PairCombo::Nn => "nn",
                    PairCombo::Pn => "pn",
                    PairCombo::Np => "np",
                };
                format!("{t}_{c}")
            }
            DtBandId::FirstLevelCtf {
                row,
                row_shift,
                col,
                col_shift,
            } => format!(
                "ctf_{row}{}_{col}{}",
                if *row_shift { "s" } else { "" },
                if *col_shift { "s" } else { "" }
            ),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DtBand {
    pub id: DtBandId,
    pub data: Signal2D,
}

#[derive(Debug, Clone)]
pub struct DtLevel {
    pub bands: Vec<DtBand>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FirstLevelKind {
    Standard,
    Tpctf { n: u32 },
}

/// Dual-tree coefficient set: per-level complex subbands plus the four real
/// low-pass subbands of the deepest level (tree row x tree column order
/// 11, 12, 21, 22).
#[derive(Debug, Clone)]
pub struct DtCoeffs {
    pub height: usize,
    pub width: usize,
    pub levels: Vec<DtLevel>,
    pub lowpass: Vec<Signal2D>,
    pub first_level: FirstLevelKind,
}

impl DtCoeffs {
    pub fn level_count(&self) -> usize {
        self.levels.len()
    }

    pub fn band(&self, level: usize, id: &DtBandId) -> Option<&DtBand> {
        self.levels[level - 1].bands.iter().find(|b| &b.id == id)
    }

    /// Total squared magnitude over all subbands including the four low-pass
    /// grids; equals the input energy for these tight transforms.
    pub fn energy(&self) -> f64 {
        let mut e: f64 = self.lowpass.iter().map(|s| s.norm_sqr()).sum();
        for level in &self.levels {
            for band in &level.bands {
                e += band.data.norm_sqr();
            }
        }
        e
    }
}

/// Per-axis symbols for one level of one tree.
struct AxisFilters {
    low: Vec<Complex64>,
    high: Vec<Complex64>,
}

fn shifted_symbol(sym: &[Complex64]) -> Vec<Complex64> {
    let n = sym.len();
    sym.iter()
        .enumerate()
        .map(|(k, v)| v * Complex64::from_polar(1.0, -xi(k, n)))
        .collect()
}

fn tree_axis_filters(syms: &DtSymbols, len: usize, level1: bool, tree: usize) -> Result<AxisFilters> {
    let (a, b) = if level1 {
        (&syms.a0, &syms.b0)
    } else if tree == 0 {
        (&syms.a1, &syms.b1)
    } else {
        (&syms.a2, &syms.b2)
    };
    let mut low = resample_symbol(a, len)?;
    let mut high = resample_symbol(b, len)?;
    if level1 && tree == 1 {
        low = shifted_symbol(&low);
        high = shifted_symbol(&high);
    }
    Ok(AxisFilters { low, high })
}

fn one_level_channel(
    spec: &[Complex64],
    h: usize,
    w: usize,
    row: &[Complex64],
    col: &[Complex64],
) -> Signal2D {
    let mut sub = fold_spectrum_2d(spec, h, w, row, col);
    fft::fft2(&mut sub, h / 2, w / 2, true);
    for c in sub.iter_mut() {
        *c *= 0.5;
    }
    Signal2D {
        height: h / 2,
        width: w / 2,
        data: sub,
        declared_real: false,
    }
}

/// Pair the four tree subbands of one type into the four complex subbands.
fn pair_quadruple(q: [&Signal2D; 4]) -> Result<[Signal2D; 4]> {
    // q = [c11, c12, c21, c22]
    let inv = 1.0 / SQRT_2;
    let mut s1 = Signal2D::zeros(q[0].height, q[0].width);
    let mut s2 = s1.clone();
    let mut d1 = s1.clone();
    let mut d2 = s1.clone();
    for i in 0..s1.data.len() {
        s1.data[i] = (q[0].data[i] - q[3].data[i]) * inv;
        s2.data[i] = (q[1].data[i] + q[2].data[i]) * inv;
        d1.data[i] = (q[0].data[i] + q[3].data[i]) * inv;
        d2.data[i] = (q[1].data[i] - q[2].data[i]) * inv;
    }
    let (z_nn, z_pp) = pair_complex(&s1, &s2)?;
    let (z_pn, z_np) = pair_complex(&d1, &d2)?;
    Ok([z_pp, z_nn, z_pn, z_np])
}

/// Inverse of [`pair_quadruple`].
fn unpair_quadruple(z: [&Signal2D; 4]) -> Result<[Signal2D; 4]> {
    // z = [z_pp, z_nn, z_pn, z_np]
    let (s1, s2) = unpair_complex(z[1], z[0])?;
    let (d1, d2) = unpair_complex(z[2], z[3])?;
    let inv = 1.0 / SQRT_2;
    let mut c11 = Signal2D::zeros(s1.height, s1.width);
    let mut c12 = c11.clone();
    let mut c21 = c11.clone();
    let mut c22 = c11.clone();
    for i in 0..c11.data.len() {
        c11.data[i] = (s1.data[i] + d1.data[i]) * inv;
        c22.data[i] = (d1.data[i] - s1.data[i]) * inv;
        c12.data[i] = (s2.data[i] + d2.data[i]) * inv;
        c21.data[i] = (s2.data[i] - d2.data[i]) * inv;
    }
    Ok([c11, c12, c21, c22])
}

const COMBOS: [PairCombo; 4] = [PairCombo::Pp, PairCombo::Nn, PairCombo::Pn, PairCombo::Np];

/// Forward dual-tree transform. `first_level = Some(bank)` switches level one
/// to the undecimated CTF bank (hybrid variant).
pub fn dtcwt_decompose(
    img: &Signal2D,
    filters: &DtFilterSet,
    levels: usize,
    first_level: Option<&FilterBank1D>,
) -> Result<DtCoeffs> {
    if levels == 0 || !img.height.is_multiple_of(1 << levels) || !img.width.is_multiple_of(1 << levels) {
        return Err(Error::shape(format!(
            "{}x{} not divisible by 2^{levels}",
            img.height, img.width
        )));
    }
    let (h0, w0) = (img.height, img.width);
    let syms_row = filters.symbols(h0)?;
    let syms_col = filters.symbols(w0)?;

    let half = img.scaled(0.5);
    let mut out_levels: Vec<DtLevel> = Vec::with_capacity(levels);
    let mut states: Vec<Signal2D>;

    match first_level {
        None => {
            let mut spec = half.data.clone();
            fft::fft2(&mut spec, h0, w0, false);
            let rows = [
                tree_axis_filters(&syms_row, h0, true, 0)?,
                tree_axis_filters(&syms_row, h0, true, 1)?,
            ];
            let cols = [
                tree_axis_filters(&syms_col, w0, true, 0)?,
                tree_axis_filters(&syms_col, w0, true, 1)?,
            ];
            let (level, ll) = analyze_trees_shared(&spec, h0, w0, &rows, &cols)?;
            out_levels.push(level);
            states = ll;
        }
        Some(bank) => {
            if bank.grid_size % h0 != 0 || bank.grid_size % w0 != 0 {
                return Err(Error::grid(format!(
                    "bank grid {} incompatible with {}x{}",
                    bank.grid_size, h0, w0
                )));
            }
            let mut spec = half.data.clone();
            fft::fft2(&mut spec, h0, w0, false);
            let mut row_factors: Vec<(String, bool, Vec<Complex64>)> = Vec::new();
            let mut col_factors: Vec<(String, bool, Vec<Complex64>)> = Vec::new();
            for (factors, len) in [(&mut row_factors, h0), (&mut col_factors, w0)] {
                let a = resample_symbol(bank.a().samples(), len)?;
                factors.push(("a".to_string(), false, a.clone()));
                factors.push(("a".to_string(), true, shifted_symbol(&a)));
                for b in &bank.highpass {
                    let s = resample_symbol(b.samples(), len)?;
                    factors.push((b.label.clone(), false, s.clone()));
                    factors.push((b.label.clone(), true, shifted_symbol(&s)));
                }
            }
            let mut bands = Vec::new();
            let mut ll: Vec<Signal2D> = Vec::new();
            for (rl, rs, rsym) in &row_factors {
                for (cl, cs, csym) in &col_factors {
                    let sub = one_level_channel(&spec, h0, w0, rsym, csym);
                    if rl == "a" && cl == "a" {
                        ll.push(sub); // order: (0,0),(0,1),(1,0),(1,1)
                    } else {
                        bands.push(DtBand {
                            id: DtBandId::FirstLevelCtf {
                                row: rl.clone(),
                                row_shift: *rs,
                                col: cl.clone(),
                                col_shift: *cs,
                            },
                            data: sub,
                        });
                    }
                }
            }
            out_levels.push(DtLevel { bands });
            states = ll;
        }
    }

    for _ in 2..=levels {
        let (h, w) = (states[0].height, states[0].width);
        let rows = [
            tree_axis_filters(&syms_row, h, false, 0)?,
            tree_axis_filters(&syms_row, h, false, 1)?,
        ];
        let cols = [
            tree_axis_filters(&syms_col, w, false, 0)?,
            tree_axis_filters(&syms_col, w, false, 1)?,
        ];
        let mut subs: HashMap<(usize, BandType), Signal2D> = HashMap::new();
        let mut lls: Vec<Signal2D> = Vec::with_capacity(4);
        for (ti, state) in states.iter().enumerate() {
            let (r, c) = (ti / 2, ti % 2);
            let mut spec = state.data.clone();
            fft::fft2(&mut spec, h, w, false);
            lls.push(one_level_channel(&spec, h, w, &rows[r].low, &cols[c].low));
            subs.insert(
                (ti, BandType::LowHigh),
                one_level_channel(&spec, h, w, &rows[r].low, &cols[c].high),
            );
            subs.insert(
                (ti, BandType::HighLow),
                one_level_channel(&spec, h, w, &rows[r].high, &cols[c].low),
            );
            subs.insert(
                (ti, BandType::HighHigh),
                one_level_channel(&spec, h, w, &rows[r].high, &cols[c].high),
            );
        }
        let mut bands = Vec::with_capacity(12);
        for btype in BandType::ALL {
            let q = [
                &subs[&(0, btype)],
                &subs[&(1, btype)],
                &subs[&(2, btype)],
                &subs[&(3, btype)],
            ];
            let z = pair_quadruple(q)?;
            for (zi, combo) in z.into_iter().zip(COMBOS) {
                bands.push(DtBand {
                    id: DtBandId::Oriented { btype, combo },
                    data: zi,
                });
            }
        }
        out_levels.push(DtLevel { bands });
        states = lls;
    }

    Ok(DtCoeffs {
        height: h0,
        width: w0,
        levels: out_levels,
        lowpass: states,
        first_level: match first_level {
            None => FirstLevelKind::Standard,
            Some(b) => FirstLevelKind::Tpctf { n: b.n },
        },
    })
}

/// Analyze level 1 of the standard transform: the four trees share the input.
fn analyze_trees_shared(
    spec: &[Complex64],
    h: usize,
    w: usize,
    rows: &[AxisFilters; 2],
    cols: &[AxisFilters; 2],
) -> Result<(DtLevel, Vec<Signal2D>)> {
    let mut lls = Vec::with_capacity(4);
    let mut subs: HashMap<(usize, BandType), Signal2D> = HashMap::new();
    for ti in 0..4 {
        let (r, c) = (ti / 2, ti % 2);
        lls.push(one_level_channel(spec, h, w, &rows[r].low, &cols[c].low));
        subs.insert(
            (ti, BandType::LowHigh),
            one_level_channel(spec, h, w, &rows[r].low, &cols[c].high),
        );
        subs.insert(
            (ti, BandType::HighLow),
            one_level_channel(spec, h, w, &rows[r].high, &cols[c].low),
        );
        subs.insert(
            (ti, BandType::HighHigh),
            one_level_channel(spec, h, w, &rows[r].high, &cols[c].high),
        );
    }
    let mut bands = Vec::with_capacity(12);
    for btype in BandType::ALL {
        let q = [
            &subs[&(0, btype)],
            &subs[&(1, btype)],
            &subs[&(2, btype)],
            &subs[&(3, btype)],
        ];
        let z = pair_quadruple(q)?;
        for (zi, combo) in z.into_iter().zip(COMBOS) {
            bands.push(DtBand {
                id: DtBandId::Oriented { btype, combo },
                data: zi,
            });
        }
    }
    Ok((DtLevel { bands }, lls))
}

fn synth_channel(
    spec: &mut [Complex64],
    h: usize,
    w: usize,
    sub: &Signal2D,
    row: &[Complex64],
    col: &[Complex64],
) {
    let mut half = sub.data.clone();
    fft::fft2(&mut half, h / 2, w / 2, false);
    // adjoint of the 0.5-scaled analysis channel: 0.5 * 4 = 2 per alias term
    for c in half.iter_mut() {
        *c *= 0.5;
    }
    unfold_spectrum_2d(spec, h, w, &half, row, col);
}

/// Inverse dual-tree transform (adjoint synthesis).
pub fn dtcwt_reconstruct(
    coeffs: &DtCoeffs,
    filters: &DtFilterSet,
    first_level: Option<&FilterBank1D>,
) -> Result<Signal2D> {
    let levels = coeffs.levels.len();
    let (h0, w0) = (coeffs.height, coeffs.width);
    let syms_row = filters.symbols(h0)?;
    let syms_col = filters.symbols(w0)?;
    match (&coeffs.first_level, first_level) {
        (FirstLevelKind::Standard, None) => {}
        (FirstLevelKind::Tpctf { n }, Some(b)) if *n == b.n => {}
        _ => {
            return Err(Error::param(
                "first_level bank must match the one used for analysis",
            ))
        }
    }
    if coeffs.lowpass.len() != 4 {
        return Err(Error::shape("dual-tree coefficients need 4 low-pass subbands"));
    }

    let mut states = coeffs.lowpass.clone();
    for j in (2..=levels).rev() {
        let (hh, hw) = (states[0].height, states[0].width);
        let (h, w) = (hh * 2, hw * 2);
        let rows = [
            tree_axis_filters(&syms_row, h, false, 0)?,
            tree_axis_filters(&syms_row, h, false, 1)?,
        ];
        let cols = [
            tree_axis_filters(&syms_col, w, false, 0)?,
            tree_axis_filters(&syms_col, w, false, 1)?,
        ];
        let mut next = Vec::with_capacity(4);
        let mut quads: HashMap<BandType, [Signal2D; 4]> = HashMap::new();
        for btype in BandType::ALL {
            let z: Vec<&Signal2D> = COMBOS
                .iter()
                .map(|combo| {
                    coeffs
                        .band(j, &DtBandId::Oriented { btype, combo: *combo })
                        .map(|b| &b.data)
                        .ok_or_else(|| Error::shape("missing oriented subband"))
                })
                .collect::<Result<_>>()?;
            quads.insert(btype, unpair_quadruple([z[0], z[1], z[2], z[3]])?);
        }
        for ti in 0..4 {
            let (r, c) = (ti / 2, ti % 2);
            let mut spec = vec![Complex64::default(); h * w];
            synth_channel(&mut spec, h, w, &states[ti], &rows[r].low, &cols[c].low);
            synth_channel(
                &mut spec,
                h,
                w,
                &quads[&BandType::LowHigh][ti],
                &rows[r].low,
                &cols[c].high,
            );
            synth_channel(
                &mut spec,
                h,
                w,
                &quads[&BandType::HighLow][ti],
                &rows[r].high,
                &cols[c].low,
            );
            synth_channel(
                &mut spec,
                h,
                w,
                &quads[&BandType::HighHigh][ti],
                &rows[r].high,
                &cols[c].high,
            );
            fft::fft2(&mut spec, h, w, true);
            next.push(Signal2D {
                height: h,
                width: w,
                data: spec,
                declared_real: false,
            });
        }
        states = next;
    }

    // level 1
    let mut spec = vec![Complex64::default(); h0 * w0];
    match first_level {
        None => {
            let rows = [
                tree_axis_filters(&syms_row, h0, true, 0)?,
                tree_axis_filters(&syms_row, h0, true, 1)?,
            ];
            let cols = [
                tree_axis_filters(&syms_col, w0, true, 0)?,
                tree_axis_filters(&syms_col, w0, true, 1)?,
            ];
            let mut quads: HashMap<BandType, [Signal2D; 4]> = HashMap::new();
            for btype in BandType::ALL {
                let z: Vec<&Signal2D> = COMBOS
                    .iter()
                    .map(|combo| {
                        coeffs
                            .band(1, &DtBandId::Oriented { btype, combo: *combo })
                            .map(|b| &b.data)
                            .ok_or_else(|| Error::shape("missing oriented subband"))
                    })
                    .collect::<Result<_>>()?;
                quads.insert(btype, unpair_quadruple([z[0], z[1], z[2], z[3]])?);
            }
            for ti in 0..4 {
                let (r, c) = (ti / 2, ti % 2);
                synth_channel(&mut spec, h0, w0, &states[ti], &rows[r].low, &cols[c].low);
                synth_channel(
                    &mut spec,
                    h0,
                    w0,
                    &quads[&BandType::LowHigh][ti],
                    &rows[r].low,
                    &cols[c].high,
                );
                synth_channel(
                    &mut spec,
                    h0,
                    w0,
                    &quads[&BandType::HighLow][ti],
                    &rows[r].high,
                    &cols[c].low,
                );
                synth_channel(
                    &mut spec,
                    h0,
                    w0,
                    &quads[&BandType::HighHigh][ti],
                    &rows[r].high,
                    &cols[c].high,
                );
            }
        }
        Some(bank) => {
            let mut row_syms: HashMap<(String, bool), Vec<Complex64>> = HashMap::new();
            let mut col_syms: HashMap<(String, bool), Vec<Complex64>> = HashMap::new();
            for (map, len) in [(&mut row_syms, h0), (&mut col_syms, w0)] {
                let a = resample_symbol(bank.a().samples(), len)?;
                map.insert(("a".to_string(), true), shifted_symbol(&a));
                map.insert(("a".to_string(), false), a);
                for b in &bank.highpass {
                    let s = resample_symbol(b.samples(), len)?;
                    map.insert((b.label.clone(), true), shifted_symbol(&s));
                    map.insert((b.label.clone(), false), s);
                }
            }
            for band in &coeffs.levels[0].bands {
                if let DtBandId::FirstLevelCtf {
                    row,
                    row_shift,
                    col,
                    col_shift,
                } = &band.id
                {
                    let r = &row_syms[&(row.clone(), *row_shift)];
                    let c = &col_syms[&(col.clone(), *col_shift)];
                    synth_channel(&mut spec, h0, w0, &band.data, r, c);
                } else {
                    return Err(Error::shape("hybrid level 1 expects CTF subbands"));
                }
            }
            for (ti, state) in states.iter().enumerate() {
                let (r, c) = (ti / 2, ti % 2);
                let rs = &row_syms[&("a".to_string(), r == 1)];
                let cs = &col_syms[&("a".to_string(), c == 1)];
                synth_channel(&mut spec, h0, w0, state, rs, cs);
            }
        }
    }
    fft::fft2(&mut spec, h0, w0, true);
    let out: Vec<Complex64> = spec.iter().map(|c| c * 0.5).collect();
    Ok(Signal2D {
        height: h0,
        width: w0,
        data: out,
        declared_real: false,
    })
}

/// Multilevel symbols of the dual-tree filters at level `j` on an `len` grid.
///
/// With `first_low = Some(a)` the level-one low-pass of both trees is `a`
/// and `a(.-1)` (the hybrid cascade); otherwise `a0` and `a0(.-1)`.
pub struct DtMultilevel {
    pub a1j: Vec<Complex64>,
    pub a2j: Vec<Complex64>,
    pub apj: Vec<Complex64>,
    pub anj: Vec<Complex64>,
    pub bpj: Vec<Complex64>,
    pub bnj: Vec<Complex64>,
    pub b1j: Vec<Complex64>,
    pub b2j: Vec<Complex64>,
}

pub fn dtcwt_multilevel_filters(
    filters: &DtFilterSet,
    j: usize,
    len: usize,
    first_low: Option<&[Complex64]>,
) -> Result<DtMultilevel> {
    if j == 0 || !len.is_multiple_of(1usize << j) {
        return Err(Error::grid(format!("level {j} incompatible with grid {len}")));
    }
    let syms = filters.symbols(len)?;
    let first1: Vec<Complex64> = match first_low {
        Some(a) => a.to_vec(),
        None => syms.a0.clone(),
    };
    let first2 = shifted_symbol(&first1);
    let scale = 2f64.powf((j as f64 - 1.0) / 2.0);
    let chain = |first: &[Complex64], tree_low: &[Complex64], last: &[Complex64], last_level: usize| {
        let mut factors: Vec<(&[Complex64], u32)> = vec![(first, 0)];
        for t in 1..last_level {
            factors.push((tree_low, t as u32));
        }
        factors.push((last, last_level as u32));
        product_symbol(len, &factors, scale)
    };
    let (a1j, a2j, b1j, b2j);
    if j == 1 {
        a1j = product_symbol(len, &[(first1.as_slice(), 0)], 1.0);
        a2j = product_symbol(len, &[(first2.as_slice(), 0)], 1.0);
        let hb1 = match first_low {
            Some(_) => {
                return Err(Error::param(
                    "level-1 multilevel filters are the bank filters in hybrid mode",
                ))
            }
            None => syms.b0.clone(),
        };
        b1j = hb1.clone();
        b2j = shifted_symbol(&hb1);
    } else {
        a1j = chain(&first1, &syms.a1, &syms.a1, j - 1);
        a2j = chain(&first2, &syms.a2, &syms.a2, j - 1);
        b1j = chain(&first1, &syms.a1, &syms.b1, j - 1);
        b2j = chain(&first2, &syms.a2, &syms.b2, j - 1);
    }
    let mix = |x: &[Complex64], y: &[Complex64], sign: f64| -> Vec<Complex64> {
        x.iter()
            .zip(y)
            .map(|(a, b)| (a + Complex64::new(0.0, sign) * b) / SQRT_2)
            .collect()
    };
    Ok(DtMultilevel {
        apj: mix(&a1j, &a2j, 1.0),
        anj: mix(&a1j, &a2j, -1.0),
        bpj: mix(&b1j, &b2j, 1.0),
        bnj: mix(&b1j, &b2j, -1.0),
        a1j,
        a2j,
        b1j,
        b2j,
    })
}

/// Convenience: the effective level-`j` filter pair as `FreqFilter`s.
pub fn dt_multilevel_freqfilters(ml: &DtMultilevel) -> (FreqFilter, FreqFilter) {
    let ap = FreqFilter::new("apj", crate::filters::FilterRole::Lowpass, ml.apj.clone())
        .expect("valid grid");
    let bp = FreqFilter::new("bpj", crate::filters::FilterRole::Highpass, ml.bpj.clone())
        .expect("valid grid");
    (ap, bp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{build_ctf, CtfParams};
    use crate::denoise::standard_normals;
    use crate::filters::xi_centered;

    fn rand_image(h: usize, w: usize, seed: u64) -> Signal2D {
        Signal2D::from_real(h, w, &standard_normals(seed, h * w))
    }

    fn rel_err(a: &Signal2D, b: &Signal2D) -> f64 {
        let num: f64 = a
            .data
            .iter()
            .zip(&b.data)
            .map(|(x, y)| (x - y).norm_sqr())
            .sum();
        (num / a.norm_sqr()).sqrt()
    }

    #[test]
    fn pair_complex_is_unitary_and_invertible() {
        let x = rand_image(8, 8, 1);
        let y = rand_image(8, 8, 2);
        let (p, n) = pair_complex(&x, &y).unwrap();
        let e = p.norm_sqr() + n.norm_sqr();
        assert!((e - x.norm_sqr() - y.norm_sqr()).abs() < 1e-12 * e);
        let (x2, y2) = unpair_complex(&p, &n).unwrap();
        assert!(rel_err(&x, &x2) < 1e-12 && rel_err(&y, &y2) < 1e-12);
        let zero = Signal2D::zeros(8, 8);
        let (p0, n0) = pair_complex(&x, &zero).unwrap();
        for i in 0..64 {
            assert!((p0.data[i] - x.data[i] / SQRT_2).norm() < 1e-12);
            assert!((n0.data[i] - x.data[i] / SQRT_2).norm() < 1e-12);
        }
    }

    #[test]
    fn constant_image_silences_highpass() {
        let img = Signal2D::from_real(32, 32, &[7.5; 1024]);
        // the q-shift taps are printed to 8 decimals, so their high-pass
        // filters keep a ~1e-8 response at dc
        for (fs, tol) in [
            (DtFilterSet::kingsbury(), 1e-6),
            (DtFilterSet::meyer(0.6, 1).unwrap(), 1e-10),
        ] {
            let c = dtcwt_decompose(&img, &fs, 3, None).unwrap();
            for level in &c.levels {
                for band in &level.bands {
                    let peak = band.data.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
                    assert!(peak < tol, "peak {peak}");
                }
            }
        }
    }

    #[test]
    fn structure_counts() {
        let img = rand_image(64, 64, 3);
        let fs = DtFilterSet::kingsbury();
        let c = dtcwt_decompose(&img, &fs, 3, None).unwrap();
        assert_eq!(c.lowpass.len(), 4);
        for level in &c.levels {
            assert_eq!(level.bands.len(), 12);
        }
        let angles: Vec<i32> = c.levels[1]
            .bands
            .iter()
            .filter_map(|b| b.id.angle_deg())
            .collect();
        for a in [15, -15, 45, -45, 75, -75] {
            assert_eq!(angles.iter().filter(|&&x| x == a).count(), 2);
        }
    }

    #[test]
    fn perfect_reconstruction_and_energy() {
        let img = rand_image(64, 64, 7);
        for fs in [DtFilterSet::kingsbury(), DtFilterSet::meyer(189.0 / 256.0, 1).unwrap()] {
            let c = dtcwt_decompose(&img, &fs, 3, None).unwrap();
            let mut energy: f64 = c.lowpass.iter().map(|s| s.norm_sqr()).sum();
            for level in &c.levels {
                for band in &level.bands {
                    energy += band.data.norm_sqr();
                }
            }
            assert!(
                (energy - img.norm_sqr()).abs() < 1e-9 * img.norm_sqr(),
                "energy {energy} vs {}",
                img.norm_sqr()
            );
            let r = dtcwt_reconstruct(&c, &fs, None).unwrap();
            assert!(rel_err(&img, &r) < 1e-9);
        }
    }

    #[test]
    fn hybrid_round_trip() {
        let img = rand_image(64, 64, 9);
        let bank = build_ctf(&CtfParams::published(6).unwrap(), 64).unwrap();
        let fs = DtFilterSet::kingsbury();
        let c = dtcwt_decompose(&img, &fs, 3, Some(&bank)).unwrap();
        assert_eq!(c.first_level, FirstLevelKind::Tpctf { n: 6 });
        // (2 + 2*4)^2 - 4 channels at level 1
        assert_eq!(c.levels[0].bands.len(), 96);
        let mut energy: f64 = c.lowpass.iter().map(|s| s.norm_sqr()).sum();
        for level in &c.levels {
            for band in &level.bands {
                energy += band.data.norm_sqr();
            }
        }
        assert!((energy - img.norm_sqr()).abs() < 1e-9 * img.norm_sqr());
        let r = dtcwt_reconstruct(&c, &fs, Some(&bank)).unwrap();
        assert!(rel_err(&img, &r) < 1e-9);
    }

    #[test]
    fn real_input_conjugate_partners() {
        let img = rand_image(32, 32, 21);
        let fs = DtFilterSet::meyer(0.7, 2).unwrap();
        let c = dtcwt_decompose(&img, &fs, 2, None).unwrap();
        for level in &c.levels {
            for btype in BandType::ALL {
                let get = |combo| {
                    level
                        .bands
                        .iter()
                        .find(|b| b.id == DtBandId::Oriented { btype, combo })
                        .unwrap()
                };
                for (x, y) in [
                    (get(PairCombo::Pp), get(PairCombo::Nn)),
                    (get(PairCombo::Pn), get(PairCombo::Np)),
                ] {
                    for (cx, cy) in x.data.data.iter().zip(&y.data.data) {
                        assert!((cx.conj() - cy).norm() < 1e-10);
                    }
                }
            }
        }
    }

    #[test]
    fn twobases_energy_identity() {
        // energy of the low-pass quadruple is preserved under pairing
        let img = rand_image(32, 32, 33);
        let fs = DtFilterSet::kingsbury();
        let c = dtcwt_decompose(&img, &fs, 2, None).unwrap();
        let (p1, n1) = pair_complex(&c.lowpass[0], &c.lowpass[3]).unwrap();
        let (p2, n2) = pair_complex(&c.lowpass[1], &c.lowpass[2]).unwrap();
        let paired = p1.norm_sqr() + n1.norm_sqr() + p2.norm_sqr() + n2.norm_sqr();
        let plain: f64 = c.lowpass.iter().map(|s| s.norm_sqr()).sum();
        assert!((paired - plain).abs() < 1e-10 * plain);
    }

    #[test]
    fn multilevel_level1_identities() {
        let fs = DtFilterSet::meyer(0.6, 1).unwrap();
        let n = 256;
        let ml = dtcwt_multilevel_filters(&fs, 1, n, None).unwrap();
        let syms = fs.symbols(n).unwrap();
        for k in 0..n {
            assert!((ml.a1j[k] - syms.a0[k]).norm() < 1e-12);
            let shift = Complex64::from_polar(1.0, -xi(k, n));
            assert!((ml.a2j[k] - syms.a0[k] * shift).norm() < 1e-12);
        }
        // |b1p^(xi)|^2 = (1 + sin xi) |a0^(xi + pi)|^2
        for k in 0..n {
            let lhs = ml.bpj[k].norm_sqr();
            let rhs = (1.0 + xi_centered(k, n).sin()) * syms.a0[(k + n / 2) % n].norm_sqr();
            assert!((lhs - rhs).abs() < 1e-10, "k={k}: {lhs} vs {rhs}");
        }
    }

    #[test]
    fn deep_level_positive_frequency_concentration() {
        // Meyer trees: b_j^p nearly vanishes on negative frequencies for j >= 2
        let fs = DtFilterSet::meyer(189.0 / 256.0, 1).unwrap();
        let n = 512;
        for j in [2usize, 3] {
            let ml = dtcwt_multilevel_filters(&fs, j, n, None).unwrap();
            let peak = ml.bpj.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let neg_peak = (0..n)
                .filter(|&k| xi_centered(k, n) < 0.0)
                .map(|k| ml.bpj[k].norm())
                .fold(0.0, f64::max);
            assert!(neg_peak / peak <= 0.05, "j={j}: {}", neg_peak / peak);
        }
    }
}
