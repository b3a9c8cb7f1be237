//! The multi-trial denoising experiment harness.

use crate::construction::{build_ctf, tensor_bank_2d, CtfParams, FilterBank1D, FilterBank2D};
use crate::denoise::noise::{add_gaussian_noise, NoiseModel};
use crate::denoise::shrink::{bivariate_shrink_dtcwt, bivariate_shrink_pyramid};
use crate::denoise::metrics::psnr;
use crate::dtcwt::{dtcwt_decompose, dtcwt_reconstruct, DtFilterSet};
use crate::error::{Error, Result};
use crate::imgio::{from_signal, to_signal, Image};
use crate::transform::{decompose_2d, reconstruct_2d};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

/// Which transform drives the pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Tpctf { n: u32 },
    DtcwtKingsbury,
    DtcwtMeyer,
    DtcwtHybrid { n: u32 },
}

impl TransformKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "tpctf3" => TransformKind::Tpctf { n: 3 },
            "tpctf4" => TransformKind::Tpctf { n: 4 },
            "tpctf6" => TransformKind::Tpctf { n: 6 },
            "dtcwt-kingsbury" => TransformKind::DtcwtKingsbury,
            "dtcwt-meyer" => TransformKind::DtcwtMeyer,
            "dtcwt-hybrid6" => TransformKind::DtcwtHybrid { n: 6 },
            other => {
                return Err(Error::param(format!(
                    "unknown transform {other}; expected tpctf3|tpctf4|tpctf6|dtcwt-kingsbury|dtcwt-meyer|dtcwt-hybrid6"
                )))
            }
        })
    }

    pub fn name(&self) -> String {
        match self {
            TransformKind::Tpctf { n } => format!("tpctf{n}"),
            TransformKind::DtcwtKingsbury => "dtcwt-kingsbury".to_string(),
            TransformKind::DtcwtMeyer => "dtcwt-meyer".to_string(),
            TransformKind::DtcwtHybrid { n } => format!("dtcwt-hybrid{n}"),
        }
    }
}

/// Shrinkage window used throughout the experiments.
pub const DEFAULT_WINDOW: usize = 7;
/// Frequency-based dual-tree window parameters used by the experiments.
pub const MEYER_EPS: f64 = 189.0 / 256.0;
pub const MEYER_M: u32 = 1;

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub image: PathBuf,
    pub transform: TransformKind,
    pub levels: Option<usize>,
    pub sigmas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub window: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub sigma_n: f64,
    pub psnr_mean: f64,
    pub psnr_per_trial: Vec<f64>,
    #[serde(skip)]
    pub runtime_sec: f64,
}

/// Default decomposition depth: 6 for 512-and-larger images, 5 below,
/// clamped to what the dimensions divide.
pub fn default_levels(height: usize, width: usize) -> usize {
    let want = if height.min(width) >= 512 { 6 } else { 5 };
    let max_div = (height | width).trailing_zeros() as usize;
    want.min(max_div.max(1))
}

enum Prepared {
    Pyramid(Box<FilterBank2D>),
    Dt {
        filters: DtFilterSet,
        first_level: Option<Box<FilterBank1D>>,
    },
}

fn prepare(kind: TransformKind, height: usize, width: usize) -> Result<Prepared> {
    let grid = height.max(width);
    if !grid.is_multiple_of(height.min(width)) {
        return Err(Error::grid(format!(
            "image {height}x{width} axes must divide a common grid"
        )));
    }
    Ok(match kind {
        TransformKind::Tpctf { n } => {
            let bank = build_ctf(&CtfParams::published(n)?, grid)?;
            Prepared::Pyramid(Box::new(tensor_bank_2d(&bank)?))
        }
        TransformKind::DtcwtKingsbury => Prepared::Dt {
            filters: DtFilterSet::kingsbury(),
            first_level: None,
        },
        TransformKind::DtcwtMeyer => Prepared::Dt {
            filters: DtFilterSet::meyer(MEYER_EPS, MEYER_M)?,
            first_level: None,
        },
        TransformKind::DtcwtHybrid { n } => Prepared::Dt {
            filters: DtFilterSet::kingsbury(),
            first_level: Some(Box::new(build_ctf(&CtfParams::published(n)?, grid)?)),
        },
    })
}

/// Denoise an observed image with known noise level: decompose, bivariate
/// shrink, reconstruct, clip to [0, 255].
pub fn denoise_image(
    noisy: &Image,
    kind: TransformKind,
    levels: usize,
    sigma: f64,
    window: usize,
) -> Result<Image> {
    let prepared = prepare(kind, noisy.height, noisy.width)?;
    denoise_prepared(noisy, &prepared, levels, sigma, window)
}

fn denoise_prepared(
    noisy: &Image,
    prepared: &Prepared,
    levels: usize,
    sigma: f64,
    window: usize,
) -> Result<Image> {
    let signal = to_signal(noisy);
    let rec = match prepared {
        Prepared::Pyramid(bank2) => {
            let p = decompose_2d(&signal, bank2, levels)?;
            let q = bivariate_shrink_pyramid(&p, bank2, sigma, window)?;
            reconstruct_2d(&q, bank2)?
        }
        Prepared::Dt {
            filters,
            first_level,
        } => {
            let fl = first_level.as_deref();
            let c = dtcwt_decompose(&signal, filters, levels, fl)?;
            let q = bivariate_shrink_dtcwt(&c, filters, fl, sigma, window)?;
            dtcwt_reconstruct(&q, filters, fl)?
        }
    };
    let (mut denoised, _flagged) = from_signal(&rec);
    for p in denoised.pixels.iter_mut() {
        *p = p.clamp(0.0, 255.0);
    }
    Ok(denoised)
}

/// One full pipeline pass: add noise, denoise, score against the clean image.
pub fn denoise_trial(
    clean: &Image,
    kind: TransformKind,
    levels: usize,
    sigma: f64,
    seed: u64,
    window: usize,
) -> Result<(Image, f64)> {
    let prepared = prepare(kind, clean.height, clean.width)?;
    denoise_trial_prepared(clean, &prepared, levels, sigma, seed, window)
}

fn denoise_trial_prepared(
    clean: &Image,
    prepared: &Prepared,
    levels: usize,
    sigma: f64,
    seed: u64,
    window: usize,
) -> Result<(Image, f64)> {
    let noisy = add_gaussian_noise(
        clean,
        &NoiseModel {
            sigma_n: sigma,
            seed,
        },
    );
    let denoised = denoise_prepared(&noisy, prepared, levels, sigma, window)?;
    let value = psnr(clean, &denoised)?;
    Ok((denoised, value))
}

/// Run the experiment grid; trials within a row run in parallel and are
/// collected in seed order, so the result is independent of scheduling.
pub fn run_experiment_on(cfg: &ExperimentConfig, clean: &Image) -> Result<Vec<ResultRow>> {
    if cfg.seeds.is_empty() {
        return Err(Error::param("at least one seed required"));
    }
    let levels = cfg
        .levels
        .unwrap_or_else(|| default_levels(clean.height, clean.width));
    let prepared = prepare(cfg.transform, clean.height, clean.width)?;
    let mut rows = Vec::with_capacity(cfg.sigmas.len());
    for &sigma in &cfg.sigmas {
        let start = Instant::now();
        let per_trial: Vec<f64> = cfg
            .seeds
            .par_iter()
            .map(|&seed| {
                denoise_trial_prepared(clean, &prepared, levels, sigma, seed, cfg.window)
                    .map(|(_, v)| v)
            })
            .collect::<Result<_>>()?;
        let mean = per_trial.iter().sum::<f64>() / per_trial.len() as f64;
        rows.push(ResultRow {
            sigma_n: sigma,
            psnr_mean: mean,
            psnr_per_trial: per_trial,
            runtime_sec: start.elapsed().as_secs_f64(),
        });
    }
    Ok(rows)
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let clean = crate::imgio::read_pgm(&cfg.image)?;
    run_experiment_on(cfg, &clean)
}

fn fmt_db(v: f64) -> String {
    if v.is_infinite() {
        "inf".to_string()
    } else {
        format!("{v:.2}")
    }
}

/// Plain-text table in the style of the published experiment tables.
/// Runtime is intentionally excluded so that identical runs are
/// byte-identical.
pub fn format_table_text(name: &str, transform: &str, rows: &[ResultRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "image: {name}   transform: {transform}");
    let _ = writeln!(s, "{:>8}  {:>10}  trials", "sigma_n", "PSNR");
    for r in rows {
        let trials: Vec<String> = r.psnr_per_trial.iter().map(|&v| fmt_db(v)).collect();
        let _ = writeln!(
            s,
            "{:>8}  {:>10}  [{}]",
            r.sigma_n,
            fmt_db(r.psnr_mean),
            trials.join(", ")
        );
    }
    s
}

pub fn format_table_csv(rows: &[ResultRow]) -> String {
    let mut s = String::from("sigma_n,psnr_mean,psnr_per_trial\n");
    for r in rows {
        let trials: Vec<String> = r.psnr_per_trial.iter().map(|v| format!("{v:.6}")).collect();
        let _ = writeln!(s, "{},{:.6},{}", r.sigma_n, r.psnr_mean, trials.join(";"));
    }
    s
}

pub fn format_table_json(rows: &[ResultRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)?)
}
