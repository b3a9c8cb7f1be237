//! Command-line surface.

use crate::analysis::{
    check_tight_frame_1d, check_tight_frame_2d, factor_curves, FrameReport,
};
use crate::construction::{
    build_ctf, read_bank, tensor_bank_2d, write_bank, CtfParams,
};
use crate::denoise::{
    add_gaussian_noise, denoise_trial, format_table_csv, format_table_json, format_table_text,
    psnr, run_experiment_on, ExperimentConfig, NoiseModel, TransformKind, DEFAULT_WINDOW,
};
use crate::error::{Error, Result};
use crate::imgio::{read_pgm, write_pgm, Image};
use crate::transform::{
    das_generators_2d, decompose_2d, read_pyramid, reconstruct_2d, write_pyramid,
};
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "tpctf",
    about = "Directional complex tight framelet and dual-tree wavelet transforms",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Cap worker threads for parallel sections.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Subcommand)]
pub enum Command {
    /// Build a CTF_n filter bank and write it as JSON.
    Build(BuildArgs),
    /// Verify the tight-frame conditions of a bank file.
    Analyze(AnalyzeArgs),
    /// Forward or inverse multilevel transform of a PGM image.
    Transform(TransformArgs),
    /// Export discrete affine system generators as PGM images.
    Generators(GeneratorsArgs),
    /// Run denoising experiments and print a PSNR table.
    Denoise(DenoiseArgs),
    /// PSNR between two images.
    Psnr(PsnrArgs),
    /// Write the four frequency-separation factor curves as CSV.
    Factors(FactorsArgs),
}

/// Accepts plain decimals or exact rationals like "33/32".
fn parse_ratio(s: &str) -> std::result::Result<f64, String> {
    if let Some((num, den)) = s.split_once('/') {
        let n: f64 = num.trim().parse().map_err(|_| format!("bad rational {s}"))?;
        let d: f64 = den.trim().parse().map_err(|_| format!("bad rational {s}"))?;
        if d == 0.0 {
            return Err("zero denominator".to_string());
        }
        Ok(n / d)
    } else {
        s.trim().parse().map_err(|_| format!("bad number {s}"))
    }
}

#[derive(Args)]
pub struct BuildArgs {
    /// Number of filters in the one-dimensional bank.
    #[arg(long)]
    pub n: u32,
    /// First breakpoint (defaults to the published value for n = 3, 4, 6).
    #[arg(long, value_parser = parse_ratio)]
    pub c1: Option<f64>,
    /// Low-pass split transition width (even n).
    #[arg(long, value_parser = parse_ratio)]
    pub eps0: Option<f64>,
    /// Transition width at the breakpoints.
    #[arg(long, value_parser = parse_ratio)]
    pub eps1: Option<f64>,
    /// Smoothness order of the blend polynomial.
    #[arg(long, default_value_t = 2)]
    pub m: u32,
    /// Frequency grid size.
    #[arg(long, default_value_t = 1024)]
    pub grid: usize,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    pub bank: PathBuf,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Also write the separation-factor curves as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct TransformArgs {
    #[arg(long)]
    pub bank: PathBuf,
    #[arg(long)]
    pub levels: usize,
    /// Input: a PGM image (forward) or a pyramid directory (--inverse).
    #[arg(long, value_name = "PATH")]
    pub r#in: PathBuf,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub inverse: bool,
}

#[derive(Args)]
pub struct GeneratorsArgs {
    #[arg(long)]
    pub bank: PathBuf,
    /// Total decomposition depth J.
    #[arg(long)]
    pub levels: usize,
    /// Which level's generators to export.
    #[arg(long)]
    pub level: usize,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Grid size of the exported generator images.
    #[arg(long, default_value_t = 256)]
    pub size: usize,
}

#[derive(Args)]
pub struct DenoiseArgs {
    #[arg(long)]
    pub image: PathBuf,
    #[arg(long)]
    pub transform: String,
    /// Noise standard deviation; repeatable.
    #[arg(long = "sigma", required = true)]
    pub sigmas: Vec<f64>,
    #[arg(long)]
    pub levels: Option<usize>,
    /// Number of trials (seeds 1..=trials unless --seeds is given).
    #[arg(long, default_value_t = 5)]
    pub trials: usize,
    /// Comma-separated trial seeds.
    #[arg(long, value_delimiter = ',')]
    pub seeds: Option<Vec<u64>>,
    #[arg(long, default_value = "text")]
    pub out_table: String,
    /// Save noisy/denoised images of the first trial per sigma.
    #[arg(long)]
    pub save_images: Option<PathBuf>,
}

#[derive(Args)]
pub struct PsnrArgs {
    pub a: PathBuf,
    pub b: PathBuf,
}

#[derive(Args)]
pub struct FactorsArgs {
    /// Output CSV path.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 4096)]
    pub samples: usize,
}

/// Exit status of a successful parse that failed validation.
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub fn run(cli: Cli) -> Result<i32> {
    if let Some(t) = cli.threads {
        // ignore failure when a global pool already exists (tests)
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    match cli.command {
        Command::Build(a) => build_cmd(a),
        Command::Analyze(a) => analyze_cmd(a),
        Command::Transform(a) => transform_cmd(a),
        Command::Generators(a) => generators_cmd(a),
        Command::Denoise(a) => denoise_cmd(a),
        Command::Psnr(a) => psnr_cmd(a),
        Command::Factors(a) => factors_cmd(a),
    }
}

fn build_cmd(a: BuildArgs) -> Result<i32> {
    let params = match (a.c1, a.eps1) {
        (None, None) => {
            let mut p = CtfParams::published(a.n)?;
            p.m = a.m;
            p
        }
        (Some(c1), Some(eps1)) => CtfParams::special(a.n, c1, eps1, a.eps0, a.m)?,
        _ => {
            return Err(Error::param(
                "--c1 and --eps1 must be given together (or both omitted for published values)",
            ))
        }
    };
    let bank = build_ctf(&params, a.grid)?;
    for w in &bank.warnings {
        eprintln!("warning: {w}");
    }
    write_bank(&bank, &a.out)?;
    println!(
        "wrote {} ({} low-pass, {} high-pass, grid {})",
        a.out.display(),
        bank.lowpass.len(),
        bank.highpass.len(),
        bank.grid_size
    );
    Ok(0)
}

fn analyze_cmd(a: AnalyzeArgs) -> Result<i32> {
    let bank = read_bank(&a.bank)?;
    let rep1 = check_tight_frame_1d(&bank, a.tol)?;
    let bank2 = tensor_bank_2d(&bank)?;
    let rep2 = check_tight_frame_2d(&bank2, a.tol)?;
    #[derive(serde::Serialize)]
    struct Out<'a> {
        bank: &'a str,
        n: u32,
        grid_size: usize,
        warnings: &'a [String],
        tol: f64,
        frame_1d: &'a FrameReport,
        frame_2d: &'a FrameReport,
        highpass_2d: usize,
        pass: bool,
    }
    let pass = rep1.pass && rep2.pass;
    let out = Out {
        bank: &bank.name,
        n: bank.n,
        grid_size: bank.grid_size,
        warnings: &bank.warnings,
        tol: a.tol,
        frame_1d: &rep1,
        frame_2d: &rep2,
        highpass_2d: bank2.highpass.len(),
        pass,
    };
    println!("{}", serde_json::to_string_pretty(&out)?);
    if let Some(csv) = a.csv {
        write_factor_csv(&csv, 4096)?;
    }
    Ok(if pass { 0 } else { EXIT_VALIDATION })
}

fn transform_cmd(a: TransformArgs) -> Result<i32> {
    let bank = read_bank(&a.bank)?;
    let bank2 = tensor_bank_2d(&bank)?;
    if a.inverse {
        let p = read_pyramid(&a.r#in)?;
        let rec = reconstruct_2d(&p, &bank2)?;
        let (img, flagged) = crate::imgio::from_signal(&rec);
        if flagged {
            eprintln!("warning: imaginary residue above 1e-6 dropped");
        }
        std::fs::create_dir_all(&a.out_dir)?;
        let out = a.out_dir.join("reconstructed.pgm");
        write_pgm(&img, &out)?;
        println!("wrote {}", out.display());
    } else {
        let img = read_pgm(&a.r#in)?;
        let p = decompose_2d(&crate::imgio::to_signal(&img), &bank2, a.levels)?;
        write_pyramid(&p, &a.out_dir)?;
        println!(
            "wrote {} ({} levels, {} subbands per level)",
            a.out_dir.display(),
            a.levels,
            bank2.highpass.len()
        );
    }
    Ok(0)
}

fn export_generator(dir: &Path, label: &str, part: &str, data: Vec<f64>, n: usize) -> Result<()> {
    // center the generator for viewing and rescale affinely to [0, 255]
    let (lo, hi) = data
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut px = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            let (si, sj) = ((i + n / 2) % n, (j + n / 2) % n);
            px[i * n + j] = (data[si * n + sj] - lo) / span * 255.0;
        }
    }
    let img = Image {
        width: n,
        height: n,
        pixels: px,
    };
    let safe: String = label
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    write_pgm(&img, &dir.join(format!("{safe}_{part}.pgm")))
}

fn generators_cmd(a: GeneratorsArgs) -> Result<i32> {
    if a.level == 0 || a.level > a.levels {
        return Err(Error::param("--level must lie in 1..=levels"));
    }
    let bank = read_bank(&a.bank)?;
    let bank2 = tensor_bank_2d(&bank)?;
    let gens = das_generators_2d(&bank2, a.levels, a.size)?;
    std::fs::create_dir_all(&a.out_dir)?;
    let mut count = 0;
    for g in gens {
        let keep = g.level == a.level || (g.label == bank2.lowpass.label && a.level == a.levels);
        if !keep {
            continue;
        }
        let re: Vec<f64> = g.time.data.iter().map(|c| c.re).collect();
        let im: Vec<f64> = g.time.data.iter().map(|c| c.im).collect();
        export_generator(&a.out_dir, &format!("L{}_{}", g.level, g.label), "re", re, a.size)?;
        export_generator(&a.out_dir, &format!("L{}_{}", g.level, g.label), "im", im, a.size)?;
        count += 1;
    }
    println!("wrote {count} generators to {}", a.out_dir.display());
    Ok(0)
}

fn denoise_cmd(a: DenoiseArgs) -> Result<i32> {
    let transform = TransformKind::parse(&a.transform)?;
    let seeds = match a.seeds {
        Some(s) => {
            if s.len() != a.trials && a.trials != 5 {
                return Err(Error::param("--trials must equal the number of --seeds"));
            }
            s
        }
        None => (1..=a.trials as u64).collect(),
    };
    let clean = read_pgm(&a.image)?;
    let cfg = ExperimentConfig {
        image: a.image.clone(),
        transform,
        levels: a.levels,
        sigmas: a.sigmas.clone(),
        seeds: seeds.clone(),
        window: DEFAULT_WINDOW,
    };
    let rows = run_experiment_on(&cfg, &clean)?;
    for r in &rows {
        eprintln!("sigma {}: {:.2}s", r.sigma_n, r.runtime_sec);
    }
    let name = a
        .image
        .file_name()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_default();
    match a.out_table.as_str() {
        "text" => print!("{}", format_table_text(&name, &transform.name(), &rows)),
        "csv" => print!("{}", format_table_csv(&rows)),
        "json" => println!("{}", format_table_json(&rows)?),
        other => return Err(Error::param(format!("unknown table format {other}"))),
    }
    if let Some(dir) = a.save_images {
        std::fs::create_dir_all(&dir)?;
        let levels = cfg
            .levels
            .unwrap_or_else(|| crate::denoise::default_levels(clean.height, clean.width));
        for &sigma in &a.sigmas {
            let noisy = add_gaussian_noise(
                &clean,
                &NoiseModel {
                    sigma_n: sigma,
                    seed: seeds[0],
                },
            );
            write_pgm(&noisy, &dir.join(format!("noisy_sigma{sigma}.pgm")))?;
            let (den, _) = denoise_trial(&clean, transform, levels, sigma, seeds[0], cfg.window)?;
            write_pgm(&den, &dir.join(format!("denoised_sigma{sigma}.pgm")))?;
        }
    }
    Ok(0)
}

fn psnr_cmd(a: PsnrArgs) -> Result<i32> {
    let x = read_pgm(&a.a)?;
    let y = read_pgm(&a.b)?;
    let v = psnr(&x, &y)?;
    if v.is_infinite() {
        println!("inf");
    } else {
        println!("{v:.4}");
    }
    Ok(0)
}

fn write_factor_csv(path: &PathBuf, samples: usize) -> Result<()> {
    let mut s = String::from("xi,sin,ideal,half_sin,half_cos_sgn\n");
    for (x, vals) in factor_curves(samples) {
        use std::fmt::Write as _;
        let _ = writeln!(
            s,
            "{x:.8},{:.12},{:.12},{:.12},{:.12}",
            vals[0], vals[1], vals[2], vals[3]
        );
    }
    std::fs::write(path, s)?;
    Ok(())
}

fn factors_cmd(a: FactorsArgs) -> Result<i32> {
    write_factor_csv(&a.out, a.samples)?;
    println!("wrote {}", a.out.display());
    Ok(0)
}
