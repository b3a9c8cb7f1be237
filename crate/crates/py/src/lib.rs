//! Python bindings: bank construction, frame checks, transforms, denoising
//! and metrics.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use std::path::Path;
use tpctf::analysis::{check_tight_frame_1d, check_tight_frame_2d, direction_count};
use tpctf::construction::{bank_to_json, build_ctf, tensor_bank_2d, CtfParams};
use tpctf::denoise::{
    add_gaussian_noise, psnr as psnr_images, standard_normals, NoiseModel, TransformKind,
};
use tpctf::imgio::{read_pgm, to_signal, write_pgm};
use tpctf::transform::{decompose_2d, energy_2d, reconstruct_2d};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn make_params(n: u32) -> PyResult<CtfParams> {
    CtfParams::published(n).map_err(err)
}

/// A CTF_n filter bank on a frequency grid.
#[pyclass]
struct Bank {
    inner: tpctf::construction::FilterBank1D,
}

#[pymethods]
impl Bank {
    #[new]
    fn new(n: u32, grid: usize) -> PyResult<Self> {
        let bank = build_ctf(&make_params(n)?, grid).map_err(err)?;
        Ok(Bank { inner: bank })
    }

    fn labels(&self) -> Vec<String> {
        self.inner
            .lowpass
            .iter()
            .chain(self.inner.highpass.iter())
            .map(|f| f.label.clone())
            .collect()
    }

    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    /// (partition-of-unity residual, shift-orthogonality residual) in 1-D.
    fn tight_frame_residuals(&self) -> PyResult<(f64, f64)> {
        let rep = check_tight_frame_1d(&self.inner, 1e-8).map_err(err)?;
        Ok((rep.max_residual_pr1, rep.max_residual_pr0))
    }

    /// Residuals of the assembled 2-D bank.
    fn tight_frame_residuals_2d(&self) -> PyResult<(f64, f64)> {
        let bank2 = tensor_bank_2d(&self.inner).map_err(err)?;
        let rep = check_tight_frame_2d(&bank2, 1e-7).map_err(err)?;
        Ok((rep.max_residual_pr1, rep.max_residual_pr0))
    }

    fn highpass_count_2d(&self) -> PyResult<usize> {
        Ok(tensor_bank_2d(&self.inner).map_err(err)?.highpass.len())
    }

    fn to_json(&self) -> PyResult<String> {
        bank_to_json(&self.inner).map_err(err)
    }
}

/// Round-trip relative l2 error of decompose/reconstruct on a PGM image.
#[pyfunction]
fn roundtrip_error(image: &str, n: u32, levels: usize) -> PyResult<f64> {
    let img = read_pgm(Path::new(image)).map_err(err)?;
    let bank = build_ctf(&make_params(n)?, img.height.max(img.width)).map_err(err)?;
    let bank2 = tensor_bank_2d(&bank).map_err(err)?;
    let sig = to_signal(&img);
    let p = decompose_2d(&sig, &bank2, levels).map_err(err)?;
    let rec = reconstruct_2d(&p, &bank2).map_err(err)?;
    let num: f64 = sig
        .data
        .iter()
        .zip(&rec.data)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum();
    Ok((num / sig.norm_sqr()).sqrt())
}

/// Relative energy defect of the coefficient pyramid.
#[pyfunction]
fn energy_defect(image: &str, n: u32, levels: usize) -> PyResult<f64> {
    let img = read_pgm(Path::new(image)).map_err(err)?;
    let bank = build_ctf(&make_params(n)?, img.height.max(img.width)).map_err(err)?;
    let bank2 = tensor_bank_2d(&bank).map_err(err)?;
    let sig = to_signal(&img);
    let p = decompose_2d(&sig, &bank2, levels).map_err(err)?;
    Ok(((energy_2d(&p) - sig.norm_sqr()) / sig.norm_sqr()).abs())
}

#[pyfunction]
fn direction_count_py(n: u32) -> PyResult<u64> {
    direction_count(n).map_err(err)
}

/// Add seeded Gaussian noise to a PGM and write the result.
#[pyfunction]
fn add_noise(input: &str, output: &str, sigma: f64, seed: u64) -> PyResult<()> {
    let img = read_pgm(Path::new(input)).map_err(err)?;
    let noisy = add_gaussian_noise(
        &img,
        &NoiseModel {
            sigma_n: sigma,
            seed,
        },
    );
    write_pgm(&noisy, Path::new(output)).map_err(err)
}

/// Denoise an observed noisy image with known noise level; writes the
/// denoised PGM.
#[pyfunction]
#[pyo3(signature = (input, output, transform, sigma, levels=None))]
fn denoise_image(
    input: &str,
    output: &str,
    transform: &str,
    sigma: f64,
    levels: Option<usize>,
) -> PyResult<()> {
    let kind = TransformKind::parse(transform).map_err(err)?;
    let img = read_pgm(Path::new(input)).map_err(err)?;
    let levels =
        levels.unwrap_or_else(|| tpctf::denoise::default_levels(img.height, img.width));
    let den = tpctf::denoise::denoise_image(&img, kind, levels, sigma, tpctf::denoise::DEFAULT_WINDOW)
        .map_err(err)?;
    write_pgm(&den, Path::new(output)).map_err(err)
}

#[pyfunction]
fn psnr(a: &str, b: &str) -> PyResult<f64> {
    let x = read_pgm(Path::new(a)).map_err(err)?;
    let y = read_pgm(Path::new(b)).map_err(err)?;
    psnr_images(&x, &y).map_err(err)
}

/// The deterministic normal stream backing the noise model.
#[pyfunction]
fn normals(seed: u64, count: usize) -> Vec<f64> {
    standard_normals(seed, count)
}

#[pymodule]
fn tpctf_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Bank>()?;
    m.add_function(wrap_pyfunction!(roundtrip_error, m)?)?;
    m.add_function(wrap_pyfunction!(energy_defect, m)?)?;
    m.add_function(wrap_pyfunction!(direction_count_py, m)?)?;
    m.add_function(wrap_pyfunction!(add_noise, m)?)?;
    m.add_function(wrap_pyfunction!(denoise_image, m)?)?;
    m.add_function(wrap_pyfunction!(psnr, m)?)?;
    m.add_function(wrap_pyfunction!(normals, m)?)?;
    Ok(())
}
