//! Shared helpers for the integration suites.
#![allow(dead_code)] // each suite uses its own subset

use num_complex::Complex64;
use std::path::PathBuf;
use tpctf::denoise::standard_normals;
use tpctf::imgio::Image;
use tpctf::transform::Signal2D;

pub fn assets_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../assets/images")
        .canonicalize()
        .unwrap_or_else(|_| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../assets/images"))
}

pub fn rand_image(h: usize, w: usize, seed: u64) -> Signal2D {
    Signal2D::from_real(h, w, &standard_normals(seed, h * w))
}

pub fn rel_err(a: &Signal2D, b: &Signal2D) -> f64 {
    let num: f64 = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum();
    (num / a.norm_sqr()).sqrt()
}

pub fn as_complex(v: &[f64]) -> Vec<Complex64> {
    v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
}

/// A 512x512 synthetic image with strong oblique texture in distinct regions,
/// standing in for detail-rich photographic content.
pub fn striped_texture(n: usize) -> Image {
    let mut px = vec![0.0f64; n * n];
    let (c1, s1) = ((std::f64::consts::PI / 6.0).cos(), (std::f64::consts::PI / 6.0).sin());
    let (c2, s2) = ((std::f64::consts::PI / 2.5).cos(), (std::f64::consts::PI / 2.5).sin());
    let (c3, s3) = ((-std::f64::consts::PI / 3.0).cos(), (-std::f64::consts::PI / 3.0).sin());
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (j as f64, i as f64);
            let mut v = 128.0 + 40.0 * (0.8 * (x * c1 + y * s1)).sin();
            if x > n as f64 / 2.0 {
                v += 30.0 * (1.1 * (x * c2 + y * s2)).sin();
            }
            if y > n as f64 / 2.0 {
                v += 25.0 * (0.9 * (x * c3 + y * s3)).sin();
            }
            px[i * n + j] = v.clamp(0.0, 255.0);
        }
    }
    Image {
        width: n,
        height: n,
        pixels: px,
    }
}
