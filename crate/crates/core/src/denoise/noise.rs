//! Deterministic Gaussian noise: a counter-based SplitMix64 stream feeding
//! Box-Muller ("bmnoise-v1"). Generation is single pass in row-major order,
//! so a (seed, index) pair names each variate on every platform.

use crate::imgio::Image;

/// Additive white Gaussian noise model in 8-bit pixel units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub sigma_n: f64,
    pub seed: u64,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

fn splitmix(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GOLDEN));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform in (0, 1] from the top 53 bits.
fn unit(x: u64) -> f64 {
    ((x >> 11) + 1) as f64 * (1.0 / 9_007_199_254_740_992.0)
}

/// `count` standard normal variates for a seed.
pub fn standard_normals(seed: u64, count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count + 1);
    let pairs = count.div_ceil(2);
    for p in 0..pairs as u64 {
        let u1 = unit(splitmix(seed, 2 * p));
        let u2 = unit(splitmix(seed, 2 * p + 1));
        let r = (-2.0 * u1.ln()).sqrt();
        let t = 2.0 * std::f64::consts::PI * u2;
        out.push(r * t.cos());
        out.push(r * t.sin());
    }
    out.truncate(count);
    out
}

/// `img + sigma_n * g` pixel-wise, row-major, without clipping.
pub fn add_gaussian_noise(img: &Image, model: &NoiseModel) -> Image {
    if model.sigma_n == 0.0 {
        return img.clone();
    }
    let noise = standard_normals(model.seed, img.pixels.len());
    let pixels = img
        .pixels
        .iter()
        .zip(&noise)
        .map(|(&p, &g)| p + model.sigma_n * g)
        .collect();
    Image {
        width: img.width,
        height: img.height,
        pixels,
    }
}
