//! Image quality metrics.

use crate::error::{Error, Result};
use crate::imgio::Image;

/// Mean squared error after clipping `test` to [0, 255].
pub fn mse(clean: &Image, test: &Image) -> Result<f64> {
    if clean.width != test.width || clean.height != test.height {
        return Err(Error::shape(format!(
            "{}x{} vs {}x{}",
            clean.width, clean.height, test.width, test.height
        )));
    }
    let sum: f64 = clean
        .pixels
        .iter()
        .zip(&test.pixels)
        .map(|(&c, &t)| {
            let t = t.clamp(0.0, 255.0);
            (c - t) * (c - t)
        })
        .sum();
    Ok(sum / clean.pixels.len() as f64)
}

/// `10 log10(255^2 / MSE)` in dB; equal images give `f64::INFINITY`.
pub fn psnr(clean: &Image, test: &Image) -> Result<f64> {
    let m = mse(clean, test)?;
    if m == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0 * 255.0 / m).log10())
}
