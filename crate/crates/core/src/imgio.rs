//! Grayscale image I/O: PGM (P5/P2, maxval 255) and raw float dumps.

use crate::error::{Error, Result};
use crate::transform::Signal2D;
use serde::{Deserialize, Serialize};
use std::io::Write;
use std::path::Path;

/// A grayscale image with float64 pixels, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<f64>,
}

struct HeaderScanner<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> HeaderScanner<'a> {
    fn skip_ws_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Result<&'a [u8]> {
        self.skip_ws_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::image("unexpected end of header"));
        }
        Ok(&self.bytes[start..self.pos])
    }

    fn number(&mut self) -> Result<usize> {
        let t = self.token()?;
        std::str::from_utf8(t)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::image("invalid number in header"))
    }
}

/// Read a P5 (binary) or P2 (ASCII) PGM with maxval 255.
pub fn read_pgm(path: &Path) -> Result<Image> {
    let bytes = std::fs::read(path)?;
    let mut sc = HeaderScanner {
        bytes: &bytes,
        pos: 0,
    };
    let magic = sc.token()?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        _ => return Err(Error::image("not a P5/P2 PGM file")),
    };
    let width = sc.number()?;
    let height = sc.number()?;
    let maxval = sc.number()?;
    if maxval != 255 {
        return Err(Error::image(format!("maxval {maxval} unsupported (need 255)")));
    }
    if width == 0 || height == 0 {
        return Err(Error::image("empty image"));
    }
    let count = width * height;
    let pixels = if binary {
        // exactly one whitespace byte after maxval
        let start = sc.pos + 1;
        if bytes.len() < start + count {
            return Err(Error::image("truncated pixel data"));
        }
        bytes[start..start + count].iter().map(|&b| b as f64).collect()
    } else {
        let mut px = Vec::with_capacity(count);
        for _ in 0..count {
            let v = sc.number()?;
            if v > 255 {
                return Err(Error::image("sample exceeds maxval"));
            }
            px.push(v as f64);
        }
        px
    };
    Ok(Image {
        width,
        height,
        pixels,
    })
}

/// Write a P5 PGM; values are clipped to [0, 255] and rounded half away from
/// zero.
pub fn write_pgm(img: &Image, path: &Path) -> Result<()> {
    if img.pixels.iter().any(|p| !p.is_finite()) {
        return Err(Error::image("pixels must be finite"));
    }
    let mut out = Vec::with_capacity(img.pixels.len() + 32);
    write!(out, "P5\n{} {}\n255\n", img.width, img.height)?;
    out.extend(img.pixels.iter().map(|&p| p.clamp(0.0, 255.0).round() as u8));
    std::fs::write(path, out)?;
    Ok(())
}

/// Lossless copy into a complex signal.
pub fn to_signal(img: &Image) -> Signal2D {
    Signal2D::from_real(img.height, img.width, &img.pixels)
}

/// Real part back into an image; the flag reports whether any imaginary
/// magnitude exceeded 1e-6.
pub fn from_signal(s: &Signal2D) -> (Image, bool) {
    let flagged = s.max_imag() > 1e-6;
    (
        Image {
            width: s.width,
            height: s.height,
            pixels: s.data.iter().map(|c| c.re).collect(),
        },
        flagged,
    )
}

#[derive(Serialize, Deserialize)]
pub struct RawSidecar {
    pub width: usize,
    pub height: usize,
}

/// Raw row-major little-endian f64 dump with a JSON sidecar.
pub fn write_raw_f64(img: &Image, path: &Path) -> Result<()> {
    let mut bytes = Vec::with_capacity(8 * img.pixels.len());
    for p in &img.pixels {
        bytes.extend_from_slice(&p.to_le_bytes());
    }
    std::fs::write(path, bytes)?;
    let sidecar = RawSidecar {
        width: img.width,
        height: img.height,
    };
    std::fs::write(
        path.with_extension("json"),
        serde_json::to_string(&sidecar)?,
    )?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(name: &str) -> std::path::PathBuf {
        std::env::temp_dir().join(format!("tpctf_{}_{name}", std::process::id()))
    }

    #[test]
    fn p5_round_trip_and_values() {
        let path = tmp("rt.pgm");
        std::fs::write(&path, b"P5\n2 2\n255\n\x00\xff\x80\x40").unwrap();
        let img = read_pgm(&path).unwrap();
        assert_eq!(img.pixels, vec![0.0, 255.0, 128.0, 64.0]);
        write_pgm(&img, &path).unwrap();
        let again = read_pgm(&path).unwrap();
        assert_eq!(img, again);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn p2_matches_p5() {
        let path = tmp("ascii.pgm");
        std::fs::write(&path, b"P2\n# comment\n2 2\n255\n0 255\n128 64\n").unwrap();
        let img = read_pgm(&path).unwrap();
        assert_eq!(img.pixels, vec![0.0, 255.0, 128.0, 64.0]);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn wrong_maxval_rejected() {
        let path = tmp("max.pgm");
        std::fs::write(&path, b"P5\n1 1\n65535\n\x00\x00").unwrap();
        assert!(read_pgm(&path).is_err());
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn truncated_rejected() {
        let path = tmp("trunc.pgm");
        std::fs::write(&path, b"P5\n4 4\n255\n\x00\x01").unwrap();
        assert!(read_pgm(&path).is_err());
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn write_clips_and_rounds() {
        let path = tmp("clip.pgm");
        let img = Image {
            width: 4,
            height: 1,
            pixels: vec![255.7, -3.0, 127.5, 10.4],
        };
        write_pgm(&img, &path).unwrap();
        let back = read_pgm(&path).unwrap();
        assert_eq!(back.pixels, vec![255.0, 0.0, 128.0, 10.0]);
        std::fs::remove_file(&path).ok();
    }

    #[test]
    fn signal_round_trip_flags_imaginary_residue() {
        let img = Image {
            width: 2,
            height: 1,
            pixels: vec![5.0, 7.0],
        };
        let mut s = to_signal(&img);
        let (back, flag) = from_signal(&s);
        assert_eq!(back, img);
        assert!(!flag);
        s.data[0].im = 1e-9;
        assert!(!from_signal(&s).1);
        s.data[0].im = 1e-3;
        assert!(from_signal(&s).1);
    }
}
