//! Signal containers for the transform engine.

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct Signal1D {
    pub data: Vec<Complex64>,
    pub declared_real: bool,
}

impl Signal1D {
    pub fn from_real(data: &[f64]) -> Self {
        Signal1D {
            data: data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            declared_real: true,
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }
}

/// Row-major complex grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal2D {
    pub height: usize,
    pub width: usize,
    pub data: Vec<Complex64>,
    pub declared_real: bool,
}

impl Signal2D {
    pub fn zeros(height: usize, width: usize) -> Self {
        Signal2D {
            height,
            width,
            data: vec![Complex64::default(); height * width],
            declared_real: false,
        }
    }

    pub fn from_real(height: usize, width: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), height * width);
        Signal2D {
            height,
            width,
            data: data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            declared_real: true,
        }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.width + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Complex64 {
        &mut self.data[i * self.width + j]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Signal2D {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|c| c * s).collect(),
            declared_real: self.declared_real,
        }
    }

    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }
}
