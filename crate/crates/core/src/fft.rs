//! Thin wrappers over rustfft with per-thread plan caching.
//!
//! Transforms are deliberately single-threaded so that results are
//! bit-identical regardless of how callers schedule work.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::Arc;

thread_local! {
    static PLANS: RefCell<PlanCache> = RefCell::new(PlanCache::new());
}

struct PlanCache {
    planner: FftPlanner<f64>,
    plans: HashMap<(usize, bool), Arc<dyn Fft<f64>>>,
}

impl PlanCache {
    fn new() -> Self {
        PlanCache {
            planner: FftPlanner::new(),
            plans: HashMap::new(),
        }
    }

    fn get(&mut self, n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
        self.plans
            .entry((n, inverse))
            .or_insert_with(|| {
                if inverse {
                    self.planner.plan_fft_inverse(n)
                } else {
                    self.planner.plan_fft_forward(n)
                }
            })
            .clone()
    }
}

/// In-place DFT. The inverse includes the 1/n normalization.
pub fn fft(buf: &mut [Complex64], inverse: bool) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    let plan = PLANS.with(|p| p.borrow_mut().get(n, inverse));
    plan.process(buf);
    if inverse {
        let s = 1.0 / n as f64;
        for v in buf.iter_mut() {
            *v *= s;
        }
    }
}

/// In-place 2-D DFT of a row-major `height x width` grid.
pub fn fft2(data: &mut [Complex64], height: usize, width: usize, inverse: bool) {
    assert_eq!(data.len(), height * width);
    if height == 0 || width == 0 {
        return;
    }
    let row_plan = PLANS.with(|p| p.borrow_mut().get(width, inverse));
    for r in 0..height {
        row_plan.process(&mut data[r * width..(r + 1) * width]);
    }
    let col_plan = PLANS.with(|p| p.borrow_mut().get(height, inverse));
    let mut col = vec![Complex64::default(); height];
    for c in 0..width {
        for r in 0..height {
            col[r] = data[r * width + c];
        }
        col_plan.process(&mut col);
        for r in 0..height {
            data[r * width + c] = col[r];
        }
    }
    if inverse {
        let s = 1.0 / (height * width) as f64;
        for v in data.iter_mut() {
            *v *= s;
        }
    }
}
