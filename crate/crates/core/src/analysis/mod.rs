//! Frame-theoretic checks and filter diagnostics.

mod counts;
mod frame;
mod moments;
mod separation;

pub use counts::direction_count;
pub use frame::{
    check_filters_1d, check_orthogonal_wavelet, check_tight_frame_1d, check_tight_frame_2d,
    orthogonal_wavelet_residual, FrameReport,
};
pub use moments::{smoothness_exponent, sum_rules, vanishing_moments};
pub use separation::{
    factor_curves, factor_squared_integral, half_shift_deviation, separation_factor,
    separation_level1, theta_identity_check, theta_phase, FactorKind, SeparationReport,
    FACTOR_KINDS,
};
