//! Noise model, bivariate shrinkage, metrics and the experiment harness.

mod experiment;
mod metrics;
mod noise;
mod shrink;

pub use experiment::{
    default_levels, denoise_image, denoise_trial, format_table_csv, format_table_json,
    format_table_text, run_experiment, run_experiment_on, ExperimentConfig, ResultRow,
    TransformKind, DEFAULT_WINDOW, MEYER_EPS, MEYER_M,
};
pub use metrics::{mse, psnr};
pub use noise::{add_gaussian_noise, standard_normals, NoiseModel};
pub use shrink::{bivariate_shrink_dtcwt, bivariate_shrink_pyramid, pyramid_subband_gains};
