//! The multilevel decimated framelet transform and its building blocks.

mod das;
mod ops;
mod pyramid;
mod serialize;
mod signal;

pub use das::{
    das_generators_1d, das_generators_2d, multilevel_filter_1d, multilevel_symbol_1d,
    DasGenerator1D, DasGenerator2D,
};
pub(crate) use das::product_symbol;
pub use ops::{subdivision_1d, subdivision_2d, transition_1d, transition_2d};
pub(crate) use ops::{fold_spectrum_2d, unfold_spectrum_2d};
pub use pyramid::{
    decompose_1d, decompose_2d, energy_1d, energy_2d, reconstruct_1d, reconstruct_2d, zero_like,
    Band1D, Band2D, Pyramid1D, Pyramid2D,
};
pub use serialize::{read_pyramid, write_pyramid, PyramidManifest, SubbandEntry};
pub use signal::{Signal1D, Signal2D};
