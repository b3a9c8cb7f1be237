//! Filter and filter-bank construction: bump windows, CTF_n banks, tensor
//! products, frequency-based orthogonal filters and the Kingsbury taps.

mod blend;
mod ctf;
mod json;
mod kingsbury;
mod meyer;
mod tensor;

pub use blend::{bump, falling_edge, spline_blend};
pub use ctf::{build_ctf, haar_bank, CtfParams, FilterBank1D};
pub use json::{bank_from_json, bank_to_json, read_bank, write_bank};
pub use kingsbury::{kingsbury_filters, KingsburySet};
pub use meyer::{build_meyer_orthogonal, orthogonality_residual};
pub use tensor::{direction_deg, spectral_centroid, tensor_bank_2d, Filter2D, FilterBank2D};
