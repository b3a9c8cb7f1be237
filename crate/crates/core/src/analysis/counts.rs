//! Closed-form direction counts of the two-dimensional banks.

use crate::error::{Error, Result};

/// Number of distinct orientations offered by the 2-D bank: `(n-1)(n-3)/2 + 4`
/// for odd n, `(n-4)(n+2)/2 + 6` for even n.
pub fn direction_count(n: u32) -> Result<u64> {
    if n < 3 {
        return Err(Error::param("direction_count requires n >= 3"));
    }
    let n = n as u64;
    Ok(if n % 2 == 1 {
        (n - 1) * (n - 3) / 2 + 4
    } else {
        (n - 4) * (n + 2) / 2 + 6
    })
}
