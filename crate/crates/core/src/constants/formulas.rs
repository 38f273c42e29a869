//! Closed forms for the constants and bounds.

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Error, Result};
use crate::group::min_nondivisor;

/// `s'_{nt}(Z/n) = (t+1)n - l + 1`, `l` the least non-divisor of `n`.
pub fn formula_modified_cyclic(n: u64, t: u64) -> u64 {
    (t + 1) * n + 1 - min_nondivisor(n, 1)
}

/// `s'_n((Z/n)^2) = 4n - l + 1`, `l` the least non-divisor of `n` with `l >= 4`.
pub fn formula_modified_square(n: u64) -> u64 {
    4 * n + 1 - min_nondivisor(n, 4)
}

/// `((n-1) 2^r + 1, (n-1) n^r + 1)`, bounds on `s_n((Z/n)^r)`.
pub fn harborth_bounds(n: u64, r: u32) -> (BigUint, BigUint) {
    let base = BigUint::from(n.saturating_sub(1));
    let lower = &base * BigUint::from(2u8).pow(r) + BigUint::one();
    let upper = &base * BigUint::from(n).pow(r) + BigUint::one();
    (lower, upper)
}

/// Conjectured `s'_n((Z/n)^r) = 2^r n - l + 1` for `n` a power of two,
/// `l` the least non-divisor of `n` with `l >= 2^r`.
pub fn conjecture_value(n: u64, r: u32) -> Result<u64> {
    if !n.is_power_of_two() {
        return Err(Error::Precondition(format!("{n} is not a power of 2")));
    }
    let two_r = 1u64
        .checked_shl(r)
        .filter(|_| r < 63)
        .ok_or_else(|| Error::Precondition(format!("rank {r} too large")))?;
    Ok(two_r * n + 1 - min_nondivisor(n, two_r))
}
