//! Exact rational comparisons for thresholding.
//!
//! Thresholds arrive as `f64` values; each finite double is itself a rational
//! number, and all boundary decisions are made against that exact value so
//! that `support/total >= theta` never flips on floating-point noise.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};

pub(crate) fn rational(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}

pub(crate) fn ratio(num: u64, den: u64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Smallest support count `s` with `s/n >= theta`, i.e. `ceil(theta * n)`
/// evaluated exactly. Requires `0 < theta <= 1`.
pub(crate) fn min_count_for_threshold(theta: f64, n: u64) -> u64 {
    let t = rational(theta).expect("finite threshold");
    let scaled = t * BigInt::from(n);
    let ceil = scaled.ceil().to_integer();
    ceil.to_u64().unwrap_or(u64::MAX).max(1)
}

/// Exact `num/den >= x` for a finite `x`.
pub(crate) fn ratio_ge(num: u64, den: u64, x: f64) -> bool {
    debug_assert!(den > 0);
    match rational(x) {
        Some(r) => ratio(num, den) >= r,
        None => false,
    }
}

/// `1 / 10^12`, the slack applied on verification boundaries to absorb
/// decimal serialization of sample frequencies.
pub(crate) fn boundary_slack() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u64.pow(12)))
}

pub(crate) fn abs_diff(a: &BigRational, b: &BigRational) -> BigRational {
    (a - b).abs()
}
