//! Exact integer lanes.
//!
//! Hot loops run over `i128` when every input fits the compact bound and over
//! `BigInt` otherwise. Both lanes are exact; the split only picks the cheaper
//! representation.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Integer type usable by the generic geometric kernels.
pub trait Exact: Clone + Ord + Debug + Signed + From<i64> {
    fn from_big(v: &BigInt) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Exact for i128 {
    fn from_big(v: &BigInt) -> Self {
        v.to_i128().expect("value outside the i128 lane")
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Exact for BigInt {
    fn from_big(v: &BigInt) -> Self {
        v.clone()
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Magnitude bound for values fed into degree-2 products on the `i128` lane.
pub const LANE_BITS: u64 = 62;

/// Coordinates bounded by `2^COMPACT_BITS` keep every degree-4 quantity of the
/// arrangement inside `i128`.
pub const COMPACT_BITS: u64 = 29;

pub fn fits_bits(v: &BigInt, bits: u64) -> bool {
    v.is_zero() || v.bits() <= bits
}

#[inline]
pub fn cross<T: Exact>(ax: &T, ay: &T, bx: &T, by: &T) -> T {
    ax.clone() * by.clone() - ay.clone() * bx.clone()
}

#[inline]
pub fn dot<T: Exact>(ax: &T, ay: &T, bx: &T, by: &T) -> T {
    ax.clone() * bx.clone() + ay.clone() * by.clone()
}

/// Sign as -1, 0, 1.
#[inline]
pub fn sign<T: Exact>(v: &T) -> i8 {
    if v.is_positive() {
        1
    } else if v.is_negative() {
        -1
    } else {
        0
    }
}

/// Converts a slice of vectors to the cheapest exact lane and runs `f` on it.
pub fn with_lane<R>(
    vectors: &[[BigInt; 2]],
    f_small: impl FnOnce(&[[i128; 2]]) -> R,
    f_big: impl FnOnce(&[[BigInt; 2]]) -> R,
) -> R {
    if vectors
        .iter()
        .all(|[x, y]| fits_bits(x, LANE_BITS) && fits_bits(y, LANE_BITS))
    {
        let small: Vec<[i128; 2]> = vectors
            .iter()
            .map(|[x, y]| [i128::from_big(x), i128::from_big(y)])
            .collect();
        f_small(&small)
    } else {
        f_big(vectors)
    }
}
