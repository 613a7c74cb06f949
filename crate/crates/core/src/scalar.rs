//! The integer scalar abstraction shared by every exact kernel.
//!
//! All geometry in this crate is computed over an exact integer type `Z`.
//! The default instantiation (see the aliases at the crate root) is
//! [`num_bigint::BigInt`], which never overflows. Fixed-width types such as
//! `i64` or `i128` satisfy the trait as well and are convenient for small
//! inputs, but overflow in them is a bug in the caller's choice of scalar.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact integer scalar.
pub trait Int:
    Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

impl<T> Int for T where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
}

/// Exact rationals over the scalar.
pub type Rational<Z> = Ratio<Z>;

pub(crate) fn int<Z: Int>(v: i64) -> Z {
    Z::from_i64(v).expect("i64 fits every supported scalar")
}

/// Floor division for exact integers.
pub(crate) fn floor_div<Z: Int>(a: &Z, b: &Z) -> Z {
    a.div_floor(b)
}

/// Binomial coefficient as an exact integer; zero when `k > n` or `n < 0`.
pub fn binomial<Z: Int>(n: i64, k: i64) -> Z {
    if k < 0 || n < 0 || k > n {
        return Z::zero();
    }
    let k = k.min(n - k);
    let mut acc = Z::one();
    for i in 0..k {
        acc = acc * int::<Z>(n - i) / int::<Z>(i + 1);
    }
    acc
}
