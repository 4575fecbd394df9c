//! Coefficient fields.
//!
//! Every engine in this crate is generic over [`Scalar`], an exact ordered
//! field of characteristic zero. `BigRational` is the production choice;
//! the fixed-width `Ratio` types are provided for small inputs and tests
//! and panic on overflow like the underlying integers.

use std::fmt;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + Ord
    + Hash
    + Num
    + Signed
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    /// Largest integer not exceeding `self`.
    fn floor(&self) -> Self;

    fn to_rational(&self) -> BigRational;

    /// `None` when the value does not fit the representation.
    fn from_rational(q: &BigRational) -> Option<Self>;

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("every field contains the integers")
    }

    /// Numerator and (positive) denominator in lowest terms.
    fn numer_denom(&self) -> (BigInt, BigInt) {
        let q = self.to_rational();
        (q.numer().clone(), q.denom().clone())
    }
}

impl Scalar for BigRational {
    fn floor(&self) -> Self {
        Ratio::floor(self)
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn from_rational(q: &BigRational) -> Option<Self> {
        Some(q.clone())
    }
}

macro_rules! fixed_width_scalar {
    ($($int:ty),*) => {$(
        impl Scalar for Ratio<$int> {
            fn floor(&self) -> Self {
                Ratio::floor(self)
            }

            fn to_rational(&self) -> BigRational {
                BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
            }

            fn from_rational(q: &BigRational) -> Option<Self> {
                let n = q.numer().to_i128()?;
                let d = q.denom().to_i128()?;
                Some(Ratio::new(<$int>::try_from(n).ok()?, <$int>::try_from(d).ok()?))
            }
        }
    )*};
}

fixed_width_scalar!(i32, i64, i128);

/// Parses `"p"`, `"-p"` or `"p/q"`.
pub fn parse_scalar<F: Scalar>(s: &str) -> Option<F> {
    let s = s.trim();
    let q = match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d == BigInt::from(0) {
                return None;
            }
            BigRational::new(n, d)
        }
        None => BigRational::from_integer(s.parse().ok()?),
    };
    F::from_rational(&q)
}

/// Canonical `p/q` rendering (`p` when the denominator is one).
pub fn format_scalar<F: Scalar>(x: &F) -> String {
    let (n, d) = x.numer_denom();
    if d == BigInt::from(1) {
        n.to_string()
    } else {
        format!("{n}/{d}")
    }
}

pub(crate) fn gcd_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.gcd(b)
}

pub(crate) fn lcm_bigint(a: &BigInt, b: &BigInt) -> BigInt {
    use num_integer::Integer;
    a.lcm(b)
}
