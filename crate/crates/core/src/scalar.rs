//! The integer type every exact computation is carried out in.
//!
//! `i64` is the fast path for desk-scale enumeration, `BigInt` removes any
//! overflow concern. Anything satisfying [`Scalar`] works.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Signed integer type usable as the numerator/denominator of torus values.
pub trait Scalar:
    Integer
    + Signed
    + Clone
    + Debug
    + Display
    + Hash
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Send
    + Sync
    + 'static
{
    /// Converts a machine integer, panicking if it does not fit.
    fn of(v: i64) -> Self {
        Self::from_i64(v).expect("machine integer fits the scalar type")
    }

    fn of_u64(v: u64) -> Self {
        Self::from_u64(v).expect("machine integer fits the scalar type")
    }
}

impl<T> Scalar for T where
    T: Integer
        + Signed
        + Clone
        + Debug
        + Display
        + Hash
        + FromPrimitive
        + ToPrimitive
        + FromStr
        + Send
        + Sync
        + 'static
{
}

pub type Rational<S> = Ratio<S>;

/// `base^exp` for a non-negative exponent.
pub(crate) fn pow<S: Scalar>(base: &S, exp: u32) -> S {
    num_traits::pow(base.clone(), exp as usize)
}

/// Parses `a/b` or `a` into a reduced rational.
pub fn parse_rational<S: Scalar>(text: &str) -> Option<Ratio<S>> {
    let text = text.trim();
    match text.split_once('/') {
        Some((n, d)) => {
            let n = S::from_str(n.trim()).ok()?;
            let d = S::from_str(d.trim()).ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Ratio::new(n, d))
        }
        None => S::from_str(text).ok().map(Ratio::from_integer),
    }
}

/// Formats a rational as `a/b`, or `a` when the denominator is one.
pub fn format_rational<S: Scalar>(q: &Ratio<S>) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
