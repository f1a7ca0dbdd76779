//! Exact arithmetic in the circle group `T = R/Z` restricted to rational points.
//!
//! Every value is kept in its canonical representative in `(-1/2, 1/2]`, so
//! structural equality is equality in `T`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::{format_rational, parse_rational, Scalar};

/// A rational point of `T`, stored as its reduced representative in `(-1/2, 1/2]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusValue<S: Scalar> {
    value: Ratio<S>,
}

impl<S: Scalar> TorusValue<S> {
    /// Reduces `q` mod 1 into `(-1/2, 1/2]`.
    pub fn canonicalize(q: Ratio<S>) -> Self {
        let mut frac = &q - q.floor();
        let two = S::one() + S::one();
        if frac.numer().clone() * two > frac.denom().clone() {
            frac = frac - Ratio::one();
        }
        TorusValue { value: frac }
    }

    /// `num/den` mod 1. Panics on a zero denominator.
    pub fn new(num: S, den: S) -> Self {
        Self::canonicalize(Ratio::new(num, den))
    }

    pub fn from_ints(num: i64, den: i64) -> Self {
        Self::new(S::of(num), S::of(den))
    }

    pub fn zero() -> Self {
        TorusValue { value: Ratio::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn numer(&self) -> &S {
        self.value.numer()
    }

    pub fn denom(&self) -> &S {
        self.value.denom()
    }

    /// The canonical representative as a rational in `(-1/2, 1/2]`.
    pub fn as_ratio(&self) -> &Ratio<S> {
        &self.value
    }

    /// Distance to 0 in `T`, a rational in `[0, 1/2]`.
    pub fn abs(&self) -> Ratio<S> {
        self.value.abs()
    }

    pub fn scale(&self, m: &S) -> Self {
        Self::canonicalize(&self.value * Ratio::from_integer(m.clone()))
    }

    pub fn scale_by(&self, m: i64) -> Self {
        self.scale(&S::of(m))
    }

    /// Membership in the closed arc `T_+ = [-1/4, 1/4]`.
    pub fn in_t_plus(&self) -> bool {
        // |num|/den <= 1/4
        self.value.numer().abs() * S::of(4) <= *self.value.denom()
    }

    pub fn in_arc(&self, arc: &OpenArc<S>) -> bool {
        self.abs() < arc.radius
    }

    /// Membership in `V_n`: `k*a` lies in `T_+` for every `k = 1..=n`.
    pub fn in_v_n(&self, n: u64) -> bool {
        let mut acc = Self::zero();
        for _ in 0..n {
            acc = &acc + self;
            if !acc.in_t_plus() {
                return false;
            }
        }
        true
    }
}

impl<S: Scalar> Add for &TorusValue<S> {
    type Output = TorusValue<S>;

    fn add(self, rhs: &TorusValue<S>) -> TorusValue<S> {
        TorusValue::canonicalize(&self.value + &rhs.value)
    }
}

impl<S: Scalar> Add for TorusValue<S> {
    type Output = TorusValue<S>;

    fn add(self, rhs: TorusValue<S>) -> TorusValue<S> {
        &self + &rhs
    }
}

impl<S: Scalar> Sub for &TorusValue<S> {
    type Output = TorusValue<S>;

    fn sub(self, rhs: &TorusValue<S>) -> TorusValue<S> {
        TorusValue::canonicalize(&self.value - &rhs.value)
    }
}

impl<S: Scalar> Neg for &TorusValue<S> {
    type Output = TorusValue<S>;

    fn neg(self) -> TorusValue<S> {
        TorusValue::canonicalize(-self.value.clone())
    }
}

impl<S: Scalar> Neg for TorusValue<S> {
    type Output = TorusValue<S>;

    fn neg(self) -> TorusValue<S> {
        -&self
    }
}

impl<S: Scalar> Zero for TorusValue<S> {
    fn zero() -> Self {
        TorusValue::zero()
    }

    fn is_zero(&self) -> bool {
        TorusValue::is_zero(self)
    }
}

impl<S: Scalar> fmt::Display for TorusValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.value))
    }
}

impl<S: Scalar> fmt::Debug for TorusValue<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T({self})")
    }
}

impl<S: Scalar> FromStr for TorusValue<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_rational(s)
            .map(Self::canonicalize)
            .ok_or_else(|| Error::Parse(format!("not a rational: {s:?}")))
    }
}

impl<S: Scalar> Serialize for TorusValue<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// The open symmetric arc `(-radius, radius)` around 0.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct OpenArc<S: Scalar> {
    radius: Ratio<S>,
}

impl<S: Scalar> OpenArc<S> {
    pub fn new(radius: Ratio<S>) -> Result<Self> {
        let half = Ratio::new(S::one(), S::of(2));
        if radius <= Ratio::zero() || radius > half {
            return Err(Error::InvalidArc(format_rational(&radius)));
        }
        Ok(OpenArc { radius })
    }

    pub fn from_ints(num: i64, den: i64) -> Result<Self> {
        Self::new(Ratio::new(S::of(num), S::of(den)))
    }

    pub fn radius(&self) -> &Ratio<S> {
        &self.radius
    }

    pub fn contains(&self, a: &TorusValue<S>) -> bool {
        a.in_arc(self)
    }
}

impl<S: Scalar> fmt::Display for OpenArc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.radius))
    }
}

impl<S: Scalar> fmt::Debug for OpenArc<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OpenArc(-{0}, {0})", self)
    }
}

impl<S: Scalar> FromStr for OpenArc<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let r = parse_rational(s).ok_or_else(|| Error::Parse(format!("not a rational: {s:?}")))?;
        Self::new(r)
    }
}

impl<S: Scalar> Serialize for OpenArc<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Least `n` with `V_n ⊆ U`.
///
/// `V_1 = T_+` and `V_n = [-1/(4n), 1/(4n)]` for `n >= 2`, so for radius `r`
/// the answer is 1 when `r > 1/4` and `floor(1/(4r)) + 1` otherwise.
pub fn min_n_with_v_n_inside<S: Scalar>(arc: &OpenArc<S>) -> u64 {
    let quarter = Ratio::new(S::one(), S::of(4));
    if *arc.radius() > quarter {
        return 1;
    }
    let inv = (arc.radius() * Ratio::from_integer(S::of(4))).recip();
    let n = inv.floor().to_integer() + S::one();
    n.to_u64().expect("V_n exponent fits u64").max(2)
}
