//! The dual of the discrete rationals as `N/<u>`, `N = R x prod_p Z_p`,
//! `u = (1, (1, 1, ...))`, restricted to rational `t` and integral p-adic
//! coordinates.
//!
//! A class is stored as `(t, c, s)` with `t ∈ [0, 1)`, p-adic coordinates
//! `z_p = c + s_p` (`s` finitely supported, no zero entries). Multiples of
//! `u` change only `t` and `c`, so they stay finitely representable.
//!
//! The rational `q` acts by
//! `chi_q(t, z) = q t - sum_p frac_p(q z_p)  (mod 1)`,
//! where `frac_p(r)` is the p-adic fractional part of `r`. Only primes
//! dividing the denominator of `q` contribute. `chi_q(u) = 0` is the partial
//! fraction identity `q - sum_p frac_p(q) ∈ Z`.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::arith::{is_prime, mod_inverse, prime_divisors, primes_up_to, split_valuation};
use crate::error::{Error, Result};
use crate::report::{assemble, Scope, WitnessReport};
use crate::scalar::{format_rational, pow, Scalar};
use crate::torus::TorusValue;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolenoidElement<S: Scalar> {
    t: Ratio<S>,
    c: S,
    s: BTreeMap<u64, S>,
}

impl<S: Scalar> SolenoidElement<S> {
    /// The class of `(t, z)` with `z_p = c + s_p`, brought to canonical form by
    /// subtracting `floor(t) u`.
    pub fn new(t: Ratio<S>, c: S, s: BTreeMap<u64, S>) -> Result<Self> {
        if let Some(p) = s.keys().find(|&&p| !is_prime(p)) {
            return Err(Error::InvalidModel(format!("{p} is not prime")));
        }
        Ok(Self::normalized(t, c, s))
    }

    fn normalized(t: Ratio<S>, c: S, mut s: BTreeMap<u64, S>) -> Self {
        let k = t.floor();
        let t = t - &k;
        let c = c - k.to_integer();
        s.retain(|_, v| !v.is_zero());
        SolenoidElement { t, c, s }
    }

    pub fn zero() -> Self {
        SolenoidElement { t: Ratio::from_integer(S::zero()), c: S::zero(), s: BTreeMap::new() }
    }

    /// `theta(t, 0)`.
    pub fn real(t: Ratio<S>) -> Self {
        Self::normalized(t, S::zero(), BTreeMap::new())
    }

    /// `theta(0, v e_p)`: the p-adic integer `v` placed at prime `p`.
    pub fn at_prime(p: u64, v: S) -> Result<Self> {
        Self::new(Ratio::from_integer(S::zero()), S::zero(), BTreeMap::from([(p, v)]))
    }

    /// The class of `u = (1, (1)_p)`, which is zero.
    pub fn u_class() -> Self {
        Self::normalized(Ratio::from_integer(S::one()), S::one(), BTreeMap::new())
    }

    pub fn t(&self) -> &Ratio<S> {
        &self.t
    }

    pub fn c(&self) -> &S {
        &self.c
    }

    pub fn s(&self) -> &BTreeMap<u64, S> {
        &self.s
    }

    /// p-adic coordinate `z_p`.
    pub fn coordinate(&self, p: u64) -> S {
        self.c.clone() + self.s.get(&p).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.t.is_zero() && self.c.is_zero() && self.s.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.s.clone();
        for (p, v) in &other.s {
            let e = s.entry(*p).or_insert_with(S::zero);
            *e = e.clone() + v.clone();
        }
        Self::normalized(&self.t + &other.t, self.c.clone() + other.c.clone(), s)
    }

    pub fn neg(&self) -> Self {
        let s = self.s.iter().map(|(p, v)| (*p, -v.clone())).collect();
        Self::normalized(-self.t.clone(), -self.c.clone(), s)
    }

    /// Adds `k u` to the representative without renormalising; the class is
    /// unchanged. Used to test representative independence.
    pub fn shifted_representative(&self, k: i64) -> (Ratio<S>, S, BTreeMap<u64, S>) {
        let k = S::of(k);
        (&self.t + Ratio::from_integer(k.clone()), self.c.clone() + k, self.s.clone())
    }
}

fn int_value<S: Scalar>(v: &S) -> Value {
    match v.to_i64() {
        Some(i) => json!(i),
        None => json!(v.to_string()),
    }
}

impl<S: Scalar> Serialize for SolenoidElement<S> {
    /// `{"t":"1/6","c":0,"s":{"3":6}}`
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        let s: serde_json::Map<String, Value> = self.s.iter().map(|(p, v)| (p.to_string(), int_value(v))).collect();
        json!({ "t": format_rational(&self.t), "c": int_value(&self.c), "s": s }).serialize(serializer)
    }
}

impl<S: Scalar> fmt::Display for SolenoidElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{t:{}, c:{}, s:{{", format_rational(&self.t), self.c)?;
        for (i, (p, v)) in self.s.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}:{v}")?;
        }
        f.write_str("}}")
    }
}

impl<S: Scalar> fmt::Debug for SolenoidElement<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A character of the solenoid, i.e. an element of `Q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalCharacter<S: Scalar> {
    q: Ratio<S>,
}

impl<S: Scalar> RationalCharacter<S> {
    pub fn new(q: Ratio<S>) -> Self {
        RationalCharacter { q }
    }

    pub fn from_ints(num: i64, den: i64) -> Self {
        Self::new(Ratio::new(S::of(num), S::of(den)))
    }

    pub fn q(&self) -> &Ratio<S> {
        &self.q
    }

    /// `max(|numerator|, denominator)`.
    pub fn height(&self) -> S {
        let n = self.q.numer().abs();
        let d = self.q.denom().clone();
        if n > d {
            n
        } else {
            d
        }
    }

    pub fn is_zero(&self) -> bool {
        self.q.is_zero()
    }
}

impl<S: Scalar> PartialOrd for RationalCharacter<S> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<S: Scalar> Ord for RationalCharacter<S> {
    /// Height, then numerator, then denominator.
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.height()
            .cmp(&other.height())
            .then_with(|| self.q.numer().cmp(other.q.numer()))
            .then_with(|| self.q.denom().cmp(other.q.denom()))
    }
}

impl<S: Scalar> fmt::Display for RationalCharacter<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.q))
    }
}

impl<S: Scalar> fmt::Debug for RationalCharacter<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "chi[{self}]")
    }
}

impl<S: Scalar> Serialize for RationalCharacter<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// The p-adic fractional part: the unique `a/p^e ∈ [0, 1)` with `r - a/p^e`
/// p-integral.
pub fn fracpart_p<S: Scalar>(r: &Ratio<S>, p: u64) -> Ratio<S> {
    if r.is_zero() {
        return Ratio::from_integer(S::zero());
    }
    let (e, cofactor) = split_valuation(r.denom(), p);
    if e == 0 {
        return Ratio::from_integer(S::zero());
    }
    let pe = pow(&S::of_u64(p), e);
    let inv = mod_inverse(&cofactor, &pe).expect("cofactor is prime to p");
    Ratio::new((r.numer().clone() * inv).mod_floor(&pe), pe)
}

/// `chi_q(x)`.
pub fn solenoid_pairing<S: Scalar>(chi: &RationalCharacter<S>, x: &SolenoidElement<S>) -> TorusValue<S> {
    pairing_of_representative(chi, &x.t, &x.c, &x.s)
}

/// The pairing evaluated on an arbitrary (not necessarily canonical) representative.
pub fn pairing_of_representative<S: Scalar>(
    chi: &RationalCharacter<S>,
    t: &Ratio<S>,
    c: &S,
    s: &BTreeMap<u64, S>,
) -> TorusValue<S> {
    let q = &chi.q;
    let mut value = q * t;
    for p in prime_divisors(q.denom()) {
        let z = c.clone() + s.get(&p).cloned().unwrap_or_else(S::zero);
        value = value - fracpart_p(&(q * Ratio::from_integer(z)), p);
    }
    TorusValue::canonicalize(value)
}

/// Truncation parameters of the qc-dense sequence in the solenoid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QhatParams {
    /// Length of the torus part `{1/(2n)}`.
    pub seq_len: u64,
    /// Largest prime whose `Z_p` sequence is included.
    pub prime_max: u64,
    /// Levels of each `Z_p` sequence.
    pub levels: u32,
}

impl QhatParams {
    /// Whether every character of height `<= height` has its closed-form
    /// witness inside the truncation.
    pub fn covers(&self, height: u64) -> Result<()> {
        if self.seq_len < height {
            return Err(Error::BoundsInsufficient(format!("seq-len {} < height {height}", self.seq_len)));
        }
        if let Some(&p) = primes_up_to(height).last() {
            if self.prime_max < p {
                return Err(Error::BoundsInsufficient(format!("prime-max {} < {p}", self.prime_max)));
            }
        }
        let needed = max_valuation(height);
        if self.levels < needed {
            return Err(Error::BoundsInsufficient(format!("levels {} < {needed}", self.levels)));
        }
        Ok(())
    }
}

/// `max_{p, b <= height} v_p(b)`, i.e. `floor(log2 height)`.
fn max_valuation(height: u64) -> u32 {
    if height == 0 {
        0
    } else {
        63 - height.leading_zeros()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QhatSequence<S: Scalar> {
    pub params: QhatParams,
    /// Torus part, then each prime's `Z_p` part, then 0.
    pub points: Vec<SolenoidElement<S>>,
}

/// `theta(T x {0}) ∪ theta({0} x S)` truncated by `params`.
pub fn qhat_qc_sequence<S: Scalar>(params: QhatParams) -> Result<QhatSequence<S>> {
    if params.seq_len == 0 || params.prime_max < 2 || params.levels == 0 {
        return Err(Error::Precondition("seq-len, levels must be >= 1 and prime-max >= 2".into()));
    }
    let mut points = Vec::new();
    for n in 1..=params.seq_len {
        points.push(SolenoidElement::real(Ratio::new(S::one(), S::of_u64(2 * n))));
    }
    for p in primes_up_to(params.prime_max) {
        let ps = S::of_u64(p);
        for j in 0..params.levels {
            for k in 1..p {
                points.push(SolenoidElement::at_prime(p, S::of_u64(k) * pow(&ps, j))?);
            }
        }
    }
    points.push(SolenoidElement::zero());
    Ok(QhatSequence { params, points })
}

/// Reduced rationals `a/b` with `0 < max(|a|, b) <= height`, ordered by
/// height, numerator, denominator.
pub fn characters_up_to_height<S: Scalar>(height: u64) -> Vec<RationalCharacter<S>> {
    let h = height as i64;
    let mut out = Vec::new();
    for b in 1..=h {
        for a in -h..=h {
            if a != 0 && num_integer::gcd(a, b) == 1 {
                out.push(RationalCharacter::from_ints(a, b));
            }
        }
    }
    out.sort();
    out
}

/// The closed-form witness for `q != 0`: `1/(2|q|)` for integers; otherwise,
/// for the smallest prime `p | den(q)` with `e = v_p(den q)`, the point
/// `k p^(e-1)` at `p` where `k` makes `q k p^(e-1)` have p-adic fractional
/// part `((p-1)/2)/p` (`k = 1` when `p = 2`).
pub fn constructive_qhat_witness<S: Scalar>(chi: &RationalCharacter<S>) -> Result<SolenoidElement<S>> {
    let q = chi.q();
    if q.is_zero() {
        return Err(Error::Precondition("the zero character has no witness".into()));
    }
    if q.is_integer() {
        let n = q.numer().abs() * S::of(2);
        return Ok(SolenoidElement::real(Ratio::new(S::one(), n)));
    }
    let p = prime_divisors(q.denom())[0];
    let ps = S::of_u64(p);
    let (e, cofactor) = split_valuation(q.denom(), p);
    let k = if p == 2 {
        S::one()
    } else {
        // frac_p(q k p^(e-1)) = (a k cofactor^{-1} mod p) / p
        let unit = q.numer().clone() * mod_inverse(&cofactor, &ps).expect("cofactor prime to p");
        let inv = mod_inverse(&unit, &ps).expect("numerator prime to p");
        (S::of_u64((p - 1) / 2) * inv).mod_floor(&ps)
    };
    SolenoidElement::at_prime(p, k * pow(&ps, e - 1))
}

/// Exhaustive witness search for every nonzero character of height
/// `<= height`, cross-checked against the closed-form witness.
pub fn verify_qhat_qc_dense<S: Scalar>(
    seq: &QhatSequence<S>,
    height: u64,
) -> Result<WitnessReport<RationalCharacter<S>, SolenoidElement<S>, S>> {
    seq.params.covers(height)?;
    let chars = characters_up_to_height::<S>(height);
    let outcomes: Vec<_> = chars
        .into_par_iter()
        .map(|chi| {
            let found = seq.points.iter().find_map(|x| {
                let v = solenoid_pairing(&chi, x);
                (!v.in_t_plus()).then(|| (x.clone(), v))
            });
            let closed = constructive_qhat_witness(&chi)?;
            let closed_value = solenoid_pairing(&chi, &closed);
            if !seq.points.contains(&closed) || closed_value.in_t_plus() {
                return Err(Error::Invariant(format!(
                    "closed-form witness {closed} for {chi} gives {closed_value}"
                )));
            }
            Ok((chi, found))
        })
        .collect::<Result<_>>()?;
    Ok(assemble(Scope::UpToBound(format!("height {height}")), outcomes))
}
