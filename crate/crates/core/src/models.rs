//! Truncation-faithful models of `T`, `Z_p` and finite products of them.
//!
//! Points of `T` are rational, points of `Z_p` are non-negative integers
//! (finite p-adic expansions). Duals: `T^ = Z` via `x -> m x`, and
//! `Z_p^ = Z(p^inf)` via `x -> m x / p^n` with `p ∤ m, 0 < m < p^n` or
//! `(m, n) = (0, 0)`. Characters of a product have finite support.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::arith::{is_prime, mod_inverse};
use crate::error::{Error, Result};
use crate::finite::{FiniteAbelianGroup, GroupElement};
use crate::parse::{split_top_level, strip_parens};
use crate::qc::{certify_qc_dense, PairedGroup};
use crate::report::{Scope, WitnessReport};
use crate::scalar::{pow, Scalar};
use crate::torus::{OpenArc, TorusValue};

/// Largest sumset a bounded model context materialises.
pub const MODEL_SET_CAP: usize = 1_000_000;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CompactModel {
    Torus,
    PAdic(u64),
    Product(Vec<CompactModel>),
}

impl CompactModel {
    pub fn padic(p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidModel(format!("{p} is not prime")));
        }
        Ok(CompactModel::PAdic(p))
    }

    pub fn product(factors: Vec<CompactModel>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidModel("empty product".into()));
        }
        Ok(CompactModel::Product(factors))
    }

    pub fn factors(&self) -> &[CompactModel] {
        match self {
            CompactModel::Product(f) => f,
            _ => std::slice::from_ref(self),
        }
    }

    pub fn zero_point<S: Scalar>(&self) -> ModelPoint<S> {
        match self {
            CompactModel::Torus => ModelPoint::Torus(TorusValue::zero()),
            CompactModel::PAdic(_) => ModelPoint::PAdic(S::zero()),
            CompactModel::Product(f) => ModelPoint::Product(f.iter().map(|m| m.zero_point()).collect()),
        }
    }

    pub fn zero_character<S: Scalar>(&self) -> ModelCharacter<S> {
        match self {
            CompactModel::Torus => ModelCharacter::Torus(S::zero()),
            CompactModel::PAdic(_) => ModelCharacter::PAdic { m: S::zero(), n: 0 },
            CompactModel::Product(_) => ModelCharacter::Product(BTreeMap::new()),
        }
    }

    /// Checks that a point has the shape of this model.
    pub fn check_point<S: Scalar>(&self, x: &ModelPoint<S>) -> Result<()> {
        match (self, x) {
            (CompactModel::Torus, ModelPoint::Torus(_)) => Ok(()),
            (CompactModel::PAdic(_), ModelPoint::PAdic(v)) if !v.is_negative() => Ok(()),
            (CompactModel::Product(f), ModelPoint::Product(xs)) if f.len() == xs.len() => {
                f.iter().zip(xs).try_for_each(|(m, x)| m.check_point(x))
            }
            _ => Err(Error::InvalidModel(format!("point {x} does not belong to {self}"))),
        }
    }

    pub fn check_character<S: Scalar>(&self, chi: &ModelCharacter<S>) -> Result<()> {
        match (self, chi) {
            (CompactModel::Torus, ModelCharacter::Torus(_)) => Ok(()),
            (CompactModel::PAdic(p), ModelCharacter::PAdic { m, n }) => {
                if *chi == ModelCharacter::padic(*p, m.clone(), *n) {
                    Ok(())
                } else {
                    Err(Error::InvalidModel(format!("character ({m},{n}) is not in normal form for Zp({p})")))
                }
            }
            (CompactModel::Product(f), ModelCharacter::Product(map)) => map.iter().try_for_each(|(i, c)| {
                let factor = f.get(*i).ok_or_else(|| Error::InvalidModel(format!("support index {i} out of range")))?;
                if c.is_zero() {
                    return Err(Error::InvalidModel(format!("zero entry at support index {i}")));
                }
                factor.check_character(c)
            }),
            _ => Err(Error::InvalidModel(format!("character {chi} does not belong to {self}"))),
        }
    }

    /// `<chi, x>`, validating shapes.
    pub fn pairing<S: Scalar>(&self, chi: &ModelCharacter<S>, x: &ModelPoint<S>) -> Result<TorusValue<S>> {
        self.check_point(x)?;
        self.check_character(chi)?;
        Ok(self.pair(chi, x))
    }

    pub(crate) fn pair<S: Scalar>(&self, chi: &ModelCharacter<S>, x: &ModelPoint<S>) -> TorusValue<S> {
        match (self, chi, x) {
            (CompactModel::Torus, ModelCharacter::Torus(m), ModelPoint::Torus(t)) => t.scale(m),
            (CompactModel::PAdic(p), ModelCharacter::PAdic { m, n }, ModelPoint::PAdic(v)) => {
                if m.is_zero() {
                    return TorusValue::zero();
                }
                TorusValue::new(m.clone() * v.clone(), pow(&S::of_u64(*p), *n))
            }
            (CompactModel::Product(f), ModelCharacter::Product(map), ModelPoint::Product(xs)) => {
                map.iter().fold(TorusValue::zero(), |acc, (i, c)| &acc + &f[*i].pair(c, &xs[*i]))
            }
            _ => panic!("shape mismatch between {self}, {chi} and {x}"),
        }
    }

    pub fn add<S: Scalar>(&self, x: &ModelPoint<S>, y: &ModelPoint<S>) -> ModelPoint<S> {
        match (self, x, y) {
            (CompactModel::Torus, ModelPoint::Torus(a), ModelPoint::Torus(b)) => ModelPoint::Torus(a + b),
            (CompactModel::PAdic(_), ModelPoint::PAdic(a), ModelPoint::PAdic(b)) => {
                ModelPoint::PAdic(a.clone() + b.clone())
            }
            (CompactModel::Product(f), ModelPoint::Product(a), ModelPoint::Product(b)) => {
                ModelPoint::Product(f.iter().zip(a.iter().zip(b)).map(|(m, (u, v))| m.add(u, v)).collect())
            }
            _ => panic!("shape mismatch between {self}, {x} and {y}"),
        }
    }

    /// Parses one point: a rational for `T`, an integer for `Zp`, a tuple for products.
    pub fn parse_point<S: Scalar>(&self, text: &str) -> Result<ModelPoint<S>> {
        let text = text.trim();
        match self {
            CompactModel::Torus => Ok(ModelPoint::Torus(text.parse()?)),
            CompactModel::PAdic(p) => {
                let v = S::from_str(text).map_err(|_| Error::Parse(format!("bad {p}-adic integer {text:?}")))?;
                if v.is_negative() {
                    return Err(Error::Parse(format!("{p}-adic points must be non-negative integers, got {text}")));
                }
                Ok(ModelPoint::PAdic(v))
            }
            CompactModel::Product(f) => {
                let inner = strip_parens(text).ok_or_else(|| Error::Parse(format!("expected a tuple, got {text:?}")))?;
                let items = split_top_level(inner, ',')?;
                if items.len() != f.len() {
                    return Err(Error::ShapeMismatch { expected: f.len(), got: items.len() });
                }
                Ok(ModelPoint::Product(f.iter().zip(items).map(|(m, t)| m.parse_point(t)).collect::<Result<_>>()?))
            }
        }
    }

    /// Parses a comma-separated list of points.
    pub fn parse_points<S: Scalar>(&self, text: &str) -> Result<Vec<ModelPoint<S>>> {
        split_top_level(text, ',')?.into_iter().map(|t| self.parse_point(t)).collect()
    }
}

impl fmt::Display for CompactModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CompactModel::Torus => f.write_str("T"),
            CompactModel::PAdic(p) => write!(f, "Zp({p})"),
            CompactModel::Product(fs) => {
                f.write_str("prod(")?;
                for (i, m) in fs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Debug for CompactModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for CompactModel {
    type Err = Error;

    /// `T`, `Zp(3)`, `prod(T,Zp(3),T)`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text == "T" {
            return Ok(CompactModel::Torus);
        }
        if let Some(arg) = text.strip_prefix("Zp").and_then(strip_parens) {
            let p = arg.trim().parse().map_err(|_| Error::Parse(format!("bad prime {arg:?}")))?;
            return CompactModel::padic(p);
        }
        if let Some(args) = text.strip_prefix("prod").and_then(strip_parens) {
            let factors = split_top_level(args, ',')?.into_iter().map(str::parse).collect::<Result<Vec<_>>>()?;
            return CompactModel::product(factors);
        }
        Err(Error::Parse(format!("unknown model {text:?}")))
    }
}

impl Serialize for CompactModel {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelPoint<S: Scalar> {
    Torus(TorusValue<S>),
    PAdic(S),
    Product(Vec<ModelPoint<S>>),
}

impl<S: Scalar> ModelPoint<S> {
    pub fn torus(num: i64, den: i64) -> Self {
        ModelPoint::Torus(TorusValue::from_ints(num, den))
    }

    pub fn padic(v: i64) -> Self {
        ModelPoint::PAdic(S::of(v))
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ModelPoint::Torus(t) => t.is_zero(),
            ModelPoint::PAdic(v) => v.is_zero(),
            ModelPoint::Product(xs) => xs.iter().all(ModelPoint::is_zero),
        }
    }
}

impl<S: Scalar> fmt::Display for ModelPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelPoint::Torus(t) => write!(f, "{t}"),
            ModelPoint::PAdic(v) => write!(f, "{v}"),
            ModelPoint::Product(xs) => {
                f.write_str("(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl<S: Scalar> fmt::Debug for ModelPoint<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Scalar> Serialize for ModelPoint<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelCharacter<S: Scalar> {
    /// `x -> m x` on `T`.
    Torus(S),
    /// `x -> m x / p^n` on `Z_p`, in normal form.
    PAdic { m: S, n: u32 },
    /// Finite support: factor index -> nonzero factor character.
    Product(BTreeMap<usize, ModelCharacter<S>>),
}

impl<S: Scalar> ModelCharacter<S> {
    /// Normalises `x -> m x / p^n`: reduces `m` mod `p^n` and cancels common
    /// powers of `p` (the Prüfer relation `(m, n) ~ (m p, n + 1)`).
    pub fn padic(p: u64, m: S, n: u32) -> Self {
        let ps = S::of_u64(p);
        let mut m = m.mod_floor(&pow(&ps, n));
        let mut n = n;
        if m.is_zero() {
            return ModelCharacter::PAdic { m, n: 0 };
        }
        while n > 0 && m.is_multiple_of(&ps) {
            m = m / ps.clone();
            n -= 1;
        }
        ModelCharacter::PAdic { m, n }
    }

    pub fn product(entries: impl IntoIterator<Item = (usize, ModelCharacter<S>)>) -> Self {
        ModelCharacter::Product(entries.into_iter().filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ModelCharacter::Torus(m) => m.is_zero(),
            ModelCharacter::PAdic { m, .. } => m.is_zero(),
            ModelCharacter::Product(map) => map.values().all(ModelCharacter::is_zero),
        }
    }
}

impl<S: Scalar> fmt::Display for ModelCharacter<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelCharacter::Torus(m) => write!(f, "{m}"),
            ModelCharacter::PAdic { m, n } => write!(f, "({m},{n})"),
            ModelCharacter::Product(map) => {
                f.write_str("{")?;
                for (k, (i, c)) in map.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{i}:{c}")?;
                }
                f.write_str("}")
            }
        }
    }
}

impl<S: Scalar> fmt::Debug for ModelCharacter<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Scalar> Serialize for ModelCharacter<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Which characters a bounded verification examines.
///
/// `bound` is `|m|` for `T` and the level `n` for `Z_p`; products use it per
/// factor, restricted to factor indices in `window` and supports of size at
/// most `support`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharBound {
    pub bound: u64,
    pub support: usize,
    pub window: Option<(usize, usize)>,
}

impl CharBound {
    pub fn new(bound: u64) -> Self {
        CharBound { bound, support: usize::MAX, window: None }
    }

    pub fn with_support(mut self, support: usize) -> Self {
        self.support = support;
        self
    }

    /// Restricts product supports to factor indices `start..=end`.
    pub fn with_window(mut self, start: usize, end: usize) -> Self {
        self.window = Some((start, end));
        self
    }

    fn in_window(&self, i: usize) -> bool {
        self.window.is_none_or(|(a, b)| a <= i && i <= b)
    }
}

impl fmt::Display for CharBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bound)?;
        if self.support != usize::MAX {
            write!(f, ", support <= {}", self.support)?;
        }
        if let Some((a, b)) = self.window {
            write!(f, ", factors {a}..={b}")?;
        }
        Ok(())
    }
}

/// Characters within `bound`, each exactly once, in a fixed order.
pub fn enumerate_characters_bounded<S: Scalar>(model: &CompactModel, bound: &CharBound) -> Vec<ModelCharacter<S>> {
    match model {
        CompactModel::Torus => {
            let b = bound.bound as i64;
            (-b..=b).map(|m| ModelCharacter::Torus(S::of(m))).collect()
        }
        CompactModel::PAdic(p) => {
            let mut out = vec![ModelCharacter::PAdic { m: S::zero(), n: 0 }];
            let ps = S::of_u64(*p);
            for n in 1..=bound.bound as u32 {
                let top = pow(&ps, n);
                let mut m = S::one();
                while m < top {
                    if !m.is_multiple_of(&ps) {
                        out.push(ModelCharacter::PAdic { m: m.clone(), n });
                    }
                    m = m + S::one();
                }
            }
            out
        }
        CompactModel::Product(factors) => {
            let options: Vec<Vec<ModelCharacter<S>>> = factors
                .iter()
                .enumerate()
                .map(|(i, f)| {
                    if bound.in_window(i) {
                        enumerate_characters_bounded(f, bound).into_iter().filter(|c| !c.is_zero()).collect()
                    } else {
                        Vec::new()
                    }
                })
                .collect();
            let mut out = Vec::new();
            let mut current = BTreeMap::new();
            extend_products(&options, 0, bound.support, &mut current, &mut out);
            out
        }
    }
}

fn extend_products<S: Scalar>(
    options: &[Vec<ModelCharacter<S>>],
    index: usize,
    budget: usize,
    current: &mut BTreeMap<usize, ModelCharacter<S>>,
    out: &mut Vec<ModelCharacter<S>>,
) {
    if index == options.len() {
        out.push(ModelCharacter::Product(current.clone()));
        return;
    }
    extend_products(options, index + 1, budget, current, out);
    if budget == 0 {
        return;
    }
    for c in &options[index] {
        current.insert(index, c.clone());
        extend_products(options, index + 1, budget - 1, current, out);
        current.remove(&index);
    }
}

/// A compact model seen through a bounded window of its dual.
pub struct BoundedModel<S: Scalar> {
    model: CompactModel,
    bound: CharBound,
    chars: Vec<ModelCharacter<S>>,
}

impl<S: Scalar> BoundedModel<S> {
    pub fn new(model: CompactModel, bound: CharBound) -> Self {
        let chars = enumerate_characters_bounded(&model, &bound);
        BoundedModel { model, bound, chars }
    }

    pub fn model(&self) -> &CompactModel {
        &self.model
    }

    pub fn bound(&self) -> &CharBound {
        &self.bound
    }
}

impl<S: Scalar> PairedGroup for BoundedModel<S> {
    type Scalar = S;
    type Element = ModelPoint<S>;
    type Character = ModelCharacter<S>;

    fn pair(&self, chi: &ModelCharacter<S>, x: &ModelPoint<S>) -> TorusValue<S> {
        self.model.pair(chi, x)
    }

    fn characters(&self) -> Result<Vec<ModelCharacter<S>>> {
        Ok(self.chars.clone())
    }

    fn elements(&self) -> Result<Vec<ModelPoint<S>>> {
        Err(Error::InfiniteContext)
    }

    fn zero_element(&self) -> ModelPoint<S> {
        self.model.zero_point()
    }

    fn is_zero_character(&self, chi: &ModelCharacter<S>) -> bool {
        chi.is_zero()
    }

    fn add(&self, x: &ModelPoint<S>, y: &ModelPoint<S>) -> ModelPoint<S> {
        self.model.add(x, y)
    }

    fn scope(&self) -> Scope {
        Scope::UpToBound(self.bound.to_string())
    }

    fn cap(&self) -> usize {
        MODEL_SET_CAP
    }
}

/// How a super-sequence was generated; used to lengthen its truncation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SequenceOrigin {
    Torus { len: u64 },
    PAdic { p: u64, levels: u32 },
    Fan(Vec<SequenceOrigin>),
    Explicit,
}

impl SequenceOrigin {
    /// The same construction with every truncation doubled.
    pub fn lengthened(&self) -> SequenceOrigin {
        match self {
            SequenceOrigin::Torus { len } => SequenceOrigin::Torus { len: len * 2 },
            SequenceOrigin::PAdic { p, levels } => SequenceOrigin::PAdic { p: *p, levels: levels * 2 },
            SequenceOrigin::Fan(parts) => SequenceOrigin::Fan(parts.iter().map(SequenceOrigin::lengthened).collect()),
            SequenceOrigin::Explicit => SequenceOrigin::Explicit,
        }
    }

    /// Regenerates the sequence described by this origin.
    pub fn generate<S: Scalar>(&self, model: &CompactModel) -> Result<SuperSequence<S>> {
        match (self, model) {
            (SequenceOrigin::Torus { len }, CompactModel::Torus) => Ok(torus_qc_sequence(*len)),
            (SequenceOrigin::PAdic { p, levels }, CompactModel::PAdic(q)) if p == q => zp_qc_sequence(*p, *levels),
            (SequenceOrigin::Fan(parts), CompactModel::Product(factors)) if parts.len() == factors.len() => {
                let seqs = parts.iter().zip(factors).map(|(o, m)| o.generate(m)).collect::<Result<Vec<_>>>()?;
                fan_sequences(&seqs)
            }
            _ => Err(Error::Unsupported(format!("cannot regenerate {self:?} on {model}"))),
        }
    }
}

/// A finite truncation of a sequence converging to its limit (always 0 here).
///
/// `points` never contains the limit; [`SuperSequence::with_limit`] adds it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuperSequence<S: Scalar> {
    pub model: CompactModel,
    pub points: Vec<ModelPoint<S>>,
    pub limit: ModelPoint<S>,
    pub origin: SequenceOrigin,
}

impl<S: Scalar> SuperSequence<S> {
    /// Drops the limit and duplicates, keeping first occurrences in order.
    pub fn new(model: CompactModel, points: Vec<ModelPoint<S>>, origin: SequenceOrigin) -> Result<Self> {
        let limit = model.zero_point();
        let mut seen = BTreeSet::new();
        let mut kept = Vec::with_capacity(points.len());
        for x in points {
            model.check_point(&x)?;
            if x != limit && seen.insert(x.clone()) {
                kept.push(x);
            }
        }
        Ok(SuperSequence { model, points: kept, limit, origin })
    }

    /// The points together with the limit, as a set `X`.
    pub fn with_limit(&self) -> Vec<ModelPoint<S>> {
        let mut all = self.points.clone();
        all.push(self.limit.clone());
        all
    }

    pub fn contains(&self, x: &ModelPoint<S>) -> bool {
        *x == self.limit || self.points.contains(x)
    }
}

/// `{1/(2n) : 1 <= n <= len}` in `T`.
pub fn torus_qc_sequence<S: Scalar>(len: u64) -> SuperSequence<S> {
    let points = (1..=len).map(|n| ModelPoint::Torus(TorusValue::new(S::one(), S::of_u64(2 * n)))).collect();
    SuperSequence::new(CompactModel::Torus, points, SequenceOrigin::Torus { len })
        .expect("torus points are valid")
}

/// `{k p^j : 0 <= j < levels, 1 <= k <= p-1}` in `Z_p`.
pub fn zp_qc_sequence<S: Scalar>(p: u64, levels: u32) -> Result<SuperSequence<S>> {
    let model = CompactModel::padic(p)?;
    let ps = S::of_u64(p);
    let points = (0..levels)
        .flat_map(|j| {
            let base = pow(&ps, j);
            (1..p).map(move |k| ModelPoint::PAdic(S::of_u64(k) * base.clone()))
        })
        .collect();
    SuperSequence::new(model, points, SequenceOrigin::PAdic { p, levels })
}

/// Embeds `point` into factor `index` of a product, zeros elsewhere.
pub fn embed<S: Scalar>(factors: &[CompactModel], index: usize, point: ModelPoint<S>) -> ModelPoint<S> {
    let mut coords: Vec<_> = factors.iter().map(|m| m.zero_point()).collect();
    coords[index] = point;
    ModelPoint::Product(coords)
}

/// The fan: each subset embedded in its factor, their union, and the zero.
pub fn fan<S: Scalar>(models: &[CompactModel], subsets: &[Vec<ModelPoint<S>>]) -> Result<Vec<ModelPoint<S>>> {
    if models.len() != subsets.len() {
        return Err(Error::ShapeMismatch { expected: models.len(), got: subsets.len() });
    }
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for (i, (model, subset)) in models.iter().zip(subsets).enumerate() {
        for x in subset {
            model.check_point(x)?;
            let y = embed(models, i, x.clone());
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
    }
    let zero = ModelPoint::Product(models.iter().map(|m| m.zero_point()).collect());
    if seen.insert(zero.clone()) {
        out.push(zero);
    }
    Ok(out)
}

/// The fan of super-sequences as a super-sequence of the product.
pub fn fan_sequences<S: Scalar>(seqs: &[SuperSequence<S>]) -> Result<SuperSequence<S>> {
    let models: Vec<_> = seqs.iter().map(|s| s.model.clone()).collect();
    let subsets: Vec<_> = seqs.iter().map(|s| s.points.clone()).collect();
    let points = fan(&models, &subsets)?;
    let origin = SequenceOrigin::Fan(seqs.iter().map(|s| s.origin.clone()).collect());
    SuperSequence::new(CompactModel::product(models)?, points, origin)
}

/// Finite-group fan: the product group and the fan of the given subsets.
pub fn fan_finite<S: Scalar>(
    groups: &[FiniteAbelianGroup<S>],
    subsets: &[BTreeSet<GroupElement<S>>],
) -> Result<(FiniteAbelianGroup<S>, BTreeSet<GroupElement<S>>)> {
    if groups.len() != subsets.len() {
        return Err(Error::ShapeMismatch { expected: groups.len(), got: subsets.len() });
    }
    let product = FiniteAbelianGroup::new(groups.iter().flat_map(|g| g.orders().iter().cloned()).collect())?;
    let mut out = BTreeSet::new();
    out.insert(product.zero());
    let mut offset = 0;
    for (g, subset) in groups.iter().zip(subsets) {
        for x in subset {
            if !g.contains(x) {
                return Err(Error::InvalidGroup(format!("{x} is not an element of {g}")));
            }
            let mut coords = vec![S::zero(); product.rank()];
            coords[offset..offset + g.rank()].clone_from_slice(x.coords());
            out.insert(product.element(coords)?);
        }
        offset += g.rank();
    }
    Ok((product, out))
}

/// A point of `seq` that `chi` sends outside `T_+`, computed by the closed form:
/// `1/(2|m|)` on `T`; `k p^(n-1)` with `k m ≡ (p-1)/2 (mod p)` (or `k = 1` for
/// `p = 2`) on `Z_p`; on a product, the witness of the smallest support index.
pub fn constructive_witness<S: Scalar>(
    model: &CompactModel,
    chi: &ModelCharacter<S>,
    seq: &SuperSequence<S>,
) -> Result<(ModelPoint<S>, TorusValue<S>)> {
    model.check_character(chi)?;
    if chi.is_zero() {
        return Err(Error::Precondition("the zero character has no witness".into()));
    }
    let point = match (model, chi) {
        (CompactModel::Torus, ModelCharacter::Torus(m)) => {
            ModelPoint::Torus(TorusValue::new(S::one(), S::of(2) * m.abs()))
        }
        (CompactModel::PAdic(p), ModelCharacter::PAdic { m, n }) => {
            let ps = S::of_u64(*p);
            let k = if *p == 2 {
                S::one()
            } else {
                let inv = mod_inverse(m, &ps).expect("normal form makes m a unit mod p");
                (S::of_u64((p - 1) / 2) * inv).mod_floor(&ps)
            };
            ModelPoint::PAdic(k * pow(&ps, n - 1))
        }
        (CompactModel::Product(factors), ModelCharacter::Product(map)) => {
            let (&j0, factor_chi) = map.iter().next().expect("nonzero product character has support");
            let factor_points = seq
                .points
                .iter()
                .filter_map(|x| match x {
                    ModelPoint::Product(xs)
                        if xs.iter().enumerate().all(|(i, c)| i == j0 || c.is_zero()) && !xs[j0].is_zero() =>
                    {
                        Some(xs[j0].clone())
                    }
                    _ => None,
                })
                .collect();
            let factor_seq = SuperSequence::new(factors[j0].clone(), factor_points, SequenceOrigin::Explicit)?;
            let (w, _) = constructive_witness(&factors[j0], factor_chi, &factor_seq)?;
            embed(factors, j0, w)
        }
        _ => unreachable!("character shape checked above"),
    };
    if !seq.contains(&point) {
        return Err(Error::BoundsInsufficient(format!(
            "closed-form witness {point} for character {chi} lies beyond the truncation"
        )));
    }
    let value = model.pair(chi, &point);
    if value.in_t_plus() {
        return Err(Error::Invariant(format!("witness {point} sends {chi} to {value} ∈ T_+")));
    }
    Ok((point, value))
}

/// For every nonzero character within `bound`, searches `points` (in order)
/// for a value outside `T_+`. Independent of [`constructive_witness`].
pub fn verify_qc_dense_up_to<S: Scalar>(
    model: &CompactModel,
    points: &[ModelPoint<S>],
    bound: &CharBound,
) -> Result<WitnessReport<ModelCharacter<S>, ModelPoint<S>, S>> {
    for x in points {
        model.check_point(x)?;
    }
    let ctx = BoundedModel::new(model.clone(), bound.clone());
    certify_qc_dense(&ctx, points)
}

/// A constraint on one coordinate of a basic neighbourhood of 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint<S: Scalar> {
    /// The coordinate lies in the open arc (torus factors).
    #[serde(serialize_with = "serialize_display")]
    Arc(OpenArc<S>),
    /// The coordinate lies in `p^n Z_p` (p-adic factors).
    Level(u32),
}

fn serialize_display<T: fmt::Display, Z: Serializer>(v: &T, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.serialize_str(&v.to_string())
}

/// A finite-support basic neighbourhood: `(factor index, constraint)` pairs.
/// For a non-product model the only valid index is 0.
pub type Neighbourhood<S> = Vec<(usize, Constraint<S>)>;

fn inside<S: Scalar>(model: &CompactModel, nbhd: &Neighbourhood<S>, x: &ModelPoint<S>) -> Result<bool> {
    for (i, constraint) in nbhd {
        let (factor, coord) = match (model, x) {
            (CompactModel::Product(f), ModelPoint::Product(xs)) => match (f.get(*i), xs.get(*i)) {
                (Some(m), Some(c)) => (m, c),
                _ => return Err(Error::InvalidModel(format!("neighbourhood index {i} out of range for {model}"))),
            },
            (_, _) if *i == 0 => (model, x),
            _ => return Err(Error::InvalidModel(format!("neighbourhood index {i} on non-product {model}"))),
        };
        let ok = match (factor, coord, constraint) {
            (CompactModel::Torus, ModelPoint::Torus(t), Constraint::Arc(arc)) => t.in_arc(arc),
            (CompactModel::PAdic(p), ModelPoint::PAdic(v), Constraint::Level(n)) => {
                v.is_multiple_of(&pow(&S::of_u64(*p), *n))
            }
            _ => return Err(Error::InvalidModel(format!("constraint {constraint:?} does not fit factor {factor}"))),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConvergenceReport<S: Scalar> {
    /// Points of the truncation outside the neighbourhood.
    pub exceptions: Vec<ModelPoint<S>>,
    pub limit_inside: bool,
    /// Every point added by lengthening the truncation lies inside.
    pub tail_inside: bool,
    pub converges: bool,
}

/// All but finitely many points of `seq` lie in `nbhd`: the exceptional set is
/// reported, and the points a doubled truncation adds must all lie inside.
pub fn check_supersequence_convergence<S: Scalar>(
    seq: &SuperSequence<S>,
    nbhd: &Neighbourhood<S>,
) -> Result<ConvergenceReport<S>> {
    let model = &seq.model;
    let mut exceptions = Vec::new();
    for x in &seq.points {
        if !inside(model, nbhd, x)? {
            exceptions.push(x.clone());
        }
    }
    let limit_inside = inside(model, nbhd, &seq.limit)?;
    let tail_inside = match seq.origin {
        SequenceOrigin::Explicit => true,
        _ => {
            let longer: SuperSequence<S> = seq.origin.lengthened().generate(model)?;
            let mut ok = true;
            for x in longer.points.iter().filter(|x| !seq.contains(x)) {
                if !inside(model, nbhd, x)? {
                    ok = false;
                    break;
                }
            }
            ok
        }
    };
    Ok(ConvergenceReport { exceptions, limit_inside, tail_inside, converges: limit_inside && tail_inside })
}
