//! Polars, quasi-convex hulls, qc-density, `W(X,U)` and the sumsets `K_n`.
//!
//! Everything here is written against [`PairedGroup`], so the same code runs
//! exactly on finite groups and "up to a character bound" on the compact
//! models.

use std::collections::BTreeSet;
use std::fmt::Debug;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{Character, FiniteAbelianGroup, GroupElement, Homomorphism};
use crate::report::{assemble, Scope, WitnessReport};
use crate::scalar::Scalar;
use crate::torus::{min_n_with_v_n_inside, OpenArc, TorusValue};

/// A group together with (a window of) its dual and the pairing between them.
pub trait PairedGroup: Sync {
    type Scalar: Scalar;
    type Element: Clone + Ord + Debug + Send + Sync;
    type Character: Clone + Ord + Debug + Send + Sync;

    fn pair(&self, chi: &Self::Character, x: &Self::Element) -> TorusValue<Self::Scalar>;

    /// All characters for a finite context, the bounded window otherwise.
    fn characters(&self) -> Result<Vec<Self::Character>>;

    /// All elements; only available on finite contexts.
    fn elements(&self) -> Result<Vec<Self::Element>>;

    fn zero_element(&self) -> Self::Element;

    fn is_zero_character(&self, chi: &Self::Character) -> bool;

    fn add(&self, x: &Self::Element, y: &Self::Element) -> Self::Element;

    fn scope(&self) -> Scope;

    /// Largest set the context is willing to materialise.
    fn cap(&self) -> usize;
}

impl<S: Scalar> PairedGroup for FiniteAbelianGroup<S> {
    type Scalar = S;
    type Element = GroupElement<S>;
    type Character = Character<S>;

    fn pair(&self, chi: &Character<S>, x: &GroupElement<S>) -> TorusValue<S> {
        FiniteAbelianGroup::pair(self, chi, x)
    }

    fn characters(&self) -> Result<Vec<Character<S>>> {
        Ok(FiniteAbelianGroup::characters(self)?.collect())
    }

    fn elements(&self) -> Result<Vec<GroupElement<S>>> {
        Ok(FiniteAbelianGroup::elements(self)?.collect())
    }

    fn zero_element(&self) -> GroupElement<S> {
        self.zero()
    }

    fn is_zero_character(&self, chi: &Character<S>) -> bool {
        chi.is_zero()
    }

    fn add(&self, x: &GroupElement<S>, y: &GroupElement<S>) -> GroupElement<S> {
        FiniteAbelianGroup::add(self, x, y)
    }

    fn scope(&self) -> Scope {
        Scope::Exact
    }

    fn cap(&self) -> usize {
        FiniteAbelianGroup::cap(self)
    }
}

/// A subgroup `K` of a finite group viewed as a group in its own right.
///
/// Characters of `K` are restrictions of characters of the ambient group
/// (every character of a subgroup of a finite abelian group extends), so the
/// dual is realised as the ambient dual modulo the annihilator of `K`. Each
/// class is represented by its lexicographically first member.
pub struct SubgroupContext<'a, S: Scalar> {
    group: &'a FiniteAbelianGroup<S>,
    members: Vec<GroupElement<S>>,
    classes: Vec<Character<S>>,
}

impl<'a, S: Scalar> SubgroupContext<'a, S> {
    pub fn new(group: &'a FiniteAbelianGroup<S>, members: &BTreeSet<GroupElement<S>>) -> Result<Self> {
        if !group.is_subgroup(members) {
            return Err(Error::NotSubgroup(format!("{} elements of {group}", members.len())));
        }
        let members: Vec<_> = members.iter().cloned().collect();
        let mut seen = BTreeSet::new();
        let mut classes = Vec::new();
        for chi in group.characters()? {
            let restriction: Vec<_> = members.iter().map(|x| group.pair(&chi, x)).collect();
            if seen.insert(restriction) {
                classes.push(chi);
            }
        }
        Ok(SubgroupContext { group, members, classes })
    }

    pub fn members(&self) -> &[GroupElement<S>] {
        &self.members
    }

    /// Number of characters of the subgroup, `|K^|`.
    pub fn dual_order(&self) -> usize {
        self.classes.len()
    }
}

impl<S: Scalar> PairedGroup for SubgroupContext<'_, S> {
    type Scalar = S;
    type Element = GroupElement<S>;
    type Character = Character<S>;

    fn pair(&self, chi: &Character<S>, x: &GroupElement<S>) -> TorusValue<S> {
        self.group.pair(chi, x)
    }

    fn characters(&self) -> Result<Vec<Character<S>>> {
        Ok(self.classes.clone())
    }

    fn elements(&self) -> Result<Vec<GroupElement<S>>> {
        Ok(self.members.clone())
    }

    fn zero_element(&self) -> GroupElement<S> {
        self.group.zero()
    }

    fn is_zero_character(&self, chi: &Character<S>) -> bool {
        self.members.iter().all(|x| self.group.pair(chi, x).is_zero())
    }

    fn add(&self, x: &GroupElement<S>, y: &GroupElement<S>) -> GroupElement<S> {
        self.group.add(x, y)
    }

    fn scope(&self) -> Scope {
        Scope::Exact
    }

    fn cap(&self) -> usize {
        self.group.cap()
    }
}

/// `E^▷`: characters sending every point of `E` into `T_+`.
pub fn polar_right<G: PairedGroup>(ctx: &G, set: &BTreeSet<G::Element>) -> Result<BTreeSet<G::Character>> {
    let points: Vec<_> = set.iter().collect();
    let chars = ctx.characters()?;
    Ok(chars
        .into_par_iter()
        .filter(|chi| points.iter().all(|x| ctx.pair(chi, x).in_t_plus()))
        .collect::<Vec<_>>()
        .into_iter()
        .collect())
}

/// `A^◁`: points sent into `T_+` by every character of `A`. Finite contexts only.
pub fn polar_left<G: PairedGroup>(ctx: &G, chars: &BTreeSet<G::Character>) -> Result<BTreeSet<G::Element>> {
    let chars: Vec<_> = chars.iter().collect();
    let elements = ctx.elements()?;
    Ok(elements
        .into_par_iter()
        .filter(|x| chars.iter().all(|chi| ctx.pair(chi, x).in_t_plus()))
        .collect::<Vec<_>>()
        .into_iter()
        .collect())
}

/// The quasi-convex hull `E^▷◁`.
pub fn qc_hull<G: PairedGroup>(ctx: &G, set: &BTreeSet<G::Element>) -> Result<BTreeSet<G::Element>> {
    polar_left(ctx, &polar_right(ctx, set)?)
}

pub fn is_quasi_convex<G: PairedGroup>(ctx: &G, set: &BTreeSet<G::Element>) -> Result<bool> {
    Ok(qc_hull(ctx, set)? == *set)
}

/// Outcome of a qc-density test, labelled with its scope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityVerdict<C> {
    pub dense: bool,
    /// First nonzero character of the polar, in enumeration order.
    pub counterexample: Option<C>,
    pub scope: Scope,
}

/// `E^▷ = {0}`, exactly on finite contexts and up to the bound otherwise.
pub fn qc_density<G: PairedGroup>(ctx: &G, set: &BTreeSet<G::Element>) -> Result<DensityVerdict<G::Character>> {
    let points: Vec<_> = set.iter().collect();
    let chars = ctx.characters()?;
    let counterexample = chars
        .into_par_iter()
        .find_first(|chi| !ctx.is_zero_character(chi) && points.iter().all(|x| ctx.pair(chi, x).in_t_plus()));
    Ok(DensityVerdict { dense: counterexample.is_none(), counterexample, scope: ctx.scope() })
}

pub fn is_qc_dense<G: PairedGroup>(ctx: &G, set: &BTreeSet<G::Element>) -> Result<bool> {
    Ok(qc_density(ctx, set)?.dense)
}

/// `W(X,U)`: characters sending every point of `X` into the open arc `U`.
pub fn w_set<G: PairedGroup>(
    ctx: &G,
    set: &BTreeSet<G::Element>,
    arc: &OpenArc<G::Scalar>,
) -> Result<BTreeSet<G::Character>> {
    let points: Vec<_> = set.iter().collect();
    let chars = ctx.characters()?;
    Ok(chars
        .into_par_iter()
        .filter(|chi| points.iter().all(|x| ctx.pair(chi, x).in_arc(arc)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect())
}

/// `K_n = (X ∪ {0}) + ... + (X ∪ {0})` with `n` summands.
pub fn sumset_k_n<G: PairedGroup>(ctx: &G, set: &BTreeSet<G::Element>, n: u64) -> Result<BTreeSet<G::Element>> {
    if n == 0 {
        return Err(Error::Precondition("sumset length must be positive".into()));
    }
    let mut base = set.clone();
    base.insert(ctx.zero_element());
    let mut acc = base.clone();
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for a in &acc {
            for b in &base {
                next.insert(ctx.add(a, b));
            }
            if next.len() > ctx.cap() {
                return Err(Error::CapExceeded { size: format!("> {}", ctx.cap()), cap: ctx.cap() });
            }
        }
        if next == acc {
            break;
        }
        acc = next;
    }
    Ok(acc)
}

/// Result of the least-`n` search for a qc-dense sumset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumsetCertificate<E> {
    /// Least `n` with `K_n` qc-dense.
    pub n: u64,
    /// A-priori bound: least `n` with `V_n ⊆ U`.
    pub v_n_bound: u64,
    pub sumset: BTreeSet<E>,
    pub scope: Scope,
}

/// Least `n` such that `K_n` is qc-dense, given `W(X,U) = {0}`.
pub fn min_sumset_qc_dense<G: PairedGroup>(
    ctx: &G,
    set: &BTreeSet<G::Element>,
    arc: &OpenArc<G::Scalar>,
) -> Result<SumsetCertificate<G::Element>> {
    let w = w_set(ctx, set, arc)?;
    if w.iter().any(|chi| !ctx.is_zero_character(chi)) {
        return Err(Error::Precondition(format!("W(X,U) has {} nonzero characters", w.len() - 1)));
    }
    let bound = min_n_with_v_n_inside(arc);
    for n in 1..=bound {
        let sumset = sumset_k_n(ctx, set, n)?;
        if is_qc_dense(ctx, &sumset)? {
            return Ok(SumsetCertificate { n, v_n_bound: bound, sumset, scope: ctx.scope() });
        }
    }
    Err(Error::Invariant(format!("no K_n with n <= {bound} is qc-dense although W(X,U) = {{0}}")))
}

/// `f(Q_G(X)) ⊆ Q_H(f(X))`.
pub fn check_hull_pushforward<S: Scalar>(f: &Homomorphism<S>, set: &BTreeSet<GroupElement<S>>) -> Result<bool> {
    let hull_image = f.apply_set(&qc_hull(f.source(), set)?)?;
    let image_hull = qc_hull(f.target(), &f.apply_set(set)?)?;
    Ok(hull_image.is_subset(&image_hull))
}

/// Which side of a three-space instance a counterexample character lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThreeSpaceVerdict<S: Scalar> {
    /// `X` qc-dense in the source.
    pub set_dense: bool,
    /// `f(X)` qc-dense in the target.
    pub image_dense: bool,
    pub holds: bool,
    pub counterexample: Option<(Side, Character<S>)>,
}

/// For surjective `f` with `X ∩ ker f` qc-dense in `ker f`, checks that `X` is
/// qc-dense iff `f(X)` is.
pub fn check_three_space<S: Scalar>(f: &Homomorphism<S>, set: &BTreeSet<GroupElement<S>>) -> Result<ThreeSpaceVerdict<S>> {
    if !f.is_surjective()? {
        return Err(Error::Precondition("homomorphism is not surjective".into()));
    }
    let kernel = f.kernel()?;
    let kernel_ctx = SubgroupContext::new(f.source(), &kernel)?;
    let inside: BTreeSet<_> = set.intersection(&kernel).cloned().collect();
    if !is_qc_dense(&kernel_ctx, &inside)? {
        return Err(Error::Precondition("X ∩ ker f is not qc-dense in ker f".into()));
    }
    let source = qc_density(f.source(), set)?;
    let target = qc_density(f.target(), &f.apply_set(set)?)?;
    let holds = source.dense == target.dense;
    let counterexample = if holds {
        None
    } else if let Some(chi) = source.counterexample {
        Some((Side::Source, chi))
    } else {
        target.counterexample.map(|xi| (Side::Target, xi))
    };
    Ok(ThreeSpaceVerdict { set_dense: source.dense, image_dense: target.dense, holds, counterexample })
}

/// Whether `X` generates the whole (finite) group.
pub fn check_generates<S: Scalar>(group: &FiniteAbelianGroup<S>, set: &BTreeSet<GroupElement<S>>) -> Result<bool> {
    Ok(group.generated_subgroup(set)?.len() == group.checked_order()?)
}

/// Searches, for every nonzero character of the context, a point of `points`
/// (in the given order) whose value lies outside `T_+`.
pub fn certify_qc_dense<G: PairedGroup>(
    ctx: &G,
    points: &[G::Element],
) -> Result<WitnessReport<G::Character, G::Element, G::Scalar>> {
    let chars = ctx.characters()?;
    let outcomes = chars
        .into_par_iter()
        .filter(|chi| !ctx.is_zero_character(chi))
        .map(|chi| {
            let found = points.iter().find_map(|x| {
                let v = ctx.pair(&chi, x);
                (!v.in_t_plus()).then(|| (x.clone(), v))
            });
            (chi, found)
        })
        .collect();
    Ok(assemble(ctx.scope(), outcomes))
}
