//! Restriction maps, determination of finite groups and compact models, the
//! determining super-sequence pipeline and the counting experiment on `Z^d`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{prime_divisors, split_valuation};
use crate::error::{Error, Result};
use crate::finite::{Character, FiniteAbelianGroup, GroupElement};
use crate::models::{
    fan_finite, fan_sequences, torus_qc_sequence, verify_qc_dense_up_to, zp_qc_sequence, BoundedModel, CharBound,
    CompactModel, ModelCharacter, ModelPoint, SuperSequence,
};
use crate::qc::{certify_qc_dense, min_sumset_qc_dense, w_set};
use crate::report::{Scope, WitnessReport};
use crate::scalar::{format_rational, pow, Scalar};
use crate::search::search_min_dense;
use crate::torus::{OpenArc, TorusValue};

/// `r_X : G^ -> T^X`, `chi -> chi|_X`, tabulated over all characters.
#[derive(Clone, Debug)]
pub struct RestrictionMap<S: Scalar> {
    pub points: Vec<GroupElement<S>>,
    pub table: BTreeMap<Character<S>, Vec<TorusValue<S>>>,
}

impl<S: Scalar> RestrictionMap<S> {
    pub fn new(group: &FiniteAbelianGroup<S>, set: &BTreeSet<GroupElement<S>>) -> Result<Self> {
        let points: Vec<_> = set.iter().cloned().collect();
        for x in &points {
            if !group.contains(x) {
                return Err(Error::InvalidGroup(format!("{x} is not an element of {group}")));
            }
        }
        let chars: Vec<_> = group.characters()?.collect();
        let table = chars
            .into_par_iter()
            .map(|chi| {
                let row = points.iter().map(|x| group.pair(&chi, x)).collect();
                (chi, row)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        Ok(RestrictionMap { points, table })
    }

    pub fn kernel(&self) -> BTreeSet<Character<S>> {
        self.table.iter().filter(|(_, row)| row.iter().all(TorusValue::is_zero)).map(|(c, _)| c.clone()).collect()
    }

    /// Number of distinct restrictions, `|r_X(G^)|`.
    pub fn image_size(&self) -> usize {
        self.table.values().collect::<BTreeSet<_>>().len()
    }

    pub fn is_injective(&self) -> bool {
        self.image_size() == self.table.len()
    }
}

/// `{chi : chi(x) = 0 for all x in X}`.
pub fn restriction_kernel<S: Scalar>(
    group: &FiniteAbelianGroup<S>,
    set: &BTreeSet<GroupElement<S>>,
) -> Result<BTreeSet<Character<S>>> {
    Ok(RestrictionMap::new(group, set)?.kernel())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NearCharacterization<S: Scalar> {
    /// Some open arc `U` has `W(X,U) = {0}`.
    pub w_trivial: bool,
    /// `r_X` is injective.
    pub injective: bool,
    /// The arc tested: radius equal to the least nonzero `|chi(x)|`, or 1/2.
    pub arc: OpenArc<S>,
    pub equivalent: bool,
    /// A nonzero character in `W(X,U)` or in the kernel, when one exists.
    pub witness: Option<Character<S>>,
}

/// In a finite group, `W(X,U) = {0}` for some open `U` iff `r_X` is injective.
///
/// `W(X,U)` only shrinks with `U`, and below the least nonzero attained value
/// `|chi(x)|` it stops changing, so one arc decides the existential.
pub fn check_near_characterization<S: Scalar>(
    group: &FiniteAbelianGroup<S>,
    set: &BTreeSet<GroupElement<S>>,
) -> Result<NearCharacterization<S>> {
    let map = RestrictionMap::new(group, set)?;
    let radius = map
        .table
        .values()
        .flatten()
        .filter(|v| !v.is_zero())
        .map(TorusValue::abs)
        .min()
        .unwrap_or_else(|| Ratio::new(S::one(), S::of(2)));
    let arc = OpenArc::new(radius)?;
    let w = w_set(group, set, &arc)?;
    let w_witness = w.iter().find(|c| !c.is_zero()).cloned();
    let kernel_witness = map.kernel().into_iter().find(|c| !c.is_zero());
    let w_trivial = w_witness.is_none();
    let injective = map.is_injective();
    Ok(NearCharacterization {
        w_trivial,
        injective,
        arc,
        equivalent: w_trivial == injective,
        witness: w_witness.or(kernel_witness),
    })
}

/// Whether restriction `G^ -> D^` is bijective, for a subgroup `D`.
///
/// Injectivity is counted on the restriction table; `|D^| = |D|` because `D`
/// is finite abelian, so surjectivity is the count `|image| = |D|`.
pub fn determines_finite<S: Scalar>(group: &FiniteAbelianGroup<S>, sub: &BTreeSet<GroupElement<S>>) -> Result<bool> {
    if !group.is_subgroup(sub) {
        return Err(Error::NotSubgroup(format!("{} elements of {group}", sub.len())));
    }
    let map = RestrictionMap::new(group, sub)?;
    let image = map.image_size();
    Ok(image == map.table.len() && image == sub.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeterminationVerdict<S: Scalar> {
    pub positive: bool,
    pub scope: Scope,
    /// The compact subset of `<D>` found qc-dense: `X` itself, or `K_n`.
    pub witness_set: Vec<ModelPoint<S>>,
    pub report: WitnessReport<ModelCharacter<S>, ModelPoint<S>, S>,
    /// Least `n` with `K_n` qc-dense, when the completion route was taken.
    pub kn_exponent: Option<u64>,
}

/// Whether `x` lies in the subgroup generated by `gens`.
///
/// Rational points of `T`: `<a_i/b_i> = <1/lcm b_i>`, so `x` is in iff every
/// prime power dividing its denominator divides some `b_i`. Integers in `Z_p`:
/// `<g_i> = gcd(g_i) Z`. Products: generators must each live in one factor,
/// and membership is checked factorwise.
pub fn in_generated_subgroup<S: Scalar>(model: &CompactModel, gens: &[ModelPoint<S>], x: &ModelPoint<S>) -> Result<bool> {
    model.check_point(x)?;
    for g in gens {
        model.check_point(g)?;
    }
    match (model, x) {
        (CompactModel::Torus, ModelPoint::Torus(t)) => {
            // den(x) | lcm(b_i), one prime power at a time so the lcm is never formed
            let dens: Vec<&S> = gens
                .iter()
                .filter_map(|g| match g {
                    ModelPoint::Torus(v) => Some(v.denom()),
                    _ => None,
                })
                .collect();
            Ok(prime_divisors(t.denom()).into_iter().all(|p| {
                let (e, _) = split_valuation(t.denom(), p);
                let pe = pow(&S::of_u64(p), e);
                dens.iter().any(|b| b.is_multiple_of(&pe))
            }))
        }
        (CompactModel::PAdic(_), ModelPoint::PAdic(v)) => {
            let d = gens.iter().fold(S::zero(), |acc, g| match g {
                ModelPoint::PAdic(w) => acc.gcd(w),
                _ => acc,
            });
            Ok(if d.is_zero() { v.is_zero() } else { v.is_multiple_of(&d) })
        }
        (CompactModel::Product(factors), ModelPoint::Product(xs)) => {
            let mut per_factor: Vec<Vec<ModelPoint<S>>> = vec![Vec::new(); factors.len()];
            for g in gens {
                let ModelPoint::Product(gs) = g else { unreachable!("checked above") };
                let support: Vec<_> = gs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
                match support.as_slice() {
                    [] => {}
                    [(i, c)] => per_factor[*i].push((*c).clone()),
                    _ => {
                        return Err(Error::Unsupported(format!(
                            "generator {g} has support in several factors"
                        )))
                    }
                }
            }
            for ((m, gs), c) in factors.iter().zip(&per_factor).zip(xs) {
                if !in_generated_subgroup(m, gs, c)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => unreachable!("point shape checked above"),
    }
}

/// `D` determines the model if some compact `X ⊆ <D>` is qc-dense; this
/// verifies a candidate `X` up to `bound`. With `completion`, a set that only
/// satisfies `W(X,U) = {0}` within the bound is upgraded to the first
/// qc-dense `K_n`.
pub fn determine_by_witness<S: Scalar>(
    model: &CompactModel,
    generators: &[ModelPoint<S>],
    witness: &[ModelPoint<S>],
    bound: &CharBound,
    completion: Option<&OpenArc<S>>,
) -> Result<DeterminationVerdict<S>> {
    if bound.bound == 0 {
        return Err(Error::BoundsInsufficient("character bound must be at least 1".into()));
    }
    for x in witness {
        if !in_generated_subgroup(model, generators, x)? {
            return Err(Error::Precondition(format!("{x} is not in the subgroup generated by D")));
        }
    }
    let report = verify_qc_dense_up_to(model, witness, bound)?;
    let scope = report.scope.clone();
    if report.verified() {
        return Ok(DeterminationVerdict {
            positive: true,
            scope,
            witness_set: witness.to_vec(),
            report,
            kn_exponent: None,
        });
    }
    if let Some(arc) = completion {
        let ctx = BoundedModel::new(model.clone(), bound.clone());
        let set: BTreeSet<_> = witness.iter().cloned().collect();
        if let Ok(cert) = min_sumset_qc_dense(&ctx, &set, arc) {
            let points: Vec<_> = cert.sumset.into_iter().collect();
            let report = certify_qc_dense(&ctx, &points)?;
            return Ok(DeterminationVerdict {
                positive: report.verified(),
                scope,
                witness_set: points,
                report,
                kn_exponent: Some(cert.n),
            });
        }
    }
    Ok(DeterminationVerdict { positive: false, scope, witness_set: witness.to_vec(), report, kn_exponent: None })
}

/// Truncation of the model super-sequences and the bound they are verified to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PipelineBounds {
    pub seq_len: u64,
    pub levels: u32,
    pub char_bound: CharBound,
}

/// The qc-dense super-sequence of a model: `{1/(2n)}` on `T`, `{k p^j}` on
/// `Z_p`, the fan of the factors' sequences on a product.
pub fn model_supersequence<S: Scalar>(model: &CompactModel, bounds: &PipelineBounds) -> Result<SuperSequence<S>> {
    match model {
        CompactModel::Torus => Ok(torus_qc_sequence(bounds.seq_len)),
        CompactModel::PAdic(p) => zp_qc_sequence(*p, bounds.levels),
        CompactModel::Product(factors) => {
            let seqs = factors.iter().map(|m| model_supersequence(m, bounds)).collect::<Result<Vec<_>>>()?;
            fan_sequences(&seqs)
        }
    }
}

pub type ModelPipeline<S> = (SuperSequence<S>, WitnessReport<ModelCharacter<S>, ModelPoint<S>, S>);

/// Builds the super-sequence of a model and verifies it up to the bound.
pub fn build_determining_supersequence<S: Scalar>(
    model: &CompactModel,
    bounds: &PipelineBounds,
) -> Result<ModelPipeline<S>> {
    let seq = model_supersequence(model, bounds)?;
    let report = verify_qc_dense_up_to(model, &seq.with_limit(), &bounds.char_bound)?;
    Ok((seq, report))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FinitePipeline<S: Scalar> {
    /// The minimum qc-dense subset chosen in each cyclic factor.
    pub factor_sets: Vec<BTreeSet<GroupElement<S>>>,
    /// Their fan in the product.
    pub set: BTreeSet<GroupElement<S>>,
    pub report: WitnessReport<Character<S>, GroupElement<S>, S>,
}

/// Finite analogue: the fan of the first minimum qc-dense subset of each
/// cyclic factor, verified exactly. Every finite set is trivially a
/// super-sequence in a discrete group.
pub fn build_determining_finite<S: Scalar>(group: &FiniteAbelianGroup<S>) -> Result<FinitePipeline<S>> {
    let factors = group
        .orders()
        .iter()
        .map(|n| FiniteAbelianGroup::new(vec![n.clone()]))
        .collect::<Result<Vec<_>>>()?;
    let factor_sets = factors
        .iter()
        .map(|g| {
            let found = search_min_dense(g, false)?;
            Ok(found.subsets.into_iter().next().unwrap_or_default())
        })
        .collect::<Result<Vec<_>>>()?;
    let (product, set) = fan_finite(&factors, &factor_sets)?;
    debug_assert_eq!(product, *group);
    let points: Vec<_> = set.iter().cloned().collect();
    let report = certify_qc_dense(group, &points)?;
    Ok(FinitePipeline { factor_sets, set, report })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountRow {
    pub m: u64,
    pub count: u128,
    /// `(2M+1)^d`.
    pub total: u128,
    pub fraction: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem1Report {
    pub dim: usize,
    pub rows: Vec<CountRow>,
    /// Fraction at the smallest `M`, exactly.
    pub c: String,
    /// `count(M) >= (c/2) (2M+1)^d` for every scheduled `M`.
    pub stable: bool,
    pub strictly_increasing: bool,
}

/// Counts `chi ∈ Z^d`, `|chi|_inf <= M`, with `chi(x) ∈ U` for every `x ∈ X`,
/// for each `M` of an increasing schedule.
pub fn theorem1_experiment<S: Scalar>(
    dim: usize,
    points: &[Vec<TorusValue<S>>],
    arc: &OpenArc<S>,
    schedule: &[u64],
) -> Result<Theorem1Report> {
    if dim == 0 {
        return Err(Error::Precondition("dimension must be at least 1".into()));
    }
    if schedule.is_empty() || schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Precondition("schedule must be non-empty and strictly increasing".into()));
    }
    for x in points {
        if x.len() != dim {
            return Err(Error::ShapeMismatch { expected: dim, got: x.len() });
        }
    }
    // chi(x) = (sum chi_i a_i) / L mod 1 with a common denominator L per point
    let scaled: Vec<(S, Vec<S>)> = points
        .iter()
        .map(|x| {
            let l = x.iter().fold(S::one(), |acc, v| acc.lcm(v.denom()));
            let a = x.iter().map(|v| v.numer().clone() * (l.clone() / v.denom().clone())).collect();
            (l, a)
        })
        .collect();
    let (rp, rq) = (arc.radius().numer().clone(), arc.radius().denom().clone());
    let inside = |chi: &[S]| {
        scaled.iter().all(|(l, a)| {
            let dot = chi.iter().zip(a).fold(S::zero(), |acc, (c, ai)| acc + c.clone() * ai.clone());
            let mut r = dot.mod_floor(l);
            if r.clone() * S::of(2) > *l {
                r = r - l.clone();
            }
            r.abs() * rq.clone() < rp.clone() * l.clone()
        })
    };
    let mut rows = Vec::with_capacity(schedule.len());
    for &m in schedule {
        let side = 2 * m as u128 + 1;
        let total = side.checked_pow(dim as u32).ok_or_else(|| Error::CapExceeded {
            size: format!("(2*{m}+1)^{dim}"),
            cap: u128::MAX as usize,
        })?;
        let mi = m as i64;
        let count: u128 = (-mi..=mi)
            .into_par_iter()
            .map(|first| {
                let mut chi = vec![S::of(-mi); dim];
                chi[0] = S::of(first);
                let mut count = 0u128;
                loop {
                    if inside(&chi) {
                        count += 1;
                    }
                    // odometer over coordinates 1..dim
                    let mut i = 1;
                    while i < dim && chi[i] == S::of(mi) {
                        chi[i] = S::of(-mi);
                        i += 1;
                    }
                    if i == dim {
                        break;
                    }
                    chi[i] = chi[i].clone() + S::one();
                }
                count
            })
            .sum();
        rows.push(CountRow { m, count, total, fraction: count as f64 / total as f64 });
    }
    let base = &rows[0];
    let c = Ratio::new(BigUint::from(base.count), BigUint::from(base.total));
    let stable = rows
        .iter()
        .all(|r| BigUint::from(r.count) * 2u32 * BigUint::from(base.total) >= BigUint::from(base.count) * BigUint::from(r.total));
    let strictly_increasing = rows.windows(2).all(|w| w[0].count < w[1].count);
    let c = if c.denom() == &BigUint::from(1u32) {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    };
    Ok(Theorem1Report { dim, rows, c, stable, strictly_increasing })
}

/// Exact `count/total` of a row.
pub fn row_fraction(row: &CountRow) -> String {
    let q = Ratio::new(BigUint::from(row.count), BigUint::from(row.total));
    format_rational(&Ratio::new(
        num_bigint::BigInt::from(q.numer().clone()),
        num_bigint::BigInt::from(q.denom().clone()),
    ))
}
