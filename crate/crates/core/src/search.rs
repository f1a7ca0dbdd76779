//! Minimum-cardinality qc-dense subsets of a finite group.
//!
//! A set `E` is qc-dense iff it meets, for every nonzero character `chi`, the
//! set `{x : chi(x) ∉ T_+}`. That turns the search into a hitting-set problem
//! over one bitmask per character.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finite::{FiniteAbelianGroup, GroupElement};
use crate::scalar::Scalar;

/// Largest group order searched exhaustively.
pub const EXHAUSTIVE_ORDER_CAP: usize = 20;

/// Number of partial sets the beam keeps per size.
pub const BEAM_WIDTH: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MinDenseSearch<S: Scalar> {
    pub size: usize,
    /// All subsets of that size found, in lexicographic order of element indices.
    pub subsets: Vec<BTreeSet<GroupElement<S>>>,
    /// False when the beam heuristic was used; `size` is then only an upper bound.
    pub exhaustive: bool,
}

/// Finds all minimum-cardinality qc-dense subsets. Groups above
/// [`EXHAUSTIVE_ORDER_CAP`] need `heuristic`, which runs a beam search.
pub fn search_min_dense<S: Scalar>(group: &FiniteAbelianGroup<S>, heuristic: bool) -> Result<MinDenseSearch<S>> {
    let order = group.checked_order()?;
    if order > EXHAUSTIVE_ORDER_CAP && !heuristic {
        return Err(Error::CapExceeded { size: format!("order {order}"), cap: EXHAUSTIVE_ORDER_CAP });
    }
    let masks = escape_masks(group, order)?;
    let found = if order <= EXHAUSTIVE_ORDER_CAP {
        exhaustive(&masks, order)
    } else {
        beam(&masks, order)
    };
    let size = found.first().map_or(0, Vec::len);
    let subsets = found
        .into_iter()
        .map(|idx| idx.into_iter().map(|i| group.element_at(i)).collect())
        .collect();
    Ok(MinDenseSearch { size, subsets, exhaustive: order <= EXHAUSTIVE_ORDER_CAP })
}

type Mask = Vec<u64>;

fn hits(mask: &Mask, i: usize) -> bool {
    mask[i / 64] >> (i % 64) & 1 == 1
}

/// One mask per distinct nonzero character: the elements it sends outside `T_+`.
fn escape_masks<S: Scalar>(group: &FiniteAbelianGroup<S>, order: usize) -> Result<Vec<Mask>> {
    let elements: Vec<_> = group.elements()?.collect();
    let chars: Vec<_> = group.characters()?.filter(|c| !c.is_zero()).collect();
    let words = order.div_ceil(64);
    let masks: BTreeSet<Mask> = chars
        .par_iter()
        .map(|chi| {
            let mut m = vec![0u64; words];
            for (i, x) in elements.iter().enumerate() {
                if !group.pair(chi, x).in_t_plus() {
                    m[i / 64] |= 1 << (i % 64);
                }
            }
            m
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(masks.into_iter().collect())
}

fn exhaustive(masks: &[Mask], order: usize) -> Vec<Vec<usize>> {
    let single: Vec<u64> = masks.iter().map(|m| m[0]).collect();
    for k in 0..=order {
        let found: Vec<Vec<usize>> = (0..order)
            .combinations(k)
            .filter(|c| {
                let bits = c.iter().fold(0u64, |acc, &i| acc | 1 << i);
                single.iter().all(|m| m & bits != 0)
            })
            .collect();
        if !found.is_empty() {
            return found;
        }
    }
    unreachable!("the whole group is qc-dense")
}

fn beam(masks: &[Mask], order: usize) -> Vec<Vec<usize>> {
    let covered = |set: &[usize]| masks.iter().filter(|m| set.iter().any(|&i| hits(m, i))).count();
    let mut layer: Vec<Vec<usize>> = vec![Vec::new()];
    loop {
        let done: Vec<_> = layer.iter().filter(|s| covered(s) == masks.len()).cloned().collect();
        if !done.is_empty() {
            return done;
        }
        let next: BTreeSet<Vec<usize>> = layer
            .par_iter()
            .flat_map_iter(|s| {
                let last = s.last().map_or(0, |&i| i + 1);
                (last..order).map(move |i| {
                    let mut t = s.clone();
                    t.push(i);
                    t
                })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();
        let mut scored: Vec<(usize, Vec<usize>)> = next.into_iter().map(|s| (covered(&s), s)).collect();
        scored.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        scored.truncate(BEAM_WIDTH);
        layer = scored.into_iter().map(|(_, s)| s).collect();
        if layer.is_empty() {
            unreachable!("the whole group is qc-dense");
        }
    }
}
