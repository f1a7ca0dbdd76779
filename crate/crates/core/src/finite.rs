//! Finite abelian groups written as explicit products of cyclic groups.
//!
//! Elements and characters are both residue vectors; the pairing of a
//! character `c` with an element `x` is `sum_i c_i * x_i / n_i` in `T`.
//! Enumeration is lexicographic in the coordinates (first coordinate most
//! significant) and is guarded by a configurable cap.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::torus::TorusValue;

pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// `Z(n_1) x ... x Z(n_k)`.
#[derive(Clone)]
pub struct FiniteAbelianGroup<S: Scalar> {
    orders: Vec<S>,
    cap: usize,
}

impl<S: Scalar> PartialEq for FiniteAbelianGroup<S> {
    fn eq(&self, other: &Self) -> bool {
        self.orders == other.orders
    }
}

impl<S: Scalar> Eq for FiniteAbelianGroup<S> {}

/// Coordinates of a group element, each reduced modulo its factor order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement<S: Scalar> {
    coords: Vec<S>,
}

/// Coordinates of a character; the dual of `Z(n)` is again `Z(n)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Character<S: Scalar> {
    coords: Vec<S>,
}

macro_rules! residue_vector {
    ($ty:ident) => {
        impl<S: Scalar> $ty<S> {
            pub fn coords(&self) -> &[S] {
                &self.coords
            }

            pub fn is_zero(&self) -> bool {
                self.coords.iter().all(Zero::is_zero)
            }
        }

        impl<S: Scalar> fmt::Display for $ty<S> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("(")?;
                for (i, c) in self.coords.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{c}")?;
                }
                f.write_str(")")
            }
        }

        impl<S: Scalar> fmt::Debug for $ty<S> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                fmt::Display::fmt(self, f)
            }
        }

        impl<S: Scalar> Serialize for $ty<S> {
            fn serialize<Z: Serializer>(
                &self,
                serializer: Z,
            ) -> std::result::Result<Z::Ok, Z::Error> {
                serializer.serialize_str(&self.to_string())
            }
        }
    };
}

residue_vector!(GroupElement);
residue_vector!(Character);

impl<S: Scalar> FiniteAbelianGroup<S> {
    pub fn new(orders: Vec<S>) -> Result<Self> {
        if orders.is_empty() {
            return Err(Error::InvalidGroup("at least one cyclic factor required".into()));
        }
        if let Some(bad) = orders.iter().find(|n| **n < S::one()) {
            return Err(Error::InvalidGroup(format!("factor order {bad} < 1")));
        }
        Ok(FiniteAbelianGroup { orders, cap: DEFAULT_ENUMERATION_CAP })
    }

    pub fn cyclic(n: i64) -> Result<Self> {
        Self::new(vec![S::of(n)])
    }

    pub fn from_orders(orders: &[i64]) -> Result<Self> {
        Self::new(orders.iter().map(|&n| S::of(n)).collect())
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn orders(&self) -> &[S] {
        &self.orders
    }

    pub fn rank(&self) -> usize {
        self.orders.len()
    }

    pub fn order(&self) -> S {
        self.orders.iter().fold(S::one(), |acc, n| acc * n.clone())
    }

    /// The order as a `usize`, failing if it exceeds the enumeration cap.
    pub fn checked_order(&self) -> Result<usize> {
        let order = self.order();
        match order.to_usize() {
            Some(n) if n <= self.cap => Ok(n),
            _ => Err(Error::CapExceeded { size: order.to_string(), cap: self.cap }),
        }
    }

    fn check_shape(&self, len: usize) -> Result<()> {
        if len != self.orders.len() {
            return Err(Error::ShapeMismatch { expected: self.orders.len(), got: len });
        }
        Ok(())
    }

    fn reduce(&self, coords: Vec<S>) -> Result<Vec<S>> {
        self.check_shape(coords.len())?;
        Ok(coords.into_iter().zip(&self.orders).map(|(c, n)| c.mod_floor(n)).collect())
    }

    /// Builds an element, reducing each coordinate modulo its order.
    pub fn element(&self, coords: Vec<S>) -> Result<GroupElement<S>> {
        Ok(GroupElement { coords: self.reduce(coords)? })
    }

    pub fn element_of(&self, coords: &[i64]) -> Result<GroupElement<S>> {
        self.element(coords.iter().map(|&c| S::of(c)).collect())
    }

    pub fn character(&self, coords: Vec<S>) -> Result<Character<S>> {
        Ok(Character { coords: self.reduce(coords)? })
    }

    pub fn character_of(&self, coords: &[i64]) -> Result<Character<S>> {
        self.character(coords.iter().map(|&c| S::of(c)).collect())
    }

    pub fn zero(&self) -> GroupElement<S> {
        GroupElement { coords: vec![S::zero(); self.rank()] }
    }

    pub fn zero_character(&self) -> Character<S> {
        Character { coords: vec![S::zero(); self.rank()] }
    }

    pub fn contains(&self, x: &GroupElement<S>) -> bool {
        x.coords.len() == self.rank()
            && x.coords.iter().zip(&self.orders).all(|(c, n)| !c.is_negative() && c < n)
    }

    pub fn add(&self, x: &GroupElement<S>, y: &GroupElement<S>) -> GroupElement<S> {
        let coords = x
            .coords
            .iter()
            .zip(&y.coords)
            .zip(&self.orders)
            .map(|((a, b), n)| (a.clone() + b.clone()).mod_floor(n))
            .collect();
        GroupElement { coords }
    }

    pub fn neg(&self, x: &GroupElement<S>) -> GroupElement<S> {
        let coords = x.coords.iter().zip(&self.orders).map(|(a, n)| (-a.clone()).mod_floor(n)).collect();
        GroupElement { coords }
    }

    pub fn scale(&self, m: &S, x: &GroupElement<S>) -> GroupElement<S> {
        let coords =
            x.coords.iter().zip(&self.orders).map(|(a, n)| (a.clone() * m.clone()).mod_floor(n)).collect();
        GroupElement { coords }
    }

    pub fn add_characters(&self, a: &Character<S>, b: &Character<S>) -> Character<S> {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .zip(&self.orders)
            .map(|((u, v), n)| (u.clone() + v.clone()).mod_floor(n))
            .collect();
        Character { coords }
    }

    /// `<chi, x>` in `T`. Fails on a shape mismatch.
    pub fn pairing(&self, chi: &Character<S>, x: &GroupElement<S>) -> Result<TorusValue<S>> {
        self.check_shape(chi.coords.len())?;
        self.check_shape(x.coords.len())?;
        Ok(self.pair(chi, x))
    }

    /// Unchecked pairing for inputs already known to belong to the group.
    pub(crate) fn pair(&self, chi: &Character<S>, x: &GroupElement<S>) -> TorusValue<S> {
        if let [n] = self.orders.as_slice() {
            return TorusValue::new(chi.coords[0].clone() * x.coords[0].clone(), n.clone());
        }
        let mut acc = Ratio::zero();
        for ((c, a), n) in chi.coords.iter().zip(&x.coords).zip(&self.orders) {
            if c.is_zero() || a.is_zero() {
                continue;
            }
            acc = acc + Ratio::new(c.clone() * a.clone(), n.clone());
        }
        TorusValue::canonicalize(acc)
    }

    /// Element with the given lexicographic index.
    pub fn element_at(&self, mut index: usize) -> GroupElement<S> {
        let mut coords = vec![S::zero(); self.rank()];
        for (slot, n) in coords.iter_mut().zip(&self.orders).rev() {
            let n = n.to_usize().expect("factor order fits usize");
            *slot = S::from_usize(index % n).expect("residue fits scalar");
            index /= n;
        }
        GroupElement { coords }
    }

    /// Lexicographic index of an element; inverse of [`Self::element_at`].
    pub fn index_of(&self, x: &GroupElement<S>) -> usize {
        x.coords.iter().zip(&self.orders).fold(0usize, |acc, (c, n)| {
            acc * n.to_usize().expect("factor order fits usize") + c.to_usize().expect("reduced coordinate")
        })
    }

    pub fn character_at(&self, index: usize) -> Character<S> {
        Character { coords: self.element_at(index).coords }
    }

    /// All elements, lexicographically ordered.
    pub fn elements(&self) -> Result<impl Iterator<Item = GroupElement<S>> + '_> {
        let order = self.checked_order()?;
        Ok((0..order).map(move |i| self.element_at(i)))
    }

    /// All characters, lexicographically ordered.
    pub fn characters(&self) -> Result<impl Iterator<Item = Character<S>> + '_> {
        let order = self.checked_order()?;
        Ok((0..order).map(move |i| self.character_at(i)))
    }

    /// Order of an element (smallest `k >= 1` with `k x = 0`).
    pub fn element_order(&self, x: &GroupElement<S>) -> S {
        x.coords
            .iter()
            .zip(&self.orders)
            .fold(S::one(), |acc, (c, n)| acc.lcm(&(n.clone() / c.gcd(n))))
    }

    /// Smallest subgroup containing `generators`.
    pub fn generated_subgroup(&self, generators: &BTreeSet<GroupElement<S>>) -> Result<BTreeSet<GroupElement<S>>> {
        self.checked_order()?;
        let mut seen = BTreeSet::new();
        seen.insert(self.zero());
        let mut queue = VecDeque::from([self.zero()]);
        while let Some(x) = queue.pop_front() {
            for g in generators {
                let y = self.add(&x, g);
                if seen.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    /// Whether `set` contains 0 and is closed under addition and negation.
    pub fn is_subgroup(&self, set: &BTreeSet<GroupElement<S>>) -> bool {
        set.contains(&self.zero())
            && set.iter().all(|x| set.contains(&self.neg(x)))
            && set.iter().all(|x| set.iter().all(|y| set.contains(&self.add(x, y))))
    }

    /// Parses a comma-separated list of tuples such as `(1,0),(2,1)`.
    pub fn parse_set(&self, text: &str) -> Result<BTreeSet<GroupElement<S>>> {
        crate::parse::tuples::<S>(text)?.into_iter().map(|coords| self.element(coords)).collect()
    }

    pub fn parse_element(&self, text: &str) -> Result<GroupElement<S>> {
        let mut tuples = crate::parse::tuples::<S>(text)?;
        if tuples.len() != 1 {
            return Err(Error::Parse(format!("expected one tuple, got {text:?}")));
        }
        self.element(tuples.remove(0))
    }
}

impl<S: Scalar> fmt::Display for FiniteAbelianGroup<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.orders.iter().enumerate() {
            if i > 0 {
                f.write_str("x")?;
            }
            write!(f, "Z{n}")?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for FiniteAbelianGroup<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<S: Scalar> FromStr for FiniteAbelianGroup<S> {
    type Err = Error;

    /// `Z4xZ9`, `Z12`, ...
    fn from_str(text: &str) -> Result<Self> {
        let orders = text
            .trim()
            .split('x')
            .map(|factor| {
                let digits = factor
                    .trim()
                    .strip_prefix('Z')
                    .ok_or_else(|| Error::Parse(format!("factor {factor:?} must look like Z<n>")))?;
                S::from_str(digits).map_err(|_| Error::Parse(format!("bad factor order {digits:?}")))
            })
            .collect::<Result<Vec<S>>>()?;
        Self::new(orders)
    }
}

impl<S: Scalar> Serialize for FiniteAbelianGroup<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> std::result::Result<Z::Ok, Z::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// A homomorphism `source -> target` given by an integer matrix with one row
/// per target factor and one column per source factor.
#[derive(Clone, PartialEq, Eq)]
pub struct Homomorphism<S: Scalar> {
    source: FiniteAbelianGroup<S>,
    target: FiniteAbelianGroup<S>,
    matrix: Vec<Vec<S>>,
}

impl<S: Scalar> Homomorphism<S> {
    /// Validates shape and well-definedness: the image of each source
    /// generator must have order dividing that generator's order.
    pub fn new(source: FiniteAbelianGroup<S>, target: FiniteAbelianGroup<S>, matrix: Vec<Vec<S>>) -> Result<Self> {
        if matrix.len() != target.rank() {
            return Err(Error::ShapeMismatch { expected: target.rank(), got: matrix.len() });
        }
        let mut reduced = Vec::with_capacity(matrix.len());
        for (row, m) in matrix.into_iter().zip(target.orders()) {
            if row.len() != source.rank() {
                return Err(Error::ShapeMismatch { expected: source.rank(), got: row.len() });
            }
            reduced.push(row.into_iter().map(|a| a.mod_floor(m)).collect::<Vec<_>>());
        }
        for (i, n) in source.orders().iter().enumerate() {
            for (j, m) in target.orders().iter().enumerate() {
                if !(n.clone() * reduced[j][i].clone()).is_multiple_of(m) {
                    return Err(Error::InvalidHomomorphism(format!(
                        "generator {i} of {source} has order {n}, but its image coordinate {} in Z{m} does not vanish after {n} steps",
                        reduced[j][i]
                    )));
                }
            }
        }
        Ok(Homomorphism { source, target, matrix: reduced })
    }

    pub fn from_ints(source: FiniteAbelianGroup<S>, target: FiniteAbelianGroup<S>, matrix: &[&[i64]]) -> Result<Self> {
        let matrix = matrix.iter().map(|row| row.iter().map(|&a| S::of(a)).collect()).collect();
        Self::new(source, target, matrix)
    }

    pub fn identity(group: &FiniteAbelianGroup<S>) -> Self {
        let k = group.rank();
        let matrix =
            (0..k).map(|j| (0..k).map(|i| if i == j { S::one() } else { S::zero() }).collect()).collect();
        Homomorphism { source: group.clone(), target: group.clone(), matrix }
    }

    pub fn source(&self) -> &FiniteAbelianGroup<S> {
        &self.source
    }

    pub fn target(&self) -> &FiniteAbelianGroup<S> {
        &self.target
    }

    pub fn matrix(&self) -> &[Vec<S>] {
        &self.matrix
    }

    pub fn apply(&self, x: &GroupElement<S>) -> Result<GroupElement<S>> {
        self.source.check_shape(x.coords.len())?;
        Ok(self.apply_unchecked(x))
    }

    pub(crate) fn apply_unchecked(&self, x: &GroupElement<S>) -> GroupElement<S> {
        let coords = self
            .matrix
            .iter()
            .zip(self.target.orders())
            .map(|(row, m)| {
                row.iter().zip(&x.coords).fold(S::zero(), |acc, (a, c)| acc + a.clone() * c.clone()).mod_floor(m)
            })
            .collect();
        GroupElement { coords }
    }

    pub fn apply_set(&self, set: &BTreeSet<GroupElement<S>>) -> Result<BTreeSet<GroupElement<S>>> {
        set.iter().map(|x| self.apply(x)).collect()
    }

    pub fn kernel(&self) -> Result<BTreeSet<GroupElement<S>>> {
        let zero = self.target.zero();
        Ok(self.source.elements()?.filter(|x| self.apply_unchecked(x) == zero).collect())
    }

    pub fn image(&self) -> Result<BTreeSet<GroupElement<S>>> {
        Ok(self.source.elements()?.map(|x| self.apply_unchecked(&x)).collect())
    }

    pub fn is_surjective(&self) -> Result<bool> {
        let target_order = self.target.checked_order()?;
        Ok(self.image()?.len() == target_order)
    }

    /// The dual map from characters of the target to characters of the source,
    /// `<dual(xi), x> = <xi, f(x)>`.
    ///
    /// Coordinate `i` of `dual(xi)` is `n_i * sum_j xi_j a_ji / m_j` mod `n_i`;
    /// well-definedness of `f` makes every summand integral.
    pub fn dual_hom(&self) -> Homomorphism<S> {
        let source_orders = self.source.orders();
        let target_orders = self.target.orders();
        let matrix = source_orders
            .iter()
            .enumerate()
            .map(|(i, n)| {
                target_orders
                    .iter()
                    .enumerate()
                    .map(|(j, m)| (n.clone() * self.matrix[j][i].clone() / m.clone()).mod_floor(n))
                    .collect()
            })
            .collect();
        Homomorphism { source: self.target.clone(), target: self.source.clone(), matrix }
    }

    /// Applies a dual homomorphism to a character.
    pub fn apply_character(&self, xi: &Character<S>) -> Result<Character<S>> {
        let x = self.apply(&GroupElement { coords: xi.coords.clone() })?;
        Ok(Character { coords: x.coords })
    }
}

impl<S: Scalar> fmt::Debug for Homomorphism<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {} {:?}", self.source, self.target, self.matrix)
    }
}

/// Returns `true` when every factor order is one, i.e. the group is trivial.
pub fn is_trivial<S: Scalar>(group: &FiniteAbelianGroup<S>) -> bool {
    group.orders().iter().all(One::is_one)
}
