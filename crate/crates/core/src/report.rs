//! Certificates attesting qc-density, shared by every context.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::scalar::Scalar;
use crate::torus::TorusValue;

/// How much of the dual group a verdict covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scope {
    /// Every character of a finite group was examined.
    Exact,
    /// Only the characters inside the named bound were examined.
    UpToBound(String),
}

impl Scope {
    pub fn is_exact(&self) -> bool {
        matches!(self, Scope::Exact)
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scope::Exact => f.write_str("exact"),
            Scope::UpToBound(b) => write!(f, "up to character bound {b}"),
        }
    }
}

impl Serialize for Scope {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// A character together with a point it sends outside `T_+`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate<C, P, S: Scalar> {
    pub character: C,
    pub witness: P,
    pub value: TorusValue<S>,
}

/// Per-character certificates for qc-density of a set.
///
/// One certificate per nonzero character examined; `counterexample` holds the
/// first character (in enumeration order) for which no witness exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessReport<C, P, S: Scalar> {
    pub scope: Scope,
    pub characters_checked: usize,
    pub certificates: Vec<Certificate<C, P, S>>,
    pub counterexample: Option<C>,
}

impl<C, P, S: Scalar> WitnessReport<C, P, S> {
    pub fn verified(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Builds a report from per-character search outcomes listed in enumeration order.
pub(crate) fn assemble<C, P, S: Scalar>(
    scope: Scope,
    outcomes: Vec<(C, Option<(P, TorusValue<S>)>)>,
) -> WitnessReport<C, P, S> {
    let characters_checked = outcomes.len();
    let mut certificates = Vec::with_capacity(characters_checked);
    let mut counterexample = None;
    for (character, found) in outcomes {
        match found {
            Some((witness, value)) => certificates.push(Certificate { character, witness, value }),
            None => {
                if counterexample.is_none() {
                    counterexample = Some(character);
                }
            }
        }
    }
    WitnessReport { scope, characters_checked, certificates, counterexample }
}
