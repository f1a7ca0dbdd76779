//! Polars, quasi-convex hulls and qc-density certificates for finite abelian
//! groups and for truncated models of `T`, `Z_p`, their products and the
//! solenoid dual of `Q`.
//!
//! All arithmetic is exact. The core types are generic over the integer
//! [`Scalar`]; the aliases below fix it to `i64` (fast, desk scale) or
//! `BigInt` (no overflow).

pub mod arith;
pub mod determining;
pub mod error;
pub mod finite;
pub mod models;
pub mod parse;
pub mod qc;
pub mod report;
pub mod scalar;
pub mod search;
pub mod solenoid;
pub mod torus;

pub use error::{Error, Result};
pub use scalar::Scalar;

use num_bigint::BigInt;

pub type Torus = torus::TorusValue<i64>;
pub type BigTorus = torus::TorusValue<BigInt>;
pub type Arc = torus::OpenArc<i64>;
pub type BigArc = torus::OpenArc<BigInt>;
pub type FiniteGroup = finite::FiniteAbelianGroup<i64>;
pub type BigFiniteGroup = finite::FiniteAbelianGroup<BigInt>;
pub type Point = models::ModelPoint<i64>;
pub type ModelChar = models::ModelCharacter<i64>;
pub type SolenoidPoint = solenoid::SolenoidElement<i64>;
pub type RationalChar = solenoid::RationalCharacter<i64>;
