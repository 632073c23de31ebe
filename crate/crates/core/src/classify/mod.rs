//! Transformation laws, canonical forms with witnesses, invariants, and
//! isomorphism decisions within a family.

mod canon;
mod json;
mod transform;

pub use canon::{canonicalize, invariants, iso_test, CanonicalForm, InvariantTuple, IsoDecision, IsoWitness, Modulus};
pub use transform::{push_params, transform_params, verify_transform_formula};
