//! Transposed δ-Poisson and δ-Poisson structures on the null-filiform
//! associative algebra μ₀ⁿ, computed exactly.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod exactnum;
pub mod families;
pub mod linalg;
pub mod nullfiliform;
pub mod solver;

pub use error::{Error, Result};
