//! Exact scalars: rationals, single radical extensions, Laurent polynomials.

mod mpoly;
mod radext;
mod rat;
mod scalar;

pub use mpoly::{registry, MPoly, Registry};
pub use radext::{rat_root, RadExt};
pub use rat::Rat;
pub use scalar::{Field, Scalar};
