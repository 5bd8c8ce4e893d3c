//! Ball spaces: explicit finite families and parametric families over ordinal regions.

mod finite;
mod symbolic;
mod witness;

pub use finite::*;
pub use symbolic::*;
pub use witness::*;
