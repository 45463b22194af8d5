//! Exact real scalars over a declared set of rationally independent constants,
//! with certified sign determination by interval refinement.

mod constant;
mod dyadic;
mod interval;
mod real;

pub use constant::{BasisConstant, ConstantKind, ConstantSet};
pub use dyadic::DyadicInterval;
pub use interval::{F64Interval, Interval, RatInterval};
pub use real::{
    dot, offset, refinement_cap, set_refinement_cap, RealScalar, DEFAULT_REFINEMENT_CAP,
};
