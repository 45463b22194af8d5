//! Orbit segments on the leaf torus: certified density checks, empirical
//! ergodization times, and the explicit upper bounds.

mod bounds;
mod bracket;
mod density;
mod leaf;

pub use bounds::{
    c_d_alpha, constructive_hit, diophantine_bound, empirical_gamma, theorem1_bound,
    DiophantineReport, EmpiricalGamma, HitReport, Theorem1Bound,
};
pub use bracket::{
    ergodization_time_bracket, BracketOptions, ErgodizationBracket, HorizonStrategy, Probe,
};
pub use density::{distance_to_orbit, grid_size, is_delta_dense, DensityVerdict, Verdict, GRID_CAP};
