//! Numerical analysis of a scheme: limit-function values, regularity bounds,
//! polynomial reproduction and curve subdivision.

mod curve;
mod refine;
mod regularity;
mod reproduce;

pub use curve::{subdivide_curve, subdivide_sequence, Boundary, Polyline};
pub use refine::{refine_values, refine_values_with, LatticeFunction, DEFAULT_EXACT_BITS};
pub use regularity::{
    contractivity_bound, contractivity_range, difference_scheme, level_norms, LineRegularity, RangeSearch,
    RegularityReport,
};
pub use reproduce::{reproduction_degree, reproduction_errors};

/// Levels of the iterated difference scheme examined by default.
pub const DEFAULT_LEVELS: u32 = 3;
/// Refinement depth used for evaluation by default.
pub const DEFAULT_DEPTH: u32 = 4;
/// Tolerance for polynomial reproduction checks.
pub const DEFAULT_REPRODUCTION_TOL: f64 = 1e-8;
