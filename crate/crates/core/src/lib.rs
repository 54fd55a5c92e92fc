//! Exact construction and analysis of dual interpolatory subdivision schemes
//! of arbitrary arity.
//!
//! Masks are built from prescribed half-integer samples of the limit function
//! by solving an exact rational linear system ([`construct`]), checked against
//! the algebraic identities that characterize refinability and dual
//! interpolation ([`charax`]), and analyzed numerically ([`analyze`]).

pub mod analyze;
pub mod catalog;
pub mod charax;
pub mod construct;
pub mod error;
pub mod exactalg;
pub mod io;
pub mod samples;
pub mod scheme;

pub use error::{Error, Result};
pub use exactalg::{rat, LaurentPoly, RatMatrix, Rational};
pub use samples::SampleSet;
pub use scheme::{Mask, SchemeDescriptor, Symmetry};

use num_traits::ToPrimitive;

/// Nearest `f64`; saturates to `+-inf` for huge magnitudes.
pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        if x.numer().sign() == num_bigint::Sign::Minus {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}
