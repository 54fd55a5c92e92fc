use crate::exactalg::Rational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("arity must be at least 2, got {0}")]
    InvalidArity(u32),
    #[error("mask has no nonzero coefficient")]
    EmptyMask,
    #[error("lattice density must be positive")]
    InvalidDensity,
    #[error("shift {tau} does not land on the lattice Z/{lattice}")]
    ShiftLatticeMismatch { tau: Box<Rational>, lattice: u32 },
    #[error("sample lattice Z/{found} cannot be restricted to Z/{expected}")]
    LatticeMismatch { expected: u32, found: u32 },
    #[error("no convergent dual interpolatory scheme exists for arity 2")]
    ArityTwoUnsupported,
    #[error("dual characterization requires shift 1/2, mask has shift {tau}")]
    ShiftMismatch { tau: Box<Rational> },
    #[error("samples are not interpolatory (values at integers must be delta)")]
    NotInterpolatory,
    #[error("empty coefficient window: {0}")]
    InvalidWindow(String),
    #[error("sample at {x} lies outside the support window [-{half_width}, {half_width}]")]
    SampleOutsideSupport {
        x: Box<Rational>,
        half_width: Box<Rational>,
    },
    #[error("symbol is not divisible by the smoothing factor of order {order}")]
    NotDivisible { order: u32 },
    #[error("seed samples do not satisfy the refinement equation on their lattice")]
    SeedInconsistent,
    #[error("no contractive parameter found in the search interval")]
    NoContractivePoint,
    #[error("contractive parameters do not form an interval in the search range")]
    NotAnInterval,
    #[error("expected a one-parameter family, got dimension {0}")]
    NotOneDimensional(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("cannot parse {0}")]
    Parse(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
