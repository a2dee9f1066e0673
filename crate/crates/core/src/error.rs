use thiserror::Error;

use crate::universe::{Handle, Sort};

/// Errors raised by the kernel operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("duplicate species id `{0}`")]
    DuplicateSpecies(String),
    #[error("unknown species `{0}`")]
    UnknownSpecies(String),
    #[error("macro-atom label must be nonempty")]
    EmptyLabel,
    #[error("handle {0} does not exist in this universe")]
    DanglingHandle(Handle),
    #[error("handle {handle} is a {found}, expected a qset")]
    NotAQset { handle: Handle, found: Sort },
    #[error("identity undefined for m-atoms (handle {0})")]
    IdentityUndefined(Handle),
    #[error("relation invalid: pair component {handle} is not a member of the {side} qset")]
    InvalidRelation { handle: Handle, side: &'static str },
    #[error("{0} is not indistinguishable from any element of the quasi-function's domain")]
    Unmapped(Handle),
    #[error("{0} is not a member of the carrier")]
    NotInCarrier(Handle),
    #[error("point {0:?} does not lie in the region V")]
    OutsideRegion(Vec<f64>),
    #[error("distance matrix must be {expected}x{expected} with finite entries")]
    BadDistanceMatrix { expected: usize },
    #[error("ball radius must be positive and finite, got {0}")]
    BadRadius(f64),
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("region needs at least one ball")]
    NoBalls,
    #[error("sample point {0:?} is not strictly inside any ball")]
    SampleOutsideBalls(Vec<f64>),
    #[error("constant c must be positive and finite, got {0}")]
    NonPositiveC(f64),
    #[error(
        "A2 violated: sup-diameter {sup_diameter} of balls {} and {} exceeds 2c = {}",
        witness.0, witness.1, 2.0 * c
    )]
    DiameterExceeded {
        sup_diameter: f64,
        c: f64,
        witness: (usize, usize),
    },
    #[error("weak singleton of the new micro-atoms has quasi-cardinality {0}, A1 requires 2")]
    PairCardinality(usize),
    #[error("axis must have unit norm (within 1e-12), got norm {0}")]
    NonUnitAxis(f64),
    #[error("axis vector must be nonzero and finite")]
    DegenerateAxis,
    #[error("sample count must be positive")]
    NoSamples,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
