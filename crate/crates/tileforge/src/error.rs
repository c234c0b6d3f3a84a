//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("element has {got} coordinates, group expects {want}")]
    DimensionMismatch { want: usize, got: usize },
    #[error("direct sum is not direct: {witness} has two representations")]
    Overlap { witness: String },
    #[error("torus modulus {modulus} does not leave the periodic set invariant")]
    PeriodMismatch { modulus: u64 },
    #[error("{what} requires {cost} descriptors, above the bound {bound}")]
    CostExceeded { what: String, cost: String, bound: u64 },
    #[error("region is incompatible with the system: {0}")]
    RegionIncompatible(String),
    #[error("no repeated color found on the scanned window")]
    NoRepeatFound,
    #[error("inputs disagree on fiber {fiber} of the agreement region")]
    AgreementViolation { fiber: i64 },
    #[error("prerequisite violated: {0}")]
    PrereqViolation(String),
    #[error("group has free rank {0}; a finite group is required")]
    NotFinite(usize),
    #[error("stack height {n} must exceed {min}")]
    BadStackHeight { n: u64, min: u64 },
    #[error("tile {0} is empty")]
    EmptyTile(usize),
    #[error("solution cap {cap} exceeded; partial list retained")]
    CapExceeded {
        cap: usize,
        partial: Box<Vec<crate::tiling::Assignment>>,
    },
    #[error("bump position {pos} out of range for modulus {modulus}")]
    BadBumpPosition { pos: i64, modulus: u64 },
    #[error("image table is not a permutation")]
    NotAPermutation,
    #[error("point is not in the Hamming cube of Z_4^2")]
    NotInCube,
    #[error("permutation does not lie in the requested fiber")]
    NotInFiber,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("renderable solutions must live on a 2-dimensional torus")]
    NotTwoDimensional,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
