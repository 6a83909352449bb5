use thiserror::Error;

use crate::root_datum::Weight;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown root datum `{0}`")]
    UnknownDatum(String),
    #[error("invalid Cartan data: {0}")]
    InvalidCartan(String),
    #[error("simple {0} are linearly dependent")]
    DependentRoots(&'static str),
    #[error("index {index} out of range for a datum with {count} simple roots")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("weight has {found} coordinates, datum has rank {expected}")]
    RankMismatch { expected: usize, found: usize },
    #[error("weight {0} is not dominant")]
    NotDominant(Weight),
    #[error("{0} is not a nonnegative integer combination of simple roots")]
    NotInRootCone(Weight),
    #[error("crystal of highest weight {lambda} exceeds the element guard of {limit}")]
    GuardExceeded { lambda: Weight, limit: usize },
    #[error("crystals are defined over different root data")]
    DatumMismatch,
    #[error("path is not generated from a dominant straight path: {0}")]
    ForeignPath(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
