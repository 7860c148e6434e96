use thiserror::Error;

use crate::expressions::Family;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),

    #[error(
        "difference {value} lies outside the canonical interval [{lo}, {hi}] for d = {dimension}"
    )]
    OutsideInterval {
        value: i64,
        dimension: usize,
        lo: i64,
        hi: i64,
    },

    #[error("dimension mismatch: expected d = {expected}, got d = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid joint distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid local model: {0}")]
    InvalidModel(String),

    #[error("invalid quantum setup: {0}")]
    InvalidSetup(String),

    #[error("noise weight p = {0} is outside [0, 1]")]
    NoiseOutOfRange(f64),

    #[error("operation requires an Id expression, got family {0}")]
    FamilyMismatch(Family),

    #[error(
        "brute-force enumeration of {strategies} strategies exceeds the cap of {cap}; \
         use the case analysis (local_bound_cases) instead"
    )]
    EnumerationCap { strategies: u128, cap: u128 },

    #[error("parameter vector has length {found}, expected {expected}")]
    ParameterLength { expected: usize, found: usize },

    #[error("invalid optimization problem: {0}")]
    InvalidProblem(String),

    #[error("cross-check failed: {0}")]
    CrossCheck(String),
}
