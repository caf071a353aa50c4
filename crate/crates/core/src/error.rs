use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::RegimeMiss;

/// Which side of the confusion table left the false omission rate degenerate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroSide {
    FalseNegatives,
    TrueNegatives,
    Both,
}

/// Modelling preconditions that are checked rather than assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Assumption {
    /// The test set must contain at least one false negative and one true
    /// negative, so that `0 < p < 1`.
    NonDegenerateOmission { zero: ZeroSide },
}

impl std::fmt::Display for Assumption {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Assumption::NonDegenerateOmission { zero } => {
                let which = match zero {
                    ZeroSide::FalseNegatives => "no false negatives",
                    ZeroSide::TrueNegatives => "no true negatives",
                    ZeroSide::Both => "neither false negatives nor true negatives",
                };
                write!(
                    f,
                    "the test set must contain at least one false negative and one true negative ({which} observed)"
                )
            }
        }
    }
}

/// Failure probability variant expected by an operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    /// One failure per dormant defect.
    X,
    /// A Weibull hazard injected per dormant defect.
    Y,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at record {index}: {message}")]
    Parse { index: usize, message: String },

    #[error("assumption violated: {0}")]
    AssumptionViolation(Assumption),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation requires the {expected:?} variant of the outcome model")]
    WrongVariant { expected: Variant },

    #[error(
        "out of regime: threshold {} is not strictly below expectation {} (delta = {})",
        .0.threshold, .0.mu, .0.delta
    )]
    OutOfRegime(RegimeMiss),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
