// SPDX-License-Identifier: Apache-2.0

use thiserror::Error;

/// Which joint term `P_ij = p(a=α_i)·p(β_j|α_i)` vanished.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JointTerm {
    /// Index of the a-value (0-based).
    pub a_index: usize,
    /// Index of the b-value (0-based).
    pub b_index: usize,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A value violates a structural invariant (dimensions, indices, normalization).
    #[error("structural error in {what}: {message}")]
    Structural { what: String, message: String },

    #[error("context has zero measure")]
    DegenerateContext,

    #[error("type mismatch: {0}")]
    TypeMismatch(String),

    #[error("value {value:?} is not in the alphabet of variable {variable:?}")]
    UnknownValue { variable: String, value: String },

    #[error("joint term P_{}{} vanishes", .0.a_index + 1, .0.b_index + 1)]
    DegenerateDenominator(JointTerm),

    #[error("non-finite interference coefficient {0}")]
    NonFinite(f64),

    #[error("degenerate entry has no phase")]
    NoPhase,

    #[error("wrong regime: {0}")]
    WrongRegime(String),

    #[error("transition matrix is not doubly stochastic (row sums {row_sums:?}, column sums {column_sums:?})")]
    NotDoublyStochastic {
        row_sums: Vec<f64>,
        column_sums: Vec<f64>,
    },
}

impl Error {
    pub(crate) fn structural(what: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Structural {
            what: what.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
