use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("separation unsatisfiable after {attempts} attempts (need > {required} at a best arm)")]
    SeparationUnsatisfiable { attempts: usize, required: f64 },

    #[error("epsilon must lie in (0, 1), got {0}")]
    InvalidEpsilon(f64),

    #[error("arm {arm} out of range (instance has {num_arms} arms)")]
    ArmOutOfRange { arm: usize, num_arms: usize },

    #[error("horizon of {0} rounds reached")]
    HorizonReached(u64),

    #[error("insufficient budget: {0}")]
    InsufficientBudget(String),

    #[error("matrix is identically zero")]
    ZeroMatrix,

    #[error("invalid config `{field}`: {message}")]
    InvalidConfig { field: String, message: String },

    #[error("unknown algorithm `{0}`")]
    UnknownAlgorithm(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}
