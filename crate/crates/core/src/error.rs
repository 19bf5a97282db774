use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid {field}: {message}")]
    Validation { field: &'static str, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid bracket [{lo}, {hi}]: endpoint signs {sign_lo} and {sign_hi} do not enclose a root")]
    InvalidBracket {
        lo: f64,
        hi: f64,
        sign_lo: i8,
        sign_hi: i8,
    },

    #[error("energy {energy} is not an eigenvalue (boundary mismatch {mismatch:.3e})")]
    StaleEnergy { energy: f64, mismatch: f64 },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("cannot read potential table {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(field: &'static str, message: impl Into<String>) -> Error {
    Error::Validation {
        field,
        message: message.into(),
    }
}
