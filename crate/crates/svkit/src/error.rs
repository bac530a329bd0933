use std::io;

use svkit_core::metrics::Scheme;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("unknown case `{0}` (expected 1, 2, example1 or example2)")]
    UnknownCase(String),

    #[error("{scheme} k={k} n={n}: {source}")]
    Run {
        scheme: Scheme,
        k: usize,
        n: usize,
        #[source]
        source: svkit_core::Error,
    },

    #[error(transparent)]
    Core(#[from] svkit_core::Error),

    #[error("invalid value `{value}` for `{key}`: {reason}")]
    InvalidValue {
        key: String,
        value: String,
        reason: String,
    },

    #[error("unknown configuration key `{0}`")]
    UnknownKey(String),

    #[error("config line {line}: {message}")]
    ConfigSyntax { line: usize, message: String },

    #[error("nothing to write: the study produced no reports")]
    EmptyStudy,

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
