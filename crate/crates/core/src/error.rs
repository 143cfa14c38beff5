use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: invalid item {token:?} (expected a non-negative integer)")]
    Parse {
        path: PathBuf,
        line: usize,
        token: String,
    },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no prior-work bound is available for this task/mode")]
    UnsupportedPriorWork,

    #[error("fewer than {k} itemsets with positive support (found {available})")]
    InsufficientItemsets { k: usize, available: usize },

    #[error("instance too large for exhaustive search: {0}")]
    InstanceTooLarge(String),

    #[error(
        "top-K condition failed after {attempts} attempt(s): first-stage f^(K) was {fk}, \
         which needs phi >= {min_phi:.3} to clear the 2*sqrt(2)/(eps*phi) threshold"
    )]
    TopkConditionFailed { attempts: u32, fk: f64, min_phi: f64 },

    #[error("pattern line {line}: {reason}")]
    PatternParse { line: usize, reason: String },

    #[error("pattern collection holds {found}, expected {expected}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },
}
