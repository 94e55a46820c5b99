// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("missing field `{path}`")]
    MissingField { path: String },

    #[error("unknown field `{path}`")]
    UnknownField { path: String },

    #[error("invalid value at `{path}`: {message}")]
    InvalidValue { path: String, message: String },

    #[error("invalid combination: {0}")]
    InvalidCombination(String),

    #[error("`{path}` = {value} is outside {bound}")]
    OutOfRange { path: String, value: f64, bound: String },

    #[error("unknown technology node `{0}`")]
    UnknownNode(String),

    #[error("unknown {kind} profile `{name}`")]
    UnknownProfile { kind: &'static str, name: String },

    #[error("fixture `{}`: {message}", path.display())]
    Fixture { path: PathBuf, message: String },

    #[error("area ratio list has {got} entries for {expected} dies")]
    RatioMismatch { expected: usize, got: usize },

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("die area must be positive, got {0} cm²")]
    NonPositiveArea(f64),

    #[error("average wire length is not positive ({0}); Rent exponent must exceed 0.5")]
    NonPositiveWireLength(f64),

    #[error("expected {expected} {what} yields, got {got}")]
    CardinalityMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("die of {area} cm² does not fit on a {diameter} cm wafer")]
    DieLargerThanWafer { area: f64, diameter: f64 },

    #[error("{layers} BEOL layers requested but node `{node}` provides {max}")]
    LayerCountExceedsProfile { node: String, layers: u32, max: u32 },

    #[error("sweep path `{0}` does not resolve against the configuration")]
    UnresolvablePath(String),

    #[error("sweep of {size} points exceeds the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },

    #[error("{0}")]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by the user's configuration rather than the
    /// environment (file system, serialization of output).
    pub fn is_validation(&self) -> bool {
        !matches!(
            self,
            Error::Io(_) | Error::Csv(_) | Error::Json(_) | Error::Fixture { .. }
        )
    }
}
