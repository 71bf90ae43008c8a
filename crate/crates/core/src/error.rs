// SPDX-License-Identifier: MIT OR Apache-2.0

//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced anywhere in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// The weight container is structurally invalid.
    #[error("malformed container at byte {offset}: {message}")]
    Format { offset: u64, message: String },

    /// A tensor's shape disagrees with the header or with another tensor.
    #[error("dimension mismatch in tensor `{tensor}` (record at byte {offset}): expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        tensor: String,
        offset: u64,
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("non-finite entry in tensor `{tensor}` at element {index} (record at byte {offset})")]
    NonFiniteTensor {
        tensor: String,
        offset: u64,
        index: usize,
    },

    #[error("required tensor `{0}` missing from container")]
    MissingTensor(String),

    #[error("vocabulary: {0}")]
    Vocabulary(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("token id {id} out of range for vocabulary of size {size}")]
    IdOutOfRange { id: usize, size: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A gate pre-activation or activation became NaN or infinite.
    #[error("non-finite value in {gate} gate (layer {layer}, step {step}, unit {unit})")]
    NonFiniteGate {
        gate: &'static str,
        layer: usize,
        step: usize,
        unit: usize,
    },

    /// A relevance split produced NaN or infinity (zero denominator with ε = 0).
    #[error(
        "non-finite relevance in split `{stage}` at element {index} (denominator {denominator})"
    )]
    NonFiniteRelevance {
        stage: String,
        index: usize,
        denominator: f64,
    },

    #[error("words missing from vocabulary: {}", .0.join(", "))]
    MissingWords(Vec<String>),

    #[error("record has no `{0}` tag")]
    MissingTag(String),

    #[error("correlation undefined: {0}")]
    UndefinedCorrelation(&'static str),

    #[error("degenerate regression: {0}")]
    DegenerateRegression(&'static str),

    #[error("JSON error in {context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },

    #[error("CSV error in {context}: {source}")]
    Csv {
        context: String,
        #[source]
        source: csv::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(context: impl Into<String>, source: serde_json::Error) -> Self {
        Error::Json {
            context: context.into(),
            source,
        }
    }

    pub(crate) fn csv(context: impl Into<String>, source: csv::Error) -> Self {
        Error::Csv {
            context: context.into(),
            source,
        }
    }
}
