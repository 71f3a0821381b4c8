use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("alpha must lie in (0, 2], got {0}")]
    AlphaDomain(f64),

    #[error("invalid Lévy parameters: {0}")]
    LevyParams(String),

    #[error("no root of the C(alpha) equation bracketed for alpha = {alpha}")]
    NoBracket { alpha: f64 },

    #[error("root finder for C(alpha = {alpha}) exhausted its budget of {iterations} iterations")]
    BudgetExhausted { alpha: f64, iterations: usize },

    #[error("truncated Lévy flight rejected {0} consecutive draws")]
    TruncationCap(usize),

    #[error("invalid variable specification at index {index}: {reason}")]
    InvalidVariable { index: usize, reason: String },

    #[error("invalid design space: {0}")]
    InvalidSpace(String),

    #[error("design vector length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("objective evaluation failed at {vector:?}: {message}")]
    Evaluation { vector: Vec<f64>, message: String },

    #[error("invalid settings: {0}")]
    InvalidSettings(String),

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),

    #[error("problem `{0}` is registered but not implemented")]
    NotImplemented(String),

    #[error("data file `{name}` not found; {hint}")]
    MissingData { name: String, hint: String },

    #[error("TSPLIB parse error at line {line}: {message}")]
    TspParse { line: usize, message: String },

    #[error("unsupported TSPLIB edge weight type `{0}`")]
    UnsupportedEdgeWeight(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("permutation of length {0} is too short for this operator (need at least 4)")]
    PermutationTooShort(usize),

    #[error("trial {trial} failed: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("report schema error: {0}")]
    Schema(String),

    #[error("config error in {path}: {message}")]
    Config { path: PathBuf, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
