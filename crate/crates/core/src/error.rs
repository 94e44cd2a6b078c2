use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the evaluation engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid triangular fuzzy number ({l}, {m}, {u}): need 0 < l <= m <= u")]
    InvalidTfn { l: f64, m: f64, u: f64 },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("comparison matrix needs at least 2 alternatives, got {0}")]
    TooFewAlternatives(usize),

    #[error("comparison matrix is not square: {alternatives} alternatives but row {row} has {len} cells")]
    NotSquare {
        alternatives: usize,
        row: usize,
        len: usize,
    },

    #[error("duplicate identifier `{0}`")]
    DuplicateId(String),

    #[error("comparison matrix diagonal cell ({index}, {index}) is not (1, 1, 1)")]
    NonIdentityDiagonal { index: usize },

    #[error("weights are all zero, no ranking is possible")]
    ZeroWeights,

    #[error("invalid weight {weight} for `{id}`")]
    InvalidWeight { id: String, weight: f64 },

    #[error("weights sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("unknown service category `{0}`")]
    UnknownCategory(String),

    #[error("invalid weight rule configuration: {0}")]
    InvalidRules(String),

    #[error("user counts are both zero")]
    NoUsers,

    #[error("unknown importance scale `{0}`")]
    UnknownScale(String),

    #[error("judgment ({l}, {m}, {u}) for {criterion} is not on the importance scale")]
    OffScaleJudgment {
        criterion: String,
        l: f64,
        m: f64,
        u: f64,
    },

    #[error("invalid parameter profile for {parameter}: {reason}")]
    InvalidProfile { parameter: String, reason: String },

    #[error("invalid measurement {value} for {parameter}")]
    InvalidMeasurement { parameter: String, value: f64 },

    #[error("key mismatch: {0}")]
    KeyMismatch(String),

    #[error("score {0} is outside [0, 1]")]
    ScoreOutOfRange(f64),

    #[error("invalid classification thresholds: average {average}, good {good}")]
    InvalidThresholds { average: f64, good: f64 },

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("failed to parse config: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("measurements row {row}: {message}")]
    Measurement { row: usize, message: String },

    #[error("RAN `{0}` has no measured applications")]
    EmptyRan(String),

    #[error("unknown application `{0}`")]
    UnknownApplication(String),

    #[error("invalid directive: {0}")]
    InvalidDirective(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// True for failures reading or writing files, as opposed to bad content.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
