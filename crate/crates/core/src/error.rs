use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input file not found: {0}")]
    MissingFile(PathBuf),
    #[error("column `{0}` not present in CSV header")]
    MissingColumn(String),
    #[error("row {row}: value `{value}` is not a finite number")]
    NonNumericValue { row: usize, value: String },
    #[error("series contains no values")]
    EmptySeries,
    #[error("malformed CSV: {0}")]
    Csv(String),
    #[error("window size {window} exceeds series length {len}")]
    WindowTooLarge { window: usize, len: usize },
    #[error("window size must be positive")]
    WindowNonPositive,
    #[error("slice {ordinal} does not match the series it was paired with")]
    Mismatch { ordinal: usize },
    #[error("no slice has a following value to use as a target")]
    InsufficientExamples,
    #[error("need at least 2 supervised examples to split, got {count}")]
    TooFewExamples { count: usize },
    #[error("fraction {0} is outside (0, 1)")]
    InvalidFraction(f64),
    #[error("slice of length {len} is too short, need at least {needed}")]
    SliceTooShort { len: usize, needed: usize },
    #[error("feature `{name}` failed on slice {ordinal}: {source}")]
    Feature {
        name: String,
        ordinal: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("function sequence must contain at least one function")]
    EmptyFunctionSequence,
    #[error("duplicate feature name `{0}`")]
    DuplicateFeatureName(String),
    #[error("training row range is empty or out of bounds")]
    EmptyTrainRange,
    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: usize, found: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("gradient component {index} is not finite")]
    NonFiniteGradient { index: usize },
    #[error("loss became non-finite at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("series of length {len} is too short, need at least {needed}")]
    SeriesTooShort { len: usize, needed: usize },
    #[error("checkpoint expects a {0} scaler but none is stored")]
    ScalerMissing(&'static str),
    #[error("example range {start}..{end} is invalid for {available} examples (first test index {first_test})")]
    RangeOutOfBounds {
        start: usize,
        end: usize,
        available: usize,
        first_test: usize,
    },
    #[error("need at least {needed} values, got {len}")]
    TooFewValues { len: usize, needed: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable identifier for machine-readable error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::MissingFile(_) => "MissingFile",
            Error::MissingColumn(_) => "MissingColumn",
            Error::NonNumericValue { .. } => "NonNumericValue",
            Error::EmptySeries => "EmptySeries",
            Error::Csv(_) => "Csv",
            Error::WindowTooLarge { .. } => "WindowTooLarge",
            Error::WindowNonPositive => "WindowNonPositive",
            Error::Mismatch { .. } => "Mismatch",
            Error::InsufficientExamples => "InsufficientExamples",
            Error::TooFewExamples { .. } => "TooFewExamples",
            Error::InvalidFraction(_) => "InvalidFraction",
            Error::SliceTooShort { .. } => "SliceTooShort",
            Error::Feature { .. } => "Feature",
            Error::EmptyFunctionSequence => "EmptyFunctionSequence",
            Error::DuplicateFeatureName(_) => "DuplicateFeatureName",
            Error::EmptyTrainRange => "EmptyTrainRange",
            Error::ShapeMismatch { .. } => "ShapeMismatch",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::EmptyInput => "EmptyInput",
            Error::NonFiniteGradient { .. } => "NonFiniteGradient",
            Error::NonFiniteLoss { .. } => "NonFiniteLoss",
            Error::SeriesTooShort { .. } => "SeriesTooShort",
            Error::ScalerMissing(_) => "ScalerMissing",
            Error::RangeOutOfBounds { .. } => "RangeOutOfBounds",
            Error::TooFewValues { .. } => "TooFewValues",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
