use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty batch of profiles")]
    EmptyBatch,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative coordinate {value} at index {index}")]
    NegativeCoordinate { index: usize, value: f64 },
    #[error("all profiles have zero norm")]
    ZeroNorm,
    #[error("profile is not unit norm (norm = {0})")]
    NotUnitNorm(f64),
    #[error("effort {0} outside [0, 1]")]
    EffortOutOfRange(f64),
    #[error("similarity {0} must be positive")]
    NonPositiveSimilarity(f64),
    #[error("similarity {0} outside (0, 1]")]
    SimilarityOutOfRange(f64),
    #[error("threshold {0} outside (0, 1)")]
    InvalidThreshold(f64),
    #[error("discount rate {0} must be positive and finite")]
    InvalidRate(f64),
    #[error("detection probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid effort schedule: {0}")]
    InvalidSchedule(String),
    #[error("horizon must be positive")]
    EmptyHorizon,
    #[error("root not bracketed on [{lo}, {hi}] (f = {f_lo}, {f_hi})")]
    BracketFailure { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
    #[error("invalid beta shape parameters ({v}, {w})")]
    InvalidShape { v: f64, w: f64 },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("sample {value} at index {index} is not strictly inside (0, 1)")]
    SampleOutOfRange { index: usize, value: f64 },
    #[error("value {value} at index {index} outside [{lo}, {hi}]")]
    ValueOutOfRange { index: usize, value: f64, lo: f64, hi: f64 },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("invalid CDF table at row {index}: {reason}")]
    InvalidCdfTable { index: usize, reason: &'static str },
    #[error("no improvement cutoff observable: cutoff {cutoff} >= threshold {theta}")]
    CutoffNotBelowThreshold { cutoff: f64, theta: f64 },
    #[error("x = {0} outside [0, 1]")]
    OutsideUnitInterval(f64),
    #[error("malformed input at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        let line = e.position().map_or(0, |p| p.line() as usize);
        match e.kind() {
            csv::ErrorKind::Io(io) => Error::Io(io.to_string()),
            _ => Error::Parse { line, reason: e.to_string() },
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
