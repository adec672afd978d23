use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid reservoir parameters: {0}")]
    InvalidParams(String),

    #[error("time must be non-negative (got {0})")]
    NegativeTime(f64),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("characteristic roots are degenerate; use the ODE solver")]
    DegenerateRoots,

    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },

    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },

    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("value {value} outside the admissible range {range}")]
    OutOfRange { value: f64, range: &'static str },

    #[error("invalid measurement schedule: {0}")]
    InvalidSchedule(String),
}

pub type Result<T> = std::result::Result<T, Error>;
