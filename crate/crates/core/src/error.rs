use std::io;

/// Broad classes of failure, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Bad arguments or inconsistent metadata.
    Config,
    /// Reading or writing files.
    Io,
    /// A numerical precondition does not hold.
    Numerical,
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("dimension {0} is outside the supported range 1..=16")]
    UnsupportedDimension(usize),
    #[error("element is a zero divisor or numerically singular")]
    ZeroDivisor,
    #[error("invalid direction: {0}")]
    InvalidDirection(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("bad magic: expected HSAS1 header")]
    MagicMismatch,
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("malformed header: {0}")]
    HeaderParse(String),
    #[error("csv: {0}")]
    Csv(String),
    #[error("axis {axis} has {len} samples, at least 3 are needed")]
    TooFewSamples { axis: usize, len: usize },
    #[error("spectrum has negative-frequency content (relative norm {ratio:.3e})")]
    NegativeSupport { ratio: f64 },
    #[error("finite-difference step {h} leaves the upper space on axis {axis}")]
    StepTooLarge { axis: usize, h: f64 },
    #[error("evaluation point lies on the integration circle of axis {axis}")]
    OnBoundary { axis: usize },
    #[error("sample count {0} along a circle must be even")]
    OddSampleCount(usize),
    #[error("height y must be strictly positive, got {0}")]
    NonPositiveHeight(f64),
    #[error("point hits the pole of the Mobius map on axis {axis}")]
    MobiusPole { axis: usize },
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io(_) | Error::MagicMismatch | Error::Truncated { .. } | Error::HeaderParse(_) | Error::Csv(_) => {
                ErrorClass::Io
            }
            Error::DimensionMismatch { .. }
            | Error::UnsupportedDimension(_)
            | Error::InvalidDirection(_)
            | Error::InvalidLattice(_)
            | Error::InvalidParameter(_)
            | Error::ShapeMismatch(_) => ErrorClass::Config,
            _ => ErrorClass::Numerical,
        }
    }

    /// Short stable identifier for machine-readable reports.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::UnsupportedDimension(_) => "unsupported_dimension",
            Error::ZeroDivisor => "zero_divisor",
            Error::InvalidDirection(_) => "invalid_direction",
            Error::InvalidLattice(_) => "invalid_lattice",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::MagicMismatch => "magic_mismatch",
            Error::Truncated { .. } => "truncated",
            Error::ShapeMismatch(_) => "shape_mismatch",
            Error::HeaderParse(_) => "header_parse",
            Error::Csv(_) => "csv",
            Error::TooFewSamples { .. } => "too_few_samples",
            Error::NegativeSupport { .. } => "negative_support",
            Error::StepTooLarge { .. } => "step_too_large",
            Error::OnBoundary { .. } => "on_boundary",
            Error::OddSampleCount(_) => "odd_sample_count",
            Error::NonPositiveHeight(_) => "non_positive_height",
            Error::MobiusPole { .. } => "mobius_pole",
            Error::NotConverged(_) => "not_converged",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
