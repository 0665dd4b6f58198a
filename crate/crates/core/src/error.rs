//! Error type shared by every module.

use std::fmt;

/// Source location inside germ text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parse error at {at}: {message}")]
    Parse { at: Location, message: String },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("not divisible: {0}")]
    NotDivisible(String),

    #[error("not non-degenerate: {0}")]
    NotNonDegenerate(String),

    #[error("not a proper frontal: {0}")]
    NotProperFrontal(String),

    #[error("frame is degenerate at the base point")]
    FrameDegenerate,

    #[error("frame does not span the lift plane: {0}")]
    FrameMismatch(String),

    #[error("V2 lies in the image of the differential at the base point")]
    V2NotTransverse,

    #[error("ambient dimension {dim} is not valid for {class}")]
    InvalidAmbient { class: String, dim: usize },

    #[error("ramification generators did not stabilise below cutoff {0}")]
    NotFiniteAtCutoff(u32),

    #[error("slope witness fails the integrality identity: {0}")]
    WitnessInvalid(String),

    #[error("no target chart: every Jacobian minor vanishes to the working order")]
    NoValidChart,

    #[error("not a spherical frontal curve: {0}")]
    InvalidSphericalCurve(String),

    #[error("curve is not of finite type below cutoff {0}")]
    NotFiniteType(u32),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    /// Process exit code used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Io(_) => 2,
            Error::Usage(_)
            | Error::NotDivisible(_)
            | Error::NotNonDegenerate(_)
            | Error::NotProperFrontal(_)
            | Error::FrameDegenerate
            | Error::FrameMismatch(_)
            | Error::V2NotTransverse
            | Error::InvalidAmbient { .. }
            | Error::NotFiniteAtCutoff(_)
            | Error::WitnessInvalid(_)
            | Error::NoValidChart
            | Error::InvalidSphericalCurve(_)
            | Error::NotFiniteType(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
