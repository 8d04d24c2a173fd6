use thiserror::Error;

/// Errors shared across the crate. Every operation that can fail returns
/// exactly one of these variants; the variant name is stable API (the CLI
/// prints it on exit code 1).
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Row lengths or entries fail the required weakly-decreasing order,
    /// or an entry is zero/negative where a positive height is required.
    #[error("MonotonicityViolation: {0}")]
    MonotonicityViolation(String),

    /// The box is not an addable (resp. removable) corner of the diagram.
    #[error("IllegalCorner: ({0}, {1}, {2}) is not a legal corner here")]
    IllegalCorner(u32, u32, u32),

    /// Prefix of length `k` of a growth path is not downward closed.
    #[error("InvalidPrefix: prefix of length {0} is not a valid tableau")]
    InvalidPrefix(usize),

    /// The operation needs a non-empty tableau.
    #[error("EmptyTableau: operation requires at least one box")]
    EmptyTableau,

    /// The diagram is not contained in the z = 0 slab.
    #[error("NotPlanar: diagram has a box with z > 0")]
    NotPlanar,

    /// An exact computation was asked for beyond its configured cap.
    #[error("SizeLimitExceeded: size {size} exceeds cap {cap}")]
    SizeLimitExceeded { size: u64, cap: u64 },

    /// Two diagrams do not differ by exactly one added box.
    #[error("NotACover: diagrams do not differ by exactly one box")]
    NotACover,

    /// A co-transition frequency of zero makes the log-recurrence undefined.
    #[error("ZeroFrequency: corner ({0}, {1}, {2}) was never observed")]
    ZeroFrequency(u32, u32, u32),

    /// Expected cell count below the classical chi-square validity floor.
    #[error("ExpectedTooSmall: expected count {0} per cell is below 5")]
    ExpectedTooSmall(f64),

    /// Too few observed cells for the requested statistic.
    #[error("TooFewCells: need at least {need}, observed {got}")]
    TooFewCells { need: u64, got: u64 },

    /// The box does not belong to the diagram.
    #[error("BoxNotInDiagram: ({0}, {1}, {2}) is outside the diagram")]
    BoxNotInDiagram(u32, u32, u32),

    /// Two distinct sampled paths collided under the 128-bit fingerprint.
    #[error("FingerprintCollision: two distinct paths share a fingerprint")]
    FingerprintCollision,

    /// An exact integer result would overflow the fixed-width accumulator.
    #[error("ArithmeticOverflow: {0}")]
    ArithmeticOverflow(&'static str),

    /// Input text could not be parsed into a diagram or tableau.
    #[error("MalformedInput: {0}")]
    MalformedInput(String),
}

impl Error {
    /// Stable machine-readable name of the variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::MonotonicityViolation(_) => "MonotonicityViolation",
            Error::IllegalCorner(..) => "IllegalCorner",
            Error::InvalidPrefix(_) => "InvalidPrefix",
            Error::EmptyTableau => "EmptyTableau",
            Error::NotPlanar => "NotPlanar",
            Error::SizeLimitExceeded { .. } => "SizeLimitExceeded",
            Error::NotACover => "NotACover",
            Error::ZeroFrequency(..) => "ZeroFrequency",
            Error::ExpectedTooSmall(_) => "ExpectedTooSmall",
            Error::TooFewCells { .. } => "TooFewCells",
            Error::BoxNotInDiagram(..) => "BoxNotInDiagram",
            Error::FingerprintCollision => "FingerprintCollision",
            Error::ArithmeticOverflow(_) => "ArithmeticOverflow",
            Error::MalformedInput(_) => "MalformedInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
