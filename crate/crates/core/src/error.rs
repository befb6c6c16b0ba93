use thiserror::Error;

/// Errors raised by constructors and operations across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite coordinate in input")]
    NonFinite,
    #[error("degenerate polygon (area {area:e} at or below tolerance)")]
    DegeneratePolygon { area: f64 },
    #[error("polygon is not convex")]
    NotConvex,
    #[error("polygon family must not be empty")]
    EmptyFamily,
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("direction set too short: need u_{required} but only u_0..u_{available} exist")]
    TooFewDirections { required: usize, available: usize },
    #[error("point ({x}, {y}) lies outside the trapezium")]
    OutsideTrapezium { x: f64, y: f64 },
    #[error("rectangle contains no lattice point")]
    EmptyLatticeSet,
    #[error("rectangle does not contain the origin")]
    RectMissesOrigin,
    #[error("empty set where a non-empty one is required: {0}")]
    EmptySet(&'static str),
    #[error("no sampled scale qualifies (tried {tried:?})")]
    ScaleNotFound { tried: Vec<f64> },
    #[error("condition (i) constant is {0}; the trapezium construction needs it positive")]
    ConditionIFailed(f64),
    #[error("transfer window violated at (k, l) = ({k}, {l}) for rectangle {rect}")]
    WindowViolated { k: i64, l: i64, rect: usize },
    #[error("translations look rationally dependent: {0}")]
    RationallyDependent(String),
    #[error("experiment refused: {0}")]
    Refused(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
