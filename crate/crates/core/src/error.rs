use thiserror::Error;

/// Errors raised by the quasi-interpolation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QiError {
    #[error("invalid B-spline degree {0} (must be >= 1)")]
    InvalidDegree(i64),

    #[error("unsupported quasi-interpolant degree {0} (supported: 2, 3, 4)")]
    UnsupportedDegree(usize),

    #[error("invalid derivative order {order} for degree {degree}")]
    InvalidOrder { order: usize, degree: usize },

    #[error("malformed samples: {0}")]
    MalformedSamples(String),

    #[error("point ({x}, {y}) lies outside the domain")]
    OutOfDomain { x: f64, y: f64 },

    #[error("index ({j}, {i}) out of range: {context}")]
    IndexOutOfRange { j: i64, i: i64, context: String },

    #[error("index ({j}, {i}) at level {level} is not an active basis index")]
    InactiveIndex { level: usize, j: i64, i: i64 },

    #[error("no data available at level {level}, point ({x}, {y})")]
    DataCoverage { level: usize, x: f64, y: f64 },

    #[error("singular local collocation system for index ({j}, {i})")]
    SingularSystem { j: i64, i: i64 },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid configuration field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type QiResult<T> = Result<T, QiError>;
