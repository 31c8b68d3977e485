use thiserror::Error;

/// Errors produced by geometry construction and the solvers.
///
/// Indices carried by variants are zero-based.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degenerate simplex: normalized edge determinant {det:e} is below tolerance")]
    DegenerateSimplex { det: f64 },

    #[error("index {index} out of range (0..{len})")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("negative epsilon {0}")]
    NegativeEpsilon(f64),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("face {face} is not contained in the body (vertex distance {distance:e})")]
    FaceNotContained { face: usize, distance: f64 },

    #[error("body lies outside the simplex: {0}")]
    OutsideSimplex(String),

    #[error("iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("bisection stalled at epsilon {eps:e} (bracket [{lo:e}, {hi:e}], residual {residual:e})")]
    BisectionStalled { eps: f64, lo: f64, hi: f64, residual: f64 },

    #[error("invalid family: {0}")]
    InvalidFamily(String),

    #[error("containment violated: body {body} probe at distance {distance:e}")]
    ContainmentViolated { body: usize, distance: f64 },

    #[error("ordering violated: larger family has eps {larger:e} > {smaller:e}")]
    OrderingViolated { smaller: f64, larger: f64 },

    #[error("sets do not cover the simplex (eps0 = {eps0:e})")]
    NotACovering { eps0: f64 },

    #[error("family covers the simplex; no equally spaced point of positive distance (eps0 = {eps0:e})")]
    NotAnHFamily { eps0: f64 },

    #[error("hypothesis violated by body {index}: distance {distance:e}, expected {expected:e}")]
    HypothesisViolated { index: usize, distance: f64, expected: f64 },

    #[error("subfamily enumeration needs {count} subsets, cap is {cap}")]
    EnumerationCapExceeded { count: u128, cap: u128 },

    #[error("grid has {count} points, cap is {cap}")]
    GridTooLarge { count: u128, cap: u128 },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("invalid instance at `{field}`: {message}")]
    Validation { field: String, message: String },
}

impl Error {
    /// True for failures of an iterative method rather than of the input.
    pub fn is_convergence_failure(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::BisectionStalled { .. })
    }

    pub(crate) fn validation(field: impl Into<String>, message: impl ToString) -> Self {
        Error::Validation { field: field.into(), message: message.to_string() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
