use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),

    #[error("polygon is not strictly convex at vertex {index}")]
    NotConvex { index: usize },

    #[error("polygon vertices are clockwise")]
    Clockwise,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("negative discriminant {0:e} in the closed-form radius")]
    NegativeDiscriminant(f64),

    #[error("point ({x}, {y}) outside the admissible region x^2 >= 4y >= 4pi")]
    OutsideAdmissibleRegion { x: f64, y: f64 },

    #[error("radius {radius} outside the validity range [0, {limit})")]
    RadiusOutOfRange { radius: f64, limit: f64 },

    #[error("cluster of {requested} cells does not fit; at most {max_feasible} cells fit")]
    ClusterInfeasible {
        requested: usize,
        max_feasible: usize,
    },

    #[error("mesh node budget exceeded: {nodes} > {cap}")]
    NodeBudget { nodes: usize, cap: usize },

    #[error("mesh is invalid: {0}")]
    InvalidMesh(String),

    #[error("matrix is not positive definite (pivot {pivot} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("iteration did not converge after {iterations} steps (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("unsupported regime: {0}")]
    Unsupported(String),

    #[error("io: {0}")]
    Io(String),

    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
