use thiserror::Error;

/// Errors raised by the solvers and geometry routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Gradient of the volume potential requested at a polygon vertex.
    #[error("evaluation at polygon vertex ({x}, {y})")]
    VertexEvaluation { x: f64, y: f64 },

    /// Vector segment integral requested with the target on the segment itself.
    #[error("target lies on the integration segment")]
    OnBoundarySegment,

    #[error("point ({x}, {y}) is not strictly inside the domain")]
    OutsideDomain { x: f64, y: f64 },

    #[error("linear system is singular or ill-conditioned (condition estimate {condition:e})")]
    SingularSystem { condition: f64 },

    #[error("{what} did not converge: {detail}")]
    NoConvergence { what: &'static str, detail: String },

    #[error("test function is negative on the boundary (min {min:e})")]
    NegativeOnBoundary { min: f64 },

    #[error("bound {bound_c} is not below 1/sqrt(2 pi)")]
    BoundNotCertified { bound_c: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the error originates from bad input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidPolygon(_)
                | Error::InvalidParameter(_)
                | Error::OutsideDomain { .. }
                | Error::NegativeOnBoundary { .. }
                | Error::Io(_)
                | Error::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
