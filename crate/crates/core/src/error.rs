use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BecError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape/anisotropy mismatch: {0}")]
    ShapeMismatch(String),

    #[error("failed to bracket root: {0}")]
    Bracket(String),

    #[error("no convergence after {iterations} iterations (residual {residual:e}): {context}")]
    Convergence {
        context: String,
        iterations: usize,
        residual: f64,
    },

    #[error("grid point {point}: {source}")]
    GridPoint {
        point: String,
        #[source]
        source: Box<BecError>,
    },
}

pub type Result<T> = std::result::Result<T, BecError>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(BecError::Domain(msg.into()))
}
