use thiserror::Error;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("invalid pants decomposition: {0}")]
    BadDecomposition(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("conditioning error: {0}")]
    Conditioning(String),

    #[error("word enumeration budget of {budget} nodes exceeded (best bound so far {partial:?})")]
    Budget { budget: usize, partial: Option<f64> },

    #[error("unknown curve id {0}")]
    UnknownCurve(usize),

    #[error("serialization error: {0}")]
    Serialization(String),
}
