//! Eigenvalue branches along paths in Teichmüller space, and the covering
//! experiments relating genus-2 spectra to their cyclic covers.

mod covering;
mod sampling;
mod track;

pub use covering::{covering_audit, lifted_branch, CoveringAuditReport, EigenvalueMatch};
pub use sampling::StructuralSampler;
pub use track::{track, Branch, BranchFamily, BranchSample, CrossingEvent, TrackConfig};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BranchError {
    #[error("mesh error at t = {t}: {source}")]
    Mesh {
        t: f64,
        #[source]
        source: crate::mesh::MeshError,
    },

    #[error("assembly error at t = {t}: {source}")]
    Assembly {
        t: f64,
        #[source]
        source: crate::spectral::AssemblyError,
    },

    #[error("solver failed at t = {t}: {source}")]
    Solve {
        t: f64,
        #[source]
        source: Box<crate::spectral::SolveError>,
    },

    #[error("geometry error: {0}")]
    Geometry(#[from] crate::geometry::GeometryError),

    #[error("track needs at least 2 steps, got {0}")]
    TooFewSteps(usize),
}
