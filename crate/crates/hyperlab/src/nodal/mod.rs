//! Nodal sets of discrete eigenfunctions: extraction of the zero set,
//! domain decomposition with Euler bookkeeping, isotopy-type labels, and
//! the Courant / small-multiplicity audits.

mod audits;
mod domains;
mod graph;
mod isotopy;

pub use audits::{courant_otal_audit, CourantOtalReport, CourantRow};
pub use domains::{euler_poincare_audit, nodal_domains, EulerPoincareReport, NodalDecomposition};
pub use graph::{extract_nodal, NodalGraph, NodalSegment};
pub use isotopy::{components_match_curves, isotopy_class, IsotopyLabel};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum NodalError {
    #[error("eigenvector length {0} does not match vertex count {1}")]
    Dimension(usize, usize),

    #[error("eigenvector is identically zero")]
    ZeroVector,
}
