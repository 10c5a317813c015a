//! Discrete Laplace–Beltrami operators, eigensolvers, and refinement
//! extrapolation.

pub mod dense;
mod eigen;
mod extrapolate;
mod multiplicity;
mod operators;
pub mod sparse;
mod study;

pub use eigen::{cluster_by_gap, solve_lowest, solve_lowest_seeded, SolveConfig, SolveError, SpectrumSlice};
pub use extrapolate::{extrapolate, Extrapolation};
pub use multiplicity::{cluster_multiplicity, MultiplicityReport, MultiplicityVerdict};
pub use operators::{assemble, AssemblyError, OperatorPair};
pub use study::{refinement_study, RefinementStudy, StudyError};
