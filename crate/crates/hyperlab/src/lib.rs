//! Numerical laboratory for the low Laplace spectrum of finite-area
//! hyperbolic surfaces.
//!
//! Surfaces are described by pants decompositions with Fenchel–Nielsen
//! length/twist coordinates. The crate builds Fuchsian generators and
//! triangulated intrinsic meshes from those coordinates, assembles the
//! Laplace–Beltrami weak form, computes the lowest eigenpairs with residual
//! certificates, classifies nodal sets, continues eigenvalue branches along
//! paths in Teichmüller space, and performs Fourier–Bessel analysis in
//! truncated cusps.

pub mod branch;
pub mod cusp;
pub mod geometry;
pub mod hyp;
pub mod mesh;
pub mod nodal;
pub mod report;
pub mod spectral;
