//! Fourier–Bessel analysis of eigenfunctions in truncated cusps.

mod audit;
mod bessel;
mod fit;

pub use audit::{
    arc_count_estimate, multiplicity_audit, pi_map, ArcEstimate, MultiplicityAuditReport,
    PiImage,
};
pub use bessel::{bessel_k, bessel_k_oracle, BesselError};
pub use fit::{
    fit_cusp_coeffs, fit_from_samples, s_from_lambda, synthesize_from_coeffs, CuspSampler,
    FitError, FourierBesselCoeffs,
};
