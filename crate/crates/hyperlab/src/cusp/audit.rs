//! The coefficient map `pi(phi) = (phi_0, phi_1^e, phi_1^o)`, the nodal
//! arc-count heuristic at a puncture, and the punctured-sphere
//! multiplicity audit built on them.

use serde::Serialize;

use crate::spectral::dense::{sym_eigen, DMat};

use super::fit::FourierBesselCoeffs;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct PiImage {
    pub phi0: f64,
    pub phi1e: f64,
    pub phi1o: f64,
    /// Set when the `y^s` coefficient was not negligible.
    pub f01_flag: bool,
}

/// Project coefficients to `(f02, f1e, f1o)`; linear in the coefficient
/// arithmetic. The `y^s` part must vanish for genuine eigenfunctions; a
/// non-negligible `f01` is flagged but the image is still returned.
pub fn pi_map(c: &FourierBesselCoeffs, f01_tol: f64) -> PiImage {
    let scale = coeff_scale(c);
    let (phi1e, phi1o) = c.modes.first().cloned().unwrap_or((0.0, 0.0));
    PiImage {
        phi0: c.f02,
        phi1e,
        phi1o,
        f01_flag: c.f01.abs() > f01_tol * scale.max(1e-300),
    }
}

fn coeff_scale(c: &FourierBesselCoeffs) -> f64 {
    let mut s = c.f01.abs().max(c.f02.abs());
    for &(a, b) in &c.modes {
        s = s.max(a.abs()).max(b.abs());
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ArcEstimate {
    /// Leading zero-mode coefficient present: the function is generically
    /// nonzero near the puncture, no forced arcs.
    NoForcedArcs,
    /// Lower bound `2 * max(j*, 1)` arcs from the first nonvanishing mode.
    AtLeast(usize),
    /// All coefficients below tolerance.
    Indeterminate,
}

/// Heuristic lower bound on the number of nodal arcs reaching the
/// puncture, from the order of vanishing of the cusp development.
pub fn arc_count_estimate(c: &FourierBesselCoeffs, tol: f64) -> ArcEstimate {
    let scale = coeff_scale(c);
    if scale == 0.0 {
        return ArcEstimate::Indeterminate;
    }
    let thresh = tol * scale;
    if c.f02.abs() > thresh || c.f01.abs() > thresh {
        return ArcEstimate::NoForcedArcs;
    }
    for (j, &(a, b)) in c.modes.iter().enumerate() {
        if a.abs() > thresh || b.abs() > thresh {
            return ArcEstimate::AtLeast(2 * (j + 1));
        }
    }
    ArcEstimate::Indeterminate
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityAuditReport {
    /// Cluster cardinality under audit.
    pub dimension: usize,
    /// pi-images of the supplied eigenfunctions.
    pub pi_images: Vec<PiImage>,
    /// Singular values of the d x 3 matrix of pi-images.
    pub singular_values: Vec<f64>,
    pub numerical_rank: usize,
    /// True when the data is consistent with multiplicity at most 3.
    pub consistent_with_bound: bool,
    /// When a numerical kernel combination exists: its coefficients and
    /// the arc estimate of the synthesized combination.
    pub kernel_combination: Option<Vec<f64>>,
    pub kernel_arc_estimate: Option<ArcEstimate>,
}

/// Audit a lambda_1 cluster of a punctured sphere: the map `pi` into R^3
/// cannot be injective on more than 3 independent eigenfunctions; a
/// kernel combination would need at least four nodal arcs at the puncture.
pub fn multiplicity_audit(
    coeffs: &[FourierBesselCoeffs],
    rank_tol: f64,
    arc_tol: f64,
) -> MultiplicityAuditReport {
    let d = coeffs.len();
    if d == 0 {
        return MultiplicityAuditReport {
            dimension: 0,
            pi_images: Vec::new(),
            singular_values: Vec::new(),
            numerical_rank: 0,
            consistent_with_bound: true,
            kernel_combination: None,
            kernel_arc_estimate: None,
        };
    }
    let images: Vec<PiImage> = coeffs.iter().map(|c| pi_map(c, 1e-3)).collect();
    // Singular values of P (d x 3) from the spectrum of P^T P (3 x 3).
    let mut ptp = DMat::zeros(3, 3);
    for img in &images {
        let row = [img.phi0, img.phi1e, img.phi1o];
        for i in 0..3 {
            for j in 0..3 {
                *ptp.at_mut(i, j) += row[i] * row[j];
            }
        }
    }
    let (evals, _) = sym_eigen(&ptp);
    let mut singular_values: Vec<f64> = evals.iter().map(|&l| l.max(0.0).sqrt()).collect();
    singular_values.reverse(); // descending
    let scale = singular_values.first().cloned().unwrap_or(0.0);
    let numerical_rank = singular_values
        .iter()
        .filter(|&&sv| sv > rank_tol * scale.max(1e-300))
        .count();
    // A kernel combination exists iff the pi-images are linearly
    // dependent: rank < d (and always when d > 3).
    let kernel = if numerical_rank < d {
        // Smallest eigenvector of the d x d Gram of images.
        let mut gram = DMat::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let a = [images[i].phi0, images[i].phi1e, images[i].phi1o];
                let b = [images[j].phi0, images[j].phi1e, images[j].phi1o];
                *gram.at_mut(i, j) = a.iter().zip(&b).map(|(x, y)| x * y).sum();
            }
        }
        let (_, vecs) = sym_eigen(&gram);
        Some((0..d).map(|i| vecs.at(i, 0)).collect::<Vec<f64>>())
    } else {
        None
    };
    let kernel_arc_estimate = kernel.as_ref().map(|c| {
        // Synthesize the combined coefficient list and estimate its arcs.
        let mut combined = FourierBesselCoeffs {
            s: coeffs[0].s,
            f01: 0.0,
            f02: 0.0,
            modes: vec![(0.0, 0.0); coeffs.iter().map(|x| x.modes.len()).max().unwrap_or(0)],
            j_max: coeffs.iter().map(|x| x.j_max).max().unwrap_or(0),
            fit_residual: 0.0,
        };
        for (w, cf) in c.iter().zip(coeffs) {
            combined.f01 += w * cf.f01;
            combined.f02 += w * cf.f02;
            for (dst, &(a, b)) in combined.modes.iter_mut().zip(&cf.modes) {
                dst.0 += w * a;
                dst.1 += w * b;
            }
        }
        arc_count_estimate(&combined, arc_tol)
    });
    MultiplicityAuditReport {
        dimension: d,
        pi_images: images,
        singular_values,
        numerical_rank,
        consistent_with_bound: d <= 3,
        kernel_combination: kernel,
        kernel_arc_estimate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(f01: f64, f02: f64, modes: Vec<(f64, f64)>) -> FourierBesselCoeffs {
        FourierBesselCoeffs {
            s: 0.9,
            f01,
            f02,
            j_max: modes.len(),
            modes,
            fit_residual: 0.0,
        }
    }

    #[test]
    fn pi_map_is_the_named_triple() {
        let c = coeffs(0.0, 1.0, vec![(0.5, 0.0), (0.3, 0.2)]);
        let img = pi_map(&c, 1e-6);
        assert_eq!((img.phi0, img.phi1e, img.phi1o), (1.0, 0.5, 0.0));
        assert!(!img.f01_flag);
        let z = pi_map(&coeffs(0.0, 0.0, vec![]), 1e-6);
        assert_eq!((z.phi0, z.phi1e, z.phi1o), (0.0, 0.0, 0.0));
    }

    #[test]
    fn pi_map_is_linear() {
        let a = coeffs(0.0, 1.0, vec![(0.5, -0.2)]);
        let b = coeffs(0.0, -0.4, vec![(0.1, 0.7)]);
        let combo = coeffs(0.0, 2.0 * 1.0 + 3.0 * -0.4, vec![(2.0 * 0.5 + 3.0 * 0.1, 2.0 * -0.2 + 3.0 * 0.7)]);
        let (ia, ib, ic) = (pi_map(&a, 1e-6), pi_map(&b, 1e-6), pi_map(&combo, 1e-6));
        assert!((ic.phi0 - (2.0 * ia.phi0 + 3.0 * ib.phi0)).abs() < 1e-15);
        assert!((ic.phi1e - (2.0 * ia.phi1e + 3.0 * ib.phi1e)).abs() < 1e-15);
        assert!((ic.phi1o - (2.0 * ia.phi1o + 3.0 * ib.phi1o)).abs() < 1e-15);
    }

    #[test]
    fn arc_estimates_follow_vanishing_order() {
        let lead = coeffs(0.0, 1.0, vec![(0.5, 0.0)]);
        assert_eq!(arc_count_estimate(&lead, 1e-5), ArcEstimate::NoForcedArcs);
        let second = coeffs(0.0, 0.0, vec![(0.0, 0.0), (0.3, 0.0)]);
        assert_eq!(arc_count_estimate(&second, 1e-5), ArcEstimate::AtLeast(4));
        let nothing = coeffs(0.0, 0.0, vec![(0.0, 0.0)]);
        assert_eq!(arc_count_estimate(&nothing, 1e-5), ArcEstimate::Indeterminate);
    }

    #[test]
    fn synthetic_rank3_family_triggers_kernel_path() {
        // Four functions whose pi-images span only rank 3.
        let fam = vec![
            coeffs(0.0, 1.0, vec![(0.0, 0.0), (0.2, 0.0)]),
            coeffs(0.0, 0.0, vec![(1.0, 0.0), (0.0, 0.1)]),
            coeffs(0.0, 0.0, vec![(0.0, 1.0), (0.05, 0.0)]),
            coeffs(0.0, 1.0, vec![(1.0, 1.0), (0.0, 0.4)]),
        ];
        let rep = multiplicity_audit(&fam, 1e-9, 1e-6);
        assert_eq!(rep.dimension, 4);
        assert_eq!(rep.numerical_rank, 3);
        assert!(!rep.consistent_with_bound);
        let kernel = rep.kernel_combination.expect("kernel combination");
        assert_eq!(kernel.len(), 4);
        match rep.kernel_arc_estimate {
            Some(ArcEstimate::AtLeast(n)) => assert!(n >= 4, "arcs {n}"),
            other => panic!("expected arc bound, got {other:?}"),
        }
    }

    #[test]
    fn empty_cluster_is_trivially_consistent() {
        let rep = multiplicity_audit(&[], 1e-9, 1e-6);
        assert_eq!(rep.dimension, 0);
        assert!(rep.consistent_with_bound);
    }
}
