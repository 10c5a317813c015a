//! Multiplicity estimation by eigenvalue clustering, audited against the
//! small-eigenvalue multiplicity bound `2g - 3 + n` (and the sharper
//! genus-0 bound of 3).

use serde::Serialize;

use super::eigen::{cluster_by_gap, SpectrumSlice};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum MultiplicityVerdict {
    Consistent,
    Violation,
    NoSmallEigenvalue,
}

#[derive(Clone, Debug, Serialize)]
pub struct MultiplicityReport {
    /// Eigenvalues of the cluster containing lambda_1.
    pub cluster: Vec<f64>,
    pub cluster_width: f64,
    pub estimated_multiplicity: usize,
    /// `2g - 3 + n` bound for small eigenvalues.
    pub bound: usize,
    /// Sharper genus-0 bound (3) when applicable.
    pub genus0_bound: Option<usize>,
    pub verdict: MultiplicityVerdict,
}

/// Cluster the spectrum with width `gap_factor * max(h^2, tol)` and compare
/// the lambda_1 cluster's cardinality against the multiplicity bounds,
/// provided lambda_1 is small (< 1/4).
pub fn cluster_multiplicity(
    s: &SpectrumSlice,
    gap_factor: f64,
    genus: usize,
    punctures: usize,
) -> MultiplicityReport {
    let width = gap_factor * (s.mesh_h * s.mesh_h).max(s.tol);
    let clusters = cluster_by_gap(&s.eigenvalues, width);
    // lambda_1 = first eigenvalue above the zero cluster (closed) or the
    // first positive one (cusped surfaces have no exact-zero mode either
    // way at machine level; use a fixed small threshold).
    let lam1_idx = s
        .eigenvalues
        .iter()
        .position(|&l| l > 1e-8)
        .unwrap_or(s.eigenvalues.len().saturating_sub(1));
    let cluster_idx = clusters
        .iter()
        .position(|c| c.contains(&lam1_idx))
        .unwrap_or(0);
    let cluster: Vec<f64> = clusters[cluster_idx]
        .iter()
        .filter(|&&i| s.eigenvalues[i] > 1e-8)
        .map(|&i| s.eigenvalues[i])
        .collect();
    let width_actual = if cluster.len() > 1 {
        cluster.last().unwrap() - cluster.first().unwrap()
    } else {
        0.0
    };
    let estimated = cluster.len().max(1);
    let bound = (2 * genus + punctures).saturating_sub(3).max(1);
    let genus0_bound = if genus == 0 { Some(3usize) } else { None };
    let lam1 = cluster.first().cloned().unwrap_or(f64::INFINITY);
    let verdict = if lam1 >= 0.25 {
        MultiplicityVerdict::NoSmallEigenvalue
    } else {
        let effective = genus0_bound.map_or(bound, |g0| bound.min(g0));
        if estimated <= effective {
            MultiplicityVerdict::Consistent
        } else {
            MultiplicityVerdict::Violation
        }
    };
    MultiplicityReport {
        cluster,
        cluster_width: width_actual,
        estimated_multiplicity: estimated,
        bound,
        genus0_bound,
        verdict,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::eigen::SpectrumSlice;

    fn slice(eigs: &[f64], h: f64, tol: f64) -> SpectrumSlice {
        SpectrumSlice {
            eigenvalues: eigs.to_vec(),
            eigenvectors: vec![Vec::new(); eigs.len()],
            residuals: vec![0.0; eigs.len()],
            clusters: Vec::new(),
            mesh_h: h,
            tol,
        }
    }

    #[test]
    fn simple_small_eigenvalue_is_consistent() {
        let s = slice(&[0.0, 0.18, 0.52, 0.9], 0.05, 1e-8);
        let r = cluster_multiplicity(&s, 5.0, 2, 0);
        assert_eq!(r.estimated_multiplicity, 1);
        assert_eq!(r.bound, 1);
        assert_eq!(r.verdict, MultiplicityVerdict::Consistent);
    }

    #[test]
    fn genus0_bound_applies() {
        // (0, 5): 2g - 3 + n = 2; a 3-cluster would exceed it but not the
        // genus-0 theorem bound; a 4-cluster violates both.
        let s = slice(&[0.0, 0.2, 0.2 + 1e-9, 0.2 + 2e-9, 0.2 + 3e-9], 0.05, 1e-8);
        let r = cluster_multiplicity(&s, 5.0, 0, 5);
        assert_eq!(r.estimated_multiplicity, 4);
        assert_eq!(r.bound, 2);
        assert_eq!(r.genus0_bound, Some(3));
        assert_eq!(r.verdict, MultiplicityVerdict::Violation);
    }

    #[test]
    fn zero_gap_factor_splits_everything() {
        let s = slice(&[0.0, 0.2, 0.2 + 1e-9], 0.05, 1e-8);
        let r = cluster_multiplicity(&s, 0.0, 2, 0);
        assert_eq!(r.estimated_multiplicity, 1);
    }

    #[test]
    fn large_lambda1_is_not_small() {
        let s = slice(&[0.0, 3.8, 3.81], 0.05, 1e-8);
        let r = cluster_multiplicity(&s, 5.0, 2, 0);
        assert_eq!(r.verdict, MultiplicityVerdict::NoSmallEigenvalue);
    }
}
