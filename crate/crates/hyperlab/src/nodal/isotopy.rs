//! Isotopy-type labels for nodal sets of first eigenfunctions.
//!
//! The labels distinguish the finitely many configurations the genus-2 /
//! (1,2) / (0,4) dichotomies require, from component counts, domain Euler
//! data, boundary counts, and puncture partitions; this is not a general
//! isotopy solver.

use std::fmt;

use crate::mesh::SurfaceMesh;

use super::domains::NodalDecomposition;
use super::graph::NodalGraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsotopyLabel {
    /// Genus 2: three disjoint loops cutting the surface into two pairs of
    /// pants.
    PantsType,
    /// Genus 2: one separating loop cutting it into two one-holed tori.
    TorusType,
    /// (1,2): one loop separating a one-holed torus from a twice-punctured
    /// disc.
    OneCurve,
    /// (1,2): two loops bounding once-punctured annuli.
    TwoCurve,
    /// (0,4): one loop; the partition lists which cusp indices share a
    /// side.
    SphereSplit([usize; 2], [usize; 2]),
    /// Non-smooth or otherwise unrecognized configuration.
    SingularOrOther,
}

impl fmt::Display for IsotopyLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsotopyLabel::PantsType => write!(f, "pants-type"),
            IsotopyLabel::TorusType => write!(f, "torus-type"),
            IsotopyLabel::OneCurve => write!(f, "one-curve"),
            IsotopyLabel::TwoCurve => write!(f, "two-curve"),
            IsotopyLabel::SphereSplit(a, b) => {
                write!(f, "one-curve-partition-{}{}|{}{}", a[0], a[1], b[0], b[1])
            }
            IsotopyLabel::SingularOrOther => write!(f, "singular/other"),
        }
    }
}

/// Classify the nodal set of a (first) eigenfunction.
pub fn isotopy_class(
    mesh: &SurfaceMesh,
    ng: &NodalGraph,
    dec: &NodalDecomposition,
) -> IsotopyLabel {
    let m = ng.component_count();
    if m == 0 || !ng.smooth.iter().all(|&s| s) {
        return IsotopyLabel::SingularOrOther;
    }
    if dec.domain_count != 2 {
        return IsotopyLabel::SingularOrOther;
    }
    match (mesh.genus, mesh.punctures) {
        (2, 0) => {
            let chis = &dec.domain_chi;
            if m == 3
                && chis.iter().all(|&c| c == -1)
                && dec.domain_nodal_boundaries.iter().all(|&b| b == 3)
            {
                IsotopyLabel::PantsType
            } else if m == 1
                && chis.iter().all(|&c| c == -1)
                && dec.domain_nodal_boundaries.iter().all(|&b| b == 1)
            {
                IsotopyLabel::TorusType
            } else {
                IsotopyLabel::SingularOrOther
            }
        }
        (1, 2) => {
            if !dec.cusps_on_nodal.is_empty() {
                return IsotopyLabel::SingularOrOther;
            }
            let per_domain_cusps: Vec<usize> =
                dec.domain_cusps.iter().map(|c| c.len()).collect();
            if m == 1 && per_domain_cusps.contains(&0) && per_domain_cusps.contains(&2) {
                IsotopyLabel::OneCurve
            } else if m == 2 && per_domain_cusps.iter().all(|&c| c == 1) {
                IsotopyLabel::TwoCurve
            } else {
                IsotopyLabel::SingularOrOther
            }
        }
        (0, 4) => {
            if m != 1 || !dec.cusps_on_nodal.is_empty() {
                return IsotopyLabel::SingularOrOther;
            }
            let mut sides: Vec<Vec<usize>> = dec.domain_cusps.clone();
            for s in sides.iter_mut() {
                s.sort_unstable();
            }
            if sides.len() == 2 && sides[0].len() == 2 && sides[1].len() == 2 {
                let mut a = [sides[0][0], sides[0][1]];
                let b = [sides[1][0], sides[1][1]];
                // Canonical order: side containing cusp 0 first.
                if b.contains(&0) {
                    let tmp = a;
                    a = b;
                    return IsotopyLabel::SphereSplit(a, tmp);
                }
                IsotopyLabel::SphereSplit(a, b)
            } else {
                IsotopyLabel::SingularOrOther
            }
        }
        _ => IsotopyLabel::SingularOrOther,
    }
}

/// Does every nodal component lie inside the collar band of exactly one of
/// the given curves, hitting each curve once? (Location evidence that the
/// nodal set is isotopic to the pinched system.)
pub fn components_match_curves(
    mesh: &SurfaceMesh,
    ng: &NodalGraph,
    curves: &[usize],
) -> bool {
    if ng.component_count() != curves.len() {
        return false;
    }
    let mut seen = vec![false; curves.len()];
    for comp in &ng.components {
        let mut home: Option<usize> = None;
        let mut ok = true;
        for &seg_idx in comp {
            let t = &mesh.triangles[ng.segments[seg_idx].triangle];
            // The segment's triangle must have all its vertices in one
            // curve's band.
            let mut tri_curve: Option<usize> = None;
            for &v in &t.v {
                match mesh.charts[v].band {
                    Some((c, _, _)) if curves.contains(&c) => match tri_curve {
                        None => tri_curve = Some(c),
                        Some(prev) if prev == c => {}
                        _ => {
                            ok = false;
                        }
                    },
                    _ => {
                        ok = false;
                    }
                }
            }
            match (home, tri_curve) {
                (None, Some(c)) => home = Some(c),
                (Some(h), Some(c)) if h == c => {}
                _ => {
                    ok = false;
                }
            }
            if !ok {
                break;
            }
        }
        match (ok, home) {
            (true, Some(c)) => {
                let idx = curves.iter().position(|&x| x == c).unwrap();
                if seen[idx] {
                    return false;
                }
                seen[idx] = true;
            }
            _ => return false,
        }
    }
    seen.iter().all(|&s| s)
}
