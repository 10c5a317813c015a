//! Structural sampling of eigenfunctions for cross-mesh overlaps.
//!
//! Meshes along a path are rebuilt per grid point, so their vertex sets
//! differ. Overlaps between consecutive eigenvectors are therefore taken
//! at points defined by the pants structure itself (curve fraction x depth
//! fraction per band side), evaluated by nearest-vertex lookup in each
//! mesh. The resulting inner product is a matching heuristic, not the
//! exact M-pairing; ambiguous matches trigger step bisection.

use crate::geometry::FnPoint;
use crate::hyp::{MVec, Point};
use crate::mesh::SurfaceMesh;

/// Fractions along each curve and into each band used as sample anchors.
const CURVE_FRACTIONS: usize = 12;
const DEPTH_FRACTIONS: [f64; 4] = [0.12, 0.35, 0.58, 0.8];

/// Samples an eigenfunction at structure-defined points of a surface.
pub struct StructuralSampler {
    /// (pants id, hyperboloid position) per sample.
    anchors: Vec<(usize, Point)>,
    /// Nearest-vertex index per sample for the associated mesh.
    nearest: Vec<usize>,
}

impl StructuralSampler {
    /// Build the anchor set for the surface `p` and resolve nearest
    /// vertices on `mesh` (which must be a mesh of `p`).
    pub fn new(p: &FnPoint, mesh: &SurfaceMesh) -> Result<StructuralSampler, crate::geometry::GeometryError> {
        let dec = &p.decomposition;
        let mut anchors: Vec<(usize, Point)> = Vec::new();
        let mut scaffolds = Vec::new();
        for pid in 0..dec.pants_count() {
            scaffolds.push(crate::geometry::PantsGeometry::new(
                p.pants_boundary_lengths(pid),
            )?);
        }
        for c in dec.curves() {
            for &(pid, slot) in c.ends.iter() {
                let geom = &scaffolds[pid];
                let l = p.lengths[c.id];
                // Anchors must reach past the collar into the thick part,
                // where low eigenfunctions carry their mass.
                let reach = crate::geometry::collar_half_width(l) + 0.6;
                for iu in 0..CURVE_FRACTIONS {
                    let t = (iu as f64 + 0.5) / CURVE_FRACTIONS as f64 * l;
                    for &rho in DEPTH_FRACTIONS.iter() {
                        let d = rho * reach;
                        anchors.push((pid, geom.boundary_fermi_point(slot, t, d)));
                    }
                }
            }
        }
        // Nearest vertices via the per-pants chart positions.
        let nearest = anchors
            .iter()
            .map(|&(pid, q)| nearest_vertex(mesh, pid, q))
            .collect();
        Ok(StructuralSampler { anchors, nearest })
    }

    /// Sample a vertex function at the anchors, normalized to unit length.
    pub fn sample(&self, v: &[f64]) -> Vec<f64> {
        let mut out: Vec<f64> = self.nearest.iter().map(|&idx| v[idx]).collect();
        let norm = out.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 {
            for x in out.iter_mut() {
                *x /= norm;
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.anchors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.anchors.is_empty()
    }
}

fn nearest_vertex(mesh: &SurfaceMesh, pants: usize, q: Point) -> usize {
    let qr = q.raw();
    let mut best = (f64::INFINITY, 0usize);
    for (v, charts) in mesh.charts.iter().enumerate() {
        for &(pid, raw) in &charts.pants {
            if pid != pants {
                continue;
            }
            let p = MVec::new(raw[0], raw[1], raw[2]);
            let c = -(p.mdot(qr));
            if c < best.0 {
                best = (c, v);
            }
        }
    }
    best.1
}

/// Absolute overlap matrix between two sampled eigenvector families.
pub fn overlap_matrix(prev: &[Vec<f64>], next: &[Vec<f64>]) -> Vec<Vec<f64>> {
    prev.iter()
        .map(|a| {
            next.iter()
                .map(|b| {
                    a.iter()
                        .zip(b)
                        .map(|(x, y)| x * y)
                        .sum::<f64>()
                        .abs()
                })
                .collect()
        })
        .collect()
}

/// Max-total-weight assignment of rows to columns (square, n <= ~14) by
/// bitmask dynamic programming; deterministic.
pub fn best_assignment(weights: &[Vec<f64>]) -> Vec<usize> {
    let n = weights.len();
    assert!(n <= 20, "assignment size {n} too large");
    let full = 1usize << n;
    let neg = f64::NEG_INFINITY;
    let mut dp = vec![neg; full];
    let mut choice = vec![usize::MAX; full];
    dp[0] = 0.0;
    for mask in 0..full {
        if dp[mask] == neg {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for col in 0..n {
            if mask & (1 << col) != 0 {
                continue;
            }
            let next = mask | (1 << col);
            let w = dp[mask] + weights[row][col];
            if w > dp[next] {
                dp[next] = w;
                choice[next] = col;
            }
        }
    }
    // Reconstruct.
    let mut out = vec![0usize; n];
    let mut mask = full - 1;
    for row in (0..n).rev() {
        let col = choice[mask];
        out[row] = col;
        mask &= !(1 << col);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignment_picks_the_permutation() {
        let w = vec![
            vec![0.1, 0.9, 0.2],
            vec![0.95, 0.1, 0.1],
            vec![0.2, 0.3, 0.85],
        ];
        assert_eq!(best_assignment(&w), vec![1, 0, 2]);
    }
}
