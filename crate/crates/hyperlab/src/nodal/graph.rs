//! Zero-set extraction by linear interpolation on triangles.

use std::collections::HashMap;

use crate::mesh::SurfaceMesh;

use super::NodalError;

/// Relative threshold below which a vertex value is treated as zero and
/// perturbed to a positive epsilon.
const ZERO_EPS: f64 = 1e-12;

/// One zero-crossing segment inside a triangle: the function changes sign
/// on exactly two of its edges.
#[derive(Clone, Debug)]
pub struct NodalSegment {
    pub triangle: usize,
    /// The two crossed edges as ordered vertex pairs (min, max).
    pub edges: [(usize, usize); 2],
    /// Interpolation parameter of the crossing on each edge, measured from
    /// the smaller vertex id.
    pub params: [f64; 2],
}

/// The embedded zero set of a vertex function.
#[derive(Clone, Debug)]
pub struct NodalGraph {
    pub segments: Vec<NodalSegment>,
    /// Per component: segment indices in traversal order.
    pub components: Vec<Vec<usize>>,
    /// Whether the component is a closed loop (false = arc ending on
    /// truncation circles).
    pub closed: Vec<bool>,
    /// Per component, per marked curve: transverse crossing count.
    pub crossing_counts: Vec<Vec<usize>>,
    /// Mod-2 reduction of `crossing_counts`.
    pub crossing_vectors: Vec<Vec<u8>>,
    /// Smoothness flag: closed loop passing no perturbed vertex.
    pub smooth: Vec<bool>,
    /// Vertices whose values were perturbed to avoid exact zeros.
    pub perturbed: Vec<usize>,
    /// Post-perturbation sign per vertex (+1 / -1).
    pub signs: Vec<i8>,
}

/// Extract the nodal graph of `v` on `mesh`.
pub fn extract_nodal(mesh: &SurfaceMesh, v: &[f64]) -> Result<NodalGraph, NodalError> {
    if v.len() != mesh.vertex_count {
        return Err(NodalError::Dimension(v.len(), mesh.vertex_count));
    }
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if vmax == 0.0 {
        return Err(NodalError::ZeroVector);
    }
    let eps = ZERO_EPS * vmax;
    let mut vals = v.to_vec();
    let mut perturbed = Vec::new();
    for (i, x) in vals.iter_mut().enumerate() {
        if x.abs() < eps {
            *x = eps;
            perturbed.push(i);
        }
    }
    let signs: Vec<i8> = vals.iter().map(|&x| if x > 0.0 { 1 } else { -1 }).collect();

    // Per-triangle segments.
    let mut segments = Vec::new();
    let mut edge_to_segments: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (t_idx, t) in mesh.triangles.iter().enumerate() {
        let s = [signs[t.v[0]], signs[t.v[1]], signs[t.v[2]]];
        if s[0] == s[1] && s[1] == s[2] {
            continue;
        }
        let mut crossed: Vec<((usize, usize), f64)> = Vec::with_capacity(2);
        for e in 0..3 {
            let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
            if signs[a] != signs[b] {
                let (lo, hi) = (a.min(b), a.max(b));
                // Crossing at fraction from lo toward hi.
                let s_param = vals[lo] / (vals[lo] - vals[hi]);
                crossed.push(((lo, hi), s_param));
            }
        }
        debug_assert_eq!(crossed.len(), 2);
        let seg_idx = segments.len();
        segments.push(NodalSegment {
            triangle: t_idx,
            edges: [crossed[0].0, crossed[1].0],
            params: [crossed[0].1, crossed[1].1],
        });
        edge_to_segments.entry(crossed[0].0).or_default().push(seg_idx);
        edge_to_segments.entry(crossed[1].0).or_default().push(seg_idx);
    }

    // Components: segments share a crossed edge.
    let mut comp_of = vec![usize::MAX; segments.len()];
    let mut components = Vec::new();
    let mut closed_flags = Vec::new();
    for start in 0..segments.len() {
        if comp_of[start] != usize::MAX {
            continue;
        }
        // Walk both directions from `start`.
        let comp_idx = components.len();
        let mut ordered = vec![start];
        comp_of[start] = comp_idx;
        let mut closed = false;
        // forward along edges[1], backward along edges[0]
        for dir in 0..2 {
            let mut cur = start;
            let mut via = segments[start].edges[dir];
            loop {
                let nbrs = &edge_to_segments[&via];
                let next = nbrs.iter().find(|&&s| s != cur && comp_of[s] == usize::MAX);
                match next {
                    Some(&n) => {
                        comp_of[n] = comp_idx;
                        if dir == 0 {
                            ordered.insert(0, n);
                        } else {
                            ordered.push(n);
                        }
                        via = if segments[n].edges[0] == via {
                            segments[n].edges[1]
                        } else {
                            segments[n].edges[0]
                        };
                        cur = n;
                    }
                    None => {
                        // Either hit the boundary (arc) or closed the loop.
                        closed = nbrs.len() == 2 && nbrs.iter().all(|&s| comp_of[s] == comp_idx);
                        break;
                    }
                }
            }
            if closed {
                break;
            }
        }
        components.push(ordered);
        closed_flags.push(closed);
    }

    // Crossing counts against marked cycles.
    let mut edge_to_comp: HashMap<(usize, usize), usize> = HashMap::new();
    for (i, seg) in segments.iter().enumerate() {
        for e in seg.edges {
            edge_to_comp.insert(e, comp_of[i]);
        }
    }
    let mut crossing_counts = vec![vec![0usize; mesh.marked_curves.len()]; components.len()];
    for (c_idx, cyc) in mesh.marked_curves.iter().enumerate() {
        let n = cyc.len();
        for i in 0..n {
            let (a, b) = (cyc[i], cyc[(i + 1) % n]);
            if signs[a] != signs[b] {
                let key = (a.min(b), a.max(b));
                if let Some(&comp) = edge_to_comp.get(&key) {
                    crossing_counts[comp][c_idx] += 1;
                }
            }
        }
    }
    let crossing_vectors = crossing_counts
        .iter()
        .map(|row| row.iter().map(|&c| (c % 2) as u8).collect())
        .collect();

    // Smoothness: closed and not passing through a perturbed vertex's
    // triangle fan.
    let perturbed_set: std::collections::HashSet<usize> = perturbed.iter().cloned().collect();
    let smooth = components
        .iter()
        .zip(&closed_flags)
        .map(|(segs, &closed)| {
            closed
                && segs.iter().all(|&s| {
                    let t = &mesh.triangles[segments[s].triangle];
                    t.v.iter().all(|vv| !perturbed_set.contains(vv))
                })
        })
        .collect();

    Ok(NodalGraph {
        segments,
        components,
        closed: closed_flags,
        crossing_counts,
        crossing_vectors,
        smooth,
        perturbed,
        signs,
    })
}

impl NodalGraph {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    /// Total crossing parity of the full nodal set with each marked cycle.
    pub fn total_crossing_parity(&self) -> Vec<u8> {
        if self.crossing_counts.is_empty() {
            return Vec::new();
        }
        let m = self.crossing_counts[0].len();
        (0..m)
            .map(|c| {
                let total: usize = self.crossing_counts.iter().map(|row| row[c]).sum();
                (total % 2) as u8
            })
            .collect()
    }
}
