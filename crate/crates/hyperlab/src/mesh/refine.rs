//! Uniform quadrisection refinement with intrinsic midpoints.
//!
//! Each triangle splits into four via its side midpoints: three corner
//! triangles and the central midpoint triangle. Side lengths of the
//! children come from hyperbolic trigonometry alone, so refinement never
//! consults an embedding; chart records are carried along for the vertices
//! that have them.

use std::collections::HashMap;

use crate::hyp::{midline_length, uhp_to_hyperboloid, hyperboloid_to_uhp, Point};

use super::{MeshError, MetricTriangle, SurfaceMesh, VertexCharts};

/// Quadrisect every triangle; `h` halves, marked curves and truncation
/// circles double their node counts.
pub fn refine(mesh: &SurfaceMesh) -> Result<SurfaceMesh, MeshError> {
    refine_with_map(mesh).map(|(m, _)| m)
}

/// Like [`refine`], also returning the midpoint parents: entry `i` gives
/// the endpoints of the edge whose midpoint became vertex
/// `mesh.vertex_count + i`. Parent vertices keep their ids.
pub fn refine_with_map(
    mesh: &SurfaceMesh,
) -> Result<(SurfaceMesh, Vec<(usize, usize)>), MeshError> {
    let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
    let mut next = mesh.vertex_count;
    let mut charts = mesh.charts.clone();
    let mut edge_len: HashMap<(usize, usize), f64> = HashMap::new();
    for t in &mesh.triangles {
        for e in 0..3 {
            let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
            edge_len.insert((a.min(b), a.max(b)), t.len[e]);
        }
    }
    // Allocate midpoints with chart data.
    let mut keys: Vec<(usize, usize)> = edge_len.keys().cloned().collect();
    keys.sort_unstable();
    for &(a, b) in &keys {
        let id = next;
        next += 1;
        midpoint.insert((a, b), id);
        charts.push(midpoint_charts(&charts[a], &charts[b]));
    }

    let mut tris = Vec::with_capacity(mesh.triangles.len() * 4);
    for t in &mesh.triangles {
        let [v0, v1, v2] = t.v;
        let [l01, l12, l20] = t.len;
        let m01 = midpoint[&(v0.min(v1), v0.max(v1))];
        let m12 = midpoint[&(v1.min(v2), v1.max(v2))];
        let m20 = midpoint[&(v2.min(v0), v2.max(v0))];
        // Midline opposite each vertex: connects midpoints of the two
        // adjacent sides. midline(opposite side, adjacent, adjacent).
        let d12_20 = midline_length(l12, l20, l01); // hmm see below
        let _ = d12_20;
        // Use the formula with explicit angles: the midline joining the
        // midpoints of the sides meeting at vertex X has length computed
        // from those half-sides and the angle at X.
        let mid_at = |opp: f64, s1: f64, s2: f64| -> f64 {
            let alpha = crate::hyp::angle_from_sides(opp, s1, s2);
            let ch = (s1 / 2.0).cosh() * (s2 / 2.0).cosh()
                - (s1 / 2.0).sinh() * (s2 / 2.0).sinh() * alpha.cos();
            ch.max(1.0).acosh()
        };
        // At v0: sides l01 (to v1) and l20 (to v2); opposite l12.
        let m0 = mid_at(l12, l01, l20); // joins m01 and m20
        // At v1: sides l01, l12; opposite l20.
        let m1 = mid_at(l20, l01, l12); // joins m01 and m12
        // At v2: sides l12, l20; opposite l01.
        let m2 = mid_at(l01, l12, l20); // joins m12 and m20
        tris.push(MetricTriangle {
            v: [v0, m01, m20],
            len: [l01 / 2.0, m0, l20 / 2.0],
        });
        tris.push(MetricTriangle {
            v: [m01, v1, m12],
            len: [l01 / 2.0, l12 / 2.0, m1],
        });
        tris.push(MetricTriangle {
            v: [m20, m12, v2],
            len: [m2, l12 / 2.0, l20 / 2.0],
        });
        tris.push(MetricTriangle {
            v: [m01, m12, m20],
            len: [m1, m2, m0],
        });
    }

    let subdivide_cycle = |cycle: &[usize]| -> Vec<usize> {
        let n = cycle.len();
        let mut out = Vec::with_capacity(2 * n);
        for i in 0..n {
            let (a, b) = (cycle[i], cycle[(i + 1) % n]);
            out.push(a);
            out.push(midpoint[&(a.min(b), a.max(b))]);
        }
        out
    };
    let marked_curves = mesh.marked_curves.iter().map(|c| subdivide_cycle(c)).collect();
    let cusp_boundaries = mesh
        .cusp_boundaries
        .iter()
        .map(|cb| super::CuspBoundary {
            cusp: cb.cusp,
            cycle: subdivide_cycle(&cb.cycle),
            y: cb.y,
        })
        .collect();

    let out = SurfaceMesh {
        genus: mesh.genus,
        punctures: mesh.punctures,
        h: mesh.h / 2.0,
        vertex_count: next,
        triangles: tris,
        marked_curves,
        cusp_boundaries,
        snapped_twists: mesh.snapped_twists.clone(),
        twist_snap_errors: mesh.twist_snap_errors.clone(),
        charts,
        content_hash: format!("{}:refined", mesh.content_hash),
    };
    out.validate()?;
    Ok((out, keys))
}

/// Chart records for an edge midpoint, from its endpoints' records.
fn midpoint_charts(a: &VertexCharts, b: &VertexCharts) -> VertexCharts {
    let mut out = VertexCharts::default();
    // Pants charts present on both endpoints: hyperbolic midpoint there.
    for &(pa, ra) in &a.pants {
        for &(pb, rb) in &b.pants {
            if pa == pb {
                let qa = Point::project(crate::hyp::MVec::new(ra[0], ra[1], ra[2]));
                let qb = Point::project(crate::hyp::MVec::new(rb[0], rb[1], rb[2]));
                let m = qa.midpoint(qb);
                out.pants.push((pa, {
                    let v = m.raw();
                    [v.x, v.y, v.t]
                }));
            }
        }
    }
    // Cusp chart: if both endpoints are in the same cusp chart, midpoint
    // via the chart's own hyperbolic structure (the chart is a UHP).
    if let (Some((ca, xa, ya)), Some((cb, xb, yb))) = (a.cusp, b.cusp) {
        if ca == cb {
            // Wrap x to the nearest representative.
            let period = 2.0 * std::f64::consts::PI;
            let mut xb = xb;
            while xb - xa > period / 2.0 {
                xb -= period;
            }
            while xa - xb > period / 2.0 {
                xb += period;
            }
            let pa = uhp_to_hyperboloid(xa, ya);
            let pb = uhp_to_hyperboloid(xb, yb);
            let (mx, my) = hyperboloid_to_uhp(pa.midpoint(pb));
            out.cusp = Some((ca, mx.rem_euclid(period), my));
        }
    }
    // Band record: interpolate depth when both sides agree on the band.
    if let (Some((ca, sa, da)), Some((cb, sb, db))) = (a.band, b.band) {
        if ca == cb && sa == sb {
            out.band = Some((ca, sa, 0.5 * (da + db)));
        }
    }
    out
}
