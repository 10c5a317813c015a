//! Nodal domains and the Euler–Poincaré bookkeeping.

use std::collections::{HashMap, HashSet};

use crate::mesh::SurfaceMesh;

use super::graph::NodalGraph;

#[derive(Clone, Debug)]
pub struct NodalDecomposition {
    /// Domain index per vertex.
    pub domain_of_vertex: Vec<usize>,
    pub domain_count: usize,
    /// Sign (+1/-1) per domain.
    pub domain_signs: Vec<i8>,
    /// Euler characteristic per domain, boundary circles included
    /// (truncation circles count as boundary, punctures stay open).
    pub domain_chi: Vec<i64>,
    /// chi of the nodal graph (0 for disjoint circles, +1 per arc).
    pub nodal_chi: i64,
    /// Number of nodal boundary components adjacent to each domain.
    pub domain_nodal_boundaries: Vec<usize>,
    /// For each nodal component, the (at most two) domains it separates.
    pub component_domains: Vec<(usize, usize)>,
    /// Truncation circles contained in each domain (cusp indices).
    pub domain_cusps: Vec<Vec<usize>>,
    /// Cusps touched by nodal arcs (their truncation circle has mixed
    /// signs).
    pub cusps_on_nodal: Vec<usize>,
}

/// Decompose the mesh minus the nodal graph into signed domains.
pub fn nodal_domains(mesh: &SurfaceMesh, ng: &NodalGraph) -> NodalDecomposition {
    let n = mesh.vertex_count;
    // Union-find over same-sign edges.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for t in &mesh.triangles {
        for e in 0..3 {
            let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
            if ng.signs[a] == ng.signs[b] {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let mut domain_of_vertex = vec![0usize; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        let next = ids.len();
        let id = *ids.entry(r).or_insert(next);
        domain_of_vertex[v] = id;
    }
    let domain_count = ids.len();
    let mut domain_signs = vec![0i8; domain_count];
    for v in 0..n {
        domain_signs[domain_of_vertex[v]] = ng.signs[v];
    }

    // Euler characteristic per domain on the cut complex:
    // V: own vertices + crossing points on edges with an endpoint inside;
    // E: uncrossed own edges + half-edges of crossed edges + own copies of
    //    nodal segments; F: whole own triangles + the cell pieces of
    //    crossed triangles.
    let crossed: HashSet<(usize, usize)> = ng
        .segments
        .iter()
        .flat_map(|s| s.edges.into_iter())
        .collect();
    let mut v_own = vec![0i64; domain_count];
    for v in 0..n {
        v_own[domain_of_vertex[v]] += 1;
    }
    let mut v_cross = vec![0i64; domain_count];
    for &(a, b) in &crossed {
        // One crossing vertex for each adjacent domain.
        let da = domain_of_vertex[a];
        let db = domain_of_vertex[b];
        v_cross[da] += 1;
        if db != da {
            v_cross[db] += 1;
        }
    }
    let mut e_count = vec![0i64; domain_count];
    let mut seen_edges: HashSet<(usize, usize)> = HashSet::new();
    for t in &mesh.triangles {
        for e in 0..3 {
            let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
            let key = (a.min(b), a.max(b));
            if !seen_edges.insert(key) {
                continue;
            }
            if ng.signs[a] == ng.signs[b] {
                e_count[domain_of_vertex[a]] += 1;
            } else {
                // Two half-edges, one per domain.
                e_count[domain_of_vertex[a]] += 1;
                e_count[domain_of_vertex[b]] += 1;
            }
        }
    }
    // Nodal segments: each borders two cell pieces; it contributes one
    // boundary edge to each adjacent domain's closed subcomplex.
    let mut component_domains = Vec::with_capacity(ng.components.len());
    for comp in &ng.components {
        let seg = &ng.segments[comp[0]];
        let t = &mesh.triangles[seg.triangle];
        let s = [ng.signs[t.v[0]], ng.signs[t.v[1]], ng.signs[t.v[2]]];
        let plus_count = s.iter().filter(|&&x| x > 0).count();
        let minority_sign = if plus_count == 1 { 1 } else { -1 };
        let minority = (0..3).find(|&i| s[i] == minority_sign).unwrap();
        let majority = (0..3).find(|&i| s[i] != minority_sign).unwrap();
        let d_min = domain_of_vertex[t.v[minority]];
        let d_maj = domain_of_vertex[t.v[majority]];
        component_domains.push((d_min, d_maj));
    }
    for (comp, &(d1, d2)) in ng.components.iter().zip(&component_domains) {
        let len = comp.len() as i64;
        e_count[d1] += len;
        if d2 != d1 {
            e_count[d2] += len;
        }
    }
    let mut f_count = vec![0i64; domain_count];
    for t in &mesh.triangles {
        let s = [ng.signs[t.v[0]], ng.signs[t.v[1]], ng.signs[t.v[2]]];
        if s[0] == s[1] && s[1] == s[2] {
            f_count[domain_of_vertex[t.v[0]]] += 1;
        } else {
            // Two pieces.
            let plus_count = s.iter().filter(|&&x| x > 0).count();
            let minority_sign = if plus_count == 1 { 1 } else { -1 };
            for i in 0..3 {
                if s[i] == minority_sign {
                    f_count[domain_of_vertex[t.v[i]]] += 1;
                    break;
                }
            }
            for i in 0..3 {
                if s[i] != minority_sign {
                    f_count[domain_of_vertex[t.v[i]]] += 1;
                    break;
                }
            }
        }
    }
    let domain_chi: Vec<i64> = (0..domain_count)
        .map(|d| v_own[d] + v_cross[d] - e_count[d] + f_count[d])
        .collect();

    // chi of the nodal graph: crossing vertices minus segments.
    let nodal_chi = crossed.len() as i64 - ng.segments.len() as i64;

    let mut domain_nodal_boundaries = vec![0usize; domain_count];
    for &(d1, d2) in &component_domains {
        domain_nodal_boundaries[d1] += 1;
        if d2 != d1 {
            domain_nodal_boundaries[d2] += 1;
        }
    }

    // Truncation circles per domain; mixed-sign circles are "on" the
    // nodal set.
    let mut domain_cusps = vec![Vec::new(); domain_count];
    let mut cusps_on_nodal = Vec::new();
    for cb in &mesh.cusp_boundaries {
        let first_sign = ng.signs[cb.cycle[0]];
        if cb.cycle.iter().any(|&v| ng.signs[v] != first_sign) {
            cusps_on_nodal.push(cb.cusp);
        } else {
            domain_cusps[domain_of_vertex[cb.cycle[0]]].push(cb.cusp);
        }
    }

    NodalDecomposition {
        domain_of_vertex,
        domain_count,
        domain_signs,
        domain_chi,
        nodal_chi,
        domain_nodal_boundaries,
        component_domains,
        domain_cusps,
        cusps_on_nodal,
    }
}

#[derive(Clone, Debug)]
pub struct EulerPoincareReport {
    /// chi of each domain (order as in the decomposition).
    pub domain_chi: Vec<i64>,
    pub nodal_chi: i64,
    /// Punctures off the nodal set (cusped surfaces only).
    pub punctures_off_nodal: usize,
    /// Integer residual of the Euler–Poincaré identity; 0 when consistent.
    pub residual: i64,
    pub all_domains_negative: bool,
}

/// Check the Euler–Poincaré identity of the nodal cell decomposition:
/// closed surfaces: `chi(S) = sum chi(domains) + chi(Z)`; cusped surfaces:
/// `chi(filled S) - k = sum chi(domains) + chi(closure of Z)` with `k` the
/// punctures away from the nodal set.
pub fn euler_poincare_audit(
    mesh: &SurfaceMesh,
    ng: &NodalGraph,
    dec: &NodalDecomposition,
) -> EulerPoincareReport {
    let genus = mesh.genus as i64;
    let n_punct = mesh.punctures;
    let domain_sum: i64 = dec.domain_chi.iter().sum();
    let (residual, k) = if n_punct == 0 {
        let chi_s = 2 - 2 * genus;
        (chi_s - domain_sum - dec.nodal_chi, 0usize)
    } else {
        let k = n_punct - dec.cusps_on_nodal.len();
        // Closure of Z joins arc ends at each touched puncture.
        let arc_ends: i64 = ng
            .closed
            .iter()
            .filter(|&&c| !c)
            .map(|_| 2i64)
            .sum();
        let nodal_chi_closure =
            dec.nodal_chi - arc_ends + dec.cusps_on_nodal.len() as i64;
        let chi_filled = 2 - 2 * genus;
        (
            chi_filled - k as i64 - domain_sum - nodal_chi_closure,
            k,
        )
    };
    EulerPoincareReport {
        domain_chi: dec.domain_chi.clone(),
        nodal_chi: dec.nodal_chi,
        punctures_off_nodal: k,
        residual,
        all_domains_negative: dec.domain_chi.iter().all(|&c| c < 0),
    }
}
