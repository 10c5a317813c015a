//! Generic triangulation helpers: stitching two node chains, zipping two
//! closed loops, and tracing the boundary of a partial complex.

/// Emitted triangle (vertex ids, winding as supplied).
pub type Tri = [usize; 3];

/// Stitch two open chains that run in the same direction. Produces a
/// triangulated band; the diagonal choice is by shorter connection, with
/// `dist` supplying distances between node ids. The first and last nodes
/// of the chains are connected by band edges (they need not coincide).
/// Lower-chain triangles are wound (lo_i, lo_{i+1}, up_j); upper ones
/// (lo_i, up_{j+1}, up_j).
pub fn stitch_chains(
    lower: &[usize],
    upper: &[usize],
    dist: &mut dyn FnMut(usize, usize) -> f64,
    out: &mut Vec<Tri>,
) {
    assert!(!lower.is_empty() && !upper.is_empty());
    let (mut i, mut j) = (0usize, 0usize);
    while i + 1 < lower.len() || j + 1 < upper.len() {
        let can_lo = i + 1 < lower.len();
        let can_up = j + 1 < upper.len();
        let advance_lower = if can_lo && can_up {
            dist(lower[i + 1], upper[j]) <= dist(lower[i], upper[j + 1])
        } else {
            can_lo
        };
        if advance_lower {
            out.push([lower[i], lower[i + 1], upper[j]]);
            i += 1;
        } else {
            out.push([lower[i], upper[j + 1], upper[j]]);
            j += 1;
        }
    }
}

/// Zip two closed loops bounding an annulus. `inner` and `outer` must be
/// supplied so that they run in opposite senses around the annulus (as the
/// two boundary components of an oriented annulus do). The function aligns
/// the starting points and relative direction automatically by trying both
/// orientations of `outer` and picking the cheaper zip.
pub fn zip_loops(
    inner: &[usize],
    outer: &[usize],
    dist: &mut dyn FnMut(usize, usize) -> f64,
    out: &mut Vec<Tri>,
) {
    assert!(inner.len() >= 2 && outer.len() >= 2);
    let reversed: Vec<usize> = outer.iter().rev().cloned().collect();
    let (tris_a, cost_a) = zip_oriented(inner, outer, dist);
    let (tris_b, cost_b) = zip_oriented(inner, &reversed, dist);
    if cost_a <= cost_b {
        out.extend(tris_a);
    } else {
        out.extend(tris_b);
    }
}

fn zip_oriented(
    inner: &[usize],
    outer: &[usize],
    dist: &mut dyn FnMut(usize, usize) -> f64,
) -> (Vec<Tri>, f64) {
    // Align: start at the globally closest pair.
    let (mut bi, mut bj, mut best) = (0usize, 0usize, f64::INFINITY);
    for (i, &u) in inner.iter().enumerate() {
        for (j, &v) in outer.iter().enumerate() {
            let d = dist(u, v);
            if d < best {
                best = d;
                bi = i;
                bj = j;
            }
        }
    }
    let n = inner.len();
    let m = outer.len();
    // Cumulative arclength fraction along each loop starting at the
    // aligned pair; advancing by fractional progress keeps the zip
    // monotone (no folding around corners).
    let frac = |ids: &[usize], start: usize, dist: &mut dyn FnMut(usize, usize) -> f64| {
        let len = ids.len();
        let mut cum = Vec::with_capacity(len + 1);
        cum.push(0.0);
        let mut acc = 0.0;
        for s in 0..len {
            let a = ids[(start + s) % len];
            let b = ids[(start + s + 1) % len];
            acc += dist(a, b).max(1e-12);
            cum.push(acc);
        }
        let total = acc.max(1e-12);
        cum.iter().map(|x| x / total).collect::<Vec<f64>>()
    };
    let fi = frac(inner, bi, dist);
    let fj = frac(outer, bj, dist);
    let mut tris = Vec::with_capacity(n + m);
    let mut cost = 0.0;
    let (mut ci, mut cj) = (0usize, 0usize);
    while ci < n || cj < m {
        let iu = inner[(bi + ci) % n];
        let ov = outer[(bj + cj) % m];
        let next_i = inner[(bi + ci + 1) % n];
        let next_j = outer[(bj + cj + 1) % m];
        let can_i = ci < n;
        let can_j = cj < m;
        // Greedy shortest-diagonal choice, kept within a bounded
        // fractional-progress window so the zip cannot fold.
        let window = 0.08;
        let adv_inner = if can_i && can_j {
            if fi[ci + 1] > fj[cj + 1] + window {
                false
            } else if fj[cj + 1] > fi[ci + 1] + window {
                true
            } else {
                dist(next_i, ov) <= dist(iu, next_j)
            }
        } else {
            can_i
        };
        if adv_inner {
            tris.push([iu, next_i, ov]);
            cost += dist(next_i, ov);
            ci += 1;
        } else {
            tris.push([iu, next_j, ov]);
            cost += dist(iu, next_j);
            cj += 1;
        }
    }
    (tris, cost)
}

/// Trace boundary loops of a set of consistently wound triangles: directed
/// edges used exactly once with unused reverse form closed loops (returned
/// in the direction opposite to triangle winding, i.e. as the hole sees
/// them).
pub fn boundary_loops(tris: &[Tri]) -> Vec<Vec<usize>> {
    use std::collections::HashMap;
    let mut directed: HashMap<(usize, usize), u32> = HashMap::new();
    for t in tris {
        for e in 0..3 {
            *directed.entry((t[e], t[(e + 1) % 3])).or_insert(0) += 1;
        }
    }
    // A boundary directed edge (a, b): triangle uses a->b once, and b->a is
    // absent. The hole is traced along b->a direction edges.
    let mut next: HashMap<usize, Vec<usize>> = HashMap::new();
    for (&(a, b), &c) in &directed {
        if c == 1 && !directed.contains_key(&(b, a)) {
            next.entry(b).or_default().push(a);
        }
    }
    for v in next.values_mut() {
        v.sort_unstable();
    }
    let mut loops = Vec::new();
    let mut used: std::collections::HashSet<(usize, usize)> = std::collections::HashSet::new();
    let mut starts: Vec<usize> = next.keys().cloned().collect();
    starts.sort_unstable();
    for s in starts {
        let outs = next[&s].clone();
        for first in outs {
            if used.contains(&(s, first)) {
                continue;
            }
            let mut cycle = vec![s];
            let mut cur = first;
            used.insert((s, cur));
            while cur != s {
                cycle.push(cur);
                let nexts = next.get(&cur).cloned().unwrap_or_default();
                let mut advanced = false;
                for cand in nexts {
                    if !used.contains(&(cur, cand)) {
                        used.insert((cur, cand));
                        cur = cand;
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    break; // open chain (should not happen for closed holes)
                }
            }
            loops.push(cycle);
        }
    }
    loops
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stitch_simple_band() {
        // Two parallel chains of 3 and 4 nodes at unit spacing.
        let lower = [0, 1, 2];
        let upper = [3, 4, 5, 6];
        let pos = |v: usize| -> (f64, f64) {
            match v {
                0 => (0.0, 0.0),
                1 => (1.0, 0.0),
                2 => (2.0, 0.0),
                3 => (0.0, 1.0),
                4 => (0.7, 1.0),
                5 => (1.4, 1.0),
                _ => (2.1, 1.0),
            }
        };
        let mut dist = |a: usize, b: usize| -> f64 {
            let (xa, ya) = pos(a);
            let (xb, yb) = pos(b);
            ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt()
        };
        let mut tris = Vec::new();
        stitch_chains(&lower, &upper, &mut dist, &mut tris);
        assert_eq!(tris.len(), lower.len() + upper.len() - 2);
        // All nodes used.
        let used: std::collections::HashSet<usize> =
            tris.iter().flat_map(|t| t.iter().cloned()).collect();
        assert_eq!(used.len(), 7);
    }

    #[test]
    fn zip_square_loops() {
        // Inner square 0..4, outer square 4..8, both CCW; zip handles the
        // orientation flip internally.
        let pos = |v: usize| -> (f64, f64) {
            let inner = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)];
            let outer = [(-1.0, -1.0), (2.0, -1.0), (2.0, 2.0), (-1.0, 2.0)];
            if v < 4 {
                inner[v]
            } else {
                outer[v - 4]
            }
        };
        let mut dist = |a: usize, b: usize| -> f64 {
            let (xa, ya) = pos(a);
            let (xb, yb) = pos(b);
            ((xa - xb).powi(2) + (ya - yb).powi(2)).sqrt()
        };
        let inner = [0, 1, 2, 3];
        let outer = [4, 5, 6, 7];
        let mut tris = Vec::new();
        zip_loops(&inner, &outer, &mut dist, &mut tris);
        assert_eq!(tris.len(), 8);
        // The zipped annulus has exactly the two input loops as boundary.
        let loops = boundary_loops(&tris);
        assert_eq!(loops.len(), 2);
    }

    #[test]
    fn boundary_of_single_triangle() {
        let loops = boundary_loops(&[[0, 1, 2]]);
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].len(), 3);
    }
}
