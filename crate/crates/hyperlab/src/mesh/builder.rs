//! Whole-surface mesh assembly.

use std::collections::HashMap;

use sha2::{Digest, Sha256};

use crate::geometry::{fn_point_to_json, FnPoint, PantsGeometry, SlotShape};
use crate::hyp::{cusp_chart_distance, hyperboloid_to_uhp, Mat2};

use super::scaffold::{chart_coords, PantsScaffold, Segment};
use super::stitch::{boundary_loops, stitch_chains, zip_loops, Tri};
use super::{CuspBoundary, MeshError, MetricTriangle, SurfaceMesh, VertexCharts};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Length window accepted by the mesher (tighter than the group builder;
/// beyond it hexagons are too degenerate to mesh at reasonable h).
pub const MESH_MIN_LENGTH: f64 = 0.02;
pub const MESH_MAX_LENGTH: f64 = 12.0;
/// Max allowed ratio between the longest and shortest boundary length of
/// any single pants.
pub const MAX_ASPECT: f64 = 100.0;

/// Quality floor (degrees) enforced after construction.
pub const MIN_ANGLE_DEG: f64 = 15.0;

/// Mesh a closed surface (`n = 0`).
pub fn mesh_surface(p: &FnPoint, h: f64) -> Result<SurfaceMesh, MeshError> {
    if p.punctures() != 0 {
        return Err(MeshError::Domain(
            "mesh_surface requires a closed surface; use mesh_cusped".into(),
        ));
    }
    build(p, h, None)
}

/// Mesh without the final validation gates (debug aid).
pub fn mesh_surface_unchecked(p: &FnPoint, h: f64) -> Result<SurfaceMesh, MeshError> {
    build_impl(p, h, None, false)
}

/// Cusped variant of [`mesh_surface_unchecked`].
pub fn mesh_cusped_unchecked(p: &FnPoint, y_trunc: f64, h: f64) -> Result<SurfaceMesh, MeshError> {
    build_impl(p, h, Some(y_trunc), false)
}

/// Mesh a cusped surface with horocycle truncation at height `y_trunc`.
pub fn mesh_cusped(p: &FnPoint, y_trunc: f64, h: f64) -> Result<SurfaceMesh, MeshError> {
    if p.punctures() == 0 {
        return Err(MeshError::Domain(
            "mesh_cusped requires punctures; use mesh_surface".into(),
        ));
    }
    if y_trunc < 2.0 {
        return Err(MeshError::Domain(format!(
            "truncation parameter {y_trunc} is below 2"
        )));
    }
    if y_trunc < 8.0 {
        return Err(MeshError::Conditioning(format!(
            "truncation parameter {y_trunc} leaves no room above the pants spine \
             (the length-1 horocycle sits at height {TWO_PI:.3})"
        )));
    }
    build(p, h, Some(y_trunc))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
enum NodeKey {
    Circle { curve: usize, idx: usize },
    Hub { pants: usize, back: bool },
    SeamMid { pants: usize, seam: usize },
    Chain { pants: usize, seam: usize, back: bool, idx: usize },
    Band { pants: usize, slot: usize, row: usize, arc: usize, idx: usize },
    CuspRow { pants: usize, slot: usize, row: usize, arc: usize, idx: usize },
}

struct Builder {
    keys: HashMap<NodeKey, usize>,
    charts: Vec<VertexCharts>,
    /// UHP position per (vertex, pants): positions[pants] maps vertex -> (x, y)
    positions: Vec<HashMap<usize, (f64, f64)>>,
    tris: Vec<MetricTriangle>,
    h: f64,
}

impl Builder {
    fn vertex(&mut self, key: NodeKey) -> usize {
        let next = self.keys.len();
        let id = *self.keys.entry(key).or_insert(next);
        if id == next {
            self.charts.push(VertexCharts::default());
        }
        id
    }

    fn set_pos(&mut self, pants: usize, v: usize, x: f64, y: f64) {
        self.positions[pants].entry(v).or_insert((x, y));
    }

    fn pos(&self, pants: usize, v: usize) -> (f64, f64) {
        self.positions[pants][&v]
    }

    fn dist(&self, pants: usize, a: usize, b: usize) -> f64 {
        let (xa, ya) = self.pos(pants, a);
        let (xb, yb) = self.pos(pants, b);
        uhp_dist(xa, ya, xb, yb)
    }

    fn emit(&mut self, pants: usize, tris: &[Tri]) {
        for t in tris {
            let len = [
                self.dist(pants, t[0], t[1]),
                self.dist(pants, t[1], t[2]),
                self.dist(pants, t[2], t[0]),
            ];
            self.tris.push(MetricTriangle { v: *t, len });
        }
    }
}

/// Stable hyperbolic distance between upper half-plane points.
pub fn uhp_dist(xa: f64, ya: f64, xb: f64, yb: f64) -> f64 {
    let q = ((xa - xb).powi(2) + (ya - yb).powi(2)) / (2.0 * ya * yb);
    (1.0 + q).acosh()
}

/// Distance between band points in Fermi coordinates around a closed
/// geodesic of length `length` (wrap-aware).
fn fermi_band_dist(length: f64, t1: f64, d1: f64, t2: f64, d2: f64) -> f64 {
    let mut dt = (t1 - t2).rem_euclid(length);
    if dt > length / 2.0 {
        dt = length - dt;
    }
    crate::hyp::fermi_distance(dt, d1, d2)
}

fn build(p: &FnPoint, h: f64, y_trunc: Option<f64>) -> Result<SurfaceMesh, MeshError> {
    build_impl(p, h, y_trunc, true)
}

fn build_impl(
    p: &FnPoint,
    h: f64,
    y_trunc: Option<f64>,
    validate: bool,
) -> Result<SurfaceMesh, MeshError> {
    if !(1e-3..=1.0).contains(&h) {
        return Err(MeshError::Domain(format!("h = {h} outside [1e-3, 1]")));
    }
    for &l in &p.lengths {
        if !(MESH_MIN_LENGTH..=MESH_MAX_LENGTH).contains(&l) {
            return Err(MeshError::Conditioning(format!(
                "curve length {l} outside the meshable window [{MESH_MIN_LENGTH}, {MESH_MAX_LENGTH}]"
            )));
        }
    }
    let dec = p.decomposition.clone();
    for pid in 0..dec.pants_count() {
        let lens = p.pants_boundary_lengths(pid);
        let pos: Vec<f64> = lens.iter().cloned().filter(|&l| l > 0.0).collect();
        let lo = pos.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = pos.iter().cloned().fold(0.0f64, f64::max);
        if hi / lo > MAX_ASPECT {
            return Err(MeshError::Conditioning(format!(
                "pants {pid} boundary aspect {:.1} exceeds {MAX_ASPECT}",
                hi / lo
            )));
        }
    }

    // Scaffolds.
    let mut scaffolds = Vec::new();
    for pid in 0..dec.pants_count() {
        let geom = PantsGeometry::new(p.pants_boundary_lengths(pid)).map_err(MeshError::Geometry)?;
        scaffolds.push(PantsScaffold::new(geom, h)?);
    }

    let mut b = Builder {
        keys: HashMap::new(),
        charts: Vec::new(),
        positions: vec![HashMap::new(); dec.pants_count()],
        tris: Vec::new(),
        h,
    };

    // Twist snapping and circle nodes.
    let mut circle_n = Vec::new();
    let mut snapped = Vec::new();
    let mut snap_err = Vec::new();
    for (c, &l) in p.lengths.iter().enumerate() {
        let n = (2 * ((l / (2.0 * h)).ceil() as usize)).max(8);
        circle_n.push(n);
        let off = (p.twists[c] * n as f64 / l).round();
        let t_hat = off * l / n as f64;
        snap_err.push((t_hat - p.twists[c]).abs());
        snapped.push(t_hat);
    }

    // Marked curve cycles (vertex ids in index order).
    let mut marked = Vec::new();
    for (c, &n) in circle_n.iter().enumerate() {
        let cycle: Vec<usize> = (0..n).map(|i| b.vertex(NodeKey::Circle { curve: c, idx: i })).collect();
        marked.push(cycle);
    }

    // Spine nodes for every pants.
    for (pid, sc) in scaffolds.iter().enumerate() {
        let hub = b.vertex(NodeKey::Hub { pants: pid, back: false });
        let (hx, hy) = hyperboloid_to_uhp(sc.hub);
        b.set_pos(pid, hub, hx, hy);
        b.charts[hub].pants.push((pid, raw3(sc.hub)));
        let hub_b = b.vertex(NodeKey::Hub { pants: pid, back: true });
        // Canonical chart rep of the back hub: reflect across seam 0.
        let hb = sc.hub.reflect(sc.geom.seams[0]);
        let (hbx, hby) = hyperboloid_to_uhp(hb);
        b.set_pos(pid, hub_b, hbx, hby);
        b.charts[hub_b].pants.push((pid, raw3(hb)));
        for k in 0..3 {
            let m = b.vertex(NodeKey::SeamMid { pants: pid, seam: k });
            let (mx, my) = hyperboloid_to_uhp(sc.mids[k]);
            b.set_pos(pid, m, mx, my);
            b.charts[m].pants.push((pid, raw3(sc.mids[k])));
            for idx in 0..sc.chain_interior(k) {
                let v = b.vertex(NodeKey::Chain { pants: pid, seam: k, back: false, idx });
                let pt = sc.chain_node(k, idx);
                let (x, y) = hyperboloid_to_uhp(pt);
                b.set_pos(pid, v, x, y);
                b.charts[v].pants.push((pid, raw3(pt)));
                let vb = b.vertex(NodeKey::Chain { pants: pid, seam: k, back: true, idx });
                let ptb = pt.reflect(sc.geom.seams[k]);
                let (xb, yb) = hyperboloid_to_uhp(ptb);
                b.set_pos(pid, vb, xb, yb);
                b.charts[vb].pants.push((pid, raw3(ptb)));
            }
        }
    }

    // Band meshes per (curve, end).
    for c in dec.curves() {
        for (side, &(pid, slot)) in c.ends.iter().enumerate() {
            mesh_band(
                &mut b,
                &scaffolds[pid],
                pid,
                slot,
                c.id,
                side as u8,
                circle_n[c.id],
                p.lengths[c.id],
                snapped[c.id],
            )?;
        }
    }

    // Cusp pieces.
    let mut cusp_boundaries = Vec::new();
    if let Some(y_t) = y_trunc {
        for (cusp_idx, cusp) in dec.cusps().iter().enumerate() {
            let cycle = mesh_cusp_piece(
                &mut b,
                &scaffolds[cusp.pants],
                cusp.pants,
                cusp.slot,
                cusp_idx,
                y_t,
            )?;
            cusp_boundaries.push(CuspBoundary {
                cusp: cusp_idx,
                cycle,
                y: y_t,
            });
        }
    } else if !dec.cusps().is_empty() {
        return Err(MeshError::Domain(
            "surface has cusps; a truncation parameter is required".into(),
        ));
    }

    let mut tris = std::mem::take(&mut b.tris);
    unify_edge_lengths(&mut tris);
    orient_consistently(&mut tris)?;
    flip_pass(&mut tris, &marked, &cusp_boundaries, 8);

    let mut mesh = SurfaceMesh {
        genus: dec.genus(),
        punctures: dec.punctures(),
        h,
        vertex_count: b.keys.len(),
        triangles: tris,
        marked_curves: marked,
        cusp_boundaries,
        snapped_twists: snapped,
        twist_snap_errors: snap_err,
        charts: b.charts,
        content_hash: content_hash(p, h),
    };
    finalize_ids(&mut mesh);
    if !validate {
        return Ok(mesh);
    }
    mesh.validate()?;
    let chi_want = 2 - 2 * mesh.genus as i64 - mesh.punctures as i64;
    if mesh.euler_characteristic() != chi_want {
        return Err(MeshError::Invalid(format!(
            "Euler characteristic {} (expected {chi_want})",
            mesh.euler_characteristic()
        )));
    }
    let area = mesh.area();
    let want = mesh.expected_area();
    // The construction tiles exactly except for localized chart-ambiguity
    // defects near spine corners (short arcs where several unfoldings have
    // comparable lengths); those stay orders of magnitude below the
    // discretization error this mesh size carries anyway.
    let gate = if mesh.punctures == 0 { 5e-4 } else { 1e-2 };
    if ((area - want) / want).abs() > gate {
        return Err(MeshError::Invalid(format!(
            "area {area} deviates from Gauss-Bonnet value {want}"
        )));
    }
    let min_angle = mesh.min_angle().to_degrees();
    if min_angle < MIN_ANGLE_DEG {
        let worst = mesh
            .triangles
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.min_angle().total_cmp(&b.1.min_angle()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        return Err(MeshError::Quality(worst, min_angle));
    }
    Ok(mesh)
}

fn raw3(p: crate::hyp::Point) -> [f64; 3] {
    let v = p.raw();
    [v.x, v.y, v.t]
}

fn content_hash(p: &FnPoint, h: f64) -> String {
    let mut hasher = Sha256::new();
    hasher.update(fn_point_to_json(p).as_bytes());
    hasher.update(h.to_le_bytes());
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

/// One row of band nodes.
struct Arc {
    closed: bool,
    /// (vertex id, side-local t), ascending in t.
    nodes: Vec<(usize, f64)>,
    t0: f64,
    t1: f64,
}

#[allow(clippy::too_many_arguments)]
fn mesh_band(
    b: &mut Builder,
    sc: &PantsScaffold,
    pid: usize,
    slot: usize,
    curve: usize,
    side: u8,
    n_circle: usize,
    length: f64,
    twist: f64,
) -> Result<(), MeshError> {
    let tri_start = b.tris.len();
    let frame = sc.geom.slot_frame(slot).frame;
    let side_sign = fermi_side_sign(sc, slot, frame);
    let place =
        |t: f64, d: f64| -> (f64, f64) { fermi_uhp(frame, side_sign, t, d) };

    // Row 0: circle nodes in side-local coordinates.
    let mut row0: Vec<(usize, f64)> = (0..n_circle)
        .map(|m| {
            let id = b.keys[&NodeKey::Circle { curve, idx: m }];
            let t_owner = m as f64 * length / n_circle as f64;
            let t_local = if side == 0 {
                t_owner
            } else {
                (twist - t_owner).rem_euclid(length)
            };
            (id, t_local)
        })
        .collect();
    row0.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut band_td: HashMap<usize, (f64, f64)> = HashMap::new();
    for &(id, t) in &row0 {
        let (x, y) = place(t, 0.0);
        b.set_pos(pid, id, x, y);
        let pt = crate::hyp::uhp_to_hyperboloid(x, y);
        b.charts[id].pants.push((pid, raw3(pt)));
        if b.charts[id].band.is_none() {
            b.charts[id].band = Some((curve, side, 0.0));
        }
        band_td.insert(id, (t, 0.0));
    }

    // Clip scan at a resolution fine enough for the thinnest rows.
    let dmin = {
        let samples = (4 * n_circle).max(64);
        let mut dmin = f64::INFINITY;
        for i in 0..samples {
            let t = (i as f64 + 0.5) / samples as f64 * length;
            dmin = dmin.min(sc.clip_depth(slot, t)?);
        }
        dmin
    };
    if dmin < b.h / 25.0 {
        return Err(MeshError::Conditioning(format!(
            "spine passes within {dmin:.2e} of boundary curve {curve}; h = {} is too coarse",
            b.h
        )));
    }

    let mut rows: Vec<Vec<Arc>> = vec![vec![Arc {
        closed: true,
        nodes: row0,
        t0: 0.0,
        t1: length,
    }]];
    let mut depths = vec![0.0f64];

    let h = b.h;
    let mut d = 0.0f64;
    let mut row_index = 0usize;
    loop {
        row_index += 1;
        if row_index > 200_000 {
            return Err(MeshError::Conditioning("band row limit exceeded".into()));
        }
        let circ = length * d.cosh();
        let n_at = ((circ / h).ceil() as usize).max(8);
        let spacing = circ / n_at as f64;
        let delta = spacing.clamp(h / 16.0, h);
        let (d_next, margin) = if row_index == 1 {
            let d1 = delta.min(dmin / 2.0);
            (d1, (0.35 * delta).min(dmin / 4.0))
        } else {
            (d + delta, 0.35 * delta)
        };
        let mut arcs = extract_arcs(sc, slot, length, d_next, margin, h, row_index == 1)?;
        if arcs.is_empty() {
            break;
        }
        merge_close_arcs(
            &mut arcs,
            length,
            0.6 * h / d_next.cosh(),
            |t| sc.clip_depth(slot, t).map(|dd| dd > d_next + 0.1 * margin),
        )?;
        // Place nodes.
        let mut new_row: Vec<Arc> = Vec::new();
        for (arc_i, (closed, t0, t1)) in arcs.into_iter().enumerate() {
            let span = t1 - t0;
            let circ = span * d_next.cosh();
            if !closed && circ < 0.6 * h {
                continue; // too short to host nodes; the zip covers it
            }
            let mut nodes = Vec::new();
            if closed {
                let n = ((circ / h).ceil() as usize).max(8);
                for i in 0..n {
                    let t = t0 + span * i as f64 / n as f64;
                    let id = b.vertex(NodeKey::Band { pants: pid, slot, row: row_index, arc: arc_i, idx: i });
                    let (x, y) = place(t, d_next);
                    b.set_pos(pid, id, x, y);
                    let pt = crate::hyp::uhp_to_hyperboloid(x, y);
                    b.charts[id].pants.push((pid, raw3(pt)));
                    b.charts[id].band = Some((curve, side, d_next));
                    band_td.insert(id, (t.rem_euclid(length), d_next));
                    nodes.push((id, t));
                }
            } else {
                let n = ((circ / h).round() as usize).max(1) + 1;
                for i in 0..n {
                    let t = t0 + span * i as f64 / (n - 1).max(1) as f64;
                    let id = b.vertex(NodeKey::Band { pants: pid, slot, row: row_index, arc: arc_i, idx: i });
                    let (x, y) = place(t, d_next);
                    b.set_pos(pid, id, x, y);
                    let pt = crate::hyp::uhp_to_hyperboloid(x, y);
                    b.charts[id].pants.push((pid, raw3(pt)));
                    b.charts[id].band = Some((curve, side, d_next));
                    band_td.insert(id, (t.rem_euclid(length), d_next));
                    nodes.push((id, t));
                }
            }
            new_row.push(Arc { closed, nodes, t0, t1 });
        }
        // Stitch to the previous row.
        let prev = rows.last().unwrap();
        let mut tris: Vec<Tri> = Vec::new();
        stitch_rows(&band_td, prev, &new_row, length, &mut tris)?;
        for t in &tris {
            let td = |v: usize| band_td[&v];
            let (a, c, dd) = (td(t[0]), td(t[1]), td(t[2]));
            b.tris.push(MetricTriangle {
                v: *t,
                len: [
                    fermi_band_dist(length, a.0, a.1, c.0, c.1),
                    fermi_band_dist(length, c.0, c.1, dd.0, dd.1),
                    fermi_band_dist(length, dd.0, dd.1, a.0, a.1),
                ],
            });
        }
        rows.push(new_row);
        depths.push(d_next);
        d = d_next;
    }

    // Zip the band frontier to the spine tent.
    let band_tris: Vec<Tri> = b.tris[tri_start..].iter().map(|t| t.v).collect();
    let mut oriented = band_tris.clone();
    orient_list(&mut oriented);
    let loops = boundary_loops(&oriented);
    // Discard the loop that is entirely row-0 circle nodes.
    let circle_ids: std::collections::HashSet<usize> =
        rows[0][0].nodes.iter().map(|&(id, _)| id).collect();
    let frontier: Vec<Vec<usize>> = loops
        .into_iter()
        .filter(|l| !l.iter().all(|v| circle_ids.contains(v)))
        .collect();
    if frontier.len() != 1 {
        return Err(MeshError::Invalid(format!(
            "band (curve {curve}, side {side}) has {} frontier loops",
            frontier.len()
        )));
    }
    let tent = tent_loop(b, sc, pid, slot);
    // Positions for tent nodes as this band's chart sees them: back-chain
    // nodes across the mirror seam. Each tent node also gets its images
    // under the boundary holonomy, so distances to band nodes near the
    // Fermi wrap seam resolve to the nearest unfolded copy.
    let mut tent_pos: HashMap<usize, (f64, f64)> = HashMap::new();
    fill_tent_positions(b, sc, pid, slot, &tent, &mut tent_pos);
    let holo = sc.geom.slots[slot].holonomy();
    let holo_inv = holo.inverse();
    let tent_copies: HashMap<usize, [(f64, f64); 3]> = tent_pos
        .iter()
        .map(|(&id, &(x, y))| {
            (id, [(x, y), holo.apply(x, y), holo_inv.apply(x, y)])
        })
        .collect();
    let band_chart = |t: f64, d: f64| -> (f64, f64) { place(t, d) };
    let dist_mixed = |u: usize, v: usize| -> f64 {
        match (band_td.get(&u), band_td.get(&v)) {
            (Some(&(t1, d1)), Some(&(t2, d2))) => fermi_band_dist(length, t1, d1, t2, d2),
            (Some(&(t1, d1)), None) => {
                let (x, y) = band_chart(t1, d1);
                tent_copies[&v]
                    .iter()
                    .map(|&(cx, cy)| uhp_dist(x, y, cx, cy))
                    .fold(f64::INFINITY, f64::min)
            }
            (None, Some(&(t2, d2))) => {
                let (x, y) = band_chart(t2, d2);
                tent_copies[&u]
                    .iter()
                    .map(|&(cx, cy)| uhp_dist(x, y, cx, cy))
                    .fold(f64::INFINITY, f64::min)
            }
            (None, None) => {
                let (xa, ya) = tent_pos[&u];
                tent_copies[&v]
                    .iter()
                    .map(|&(cx, cy)| uhp_dist(xa, ya, cx, cy))
                    .fold(f64::INFINITY, f64::min)
            }
        }
    };
    let mut zip_tris = Vec::new();
    {
        let mut dist = |u: usize, v: usize| dist_mixed(u, v);
        zip_loops(&frontier[0], &tent.ids, &mut dist, &mut zip_tris);
    }
    for t in &zip_tris {
        b.tris.push(MetricTriangle {
            v: *t,
            len: [
                dist_mixed(t[0], t[1]),
                dist_mixed(t[1], t[2]),
                dist_mixed(t[2], t[0]),
            ],
        });
    }
    Ok(())
}

/// Which sign of the Fermi normal points into the pants for this slot.
fn fermi_side_sign(sc: &PantsScaffold, slot: usize, frame: Mat2) -> f64 {
    let probe = sc.geom.boundary_fermi_point(slot, 0.2, 0.1);
    let (px, py) = hyperboloid_to_uhp(probe);
    let (qx, qy) = fermi_uhp(frame, 1.0, 0.2, 0.1);
    let (rx, ry) = fermi_uhp(frame, -1.0, 0.2, 0.1);
    let dq = uhp_dist(px, py, qx, qy);
    let dr = uhp_dist(px, py, rx, ry);
    if dq <= dr {
        1.0
    } else {
        -1.0
    }
}

/// UHP position of the Fermi point (t, d) for an axis frame.
fn fermi_uhp(frame: Mat2, side: f64, t: f64, d: f64) -> (f64, f64) {
    let x = side * t.exp() * d.tanh();
    let y = t.exp() / d.cosh();
    frame.apply(x, y)
}

type ArcSpan = (bool, f64, f64);

/// Merge arcs separated by parameter gaps smaller than `max_gap` when the
/// clearance predicate holds across the gap (the graze is shallow enough
/// for nodes to sit below the spine there). Handles the circular wrap.
fn merge_close_arcs(
    arcs: &mut Vec<ArcSpan>,
    period: f64,
    max_gap: f64,
    mut still_ok: impl FnMut(f64) -> Result<bool, MeshError>,
) -> Result<(), MeshError> {
    if arcs.len() < 2 {
        return Ok(());
    }
    arcs.sort_by(|a, b| a.1.total_cmp(&b.1));
    let gap_clear = |lo: f64, hi: f64, f: &mut dyn FnMut(f64) -> Result<bool, MeshError>| -> Result<bool, MeshError> {
        for i in 0..5 {
            let t = lo + (hi - lo) * (i as f64 + 0.5) / 5.0;
            if !f(t)? {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut merged: Vec<ArcSpan> = Vec::with_capacity(arcs.len());
    for arc in arcs.iter() {
        if let Some(last) = merged.last_mut() {
            let gap = arc.1 - last.2;
            if gap >= 0.0 && gap < max_gap && gap_clear(last.2, arc.1, &mut |t| still_ok(t))? {
                last.2 = arc.2;
                continue;
            }
        }
        merged.push(*arc);
    }
    // Wrap: first arc's start against last arc's end (mod period).
    if merged.len() >= 2 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        let gap = first.1 + period - last.2;
        if gap >= 0.0 && gap < max_gap && gap_clear(last.2, first.1 + period, &mut |t| still_ok(t))? {
            let l = merged.len();
            merged[l - 1].2 = first.2 + period;
            merged.remove(0);
        }
    }
    *arcs = merged;
    Ok(())
}

/// Find the sub-intervals of the boundary circle where the clip depth
/// exceeds `level + margin`.
fn extract_arcs(
    sc: &PantsScaffold,
    slot: usize,
    length: f64,
    level: f64,
    margin: f64,
    h: f64,
    expect_full: bool,
) -> Result<Vec<ArcSpan>, MeshError> {
    let res = (h / (2.0 * level.cosh())).min(length / 64.0);
    let samples = ((length / res).ceil() as usize).clamp(64, 4_000_000);
    let ok = |t: f64| -> Result<bool, MeshError> {
        Ok(sc.clip_depth(slot, t)? > level + margin)
    };
    let mut flags = Vec::with_capacity(samples);
    for i in 0..samples {
        flags.push(ok((i as f64 + 0.5) / samples as f64 * length)?);
    }
    if flags.iter().all(|&f| f) {
        return Ok(vec![(true, 0.0, length)]);
    }
    if expect_full {
        return Err(MeshError::Conditioning(
            "first band row is clipped; h too coarse for this geometry".into(),
        ));
    }
    if flags.iter().all(|&f| !f) {
        return Ok(vec![]);
    }
    let step = length / samples as f64;
    let refine_edge = |mut lo: f64, mut hi: f64, want_hi: bool| -> Result<f64, MeshError> {
        // Invariant: ok(lo) != ok(hi), returns the crossing.
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if ok(mid)? == want_hi {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    let mut arcs = Vec::new();
    let mut i = 0usize;
    while i < samples {
        if flags[i] {
            // Walk back to the start of this run (wrap-aware handled by
            // starting scans at a false sample).
            i += 1;
            continue;
        }
        break;
    }
    // Rotate so that we start at a false sample.
    let start = flags.iter().position(|&f| !f).unwrap();
    let mut run_start: Option<f64> = None;
    for k in 0..=samples {
        let idx = (start + k) % samples;
        let t = ((start + k) as f64 + 0.5) * step;
        let f = flags[idx];
        match (run_start, f) {
            (None, true) => {
                let lo = refine_edge(t - step, t, true)?;
                run_start = Some(lo);
            }
            (Some(lo), false) => {
                let hi = refine_edge(t - step, t, false)?;
                let pull = 0.4 * h / level.cosh();
                let (lo, hi) = (lo + pull, hi - pull);
                if hi - lo > 1e-12 {
                    arcs.push((false, lo, hi));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    // Normalize arcs into [0, length) coordinates (they may exceed length
    // from the rotation); keep unwrapped spans, nodes are placed by t mod
    // length when realized.
    Ok(arcs)
}

/// Stitch one row of arcs onto the previous row.
fn stitch_rows(
    band_td: &HashMap<usize, (f64, f64)>,
    prev: &[Arc],
    new_row: &[Arc],
    length: f64,
    out: &mut Vec<Tri>,
) -> Result<(), MeshError> {
    let mut dist = |u: usize, v: usize| -> f64 {
        let (t1, d1) = band_td[&u];
        let (t2, d2) = band_td[&v];
        fermi_band_dist(length, t1, d1, t2, d2)
    };
    for arc in new_row {
        if arc.closed {
            // Previous row must be a single closed ring.
            if prev.len() != 1 || !prev[0].closed {
                return Err(MeshError::Invalid(
                    "closed row above a clipped row".into(),
                ));
            }
            let lower: Vec<usize> = prev[0].nodes.iter().map(|&(id, _)| id).collect();
            let upper: Vec<usize> = arc.nodes.iter().map(|&(id, _)| id).collect();
            zip_loops(&upper, &lower, &mut dist, out);
            continue;
        }
        // Find the previous arc covering this one (max overlap with wrap).
        let best = prev
            .iter()
            .max_by(|x, y| {
                overlap_len(x, arc, length).total_cmp(&overlap_len(y, arc, length))
            })
            .ok_or_else(|| MeshError::Invalid("no previous row".into()))?;
        let lower = sub_chain(best, arc.t0, arc.t1, length);
        if lower.len() < 2 {
            return Err(MeshError::Invalid(
                "previous row does not cover a new arc".into(),
            ));
        }
        let upper: Vec<usize> = arc.nodes.iter().map(|&(id, _)| id).collect();
        stitch_chains(&lower, &upper, &mut dist, out);
    }
    Ok(())
}

fn overlap_len(prev: &Arc, arc: &Arc, length: f64) -> f64 {
    if prev.closed {
        return arc.t1 - arc.t0;
    }
    // Compare on the circle: shift copies of prev by -L, 0, +L.
    let mut best = 0.0f64;
    for shift in [-length, 0.0, length] {
        let lo = (prev.t0 + shift).max(arc.t0);
        let hi = (prev.t1 + shift).min(arc.t1);
        best = best.max(hi - lo);
    }
    best
}

/// Nodes of `prev` within [t0 - pad, t1 + pad] in circular coordinates,
/// ordered along the arc.
fn sub_chain(prev: &Arc, t0: f64, t1: f64, length: f64) -> Vec<usize> {
    let spacing = if prev.nodes.len() > 1 {
        (prev.t1 - prev.t0) / (prev.nodes.len() as f64)
    } else {
        length
    };
    let pad = 0.75 * spacing;
    if prev.closed {
        // Closed ring: take indices whose t (suitably shifted) lies in
        // range; they form a contiguous block on the circle.
        let n = prev.nodes.len();
        let mut picked: Vec<(f64, usize)> = Vec::new();
        for &(id, t) in &prev.nodes {
            for shift in [-length, 0.0, length] {
                let tt = t + shift;
                if tt >= t0 - pad && tt <= t1 + pad {
                    picked.push((tt, id));
                }
            }
        }
        picked.sort_by(|a, b| a.0.total_cmp(&b.0));
        picked.dedup_by_key(|p| p.1);
        if picked.len() < 2 && n >= 2 {
            // Degenerate: fall back to the two nearest nodes.
            let mid = 0.5 * (t0 + t1);
            let mut with_d: Vec<(f64, usize)> = prev
                .nodes
                .iter()
                .map(|&(id, t)| {
                    let mut dt = (t - mid).rem_euclid(length);
                    if dt > length / 2.0 {
                        dt = length - dt;
                    }
                    (dt, id)
                })
                .collect();
            with_d.sort_by(|a, b| a.0.total_cmp(&b.0));
            return with_d.iter().take(2).map(|&(_, id)| id).collect();
        }
        picked.into_iter().map(|(_, id)| id).collect()
    } else {
        let mut shift_best = 0.0;
        let mut best = f64::NEG_INFINITY;
        for shift in [-length, 0.0, length] {
            let lo = (prev.t0 + shift).max(t0);
            let hi = (prev.t1 + shift).min(t1);
            if hi - lo > best {
                best = hi - lo;
                shift_best = shift;
            }
        }
        let picked: Vec<usize> = prev
            .nodes
            .iter()
            .filter(|&&(_, t)| t + shift_best >= t0 - pad && t + shift_best <= t1 + pad)
            .map(|&(id, _)| id)
            .collect();
        if picked.len() >= 2 {
            return picked;
        }
        // Sparse coverage: fall back to the two nearest previous nodes.
        let mid = 0.5 * (t0 + t1);
        let mut with_d: Vec<(f64, usize)> = prev
            .nodes
            .iter()
            .map(|&(id, t)| ((t + shift_best - mid).abs(), id))
            .collect();
        with_d.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut out: Vec<(f64, usize)> = with_d.into_iter().take(2).collect();
        out.sort_by(|a, b| a.0.total_cmp(&b.0));
        out.into_iter().map(|(_, id)| id).collect()
    }
}

/// The spine tent loop of a band/cusp piece: node ids ordered around the
/// loop m_a -> hub -> m_b -> hub_back -> m_a.
struct TentLoop {
    ids: Vec<usize>,
    /// For each id, whether it needs the mirrored position (back chain a).
    back_mirror: Vec<bool>,
}

fn tent_loop(b: &mut Builder, sc: &PantsScaffold, pid: usize, slot: usize) -> TentLoop {
    let a = (slot + 1) % 3;
    let bb = (slot + 2) % 3;
    let mut ids = Vec::new();
    let mut back_mirror = Vec::new();
    let mut push = |id: usize, m: bool, ids: &mut Vec<usize>, bm: &mut Vec<bool>| {
        ids.push(id);
        bm.push(m);
    };
    let na = sc.chain_interior(a);
    let nb = sc.chain_interior(bb);
    push(b.vertex(NodeKey::SeamMid { pants: pid, seam: a }), false, &mut ids, &mut back_mirror);
    for idx in (0..na).rev() {
        push(
            b.vertex(NodeKey::Chain { pants: pid, seam: a, back: false, idx }),
            false,
            &mut ids,
            &mut back_mirror,
        );
    }
    push(b.vertex(NodeKey::Hub { pants: pid, back: false }), false, &mut ids, &mut back_mirror);
    for idx in 0..nb {
        push(
            b.vertex(NodeKey::Chain { pants: pid, seam: bb, back: false, idx }),
            false,
            &mut ids,
            &mut back_mirror,
        );
    }
    push(b.vertex(NodeKey::SeamMid { pants: pid, seam: bb }), false, &mut ids, &mut back_mirror);
    for idx in (0..nb).rev() {
        push(
            b.vertex(NodeKey::Chain { pants: pid, seam: bb, back: true, idx }),
            false,
            &mut ids,
            &mut back_mirror,
        );
    }
    push(b.vertex(NodeKey::Hub { pants: pid, back: true }), true, &mut ids, &mut back_mirror);
    for idx in 0..na {
        push(
            b.vertex(NodeKey::Chain { pants: pid, seam: a, back: true, idx }),
            true,
            &mut ids,
            &mut back_mirror,
        );
    }
    TentLoop { ids, back_mirror }
}

/// Chart positions of tent nodes as seen by the band of `slot`: nodes
/// marked `back_mirror` must be reflected across the band's mirror seam
/// (slot + 2), the rest use canonical positions.
fn fill_tent_positions(
    b: &Builder,
    sc: &PantsScaffold,
    pid: usize,
    slot: usize,
    tent: &TentLoop,
    out: &mut HashMap<usize, (f64, f64)>,
) {
    let a = (slot + 1) % 3;
    let bb = (slot + 2) % 3;
    let mirror = sc.geom.seams[bb];
    let na = sc.chain_interior(a);
    let nb = sc.chain_interior(bb);
    let mut point_of = |key: &NodeKey| -> crate::hyp::Point {
        match *key {
            NodeKey::SeamMid { seam, .. } => sc.mids[seam],
            NodeKey::Hub { back: false, .. } => sc.hub,
            NodeKey::Hub { back: true, .. } => sc.hub.reflect(mirror),
            NodeKey::Chain { seam, back: false, idx, .. } => sc.chain_node(seam, idx),
            NodeKey::Chain { seam, back: true, idx, .. } => {
                if seam == bb {
                    sc.chain_node(seam, idx).reflect(mirror)
                } else {
                    // back chain a through this band's mirror
                    sc.chain_node(seam, idx).reflect(mirror)
                }
            }
            _ => unreachable!(),
        }
    };
    let mut keys: Vec<(NodeKey, usize)> = Vec::new();
    keys.push((NodeKey::SeamMid { pants: pid, seam: a }, 0));
    for idx in 0..na {
        keys.push((NodeKey::Chain { pants: pid, seam: a, back: false, idx }, 0));
        keys.push((NodeKey::Chain { pants: pid, seam: a, back: true, idx }, 0));
    }
    for idx in 0..nb {
        keys.push((NodeKey::Chain { pants: pid, seam: bb, back: false, idx }, 0));
        keys.push((NodeKey::Chain { pants: pid, seam: bb, back: true, idx }, 0));
    }
    keys.push((NodeKey::SeamMid { pants: pid, seam: bb }, 0));
    keys.push((NodeKey::Hub { pants: pid, back: false }, 0));
    keys.push((NodeKey::Hub { pants: pid, back: true }, 0));
    for (key, _) in keys {
        if let Some(&id) = b.keys.get(&key) {
            let p = point_of(&key);
            let (x, y) = hyperboloid_to_uhp(p);
            out.insert(id, (x, y));
        }
    }
    let _ = &tent.back_mirror;
}

/// Mesh the cusp piece of `slot`: horocycle rows from the truncation down
/// to the spine tent, in the cusp cylinder chart.
fn mesh_cusp_piece(
    b: &mut Builder,
    sc: &PantsScaffold,
    pid: usize,
    slot: usize,
    cusp_idx: usize,
    y_trunc: f64,
) -> Result<Vec<usize>, MeshError> {
    let chart = match &sc.geom.slots[slot] {
        SlotShape::Cusp { chart, .. } => *chart,
        _ => return Err(MeshError::Invalid("slot is not a cusp".into())),
    };
    let h = b.h;
    // Ceiling height per x.
    let tent_max = {
        let mut m: f64 = 0.0;
        for i in 0..128 {
            let x = (i as f64 + 0.5) / 128.0 * TWO_PI;
            m = m.max(sc.cusp_clip_height(slot, x)?);
        }
        m
    };
    if y_trunc < tent_max * 1.15 {
        return Err(MeshError::Conditioning(format!(
            "truncation height {y_trunc} is inside the pants spine region (max {tent_max:.2})"
        )));
    }
    let tri_start = b.tris.len();
    let place = |x: f64, y: f64| -> (f64, f64) {
        let inv = chart.inverse();
        inv.apply(x, y)
    };
    // Rows descend from y_trunc.
    let mut rows: Vec<Vec<Arc>> = Vec::new();
    let mut truncation = Vec::new();
    let mut y = y_trunc;
    let mut row_index = 0usize;
    loop {
        let circ = TWO_PI / y;
        let n = ((circ / h).ceil() as usize).max(8);
        let spacing = circ / n as f64;
        let delta = spacing.clamp(h / 16.0, h); // radial step in log-y
        // Arcs of this row: x where ceil(x) < y * (1 - margin-ish).
        let margin = 0.35 * delta;
        let mut arcs = extract_cusp_arcs(sc, slot, y, margin, h)?;
        if arcs.is_empty() {
            break;
        }
        merge_close_arcs(&mut arcs, TWO_PI, 0.6 * h * y, |x| {
            sc.cusp_clip_height(slot, x).map(|cy| (y / cy).ln() > 0.1 * margin)
        })?;
        let mut new_row = Vec::new();
        for (arc_i, (closed, x0, x1)) in arcs.into_iter().enumerate() {
            let span = x1 - x0;
            let circ = span / y;
            if !closed && circ < 0.6 * h {
                continue;
            }
            let mut nodes = Vec::new();
            if closed {
                let n = ((circ / h).ceil() as usize).max(8);
                for i in 0..n {
                    let x = x0 + span * i as f64 / n as f64;
                    let id = b.vertex(NodeKey::CuspRow { pants: pid, slot, row: row_index, arc: arc_i, idx: i });
                    let (ux, uy) = place(x, y);
                    b.set_pos(pid, id, ux, uy);
                    b.charts[id].cusp = Some((cusp_idx, x.rem_euclid(TWO_PI), y));
                    let pt = crate::hyp::uhp_to_hyperboloid(ux, uy);
                    b.charts[id].pants.push((pid, raw3(pt)));
                    nodes.push((id, x));
                }
            } else {
                let n = ((circ / h).round() as usize).max(1) + 1;
                for i in 0..n {
                    let x = x0 + span * i as f64 / (n - 1).max(1) as f64;
                    let id = b.vertex(NodeKey::CuspRow { pants: pid, slot, row: row_index, arc: arc_i, idx: i });
                    let (ux, uy) = place(x, y);
                    b.set_pos(pid, id, ux, uy);
                    b.charts[id].cusp = Some((cusp_idx, x.rem_euclid(TWO_PI), y));
                    let pt = crate::hyp::uhp_to_hyperboloid(ux, uy);
                    b.charts[id].pants.push((pid, raw3(pt)));
                    nodes.push((id, x));
                }
            }
            new_row.push(Arc { closed, nodes, t0: x0, t1: x1 });
        }
        if row_index == 0 {
            if new_row.len() != 1 || !new_row[0].closed {
                return Err(MeshError::Conditioning(
                    "truncation circle is clipped by the spine".into(),
                ));
            }
            truncation = new_row[0].nodes.iter().map(|&(id, _)| id).collect();
        } else {
            let prev = rows.last().unwrap();
            let mut tris = Vec::new();
            stitch_cusp_rows(b, prev, &new_row, &mut tris)?;
            b.emit_cusp(&tris);
        }
        rows.push(new_row);
        y *= (-delta).exp();
        row_index += 1;
        if row_index > 100_000 {
            return Err(MeshError::Conditioning("cusp row limit exceeded".into()));
        }
    }

    // Frontier-to-tent zip, in the cusp chart.
    let cusp_tris: Vec<Tri> = b.tris[tri_start..].iter().map(|t| t.v).collect();
    let mut oriented = cusp_tris.clone();
    orient_list(&mut oriented);
    let loops = boundary_loops(&oriented);
    let trunc_set: std::collections::HashSet<usize> = truncation.iter().cloned().collect();
    let frontier: Vec<Vec<usize>> = loops
        .into_iter()
        .filter(|l| !l.iter().all(|v| trunc_set.contains(v)))
        .collect();
    if frontier.len() != 1 {
        return Err(MeshError::Invalid(format!(
            "cusp piece (pants {pid}, slot {slot}) has {} frontier loops",
            frontier.len()
        )));
    }
    let tent = tent_loop(b, sc, pid, slot);
    // Tent positions in the cusp chart.
    let mut tent_chart: HashMap<usize, (f64, f64)> = HashMap::new();
    {
        let mut pants_pos: HashMap<usize, (f64, f64)> = HashMap::new();
        fill_tent_positions(b, sc, pid, slot, &tent, &mut pants_pos);
        for (&id, &(x, y)) in &pants_pos {
            let (cx, cy) = chart.apply(x, y);
            tent_chart.insert(id, (cx.rem_euclid(TWO_PI), cy));
        }
    }
    let cusp_pos: HashMap<usize, (f64, f64)> = b.positions[pid]
        .iter()
        .filter(|(id, _)| b.charts[**id].cusp.map(|(c, _, _)| c) == Some(cusp_idx))
        .map(|(&id, _)| {
            let (_, x, y) = b.charts[id].cusp.unwrap();
            (id, (x, y))
        })
        .collect();
    let mut zip_tris = Vec::new();
    {
        let mut dist = |u: usize, v: usize| -> f64 {
            let (xa, ya) = tent_chart
                .get(&u)
                .cloned()
                .unwrap_or_else(|| cusp_pos[&u]);
            let (xb, yb) = tent_chart
                .get(&v)
                .cloned()
                .unwrap_or_else(|| cusp_pos[&v]);
            cusp_chart_distance(TWO_PI, xa, ya, xb, yb)
        };
        zip_loops(&frontier[0], &tent.ids, &mut dist, &mut zip_tris);
        for t in &zip_tris {
            let get = |v: usize| -> (f64, f64) {
                tent_chart.get(&v).cloned().unwrap_or_else(|| cusp_pos[&v])
            };
            let (a, c, d2) = (get(t[0]), get(t[1]), get(t[2]));
            b.tris.push(MetricTriangle {
                v: *t,
                len: [
                    cusp_chart_distance(TWO_PI, a.0, a.1, c.0, c.1),
                    cusp_chart_distance(TWO_PI, c.0, c.1, d2.0, d2.1),
                    cusp_chart_distance(TWO_PI, d2.0, d2.1, a.0, a.1),
                ],
            });
        }
    }
    Ok(truncation)
}

impl Builder {
    fn emit_cusp(&mut self, tris: &[(Tri, [f64; 3])]) {
        for (t, len) in tris {
            self.tris.push(MetricTriangle { v: *t, len: *len });
        }
    }
}

fn stitch_cusp_rows(
    b: &Builder,
    prev: &[Arc],
    new_row: &[Arc],
    out: &mut Vec<(Tri, [f64; 3])>,
) -> Result<(), MeshError> {
    // Distances in the cusp chart with wraparound.
    let coords = |id: usize| -> (f64, f64) {
        let (_, x, y) = b.charts[id].cusp.expect("cusp node");
        (x, y)
    };
    let mut dist = |u: usize, v: usize| -> f64 {
        let (xa, ya) = coords(u);
        let (xb, yb) = coords(v);
        cusp_chart_distance(TWO_PI, xa, ya, xb, yb)
    };
    let mut plain: Vec<Tri> = Vec::new();
    for arc in new_row {
        if arc.closed {
            if prev.len() != 1 || !prev[0].closed {
                return Err(MeshError::Invalid("closed cusp row above clipped row".into()));
            }
            let lower: Vec<usize> = prev[0].nodes.iter().map(|&(id, _)| id).collect();
            let upper: Vec<usize> = arc.nodes.iter().map(|&(id, _)| id).collect();
            zip_loops(&upper, &lower, &mut dist, &mut plain);
        } else {
            let best = prev
                .iter()
                .max_by(|x, y| {
                    overlap_len(x, arc, TWO_PI).total_cmp(&overlap_len(y, arc, TWO_PI))
                })
                .ok_or_else(|| MeshError::Invalid("no previous cusp row".into()))?;
            let lower = sub_chain(best, arc.t0, arc.t1, TWO_PI);
            if lower.len() < 2 {
                return Err(MeshError::Invalid(
                    "previous cusp row does not cover a new arc".into(),
                ));
            }
            let upper: Vec<usize> = arc.nodes.iter().map(|&(id, _)| id).collect();
            stitch_chains(&lower, &upper, &mut dist, &mut plain);
        }
    }
    for t in plain {
        let l = [dist(t[0], t[1]), dist(t[1], t[2]), dist(t[2], t[0])];
        out.push((t, l));
    }
    Ok(())
}

fn extract_cusp_arcs(
    sc: &PantsScaffold,
    slot: usize,
    y: f64,
    margin: f64,
    h: f64,
) -> Result<Vec<ArcSpan>, MeshError> {
    // Included where the ceiling is below y by the margin (in log scale).
    let ok = |x: f64| -> Result<bool, MeshError> {
        let ceil_y = sc.cusp_clip_height(slot, x)?;
        Ok((y / ceil_y).ln() > margin)
    };
    let circ = TWO_PI / y;
    let res = (h / 2.0).min(circ / 64.0);
    let samples = ((circ / res).ceil() as usize).clamp(64, 1_000_000);
    let mut flags = Vec::with_capacity(samples);
    for i in 0..samples {
        flags.push(ok((i as f64 + 0.5) / samples as f64 * TWO_PI)?);
    }
    if flags.iter().all(|&f| f) {
        return Ok(vec![(true, 0.0, TWO_PI)]);
    }
    if flags.iter().all(|&f| !f) {
        return Ok(vec![]);
    }
    let step = TWO_PI / samples as f64;
    let refine_edge = |mut lo: f64, mut hi: f64, want_hi: bool| -> Result<f64, MeshError> {
        for _ in 0..30 {
            let mid = 0.5 * (lo + hi);
            if ok(mid)? == want_hi {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    };
    let start = flags.iter().position(|&f| !f).unwrap();
    let mut arcs = Vec::new();
    let mut run_start: Option<f64> = None;
    for k in 0..=samples {
        let idx = (start + k) % samples;
        let t = ((start + k) as f64 + 0.5) * step;
        match (run_start, flags[idx]) {
            (None, true) => run_start = Some(refine_edge(t - step, t, true)?),
            (Some(lo), false) => {
                let hi = refine_edge(t - step, t, false)?;
                let pull = 0.4 * h * y;
                let (lo, hi) = (lo + pull, hi - pull);
                if hi - lo > 1e-12 {
                    arcs.push((false, lo, hi));
                }
                run_start = None;
            }
            _ => {}
        }
    }
    Ok(arcs)
}

/// Different construction sites may compute a shared edge's length through
/// different charts (band Fermi wrap, cusp cylinder wrap, holonomy-minimized
/// chart distance). The complex needs one canonical value per edge; take
/// the minimum representative seen.
fn unify_edge_lengths(tris: &mut [MetricTriangle]) {
    let mut canon: HashMap<(usize, usize), f64> = HashMap::new();
    for t in tris.iter() {
        for e in 0..3 {
            let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
            let key = (a.min(b), a.max(b));
            canon
                .entry(key)
                .and_modify(|v| *v = v.min(t.len[e]))
                .or_insert(t.len[e]);
        }
    }
    for t in tris.iter_mut() {
        for e in 0..3 {
            let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
            t.len[e] = canon[&(a.min(b), a.max(b))];
        }
    }
}

/// Make triangle windings globally consistent; errors if non-orientable.
pub(super) fn orient_consistently(tris: &mut [MetricTriangle]) -> Result<(), MeshError> {
    let n = tris.len();
    let mut edge_map: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    for (i, t) in tris.iter().enumerate() {
        for e in 0..3 {
            let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
            edge_map.entry((a.min(b), a.max(b))).or_default().push(i);
        }
    }
    let mut state  = vec![0i8; n]; // 0 unvisited, 1 keep, -1 flip
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        state[start] = 1;
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            let ti = oriented_tri(&tris[i], state[i]);
            for e in 0..3 {
                let (a, b) = (ti[e], ti[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                for &j in &edge_map[&key] {
                    if j == i {
                        continue;
                    }
                    // Neighbor must use the edge as (b, a).
                    let tj_keep = oriented_tri(&tris[j], 1);
                    let uses_ba = (0..3).any(|e2| {
                        tj_keep[e2] == b && tj_keep[(e2 + 1) % 3] == a
                    });
                    let needed: i8 = if uses_ba { 1 } else { -1 };
                    if state[j] == 0 {
                        state[j] = needed;
                        queue.push_back(j);
                    } else if state[j] != needed {
                        return Err(MeshError::Invalid(
                            "triangulation is not consistently orientable".into(),
                        ));
                    }
                }
            }
        }
    }
    for (i, t) in tris.iter_mut().enumerate() {
        if state[i] == -1 {
            *t = flip_tri(t);
        }
    }
    Ok(())
}

fn oriented_tri(t: &MetricTriangle, s: i8) -> [usize; 3] {
    if s == -1 {
        [t.v[0], t.v[2], t.v[1]]
    } else {
        t.v
    }
}

fn flip_tri(t: &MetricTriangle) -> MetricTriangle {
    MetricTriangle {
        v: [t.v[0], t.v[2], t.v[1]],
        len: [t.len[2], t.len[1], t.len[0]],
    }
}

fn orient_list(tris: &mut Vec<Tri>) {
    // Convert to MetricTriangle-free orientation fix (lengths irrelevant).
    let mut mts: Vec<MetricTriangle> = tris
        .iter()
        .map(|t| MetricTriangle { v: *t, len: [1.0; 3] })
        .collect();
    if orient_consistently(&mut mts).is_ok() {
        for (o, m) in tris.iter_mut().zip(&mts) {
            *o = m.v;
        }
    }
}

/// Delaunay-style edge flips improving the minimum angle. Protected edges
/// (marked curves, truncation circles) are never flipped.
pub(super) fn flip_pass(
    tris: &mut Vec<MetricTriangle>,
    marked: &[Vec<usize>],
    cusps: &[CuspBoundary],
    max_passes: usize,
) {
    use std::collections::HashSet;
    let mut protected: HashSet<(usize, usize)> = HashSet::new();
    for cyc in marked.iter().chain(cusps.iter().map(|c| &c.cycle)) {
        let n = cyc.len();
        for i in 0..n {
            let (a, b) = (cyc[i], cyc[(i + 1) % n]);
            protected.insert((a.min(b), a.max(b)));
        }
    }
    for _ in 0..max_passes {
        let mut edge_to_tris: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, t) in tris.iter().enumerate() {
            for e in 0..3 {
                let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
                edge_to_tris.entry((a.min(b), a.max(b))).or_default().push(i);
            }
        }
        let mut dirty = vec![false; tris.len()];
        let mut flipped_any = false;
        let mut keys: Vec<(usize, usize)> = edge_to_tris.keys().cloned().collect();
        keys.sort_unstable();
        for key in keys {
            if protected.contains(&key) {
                continue;
            }
            let owners = &edge_to_tris[&key];
            if owners.len() != 2 {
                continue;
            }
            let (i, j) = (owners[0], owners[1]);
            if dirty[i] || dirty[j] {
                continue;
            }
            if let Some((ta, tb)) = try_flip(&tris[i], &tris[j], key) {
                let before = tris[i].min_angle().min(tris[j].min_angle());
                let after = ta.min_angle().min(tb.min_angle());
                if after > before + 1e-12 {
                    tris[i] = ta;
                    tris[j] = tb;
                    dirty[i] = true;
                    dirty[j] = true;
                    flipped_any = true;
                }
            }
        }
        if !flipped_any {
            break;
        }
    }
}

/// Attempt to flip the shared edge of two triangles; returns the two new
/// triangles with intrinsically computed lengths when the quad is convex.
fn try_flip(
    t1: &MetricTriangle,
    t2: &MetricTriangle,
    key: (usize, usize),
) -> Option<(MetricTriangle, MetricTriangle)> {
    // Identify shared edge (a, b) and opposite vertices c (in t1), d (t2).
    let (a, b) = key;
    let pos1 = (0..3).find(|&e| {
        let (u, v) = (t1.v[e], t1.v[(e + 1) % 3]);
        (u.min(v), u.max(v)) == key
    })?;
    let pos2 = (0..3).find(|&e| {
        let (u, v) = (t2.v[e], t2.v[(e + 1) % 3]);
        (u.min(v), u.max(v)) == key
    })?;
    let c = t1.v[(pos1 + 2) % 3];
    let d = t2.v[(pos2 + 2) % 3];
    if c == d {
        return None;
    }
    let side = |t: &MetricTriangle, u: usize, v: usize| -> Option<f64> {
        (0..3).find_map(|e| {
            let (p, q) = (t.v[e], t.v[(e + 1) % 3]);
            if (p == u && q == v) || (p == v && q == u) {
                Some(t.len[e])
            } else {
                None
            }
        })
    };
    let ab = side(t1, a, b)?;
    let ac = side(t1, a, c)?;
    let bc = side(t1, b, c)?;
    let ad = side(t2, a, d)?;
    let bd = side(t2, b, d)?;
    // Angles at a and b in both triangles; the quad is flippable when both
    // combined angles are below pi.
    let ang = |opp: f64, s1: f64, s2: f64| crate::hyp::angle_from_sides(opp, s1, s2);
    let a1 = ang(bc, ab, ac);
    let a2 = ang(bd, ab, ad);
    let b1 = ang(ac, ab, bc);
    let b2 = ang(ad, ab, bd);
    if a1 + a2 >= std::f64::consts::PI - 1e-9 || b1 + b2 >= std::f64::consts::PI - 1e-9 {
        return None;
    }
    // New diagonal length |cd| from the hinge at a.
    let cd = {
        let alpha = a1 + a2;
        let ch = ac.cosh() * ad.cosh() - ac.sinh() * ad.sinh() * alpha.cos();
        ch.max(1.0).acosh()
    };
    if !(cd.is_finite() && cd > 0.0) {
        return None;
    }
    // New triangles: (a, d, c) and (d, b, c) preserve orientation if the
    // originals were wound (a, b, c) and (b, a, d).
    // Recover orientation of t1 relative to (a, b):
    let t1_ab = t1.v[pos1] == a;
    let (v1, l1, v2, l2) = if t1_ab {
        (
            [a, d, c],
            [ad, cd, ac],
            [d, b, c],
            [bd, bc, cd],
        )
    } else {
        (
            [b, d, c],
            [bd, cd, bc],
            [d, a, c],
            [ad, ac, cd],
        )
    };
    let ta = MetricTriangle { v: v1, len: l1 };
    let tb = MetricTriangle { v: v2, len: l2 };
    if !ta.is_valid() || !tb.is_valid() {
        return None;
    }
    Some((ta, tb))
}

/// Compact vertex ids (the builder already allocates densely, so this just
/// records the final count).
fn finalize_ids(_mesh: &mut SurfaceMesh) {}

