//! Per-pants meshing scaffold: the spine (hub point plus geodesic cuts to
//! the three seam midpoints) and the ray-clipping queries bands use to stop
//! their rows at the spine.

use crate::geometry::{GeometryError, PantsGeometry, SlotShape};
use crate::hyp::{hyperboloid_to_uhp, uhp_to_hyperboloid, MVec, Point, Pole};

use super::MeshError;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Horoball entry height used for cusp pieces (horocycle of length 1).
pub const HOROBALL_Y: f64 = TWO_PI;

/// A geodesic segment with precomputed pole and endpoints.
#[derive(Clone, Debug)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
    pub pole: Pole,
    pub length: f64,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Segment {
        let length = a.distance(b);
        let cross = a.raw().mcross(b.raw());
        let pole = if cross.norm2() > 1e-18 * a.raw().t.abs().max(1.0).powi(2) {
            Pole::from_raw(cross.scale(1.0 / cross.norm2().sqrt()))
        } else {
            // Degenerate cut (hub and target coincide in a squeezed thick
            // part): any geodesic through `a` serves; rays treat the
            // crossing through containment anyway.
            let e1 = {
                let trial = MVec::new(1.0, 0.0, 0.0);
                let proj = trial.add(a.raw().scale(trial.mdot(a.raw())));
                if proj.norm2() > 1e-12 {
                    proj
                } else {
                    let trial = MVec::new(0.0, 1.0, 0.0);
                    trial.add(a.raw().scale(trial.mdot(a.raw())))
                }
            };
            Pole::project(a.raw().mcross(e1))
        };
        Segment { a, b, pole, length }
    }

    pub fn reflected(&self, mirror: Pole) -> Segment {
        Segment::new(self.a.reflect(mirror), self.b.reflect(mirror))
    }

    /// Point at arclength `s` from endpoint `a`.
    pub fn at(&self, s: f64) -> Point {
        // Geodesic interpolation: c = a sinh(L - s) + b sinh(s), projected.
        if self.length < 1e-9 {
            return self.a;
        }
        let s = s.clamp(0.0, self.length);
        let wa = (self.length - s).sinh();
        let wb = s.sinh();
        match Point::try_project(self.a.raw().scale(wa).add(self.b.raw().scale(wb))) {
            Some(p) => p,
            None => {
                if s < self.length / 2.0 {
                    self.a
                } else {
                    self.b
                }
            }
        }
    }

    /// Does a given point of the full geodesic lie within the segment?
    /// The tolerance widens with the coordinate magnitudes involved, since
    /// `acosh` near 1 amplifies rounding linearly in them.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        let scale = self.a.raw().t.abs() + self.b.raw().t.abs() + p.raw().t.abs();
        let tol = tol + 1e-7 * (1.0 + scale);
        self.a.distance(p) + p.distance(self.b) <= self.length + tol
    }
}

/// The spine of one pair of pants.
#[derive(Clone, Debug)]
pub struct PantsScaffold {
    pub geom: PantsGeometry,
    pub hub: Point,
    /// Seam midpoints `m[k]` on seam k (between horoball entries or axis
    /// feet).
    pub mids: [Point; 3],
    /// Front cut segments `[hub -> m[k]]`.
    pub front_cuts: [Segment; 3],
    /// Node spacing target used when chains are generated.
    pub h: f64,
    /// Interior node arclength positions per cut chain (from the hub end,
    /// endpoints excluded); spacing adapts to the local collar width so
    /// chains match the density of the band rows they are zipped against.
    pub chain_nodes: [Vec<f64>; 3],
}

impl PantsScaffold {
    pub fn new(geom: PantsGeometry, h: f64) -> Result<PantsScaffold, MeshError> {
        let hub = geom.hub_point().map_err(MeshError::Geometry)?;
        let mut mids = Vec::with_capacity(3);
        for k in 0..3 {
            mids.push(seam_midpoint(&geom, k, h)?);
        }
        let mids: [Point; 3] = mids.try_into().unwrap();
        let front_cuts = [
            Segment::new(hub, mids[0]),
            Segment::new(hub, mids[1]),
            Segment::new(hub, mids[2]),
        ];
        let chain_nodes = [
            adaptive_chain(&geom, &front_cuts[0], h),
            adaptive_chain(&geom, &front_cuts[1], h),
            adaptive_chain(&geom, &front_cuts[2], h),
        ];
        Ok(PantsScaffold {
            geom,
            hub,
            mids,
            front_cuts,
            h,
            chain_nodes,
        })
    }

    pub fn chain_interior(&self, k: usize) -> usize {
        self.chain_nodes[k].len()
    }

    /// Position of an interior node of cut chain k (front copy).
    pub fn chain_node(&self, k: usize, idx: usize) -> Point {
        self.front_cuts[k].at(self.chain_nodes[k][idx])
    }

    /// The ceiling segments clipping band `slot`'s rays: front cuts for
    /// `t` in the front half, their seam-reflections for the back half.
    /// Returned as (front pair, back pair, back mirror seam index).
    pub fn band_ceiling(&self, slot: usize) -> ([Segment; 2], [Segment; 2], usize) {
        let a = (slot + 1) % 3;
        let b = (slot + 2) % 3;
        let mirror = self.geom.seams[b];
        let front = [self.front_cuts[a].clone(), self.front_cuts[b].clone()];
        let back = [
            self.front_cuts[b].reflected(mirror),
            self.front_cuts[a].reflected(mirror),
        ];
        (front, back, b)
    }

    /// First crossing depth of the perpendicular ray at boundary parameter
    /// `t` of slot `slot` with the spine ceiling. Returns the depth plus
    /// which (segment set, segment) was hit.
    pub fn clip_depth(&self, slot: usize, t: f64) -> Result<f64, MeshError> {
        let length = match &self.geom.slots[slot] {
            SlotShape::Geodesic { length, .. } => *length,
            SlotShape::Cusp { .. } => panic!("clip_depth on cusp slot"),
        };
        let t = t.rem_euclid(length);
        let (front, back, _) = self.band_ceiling(slot);
        let segs = if t <= length / 2.0 { front } else { back };
        let x0 = self.geom.boundary_fermi_point(slot, t, 0.0);
        let x1 = self.geom.boundary_fermi_point(slot, t, 1e-4);
        // Ray direction as hyperboloid data.
        let dir = {
            let d = x0.tangent_toward(x1);
            d
        };
        let mut best: Option<f64> = None;
        for seg in &segs {
            if let Some(d) = ray_segment_crossing(x0, dir, seg) {
                best = Some(best.map_or(d, |b: f64| b.min(d)));
            }
        }
        best.ok_or_else(|| {
            MeshError::Conditioning(format!(
                "boundary ray at t = {t} (slot {slot}) does not meet the spine"
            ))
        })
    }

    /// Crossing height (chart `y`) of the descending ray at chart
    /// coordinate `x` in the cusp piece of `slot`, against the spine
    /// ceiling expressed in that cusp's chart. Rays come down from large
    /// `y`; the first hit is the largest crossing `y`.
    pub fn cusp_clip_height(&self, slot: usize, x: f64) -> Result<f64, MeshError> {
        let chart = match &self.geom.slots[slot] {
            SlotShape::Cusp { chart, .. } => *chart,
            SlotShape::Geodesic { .. } => panic!("cusp_clip_height on geodesic slot"),
        };
        let a = (slot + 1) % 3;
        let b = (slot + 2) % 3;
        let mirror = self.geom.seams[b];
        let segs = [
            self.front_cuts[a].clone(),
            self.front_cuts[b].clone(),
            self.front_cuts[b].reflected(mirror),
            self.front_cuts[a].reflected(mirror),
        ];
        let x = x.rem_euclid(TWO_PI);
        let mut best: Option<f64> = None;
        for seg in &segs {
            // Endpoints in chart coordinates; chart geodesics are
            // semicircles or vertical lines over the x axis.
            let (ax, ay) = chart_coords(chart, seg.a);
            let (bx, by) = chart_coords(chart, seg.b);
            // Choose the x-representatives nearest to each other.
            let bx = nearest_rep(bx, ax);
            for shift in [-TWO_PI, 0.0, TWO_PI] {
                let (ax, bx) = (ax + shift, bx + shift);
                if (ax - bx).abs() < 1e-12 {
                    continue; // vertical chart line: no top crossing
                }
                let lo = ax.min(bx);
                let hi = ax.max(bx);
                if x < lo - 1e-12 || x > hi + 1e-12 {
                    continue;
                }
                // Semicircle through (ax, ay), (bx, by): center c with
                // (ax-c)^2 + ay^2 = (bx-c)^2 + by^2.
                let c = (bx * bx + by * by - ax * ax - ay * ay) / (2.0 * (bx - ax));
                let r2 = (ax - c).powi(2) + ay * ay;
                let dy2 = r2 - (x - c) * (x - c);
                if dy2 <= 0.0 {
                    continue;
                }
                let y = dy2.sqrt();
                best = Some(best.map_or(y, |b: f64| b.max(y)));
            }
        }
        best.ok_or_else(|| {
            MeshError::Conditioning(format!(
                "cusp ray at x = {x} (slot {slot}) does not meet the spine"
            ))
        })
    }
}

/// Interior node arclengths along a cut, spaced to the local collar width:
/// near a deep collar the rows have spacing `L cosh(d) / 8`, and the chain
/// must match it for the zip to stay well-shaped.
fn adaptive_chain(geom: &PantsGeometry, cut: &Segment, h: f64) -> Vec<f64> {
    if cut.length <= 0.3 * h {
        return Vec::new();
    }
    let local_step = |q: Point| -> f64 {
        let mut step = h;
        for k in 0..3 {
            if let SlotShape::Geodesic { length, .. } = &geom.slots[k] {
                let d = geom.distance_to_slot(q, k);
                let circ = length * d.cosh();
                let n = ((circ / h).ceil()).max(8.0);
                step = step.min(circ / n);
            }
        }
        step.clamp(h / 16.0, h)
    };
    let mut out = Vec::new();
    let mut s: f64 = 0.0;
    loop {
        let q = cut.at(s.min(cut.length));
        let step = 0.9 * local_step(q);
        s += step;
        if s >= cut.length - 0.45 * step {
            break;
        }
        out.push(s);
    }
    out
}

pub fn chart_coords(chart: crate::hyp::Mat2, p: Point) -> (f64, f64) {
    let (x, y) = hyperboloid_to_uhp(p);
    chart.apply(x, y)
}

pub fn chart_point(chart: crate::hyp::Mat2, x: f64, y: f64) -> Point {
    let inv = chart.inverse();
    let (ux, uy) = inv.apply(x, y);
    uhp_to_hyperboloid(ux, uy)
}

fn nearest_rep(x: f64, near: f64) -> f64 {
    let mut v = x;
    while v - near > std::f64::consts::PI {
        v -= TWO_PI;
    }
    while near - v > std::f64::consts::PI {
        v += TWO_PI;
    }
    v
}

/// First positive crossing of the ray `s -> x0 walked toward dir` with the
/// segment's geodesic, if it lies within the segment. Computed through
/// geodesic poles, which stays well-conditioned deep in collars.
fn ray_segment_crossing(x0: Point, dir: MVec, seg: &Segment) -> Option<f64> {
    let p_ray = Pole::try_project(x0.raw().mcross(dir))?;
    let pairing = p_ray.pairing(seg.pole);
    if pairing.abs() >= 1.0 - 1e-14 {
        return None; // parallel or asymptotic: no transversal crossing
    }
    let c = Point::try_project(p_ray.raw().mcross(seg.pole.raw()))?;
    let d = x0.distance(c);
    if d <= 1e-12 {
        return None;
    }
    // Forward test: a short walk along the ray must approach the crossing.
    let fwd = Point::project(
        x0.raw()
            .scale(1e-3f64.cosh())
            .add(dir.scale(1e-3f64.sinh())),
    );
    if fwd.distance(c) >= d {
        return None;
    }
    if seg.contains(c, 1e-7) {
        Some(d)
    } else {
        None
    }
}

/// Balanced point of seam k: the point between the seam's two meshed ends
/// where the pants-distances to the two adjacent slots agree (the cut
/// locus crosses the seam there). Using it as the spine target keeps each
/// band out of the other curves' thin collars.
fn seam_midpoint(geom: &PantsGeometry, k: usize, h: f64) -> Result<Point, MeshError> {
    let seam = geom.seams[k];
    let (i, j) = ((k + 1) % 3, (k + 2) % 3);
    let r_i = seam_reference(geom, k, i)?;
    let r_j = seam_reference(geom, k, j)?;
    let e_i = seam_end(geom, k, i, r_j, h)?;
    let e_j = seam_end(geom, k, j, r_i, h)?;
    let total = e_i.distance(e_j);
    if total < 1e-9 {
        return Ok(e_i.midpoint(e_j));
    }
    let dir = e_i.tangent_toward(e_j);
    let g = |u: f64| -> f64 {
        let q = e_i.walk(dir, u);
        geom.slot_depth(q, i) - geom.slot_depth(q, j)
    };
    let u = if g(0.0) > 0.0 || g(total) < 0.0 {
        total / 2.0
    } else {
        let (mut lo, mut hi) = (0.0f64, total);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let m = e_i.walk(dir, u);
    Ok(m.foot_on(seam))
}

/// Raw reference point of seam k on the side of `slot`: the axis foot for
/// geodesic slots, the horoball entry for cusps.
fn seam_reference(geom: &PantsGeometry, k: usize, slot: usize) -> Result<Point, MeshError> {
    match &geom.slots[slot] {
        SlotShape::Geodesic { axis, .. } => Ok(Pole::intersection(geom.seams[k], *axis)),
        SlotShape::Cusp { chart, .. } => {
            let seam = geom.seams[k];
            let other = (0..3).find(|&s| s != slot && s != k).expect("three slots");
            let start = match &geom.slots[other] {
                SlotShape::Geodesic { axis, .. } => Pole::intersection(seam, *axis),
                SlotShape::Cusp { .. } => {
                    let probe = crate::hyp::uhp_to_hyperboloid(0.0, 3.0f64.sqrt());
                    probe.foot_on(seam)
                }
            };
            let level = |p: Point| -> f64 {
                let (_, cy) = chart_coords(*chart, p);
                cy
            };
            let u0 = {
                let tang = tangent_on_pole(start, seam);
                let up = Point::project(
                    start
                        .raw()
                        .scale(1e-3f64.cosh())
                        .add(tang.scale(1e-3f64.sinh())),
                );
                if level(up) > level(start) {
                    tang
                } else {
                    tang.scale(-1.0)
                }
            };
            if level(start) >= HOROBALL_Y {
                return Err(MeshError::Conditioning(
                    "seam reference point already inside the horoball".into(),
                ));
            }
            let mut lo = 0.0f64;
            let mut hi = 1.0f64;
            let mut guard = 0;
            while level(start.walk(u0, hi)) < HOROBALL_Y {
                hi *= 2.0;
                guard += 1;
                if guard > 60 {
                    return Err(MeshError::Conditioning(
                        "failed to bracket the horoball entry on a seam".into(),
                    ));
                }
            }
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                if level(start.walk(u0, mid)) < HOROBALL_Y {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            Ok(start.walk(u0, 0.5 * (lo + hi)))
        }
    }
}

/// The end of seam k's meshed extent on the side of `slot`: the collar
/// boundary for geodesic slots (walking from the axis foot toward the
/// other end), the horoball entry for cusps.
fn seam_end(
    geom: &PantsGeometry,
    k: usize,
    slot: usize,
    toward: Point,
    _h: f64,
) -> Result<Point, MeshError> {
    let reference = seam_reference(geom, k, slot)?;
    match &geom.slots[slot] {
        SlotShape::Geodesic { length, .. } => {
            let u = crate::geometry::collar_half_width(*length);
            if reference.distance(toward) <= u {
                return Err(MeshError::Conditioning(format!(
                    "seam {k} is shorter than the collar width of slot {slot}"
                )));
            }
            let dir = reference.tangent_toward(toward);
            Ok(reference.walk(dir, u))
        }
        SlotShape::Cusp { .. } => Ok(reference),
    }
}

/// Unit tangent at a point of a geodesic, along the geodesic.
fn tangent_on_pole(p: Point, pole: Pole) -> MVec {
    let v = p.raw().mcross(pole.raw());
    let n2 = v.norm2();
    debug_assert!(n2 > 0.0);
    v.scale(1.0 / n2.sqrt())
}

pub fn geometry_error(e: GeometryError) -> MeshError {
    MeshError::Geometry(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PantsGeometry;

    #[test]
    fn scaffold_builds_for_closed_pants() {
        let g = PantsGeometry::new([2.0, 2.5, 1.5]).unwrap();
        let sc = PantsScaffold::new(g, 0.1).unwrap();
        // Clip depth is positive everywhere along each boundary.
        for slot in 0..3 {
            for i in 0..40 {
                let t = i as f64 / 40.0 * sc.geom.lengths[slot];
                let d = sc.clip_depth(slot, t).unwrap();
                assert!(d > 0.0 && d.is_finite(), "slot {slot} t {t}: {d}");
            }
        }
    }

    #[test]
    fn scaffold_builds_for_cusped_pants() {
        let g = PantsGeometry::new([1.5, 0.0, 0.0]).unwrap();
        let sc = PantsScaffold::new(g, 0.1).unwrap();
        for i in 0..40 {
            let t = i as f64 / 40.0 * 1.5;
            let d = sc.clip_depth(0, t).unwrap();
            assert!(d > 0.0 && d.is_finite());
        }
        for slot in 1..3 {
            for i in 0..40 {
                let x = i as f64 / 40.0 * TWO_PI;
                let y = sc.cusp_clip_height(slot, x).unwrap();
                assert!(y > 0.0 && y < HOROBALL_Y * 1.5, "x {x}: y {y}");
            }
        }
    }

    #[test]
    fn pinched_pants_have_deep_clips() {
        let g = PantsGeometry::new([0.05, 0.05, 0.05]).unwrap();
        let sc = PantsScaffold::new(g, 0.1).unwrap();
        let d = sc.clip_depth(0, 0.012).unwrap();
        // Collar depth for a 0.05 curve is on the order of log(1/l).
        assert!(d > 2.0, "clip depth {d}");
    }
}
