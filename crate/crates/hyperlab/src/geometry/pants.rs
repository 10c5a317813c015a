//! Concrete realization of one pair of pants in the hyperbolic plane.
//!
//! The pants with boundary lengths `(L0, L1, L2)` (0 encoding a cusp slot)
//! is the double of a right-angled hexagon across its three seams. We place
//! the three seam geodesics explicitly in the upper half-plane / hyperboloid
//! model. Everything else — boundary axes, hexagon corners, reflections,
//! boundary translations, cusp charts — derives from those three poles.
//!
//! Conventions:
//! * seam `k` is opposite slot `k` and touches slots `(k+1)%3`, `(k+2)%3`;
//! * all seam poles are oriented with the hexagon interior on the negative
//!   side, so `<seam_i, seam_j> = -cosh(L_k / 2)` (and `-1` for a cusp);
//! * the boundary axis of slot `k` is oriented from the foot of seam
//!   `(k+1)%3` (the slot's mark point) toward the foot of seam `(k+2)%3`.

use crate::hyp::{hyperboloid_to_uhp, MVec, Mat2, Point, Pole, UhpGeodesic};

use super::hexagon::seam_cosh;
use super::GeometryError;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Per-slot geometric data.
#[derive(Clone, Debug)]
pub enum SlotShape {
    /// A geodesic boundary of positive length.
    Geodesic {
        length: f64,
        /// Axis pole, oriented with the pants interior on the negative side.
        axis: Pole,
        /// Mark point: foot of seam `(k+1)%3`; twist offsets are measured
        /// from here.
        mark: Point,
        /// Foot of seam `(k+2)%3`, at arclength `length/2` from the mark.
        half_mark: Point,
        /// Unit tangent at the mark pointing toward `half_mark`.
        tangent: MVec,
        /// Möbius frame: maps the imaginary axis (0 -> infinity) onto the
        /// axis in the positive direction with `i -> mark`.
        frame: Mat2,
        /// Boundary translation by `length` in the positive direction.
        holonomy: Mat2,
    },
    /// A cusp slot.
    Cusp {
        /// Ideal fixed point in boundary coordinates (`None` = infinity).
        ideal: Option<f64>,
        /// Chart map: sends the cusp to infinity with the holonomy becoming
        /// `z -> z + 2 pi`; chart coordinate `y` is the horocyclic height
        /// (horocycle at height y has length `2 pi / y`).
        chart: Mat2,
        /// Parabolic boundary holonomy (in the positive direction of the
        /// chart's `x`).
        holonomy: Mat2,
    },
}

impl SlotShape {
    pub fn is_cusp(&self) -> bool {
        matches!(self, SlotShape::Cusp { .. })
    }

    pub fn holonomy(&self) -> Mat2 {
        match self {
            SlotShape::Geodesic { holonomy, .. } => *holonomy,
            SlotShape::Cusp { holonomy, .. } => *holonomy,
        }
    }
}

/// Oriented frame of a glued slot, consumed by the surface-level builders.
#[derive(Clone, Debug)]
pub struct SlotFrame {
    pub length: f64,
    pub axis: Pole,
    pub mark: Point,
    pub tangent: MVec,
    pub frame: Mat2,
}

/// One pair of pants realized in the hyperbolic plane.
#[derive(Clone, Debug)]
pub struct PantsGeometry {
    /// Boundary lengths; 0.0 encodes a cusp.
    pub lengths: [f64; 3],
    /// Seam poles, hexagon-interior negative; `seams[k]` is opposite slot k.
    pub seams: [Pole; 3],
    /// Reflections across the seams (det -1 matrices).
    pub seam_reflections: [Mat2; 3],
    pub slots: [SlotShape; 3],
    /// `boundary_products[k]` = product of seam reflections giving the slot
    /// holonomy, before direction correction: `A_k = r_{k+1} r_{k+2}`
    /// satisfying `A_0 A_1 A_2 = I` exactly.
    pub boundary_products: [Mat2; 3],
    /// `dir[k]` = +1 if `A_k` translates the mark in the positive tangent
    /// direction (for cusp slots: +1 if it translates the chart x forward).
    pub dir: [i8; 3],
}

impl PantsGeometry {
    /// Build the canonical realization from boundary lengths (0 = cusp).
    pub fn new(lengths: [f64; 3]) -> Result<Self, GeometryError> {
        for &l in &lengths {
            if !(l.is_finite() && l >= 0.0) {
                return Err(GeometryError::Domain(format!(
                    "boundary lengths must be finite and non-negative, got {l}"
                )));
            }
        }
        let b = [lengths[0] / 2.0, lengths[1] / 2.0, lengths[2] / 2.0];
        // 1-based derivation uses (b1, b2, b3) = (b[0], b[1], b[2]) and
        // seams sigma_1, sigma_2, sigma_3 = seams[0], seams[1], seams[2].
        let (s1, s2, s3);
        let (b1, b2, b3) = (b[0], b[1], b[2]);
        if b1 > 0.0 {
            // sigma_2 = unit circle, sigma_3 = |z| = e^{b1}.
            s2 = Pole::from_raw(MVec::new(-1.0, 0.0, 0.0));
            s3 = Pole::from_raw(MVec::new(b1.cosh(), 0.0, b1.sinh()));
            let r_big = b1.exp();
            let r = (r_big * r_big - 1.0) / (2.0 * (b3.cosh() + r_big * b2.cosh()));
            let u = 1.0 + 2.0 * r * b3.cosh();
            let c0 = (u + r * r).sqrt();
            s1 = Pole::project(MVec::new((u - 1.0) / (2.0 * r), c0 / r, (1.0 + u) / (2.0 * r)));
        } else {
            // Slot 0 is a cusp: sigma_2 = unit circle, sigma_3 = line x = 1,
            // tangent at z = 1.
            s2 = Pole::from_raw(MVec::new(-1.0, 0.0, 0.0));
            s3 = Pole::project(MVec::new(1.0, 1.0, 1.0));
            if b2 > 0.0 {
                let r = 2.0 * (b3.cosh() + b2.cosh()) / (b2.sinh() * b2.sinh());
                let c0 = 1.0 - r * b2.cosh();
                let u = c0 * c0 - r * r;
                s1 = Pole::project(MVec::new(
                    (u - 1.0) / (2.0 * r),
                    c0 / r,
                    (1.0 + u) / (2.0 * r),
                ));
            } else {
                // Slots 0 and 1 are cusps: sigma_1 = line x = -cosh(b3).
                let c = b3.cosh();
                s1 = Pole::project(MVec::new(c, -1.0, c));
            }
        }
        let seams = [s1, s2, s3];
        // Orientation sanity: pairwise pairings must be -cosh(b_k).
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let got = seams[i].pairing(seams[j]);
            let want = -b[k].cosh();
            if (got - want).abs() > 1e-9 * want.abs().max(1.0) {
                return Err(GeometryError::Conditioning(format!(
                    "seam placement failed for lengths {lengths:?}: pairing {got} vs {want}"
                )));
            }
        }
        let seam_reflections = [
            reflection_matrix(seams[0]),
            reflection_matrix(seams[1]),
            reflection_matrix(seams[2]),
        ];
        // Boundary products A_k = r_{k+1} r_{k+2}; A_0 A_1 A_2 = I exactly.
        let boundary_products = [
            seam_reflections[1].mul(seam_reflections[2]).normalize(),
            seam_reflections[2].mul(seam_reflections[0]).normalize(),
            seam_reflections[0].mul(seam_reflections[1]).normalize(),
        ];
        let mut slots_v: Vec<SlotShape> = Vec::with_capacity(3);
        let mut dir = [0i8; 3];
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            if lengths[k] > 0.0 {
                // Axis = common perpendicular of the adjacent seams,
                // oriented interior-negative.
                let mut axis = Pole::common_perpendicular(seams[i], seams[j]);
                // The hexagon interior lies between the seams; the seam
                // feet are on the axis, and the center-of-feet nudged along
                // either seam into the hexagon must be negative.
                let mark = foot_of_on(seams[i], axis);
                let half_mark = foot_of_on(seams[j], axis);
                let probe = probe_inside(mark, half_mark, &seams, k);
                if probe.raw().mdot(axis.raw()) > 0.0 {
                    axis = axis.flip();
                }
                let tangent = mark.tangent_toward(half_mark);
                let frame = axis_frame(axis, mark, tangent);
                let a_k = boundary_products[k];
                let d = translation_direction(a_k, mark, tangent, lengths[k])?;
                dir[k] = d;
                let holonomy = if d == 1 { a_k } else { a_k.inverse() };
                slots_v.push(SlotShape::Geodesic {
                    length: lengths[k],
                    axis,
                    mark,
                    half_mark,
                    tangent,
                    frame,
                    holonomy,
                });
            } else {
                // Cusp: the adjacent seams are asymptotic; their shared
                // ideal point is the cusp.
                let ideal = shared_ideal_point(seams[i], seams[j])?;
                let a_k = boundary_products[k];
                let (chart, holonomy, d) = cusp_chart(ideal, a_k)?;
                dir[k] = d;
                slots_v.push(SlotShape::Cusp {
                    ideal,
                    chart,
                    holonomy,
                });
            }
        }
        let slots: [SlotShape; 3] = slots_v
            .try_into()
            .map_err(|_| GeometryError::Conditioning("slot construction".into()))?;
        Ok(PantsGeometry {
            lengths,
            seams,
            seam_reflections,
            slots,
            boundary_products,
            dir,
        })
    }

    /// Depth of a point into the pants as seen from slot `k`: distance to
    /// the boundary geodesic (nearest unfolded copy), or for cusp slots
    /// `log(y0 / y)` relative to the horoball at chart height `y0 = 2 pi`
    /// (the boundary-length-1 horocycle), which is negative inside the
    /// horoball.
    pub fn slot_depth(&self, p: Point, k: usize) -> f64 {
        match &self.slots[k] {
            SlotShape::Geodesic { .. } => self.distance_to_slot(p, k),
            SlotShape::Cusp { .. } => {
                let y = self.cusp_level(p, k);
                (TWO_PI / y).ln()
            }
        }
    }

    /// A deep interior point of the front hexagon: approximately maximizes
    /// the minimum slot depth, constrained to the hexagon. The mesher uses
    /// it as the hub its spine cuts emanate from; any interior point with
    /// positive clearance is acceptable.
    pub fn hub_point(&self) -> Result<Point, GeometryError> {
        let inside = |p: Point| -> bool {
            (0..3).all(|s| p.raw().mdot(self.seams[s].raw()) < 0.0)
                && (0..3).all(|k| match &self.slots[k] {
                    SlotShape::Geodesic { axis, .. } => p.raw().mdot(axis.raw()) < 0.0,
                    SlotShape::Cusp { .. } => true,
                })
        };
        // Margin above the required thick-part clearance: the standard
        // collar width for geodesic slots, the horoball for cusps. Distance
        // to the seams enters as well so the hub does not hug a seam (its
        // mirror image would then nearly coincide with it, which degrades
        // the mesh spine).
        let clearance = |p: Point| -> f64 {
            let slot_margin = (0..3)
                .map(|k| match &self.slots[k] {
                    SlotShape::Geodesic { length, .. } => {
                        self.slot_depth(p, k) - collar_half_width(*length)
                    }
                    SlotShape::Cusp { .. } => self.slot_depth(p, k),
                })
                .fold(f64::INFINITY, f64::min);
            let seam_margin = (0..3)
                .map(|sm| 2.0 * p.distance_to_pole(self.seams[sm]))
                .fold(f64::INFINITY, f64::min)
                .min(0.35);
            slot_margin.min(seam_margin)
        };
        // Seed grid: Fermi samples over each real slot band plus horoball
        // samples under each cusp; the bands cover the hexagon.
        let mut candidates: Vec<Point> = Vec::new();
        for k in 0..3 {
            match &self.slots[k] {
                SlotShape::Geodesic { length, .. } => {
                    let depth = 2.0 + (4.0 / length.min(2.0)).ln().max(0.0);
                    for it in 0..9 {
                        let t = (it as f64 + 0.5) / 9.0 * (length / 2.0);
                        for id in 1..=10 {
                            let d = id as f64 / 10.0 * depth;
                            candidates.push(self.boundary_fermi_point(k, t, d));
                        }
                    }
                }
                SlotShape::Cusp { chart, .. } => {
                    let inv = chart.inverse();
                    for ix in 0..8 {
                        let x = (ix as f64 + 0.5) / 8.0 * TWO_PI;
                        for iy in 0..6 {
                            let y = TWO_PI * (0.3f64).powf(iy as f64 / 5.0 * 3.0);
                            let (ux, uy) = inv.apply(x, y);
                            if uy > 1e-9 && uy.is_finite() && ux.abs() < 1e9 {
                                candidates.push(crate::hyp::uhp_to_hyperboloid(ux, uy));
                            }
                        }
                    }
                }
            }
        }
        candidates.push(crate::hyp::uhp_to_hyperboloid(0.0, 3.0f64.sqrt()));
        let mut p = None;
        let mut best = f64::NEG_INFINITY;
        for c in candidates {
            if !inside(c) {
                continue;
            }
            let fc = clearance(c);
            if fc > best {
                best = fc;
                p = Some(c);
            }
        }
        let mut p = p.ok_or_else(|| {
            GeometryError::Conditioning("no interior hexagon point found".into())
        })?;
        let mut step: f64 = 0.3;
        for _ in 0..200 {
            if step < 1e-6 {
                break;
            }
            let e1 = pick_tangent(p);
            let Some(e2p) = Pole::try_project(p.raw().mcross(e1)) else {
                break;
            };
            let e2 = e2p.raw();
            let diag = std::f64::consts::FRAC_1_SQRT_2;
            let dirs = [
                e1,
                e2,
                e1.scale(-1.0),
                e2.scale(-1.0),
                e1.scale(diag).add(e2.scale(diag)),
                e1.scale(diag).add(e2.scale(-diag)),
                e1.scale(-diag).add(e2.scale(diag)),
                e1.scale(-diag).add(e2.scale(-diag)),
            ];
            let mut improved = false;
            for dir in dirs {
                let Some(q) = Point::try_project(p.raw().scale(step.cosh()).add(dir.scale(step.sinh())))
                else {
                    continue;
                };
                if !inside(q) {
                    continue;
                }
                let fq = clearance(q);
                if fq > best {
                    best = fq;
                    p = q;
                    improved = true;
                    break;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        if best < -1e-3 {
            return Err(GeometryError::Conditioning(format!(
                "hub point clearance {best:.3e} below the collar requirement"
            )));
        }
        Ok(p)
    }

    /// Frame of a geodesic slot (panics on cusp slots).
    pub fn slot_frame(&self, k: usize) -> SlotFrame {
        match &self.slots[k] {
            SlotShape::Geodesic {
                length,
                axis,
                mark,
                tangent,
                frame,
                ..
            } => SlotFrame {
                length: *length,
                axis: *axis,
                mark: *mark,
                tangent: *tangent,
                frame: *frame,
            },
            SlotShape::Cusp { .. } => panic!("slot {k} is a cusp"),
        }
    }

    /// Point at arclength `t` (from the mark, positive direction) and
    /// perpendicular depth `d` into the pants, on the boundary of slot `k`.
    /// `t` may take any real value; the full boundary circle is `t mod
    /// length` with the second half lying in the mirror hexagon.
    pub fn boundary_fermi_point(&self, k: usize, t: f64, d: f64) -> Point {
        match &self.slots[k] {
            SlotShape::Geodesic {
                axis,
                mark,
                tangent,
                ..
            } => {
                let on_axis = mark.walk(*tangent, t);
                if d == 0.0 {
                    return on_axis;
                }
                // Interior is the negative side of the axis pole.
                let w = axis.raw();
                let side = on_axis.raw().mcross(tangent_at(*mark, *tangent, t));
                // side is +-w; pick the sign pointing to the negative side.
                let sign = if side.mdot(w) > 0.0 { -1.0 } else { 1.0 };
                Point::project(
                    on_axis
                        .raw()
                        .scale(d.cosh())
                        .add(side.scale(sign * d.sinh())),
                )
            }
            SlotShape::Cusp { .. } => panic!("slot {k} is a cusp"),
        }
    }

    /// Distance from a point to the boundary geodesic of slot `k`, taking
    /// the nearest of the axis and its reflections across the three seams
    /// (enough copies for points in the hexagon pair).
    pub fn distance_to_slot(&self, p: Point, k: usize) -> f64 {
        match &self.slots[k] {
            SlotShape::Geodesic { axis, .. } => {
                let mut best = p.distance_to_pole(*axis);
                for r in 0..3 {
                    let refl = axis.reflect(self.seams[r]);
                    best = best.min(p.distance_to_pole(refl));
                    for r2 in 0..3 {
                        if r2 != r {
                            let refl2 = refl.reflect(self.seams[r2]);
                            best = best.min(p.distance_to_pole(refl2));
                        }
                    }
                }
                best
            }
            SlotShape::Cusp { .. } => panic!("slot {k} is a cusp"),
        }
    }

    /// Horoball level of a point in the cusp chart of slot `k`: the `y`
    /// coordinate after mapping the cusp to the standard cylinder, taking
    /// the max over seam-reflected copies of the point.
    pub fn cusp_level(&self, p: Point, k: usize) -> f64 {
        match &self.slots[k] {
            SlotShape::Cusp { chart, .. } => {
                let mut best = f64::MIN;
                let (x, y) = hyperboloid_to_uhp(p);
                let (_, cy) = chart.apply(x, y);
                best = best.max(cy);
                for r in 0..3 {
                    let q = p.reflect(self.seams[r]);
                    let (x, y) = hyperboloid_to_uhp(q);
                    let (_, cy) = chart.apply(x, y);
                    best = best.max(cy);
                }
                best
            }
            SlotShape::Geodesic { .. } => panic!("slot {k} is not a cusp"),
        }
    }

    /// Map a point to the cusp chart `(x mod 2 pi, y)` of slot `k`.
    pub fn cusp_chart_coords(&self, p: Point, k: usize) -> (f64, f64) {
        match &self.slots[k] {
            SlotShape::Cusp { chart, .. } => {
                let (x, y) = hyperboloid_to_uhp(p);
                let (cx, cy) = chart.apply(x, y);
                (cx.rem_euclid(TWO_PI), cy)
            }
            SlotShape::Geodesic { .. } => panic!("slot {k} is not a cusp"),
        }
    }
}

fn tangent_at(mark: Point, tangent: MVec, t: f64) -> MVec {
    // Tangent of s -> mark.walk(tangent, s) at s = t.
    mark.raw().scale(t.sinh()).add(tangent.scale(t.cosh()))
}

fn reflection_matrix(pole: Pole) -> Mat2 {
    UhpGeodesic::from_pole(pole).reflection()
}

fn foot_of_on(seam: Pole, axis: Pole) -> Point {
    Pole::intersection(seam, axis)
}

/// A point slightly inside the hexagon near the middle of side `k`.
fn probe_inside(mark: Point, half_mark: Point, seams: &[Pole; 3], k: usize) -> Point {
    let mid = mark.midpoint(half_mark);
    // Walk perpendicular to the side, toward the opposite seam (seam k):
    // its signed distance changes at first order along this direction, so
    // the comparison is robust. Interior points are less deep on the
    // negative side of the (inward-oriented) seam pole, i.e. have the
    // larger pairing.
    let towards = |sgn: f64| {
        let u = mid.tangent_toward(mark);
        let n = mid.raw().mcross(u);
        Point::project(mid.raw().scale(1e-3f64.cosh()).add(n.scale(sgn * 1e-3f64.sinh())))
    };
    let a = towards(1.0);
    let b = towards(-1.0);
    let score = |p: Point| p.raw().mdot(seams[k].raw());
    if score(a) > score(b) {
        a
    } else {
        b
    }
}

/// Build the Möbius frame sending (0 -> e1, infinity -> e2, i -> mark) where
/// e1, e2 are the ideal endpoints of the oriented axis (behind/ahead).
fn axis_frame(axis: Pole, mark: Point, tangent: MVec) -> Mat2 {
    let geo = UhpGeodesic::from_pole(axis);
    let (p, q) = geo.endpoints();
    // Orient: walking from mark in `tangent` heads to one endpoint; find
    // which by a short walk.
    let ahead_pt = mark.walk(tangent, 1.0);
    let (ax, _) = hyperboloid_to_uhp(ahead_pt);
    let (mx, _) = hyperboloid_to_uhp(mark);
    let (e1, e2) = match (p, q) {
        (Some(a), Some(bb)) => {
            // Moving toward larger x means heading to the endpoint with
            // larger x.
            if ax > mx {
                (a.min(bb), a.max(bb))
            } else {
                (a.max(bb), a.min(bb))
            }
        }
        (Some(a), None) => {
            // Vertical line: ahead is infinity iff y increased.
            let (_, ay) = hyperboloid_to_uhp(ahead_pt);
            let (_, my) = hyperboloid_to_uhp(mark);
            if ay > my {
                (a, f64::INFINITY)
            } else {
                (f64::INFINITY, a)
            }
        }
        _ => unreachable!(),
    };
    let base = if e2.is_infinite() {
        Mat2::new(1.0, e1, 0.0, 1.0)
    } else if e1.is_infinite() {
        Mat2::new(e2, -1.0, 1.0, 0.0)
    } else {
        // 0 -> e1, infinity -> e2.
        Mat2::new(e2, e1, 1.0, 1.0).normalize()
    };
    let base = if base.det() < 0.0 {
        Mat2::new(-base.a, base.b, -base.c, base.d)
    } else {
        base
    };
    // Slide along the axis so that i lands on the mark.
    let (bx, by) = base.apply(0.0, 1.0);
    let base_pt = crate::hyp::uhp_to_hyperboloid(bx, by);
    let d = base_pt.distance(mark);
    if d < 1e-14 {
        return base.normalize();
    }
    let fwd = base.mul(Mat2::axis_translation(d));
    let bwd = base.mul(Mat2::axis_translation(-d));
    let land = |m: Mat2| {
        let (cx, cy) = m.apply(0.0, 1.0);
        crate::hyp::uhp_to_hyperboloid(cx, cy).distance(mark)
    };
    let m = if land(fwd) <= land(bwd) { fwd } else { bwd };
    m.normalize()
}

fn translation_direction(
    a: Mat2,
    mark: Point,
    tangent: MVec,
    length: f64,
) -> Result<i8, GeometryError> {
    let (mx, my) = hyperboloid_to_uhp(mark);
    let (ix, iy) = a.apply(mx, my);
    let image = crate::hyp::uhp_to_hyperboloid(ix, iy);
    let fwd = mark.walk(tangent, length);
    let bwd = mark.walk(tangent, -length);
    let (df, db) = (image.distance(fwd), image.distance(bwd));
    if df.min(db) > 1e-3 * (1.0 + length) {
        return Err(GeometryError::Conditioning(format!(
            "boundary product does not translate by the boundary length \
             (moved to distance {df:.3e}/{db:.3e} from the expected points)"
        )));
    }
    Ok(if df <= db { 1 } else { -1 })
}

fn shared_ideal_point(a: Pole, b: Pole) -> Result<Option<f64>, GeometryError> {
    // Tangent poles: the shared ideal point is the null direction of
    // a x b (its Minkowski norm vanishes).
    let v = a.raw().mcross(b.raw());
    let scale = v.t.abs().max(v.x.abs()).max(v.y.abs());
    if scale == 0.0 {
        return Err(GeometryError::Conditioning("degenerate seam pair".into()));
    }
    debug_assert!(v.norm2().abs() < 1e-6 * scale * scale);
    // Null vector (x, y, t): boundary point x/..: on the boundary circle the
    // UHP coordinate is x = y-component / (t - x) unless t == x (infinity).
    if (v.t - v.x).abs() < 1e-12 * scale {
        Ok(None)
    } else {
        Ok(Some(v.y / (v.t - v.x)))
    }
}

/// Build the chart matrix for a cusp: ideal point -> infinity, holonomy ->
/// `z + 2 pi`. Returns (chart, holonomy-in-positive-direction, dir).
fn cusp_chart(ideal: Option<f64>, a: Mat2) -> Result<(Mat2, Mat2, i8), GeometryError> {
    let n = match ideal {
        Some(xi) => Mat2::new(0.0, -1.0, 1.0, -xi),
        None => Mat2::identity(),
    };
    // Conjugate the holonomy to fix infinity: p = n a n^{-1} = [[1, beta],
    // [0, 1]] up to sign.
    let p = n.mul(a).mul(n.inverse());
    let (pa, pb, pc, pd) = (p.a, p.b, p.c, p.d);
    let scale = pa.abs().max(pb.abs()).max(pd.abs());
    if pc.abs() > 1e-8 * scale {
        return Err(GeometryError::Conditioning(
            "cusp holonomy does not fix the ideal point".into(),
        ));
    }
    let beta = pb / pd; // translation amount (pa/pd = 1 up to sign)
    if !beta.is_finite() || beta.abs() < 1e-12 {
        return Err(GeometryError::Conditioning(
            "cusp holonomy is not parabolic".into(),
        ));
    }
    let (beta, dir, a_pos) = if beta > 0.0 {
        (beta, 1i8, a)
    } else {
        (-beta, -1i8, a.inverse())
    };
    // Scale z -> (2 pi / beta) z.
    let s = (TWO_PI / beta).sqrt();
    let scale_m = Mat2::new(s, 0.0, 0.0, 1.0 / s);
    let chart = scale_m.mul(n).normalize();
    Ok((chart, a_pos, dir))
}

/// Half-width of the standard embedded collar around a closed geodesic of
/// length `l`: `arcsinh(1 / sinh(l/2))`. Standard collars of disjoint
/// simple geodesics are disjoint, so staying outside them keeps a point in
/// the thick part of the pants.
pub fn collar_half_width(l: f64) -> f64 {
    (1.0 / (l / 2.0).sinh()).asinh()
}

fn pick_tangent(p: Point) -> MVec {
    // Any unit tangent at p.
    let trial = MVec::new(1.0, 0.0, 0.0);
    let proj = trial.add(p.raw().scale(trial.mdot(p.raw())));
    let n2 = proj.norm2();
    if n2 > 1e-12 {
        proj.scale(1.0 / n2.sqrt())
    } else {
        let trial = MVec::new(0.0, 1.0, 0.0);
        let proj = trial.add(p.raw().scale(trial.mdot(p.raw())));
        proj.scale(1.0 / proj.norm2().sqrt())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
    }

    #[test]
    fn closed_pants_boundary_lengths() {
        let p = PantsGeometry::new([2.0, 3.0, 1.5]).unwrap();
        for k in 0..3 {
            let h = p.slots[k].holonomy();
            assert!(close(h.translation_length(), p.lengths[k], 1e-10));
        }
        // A_0 A_1 A_2 = I exactly.
        let prod = p.boundary_products[0]
            .mul(p.boundary_products[1])
            .mul(p.boundary_products[2]);
        assert!(prod.distance_to_pm_identity() < 1e-12);
    }

    #[test]
    fn seam_lengths_match_hexagon_identity() {
        let lens = [1.3, 0.8, 2.2];
        let p = PantsGeometry::new(lens).unwrap();
        // Distance between the feet of adjacent boundary axes along a seam
        // equals the hexagon seam length.
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            // Seam k runs between slots i and j.
            let fi = match &p.slots[i] {
                SlotShape::Geodesic { axis, .. } => Pole::intersection(p.seams[k], *axis),
                _ => unreachable!(),
            };
            let fj = match &p.slots[j] {
                SlotShape::Geodesic { axis, .. } => Pole::intersection(p.seams[k], *axis),
                _ => unreachable!(),
            };
            let want = seam_cosh(lens[k] / 2.0, lens[i] / 2.0, lens[j] / 2.0).acosh();
            assert!(close(fi.distance(fj), want, 1e-9), "seam {k}");
        }
    }

    #[test]
    fn frame_maps_axis_correctly() {
        let p = PantsGeometry::new([2.0, 1.0, 1.0]).unwrap();
        for k in 0..3 {
            let f = p.slot_frame(k);
            let (x, y) = f.frame.apply(0.0, 1.0);
            let pt = crate::hyp::uhp_to_hyperboloid(x, y);
            assert!(pt.distance(f.mark) < 1e-7);
            // i e^t walks in the tangent direction.
            let (x2, y2) = f.frame.apply(0.0, 1.3f64.exp());
            let pt2 = crate::hyp::uhp_to_hyperboloid(x2, y2);
            let expect = f.mark.walk(f.tangent, 1.3);
            assert!(pt2.distance(expect) < 1e-6);
        }
    }

    #[test]
    fn cusp_slots_are_parabolic() {
        let p = PantsGeometry::new([1.4, 0.0, 0.0]).unwrap();
        for k in 1..3 {
            let h = p.slots[k].holonomy();
            assert!((h.trace().abs() - 2.0).abs() <= 1e-10);
        }
        // Geodesic slot still has the right length.
        assert!(close(p.slots[0].holonomy().translation_length(), 1.4, 1e-10));
    }

    #[test]
    fn ideal_pants_builds() {
        let p = PantsGeometry::new([0.0, 0.0, 0.0]).unwrap();
        for k in 0..3 {
            assert!((p.slots[k].holonomy().trace().abs() - 2.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn cusp_chart_is_standard() {
        let p = PantsGeometry::new([1.0, 0.0, 2.0]).unwrap();
        if let SlotShape::Cusp { chart, holonomy, .. } = &p.slots[1] {
            // chart . holonomy . chart^{-1} = z + 2 pi.
            let t = chart.mul(*holonomy).mul(chart.inverse()).normalize();
            let t = if t.a < 0.0 {
                Mat2::new(-t.a, -t.b, -t.c, -t.d)
            } else {
                t
            };
            assert!((t.a - 1.0).abs() < 1e-9);
            assert!((t.d - 1.0).abs() < 1e-9);
            assert!(t.c.abs() < 1e-9);
            assert!((t.b - TWO_PI).abs() < 1e-7);
        } else {
            panic!("slot 1 should be a cusp");
        }
    }

    #[test]
    fn fermi_points_lie_at_expected_distances() {
        let p = PantsGeometry::new([2.0, 1.2, 0.9]).unwrap();
        let f = p.slot_frame(0);
        let q = p.boundary_fermi_point(0, 0.7, 0.4);
        assert!(close(q.distance_to_pole(f.axis), 0.4, 1e-10));
        let foot = q.foot_on(f.axis);
        assert!(close(foot.distance(f.mark), 0.7, 1e-9));
        // Interior side: negative pairing with the axis pole.
        assert!(q.raw().mdot(f.axis.raw()) < 0.0);
    }

    #[test]
    fn hub_is_deep_for_symmetric_pants() {
        let p = PantsGeometry::new([2.0, 2.0, 2.0]).unwrap();
        let c = p.hub_point().unwrap();
        let d: Vec<f64> = (0..3).map(|k| p.slot_depth(c, k)).collect();
        // For the symmetric pants the max-min point is the equidistant one.
        assert!(close(d[0], d[1], 1e-3));
        assert!(close(d[1], d[2], 1e-3));
        assert!(d[0] > 0.3);
    }

    #[test]
    fn hub_exists_for_skew_and_cusped_pants() {
        let p = PantsGeometry::new([2.560403881276689, 0.5819345743096784, 0.5028213652721503])
            .unwrap();
        let c = p.hub_point().unwrap();
        assert!((0..3).all(|k| p.slot_depth(c, k) > 0.05));
        let q = PantsGeometry::new([1.5, 0.0, 0.0]).unwrap();
        let c = q.hub_point().unwrap();
        assert!((0..3).all(|k| q.slot_depth(c, k) > 0.05));
        let r = PantsGeometry::new([0.0, 0.0, 0.0]).unwrap();
        let c = r.hub_point().unwrap();
        assert!((0..3).all(|k| r.slot_depth(c, k) > 0.05));
    }
}
