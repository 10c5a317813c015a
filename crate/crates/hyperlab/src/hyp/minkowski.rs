//! Minkowski linear algebra for the hyperboloid model.
//!
//! Vectors live in R^{2,1} with inner product `<a,b> = a.x b.x + a.y b.y -
//! a.t b.t`. Points of the hyperbolic plane are unit timelike vectors with
//! `t > 0`; geodesics are represented by unit spacelike poles.

/// Raw Minkowski 3-vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MVec {
    pub x: f64,
    pub y: f64,
    pub t: f64,
}

impl MVec {
    pub fn new(x: f64, y: f64, t: f64) -> Self {
        MVec { x, y, t }
    }

    /// Minkowski inner product with signature (+, +, -).
    pub fn mdot(self, o: MVec) -> f64 {
        self.x * o.x + self.y * o.y - self.t * o.t
    }

    /// Minkowski cross product, defined so that `cross(a,b)` is
    /// Minkowski-orthogonal to both `a` and `b`.
    pub fn mcross(self, o: MVec) -> MVec {
        MVec {
            x: self.y * o.t - self.t * o.y,
            y: self.t * o.x - self.x * o.t,
            t: -(self.x * o.y - self.y * o.x),
        }
    }

    pub fn add(self, o: MVec) -> MVec {
        MVec::new(self.x + o.x, self.y + o.y, self.t + o.t)
    }

    pub fn sub(self, o: MVec) -> MVec {
        MVec::new(self.x - o.x, self.y - o.y, self.t - o.t)
    }

    pub fn scale(self, s: f64) -> MVec {
        MVec::new(self.x * s, self.y * s, self.t * s)
    }

    pub fn norm2(self) -> f64 {
        self.mdot(self)
    }
}

/// A point of the hyperbolic plane: unit timelike vector, `t > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point(MVec);

impl Point {
    /// Wrap a vector that is already normalized (debug-checked).
    pub fn from_raw(v: MVec) -> Self {
        debug_assert!(v.t > 0.0);
        let scale = v.t * v.t;
        debug_assert!(
            (v.norm2() + 1.0).abs() < 1e-9 * scale.max(1.0),
            "not a unit timelike vector"
        );
        Point(v)
    }

    /// Normalize a timelike vector onto the hyperboloid.
    pub fn project(v: MVec) -> Self {
        Self::try_project(v).expect("cannot project a non-timelike vector to a point")
    }

    /// Normalize a timelike vector onto the hyperboloid; `None` when the
    /// vector is not safely timelike (precision loss far from the origin).
    pub fn try_project(v: MVec) -> Option<Self> {
        let n2 = v.norm2();
        if !(n2 < 0.0) || !n2.is_finite() {
            return None;
        }
        let s = 1.0 / (-n2).sqrt();
        let s = if v.t < 0.0 { -s } else { s };
        Some(Point(v.scale(s)))
    }

    pub fn raw(self) -> MVec {
        self.0
    }

    pub fn distance(self, o: Point) -> f64 {
        (-self.0.mdot(o.0)).max(1.0).acosh()
    }

    /// Distance to a geodesic.
    pub fn distance_to_pole(self, p: Pole) -> f64 {
        self.0.mdot(p.raw()).abs().asinh()
    }

    /// Signed distance to a geodesic (sign of the Minkowski pairing).
    pub fn signed_distance_to_pole(self, p: Pole) -> f64 {
        self.0.mdot(p.raw()).asinh()
    }

    /// Midpoint of the geodesic segment to `o`.
    pub fn midpoint(self, o: Point) -> Point {
        Point::project(self.0.add(o.0))
    }

    /// Point at arclength `s` along the geodesic through `self` with unit
    /// tangent `u` (`<u,u> = 1`, `<u, self> = 0`).
    pub fn walk(self, u: MVec, s: f64) -> Point {
        Point::project(self.0.scale(s.cosh()).add(u.scale(s.sinh())))
    }

    /// Unit tangent at `self` pointing toward `o`.
    pub fn tangent_toward(self, o: Point) -> MVec {
        let d = self.0.mdot(o.0);
        let u = o.raw().add(self.0.scale(d));
        let n2 = u.norm2();
        debug_assert!(n2 > 0.0);
        u.scale(1.0 / n2.sqrt())
    }

    /// Reflection across the geodesic with pole `p`.
    pub fn reflect(self, p: Pole) -> Point {
        Point::from_raw(self.0.sub(p.raw().scale(2.0 * self.0.mdot(p.raw()))))
    }

    /// Foot of the perpendicular from `self` onto the geodesic `p`.
    pub fn foot_on(self, p: Pole) -> Point {
        Point::project(self.0.sub(p.raw().scale(self.0.mdot(p.raw()))))
    }
}

/// An oriented geodesic: unit spacelike vector. Points with positive
/// Minkowski pairing are on the pole's positive side.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Pole(MVec);

impl Pole {
    pub fn from_raw(v: MVec) -> Self {
        let scale = v.x * v.x + v.y * v.y + v.t * v.t;
        debug_assert!(
            (v.norm2() - 1.0).abs() < 1e-9 * scale.max(1.0),
            "not a unit spacelike vector"
        );
        Pole(v)
    }

    /// Normalize a spacelike vector.
    pub fn project(v: MVec) -> Self {
        Self::try_project(v).expect("cannot project a non-spacelike vector to a pole")
    }

    /// Fallible normalization for vectors that may have lost their causal
    /// character to rounding.
    pub fn try_project(v: MVec) -> Option<Self> {
        let n2 = v.norm2();
        if !(n2 > 0.0) || !n2.is_finite() {
            return None;
        }
        Some(Pole(v.scale(1.0 / n2.sqrt())))
    }

    pub fn raw(self) -> MVec {
        self.0
    }

    pub fn flip(self) -> Pole {
        Pole(self.0.scale(-1.0))
    }

    /// Geodesic through two distinct points.
    pub fn through(a: Point, b: Point) -> Pole {
        Pole::project(a.raw().mcross(b.raw()))
    }

    /// Common perpendicular of two disjoint geodesics.
    pub fn common_perpendicular(a: Pole, b: Pole) -> Pole {
        Pole::project(a.0.mcross(b.0))
    }

    /// Intersection point of two crossing geodesics.
    pub fn intersection(a: Pole, b: Pole) -> Point {
        Point::project(a.0.mcross(b.0))
    }

    /// Reflect this geodesic across another one.
    pub fn reflect(self, p: Pole) -> Pole {
        Pole::from_raw(self.0.sub(p.raw().scale(2.0 * self.0.mdot(p.raw()))))
    }

    /// `|<p,q>|` classifies the pair: < 1 crossing, = 1 asymptotic,
    /// > 1 disjoint with `acosh` of it the distance.
    pub fn pairing(self, o: Pole) -> f64 {
        self.0.mdot(o.0)
    }

    pub fn distance_to(self, o: Pole) -> f64 {
        self.pairing(o).abs().max(1.0).acosh()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyp::uhp_to_hyperboloid;

    #[test]
    fn cross_is_orthogonal() {
        let a = MVec::new(0.3, -1.2, 0.7);
        let b = MVec::new(1.1, 0.4, -0.2);
        let c = a.mcross(b);
        assert!(c.mdot(a).abs() < 1e-12);
        assert!(c.mdot(b).abs() < 1e-12);
    }

    #[test]
    fn cross_norm_identity() {
        // <axb, axb> = <a,b>^2 - <a,a><b,b> in this signature.
        let a = MVec::new(0.5, 0.25, 0.4);
        let b = MVec::new(-0.3, 1.0, 0.9);
        let c = a.mcross(b);
        let lhs = c.norm2();
        let rhs = a.mdot(b).powi(2) - a.norm2() * b.norm2();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn pole_through_points_contains_them() {
        let p = uhp_to_hyperboloid(0.0, 1.0);
        let q = uhp_to_hyperboloid(0.0, 2.5);
        let g = Pole::through(p, q);
        assert!(p.raw().mdot(g.raw()).abs() < 1e-12);
        assert!(q.raw().mdot(g.raw()).abs() < 1e-12);
        // The imaginary axis has pole (0, 1, 0) up to sign.
        assert!((g.raw().y.abs() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unit_circle_and_scaled_circle_distance() {
        // |z| = 1 has pole (1,0,0); |z| = e^b has pole (cosh b, 0, sinh b).
        let p = Pole::from_raw(MVec::new(1.0, 0.0, 0.0));
        let b: f64 = 0.8;
        let q = Pole::from_raw(MVec::new(b.cosh(), 0.0, b.sinh()));
        assert!((p.distance_to(q) - b).abs() < 1e-12);
    }

    #[test]
    fn walk_and_tangent() {
        let p = uhp_to_hyperboloid(0.0, 1.0);
        let q = uhp_to_hyperboloid(0.0, 3.0);
        let u = p.tangent_toward(q);
        let r = p.walk(u, 3.0f64.ln());
        assert!(r.distance(q) < 1e-7);
    }

    #[test]
    fn reflection_is_isometry_and_involution() {
        let g = Pole::project(MVec::new(0.4, 1.0, 0.3));
        let p = uhp_to_hyperboloid(0.7, 2.0);
        let q = uhp_to_hyperboloid(-0.3, 0.4);
        let (rp, rq) = (p.reflect(g), q.reflect(g));
        assert!((rp.distance(rq) - p.distance(q)).abs() < 1e-12);
        assert!(rp.reflect(g).distance(p) < 1e-7);
    }

    #[test]
    fn foot_is_closest_point() {
        let g = Pole::project(MVec::new(0.4, 1.0, 0.3));
        let p = uhp_to_hyperboloid(0.7, 2.0);
        let f = p.foot_on(g);
        assert!(f.raw().mdot(g.raw()).abs() < 1e-10);
        assert!((p.distance(f) - p.distance_to_pole(g)).abs() < 1e-10);
    }
}
