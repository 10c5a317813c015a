//! Hyperbolic-plane primitives shared by the geometry and meshing layers.
//!
//! Two models are used side by side:
//!
//! * the hyperboloid model in Minkowski space R^{2,1} (signature `+ + -`),
//!   where points are timelike unit vectors, geodesics are spacelike unit
//!   "pole" vectors, and all incidence/distance questions are linear
//!   algebra;
//! * the upper half-plane, where isometries are 2x2 real matrices acting as
//!   Möbius maps. Orientation-reversing maps (reflections) are matrices with
//!   determinant -1 acting through `z -> M(conj z)`.

mod mat2;
mod minkowski;

pub use mat2::Mat2;
pub use minkowski::{MVec, Point, Pole};

/// Conversion from an upper half-plane point to the hyperboloid model.
pub fn uhp_to_hyperboloid(x: f64, y: f64) -> Point {
    debug_assert!(y > 0.0);
    Point::from_raw(MVec::new(
        (x * x + y * y - 1.0) / (2.0 * y),
        x / y,
        (x * x + y * y + 1.0) / (2.0 * y),
    ))
}

/// Conversion from the hyperboloid model back to upper half-plane
/// coordinates.
pub fn hyperboloid_to_uhp(p: Point) -> (f64, f64) {
    let v = p.raw();
    let y = 1.0 / (v.t - v.x);
    (v.y * y, y)
}

/// A geodesic of the upper half-plane in circle/line form, used when the
/// 2x2 matrix of a reflection is needed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UhpGeodesic {
    /// Semicircle orthogonal to the real axis: `|z - center| = radius`.
    Circle { center: f64, radius: f64 },
    /// Vertical line `Re z = x`.
    Vertical { x: f64 },
}

impl UhpGeodesic {
    /// Recover circle/line data from an oriented pole.
    pub fn from_pole(p: Pole) -> Self {
        let v = p.raw();
        // Pole of |z - c| = r is ((1-u)/2r, -c/r, -(1+u)/2r) with u = c^2 - r^2,
        // up to sign; a vertical line x = c has pole +-(c, 1, c).
        let denom = v.x - v.t;
        if denom.abs() < 1e-13 * (1.0 + v.y.abs()) {
            // x1 == x3 within noise: vertical line, pole ~ (c, 1, c).
            UhpGeodesic::Vertical { x: v.x / v.y }
        } else {
            let center = -v.y / denom;
            let rad2 = center * center + (v.x + v.t) / denom;
            debug_assert!(rad2 > 0.0, "pole does not describe a real geodesic");
            UhpGeodesic::Circle {
                center,
                radius: rad2.sqrt(),
            }
        }
    }

    /// The two ideal endpoints, `None` standing for the point at infinity.
    pub fn endpoints(&self) -> (Option<f64>, Option<f64>) {
        match *self {
            UhpGeodesic::Circle { center, radius } => {
                (Some(center - radius), Some(center + radius))
            }
            UhpGeodesic::Vertical { x } => (Some(x), None),
        }
    }

    /// Matrix of the reflection across this geodesic, normalized to
    /// determinant -1. It acts on the half-plane through `z -> M(conj z)`.
    pub fn reflection(&self) -> Mat2 {
        match *self {
            UhpGeodesic::Circle { center, radius } => Mat2::new(
                center / radius,
                (radius * radius - center * center) / radius,
                1.0 / radius,
                -center / radius,
            ),
            UhpGeodesic::Vertical { x } => Mat2::new(-1.0, 2.0 * x, 0.0, 1.0),
        }
    }
}

/// Hyperbolic distance in a cusp cylinder chart `(x, y)` with `x` taken
/// modulo `period` and metric `(dx^2 + dy^2) / y^2`.
pub fn cusp_chart_distance(period: f64, x1: f64, y1: f64, x2: f64, y2: f64) -> f64 {
    let mut dx = (x1 - x2).rem_euclid(period);
    if dx > period / 2.0 {
        dx = period - dx;
    }
    let dy = y1 - y2;
    let c = 1.0 + (dx * dx + dy * dy) / (2.0 * y1 * y2);
    c.acosh()
}

/// Side lengths of a geodesic triangle -> its interior angles, by the
/// hyperbolic law of cosines. Angles are returned opposite to `(a, b, c)`.
pub fn triangle_angles(a: f64, b: f64, c: f64) -> (f64, f64, f64) {
    let alpha = angle_from_sides(a, b, c);
    let beta = angle_from_sides(b, c, a);
    let gamma = angle_from_sides(c, a, b);
    (alpha, beta, gamma)
}

/// Angle opposite `a` in the triangle with sides `(a, b, c)`.
pub fn angle_from_sides(a: f64, b: f64, c: f64) -> f64 {
    let num = b.cosh() * c.cosh() - a.cosh();
    let den = b.sinh() * c.sinh();
    (num / den).clamp(-1.0, 1.0).acos()
}

/// Area of a geodesic triangle with the given side lengths (angle deficit).
pub fn triangle_area(a: f64, b: f64, c: f64) -> f64 {
    let (alpha, beta, gamma) = triangle_angles(a, b, c);
    std::f64::consts::PI - alpha - beta - gamma
}

/// Length of the segment joining the midpoints of the sides `b` and `c`
/// (the sides adjacent to the vertex with angle opposite `a`).
pub fn midline_length(a: f64, b: f64, c: f64) -> f64 {
    let alpha = angle_from_sides(a, b, c);
    let ch = (b / 2.0).cosh() * (c / 2.0).cosh() - (b / 2.0).sinh() * (c / 2.0).sinh() * alpha.cos();
    ch.max(1.0).acosh()
}

/// Distance between two points given in Fermi coordinates around a common
/// geodesic axis: perpendicular distances `d1`, `d2` on the same side and
/// feet separated by arclength `dt` along the axis.
pub fn fermi_distance(dt: f64, d1: f64, d2: f64) -> f64 {
    let c = d1.cosh() * d2.cosh() * dt.cosh() - d1.sinh() * d2.sinh();
    c.max(1.0).acosh()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uhp_round_trip() {
        let p = uhp_to_hyperboloid(0.3, 1.7);
        let (x, y) = hyperboloid_to_uhp(p);
        assert!((x - 0.3).abs() < 1e-14);
        assert!((y - 1.7).abs() < 1e-14);
    }

    #[test]
    fn distance_along_imaginary_axis() {
        let p = uhp_to_hyperboloid(0.0, 1.0);
        let q = uhp_to_hyperboloid(0.0, std::f64::consts::E);
        assert!((p.distance(q) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fermi_right_triangle() {
        // d2 = 0 reduces to the right-triangle hypotenuse formula.
        let d = fermi_distance(0.7, 0.4, 0.0);
        assert!((d.cosh() - 0.7f64.cosh() * 0.4f64.cosh()).abs() < 1e-12);
    }

    #[test]
    fn equilateral_triangle_area() {
        // Equilateral triangle, side 1: area = pi - 3*alpha.
        let a = triangle_area(1.0, 1.0, 1.0);
        let alpha = angle_from_sides(1.0, 1.0, 1.0);
        assert!((a - (std::f64::consts::PI - 3.0 * alpha)).abs() < 1e-14);
        assert!(a > 0.0 && a < std::f64::consts::PI);
    }

    #[test]
    fn midline_of_small_triangle_is_near_half() {
        // Nearly Euclidean regime: midline ~ a/2.
        let m = midline_length(0.01, 0.01, 0.01);
        assert!((m - 0.005).abs() < 1e-6);
    }
}
