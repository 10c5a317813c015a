//! 2x2 real matrices acting on the upper half-plane as Möbius maps.
//!
//! Determinant +1: orientation-preserving isometry `z -> (az+b)/(cz+d)`.
//! Determinant -1: orientation-reversing, acting through `z -> M(conj z)`.
//! Compositions of such maps multiply as plain matrices (for real entries),
//! with the parity tracked by the determinant sign.

/// Row-major 2x2 real matrix.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(1.0, 0.0, 0.0, 1.0)
    }

    /// Hyperbolic translation by length `t` along the imaginary axis
    /// (0 -> infinity direction).
    pub fn axis_translation(t: f64) -> Self {
        Mat2::new((t / 2.0).exp(), 0.0, 0.0, (-t / 2.0).exp())
    }

    /// Half-turn about `i`: `z -> -1/z`. Reverses the imaginary axis.
    pub fn half_turn() -> Self {
        Mat2::new(0.0, -1.0, 1.0, 0.0)
    }

    pub fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(self) -> f64 {
        self.a + self.d
    }

    /// Inverse, assuming determinant +-1 after normalization.
    pub fn inverse(self) -> Mat2 {
        let det = self.det();
        Mat2::new(self.d / det, -self.b / det, -self.c / det, self.a / det)
    }

    /// Rescale so |det| = 1 (keeps the Möbius action unchanged).
    pub fn normalize(self) -> Mat2 {
        let s = 1.0 / self.det().abs().sqrt();
        Mat2::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }

    /// Möbius action on the upper half-plane. Only valid for det > 0; for a
    /// reflection apply to the conjugate point instead.
    pub fn apply(self, x: f64, y: f64) -> (f64, f64) {
        debug_assert!(self.det() > 0.0);
        // (a z + b) / (c z + d) for z = x + iy.
        let den = (self.c * x + self.d).powi(2) + (self.c * y).powi(2);
        let re = (self.a * x + self.b) * (self.c * x + self.d) + self.a * self.c * y * y;
        let im = y * self.det();
        (re / den, im / den)
    }

    /// Action on a boundary point, `None` = infinity.
    pub fn apply_boundary(self, x: Option<f64>) -> Option<f64> {
        match x {
            Some(x) => {
                let den = self.c * x + self.d;
                if den.abs() < 1e-300 {
                    None
                } else {
                    Some((self.a * x + self.b) / den)
                }
            }
            None => {
                if self.c.abs() < 1e-300 {
                    None
                } else {
                    Some(self.a / self.c)
                }
            }
        }
    }

    /// Translation length of a hyperbolic element (|trace| > 2).
    pub fn translation_length(self) -> f64 {
        let t = self.trace().abs() / self.det().abs().sqrt();
        2.0 * (t / 2.0).max(1.0).acosh()
    }

    /// Entrywise distance to +-identity, whichever is closer.
    pub fn distance_to_pm_identity(self) -> f64 {
        let dp = (self.a - 1.0)
            .abs()
            .max((self.d - 1.0).abs())
            .max(self.b.abs())
            .max(self.c.abs());
        let dm = (self.a + 1.0)
            .abs()
            .max((self.d + 1.0).abs())
            .max(self.b.abs())
            .max(self.c.abs());
        dp.min(dm)
    }

    /// Frobenius norm squared; `cosh d(i, g i) = ||g||_F^2 / 2` for det 1.
    pub fn frobenius2(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_moves_i_up() {
        let t = Mat2::axis_translation(1.0);
        let (x, y) = t.apply(0.0, 1.0);
        assert!(x.abs() < 1e-15);
        assert!((y - std::f64::consts::E).abs() < 1e-12);
        assert!((t.translation_length() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn half_turn_fixes_i() {
        let h = Mat2::half_turn();
        let (x, y) = h.apply(0.0, 1.0);
        assert!(x.abs() < 1e-15 && (y - 1.0).abs() < 1e-15);
        assert!(h.apply_boundary(Some(0.0)).is_none());
    }

    #[test]
    fn inverse_composes_to_identity() {
        let m = Mat2::new(2.0, 1.0, 1.0, 1.0);
        let p = m.mul(m.inverse());
        assert!(p.distance_to_pm_identity() < 1e-12);
    }
}
