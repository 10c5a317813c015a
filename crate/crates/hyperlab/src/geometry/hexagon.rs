//! Right-angled hexagons: the building block of a hyperbolic pair of pants.
//!
//! A pair of pants with boundary lengths `(L1, L2, L3)` is two mirror copies
//! of the right-angled hexagon with alternating sides `b1, s3, b2, s1, b3,
//! s2` where `b_k = L_k / 2` and the seams `s_k` are determined by the
//! hexagon identity.

use super::GeometryError;

/// A right-angled hexagon with alternating boundary-half sides and seams.
/// Side order around the boundary: `b1, s3, b2, s1, b3, s2`; seam `s_k` is
/// opposite side `b_k`.
#[derive(Clone, Copy, Debug)]
pub struct Hexagon {
    pub b: [f64; 3],
    pub s: [f64; 3],
}

pub(crate) fn seam_cosh(bk: f64, bi: f64, bj: f64) -> f64 {
    (bk.cosh() + bi.cosh() * bj.cosh()) / (bi.sinh() * bj.sinh())
}

/// Solve for the unique right-angled hexagon with boundary halves
/// `(b1, b2, b3)`: `cosh(s_k) = (cosh b_k + cosh b_i cosh b_j) /
/// (sinh b_i sinh b_j)`.
pub fn solve_hexagon(b1: f64, b2: f64, b3: f64) -> Result<Hexagon, GeometryError> {
    for b in [b1, b2, b3] {
        if !(b.is_finite() && b > 0.0) {
            return Err(GeometryError::Domain(format!(
                "hexagon sides must be positive and finite, got {b}"
            )));
        }
    }
    let s1 = seam_cosh(b1, b2, b3).acosh();
    let s2 = seam_cosh(b2, b3, b1).acosh();
    let s3 = seam_cosh(b3, b1, b2).acosh();
    Ok(Hexagon {
        b: [b1, b2, b3],
        s: [s1, s2, s3],
    })
}

impl Hexagon {
    /// Max relative residual of the hexagon identity over the three seams.
    pub fn identity_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for k in 0..3 {
            let (i, j) = ((k + 1) % 3, (k + 2) % 3);
            let target = seam_cosh(self.b[k], self.b[i], self.b[j]);
            let got = self.s[k].cosh();
            worst = worst.max((got - target).abs() / target.abs().max(1.0));
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive() {
        assert!(solve_hexagon(0.0, 1.0, 1.0).is_err());
        assert!(solve_hexagon(1.0, -2.0, 1.0).is_err());
        assert!(solve_hexagon(1.0, f64::INFINITY, 1.0).is_err());
    }

    #[test]
    fn seams_shrink_for_large_sides() {
        let h5 = solve_hexagon(5.0, 5.0, 5.0).unwrap();
        let h10 = solve_hexagon(10.0, 10.0, 10.0).unwrap();
        assert!(h10.s[0] < h5.s[0]);
        assert!(h5.s[0] < solve_hexagon(1.0, 1.0, 1.0).unwrap().s[0]);
    }

    #[test]
    fn seam_derivative_sign() {
        // Perturbing b3 upward increases cosh(s3) = (cosh b3 + cosh b1 cosh
        // b2)/(sinh b1 sinh b2).
        let h = solve_hexagon(1.0, 1.0, 1.0).unwrap();
        let hp = solve_hexagon(1.0, 1.0, 1.0 + 1e-6).unwrap();
        let diff = hp.s[2].cosh() - h.s[2].cosh();
        let expect = 1.0f64.sinh() * 1e-6 / (1.0f64.sinh() * 1.0f64.sinh());
        assert!(diff > 0.0);
        assert!((diff - expect).abs() < 1e-9);
    }
}
