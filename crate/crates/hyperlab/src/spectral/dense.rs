//! Small dense symmetric kernels for the Rayleigh–Ritz projections and
//! quadrature-node computations: cyclic Jacobi eigendecomposition and an
//! unblocked Cholesky. Sizes here are tens, not thousands.

/// Column-major dense symmetric storage helpers.
#[derive(Clone, Debug)]
pub struct DMat {
    pub n: usize,
    pub m: usize,
    /// column-major: entry (i, j) at `data[j * n + i]`.
    pub data: Vec<f64>,
}

impl DMat {
    pub fn zeros(n: usize, m: usize) -> DMat {
        DMat {
            n,
            m,
            data: vec![0.0; n * m],
        }
    }

    pub fn identity(n: usize) -> DMat {
        let mut a = DMat::zeros(n, n);
        for i in 0..n {
            *a.at_mut(i, i) = 1.0;
        }
        a
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.n + i]
    }

    #[inline]
    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[j * self.n + i]
    }

    pub fn col(&self, j: usize) -> &[f64] {
        &self.data[j * self.n..(j + 1) * self.n]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [f64] {
        &mut self.data[j * self.n..(j + 1) * self.n]
    }
}

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues (ascending) and the orthonormal eigenvector matrix
/// (columns). Deterministic.
pub fn sym_eigen(a: &DMat) -> (Vec<f64>, DMat) {
    assert_eq!(a.n, a.m);
    let n = a.n;
    let mut w = a.clone();
    let mut v = DMat::identity(n);
    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for j in 0..n {
            for i in 0..j {
                off += w.at(i, j).powi(2);
            }
        }
        let scale: f64 = (0..n).map(|i| w.at(i, i).powi(2)).sum::<f64>().max(1e-300);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = w.at(p, q);
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = w.at(p, p);
                let aqq = w.at(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                // Rotate rows/cols p, q of w.
                for k in 0..n {
                    let wkp = w.at(k, p);
                    let wkq = w.at(k, q);
                    *w.at_mut(k, p) = c * wkp - s * wkq;
                    *w.at_mut(k, q) = s * wkp + c * wkq;
                }
                for k in 0..n {
                    let wpk = w.at(p, k);
                    let wqk = w.at(q, k);
                    *w.at_mut(p, k) = c * wpk - s * wqk;
                    *w.at_mut(q, k) = s * wpk + c * wqk;
                }
                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    *v.at_mut(k, p) = c * vkp - s * vkq;
                    *v.at_mut(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&i, &j| w.at(i, i).total_cmp(&w.at(j, j)));
    let vals: Vec<f64> = idx.iter().map(|&i| w.at(i, i)).collect();
    let mut vecs = DMat::zeros(n, n);
    for (new, &old) in idx.iter().enumerate() {
        for i in 0..n {
            *vecs.at_mut(i, new) = v.at(i, old);
        }
    }
    (vals, vecs)
}

/// Dense Cholesky `A = L L^T` (lower); returns None when not SPD.
pub fn cholesky(a: &DMat) -> Option<DMat> {
    assert_eq!(a.n, a.m);
    let n = a.n;
    let mut l = DMat::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut acc = a.at(i, j);
            for k in 0..j {
                acc -= l.at(i, k) * l.at(j, k);
            }
            if i == j {
                if acc <= 0.0 || !acc.is_finite() {
                    return None;
                }
                *l.at_mut(i, i) = acc.sqrt();
            } else {
                *l.at_mut(i, j) = acc / l.at(j, j);
            }
        }
    }
    Some(l)
}

/// Solve `L x = b` (lower triangular).
pub fn forward_solve(l: &DMat, b: &[f64]) -> Vec<f64> {
    let n = l.n;
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            let v = x[k];
            x[i] -= l.at(i, k) * v;
        }
        x[i] /= l.at(i, i);
    }
    x
}

/// Solve `L^T x = b`.
pub fn backward_solve_t(l: &DMat, b: &[f64]) -> Vec<f64> {
    let n = l.n;
    let mut x = b.to_vec();
    for i in (0..n).rev() {
        for k in (i + 1)..n {
            let v = x[k];
            x[i] -= l.at(k, i) * v;
        }
        x[i] /= l.at(i, i);
    }
    x
}

/// Eigenvalues and eigenvectors of the symmetric generalized problem
/// `S y = lambda G y` with `G` SPD, via `G = L L^T` and a standard Jacobi
/// solve on `L^{-1} S L^{-T}`. Returns ascending eigenvalues and the
/// G-orthonormal eigenvector matrix.
pub fn sym_generalized_eigen(s: &DMat, g: &DMat) -> Option<(Vec<f64>, DMat)> {
    let n = s.n;
    let l = cholesky(g)?;
    // C = L^{-1} S L^{-T}
    let mut c = DMat::zeros(n, n);
    for j in 0..n {
        // column j of S
        let col: Vec<f64> = (0..n).map(|i| s.at(i, j)).collect();
        let y = forward_solve(&l, &col);
        for i in 0..n {
            *c.at_mut(i, j) = y[i];
        }
    }
    // Now apply L^{-1} from the right: C := C L^{-T}  <=> rows solved.
    for i in 0..n {
        let row: Vec<f64> = (0..n).map(|j| c.at(i, j)).collect();
        let y = forward_solve(&l, &row);
        for j in 0..n {
            *c.at_mut(i, j) = y[j];
        }
    }
    // Symmetrize against rounding.
    for j in 0..n {
        for i in 0..j {
            let m = 0.5 * (c.at(i, j) + c.at(j, i));
            *c.at_mut(i, j) = m;
            *c.at_mut(j, i) = m;
        }
    }
    let (vals, z) = sym_eigen(&c);
    // y = L^{-T} z
    let mut vecs = DMat::zeros(n, n);
    for j in 0..n {
        let y = backward_solve_t(&l, z.col(j));
        for i in 0..n {
            *vecs.at_mut(i, j) = y[i];
        }
    }
    Some((vals, vecs))
}

/// Eigen-decomposition of a symmetric tridiagonal matrix given by its
/// diagonal and off-diagonal, used for Golub–Welsch quadrature nodes.
pub fn tridiag_eigen(diag: &[f64], off: &[f64]) -> (Vec<f64>, DMat) {
    let n = diag.len();
    let mut a = DMat::zeros(n, n);
    for i in 0..n {
        *a.at_mut(i, i) = diag[i];
        if i + 1 < n {
            *a.at_mut(i, i + 1) = off[i];
            *a.at_mut(i + 1, i) = off[i];
        }
    }
    sym_eigen(&a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_diagonalizes() {
        let mut a = DMat::zeros(4, 4);
        let entries = [
            [4.0, 1.0, 0.5, 0.0],
            [1.0, 3.0, 0.2, 0.1],
            [0.5, 0.2, 2.0, 0.3],
            [0.0, 0.1, 0.3, 1.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                *a.at_mut(i, j) = entries[i][j];
            }
        }
        let (vals, vecs) = sym_eigen(&a);
        // residual ||A v - lambda v||
        for j in 0..4 {
            for i in 0..4 {
                let mut av = 0.0;
                for k in 0..4 {
                    av += a.at(i, k) * vecs.at(k, j);
                }
                assert!((av - vals[j] * vecs.at(i, j)).abs() < 1e-12);
            }
        }
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn generalized_eigen_orthonormal_in_g() {
        let mut s = DMat::zeros(3, 3);
        let mut g = DMat::zeros(3, 3);
        let sv = [[2.0, 0.3, 0.1], [0.3, 1.0, 0.0], [0.1, 0.0, 0.5]];
        let gv = [[1.0, 0.2, 0.0], [0.2, 2.0, 0.1], [0.0, 0.1, 1.5]];
        for i in 0..3 {
            for j in 0..3 {
                *s.at_mut(i, j) = sv[i][j];
                *g.at_mut(i, j) = gv[i][j];
            }
        }
        let (vals, vecs) = sym_generalized_eigen(&s, &g).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let mut acc = 0.0;
                for i in 0..3 {
                    for j in 0..3 {
                        acc += vecs.at(i, a) * gv[i][j] * vecs.at(j, b);
                    }
                }
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((acc - want).abs() < 1e-10, "G-orthonormality {a},{b}");
            }
        }
        // S v = lambda G v
        for a in 0..3 {
            for i in 0..3 {
                let mut sv_i = 0.0;
                let mut gv_i = 0.0;
                for j in 0..3 {
                    sv_i += sv[i][j] * vecs.at(j, a);
                    gv_i += gv[i][j] * vecs.at(j, a);
                }
                assert!((sv_i - vals[a] * gv_i).abs() < 1e-10);
            }
        }
    }
}
