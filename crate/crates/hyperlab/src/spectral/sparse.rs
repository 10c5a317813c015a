//! Sparse symmetric matrices and a skyline Cholesky factorization.
//!
//! Matrices are assembled in triplet form, compressed to CSR (full
//! pattern, both triangles), and factored after a reverse Cuthill–McKee
//! reordering keeps the envelope small. Problem sizes here are a few
//! thousand to a few tens of thousands of vertices, well within skyline
//! territory.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SparseError {
    #[error("matrix is not positive definite (pivot {pivot:.3e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("envelope too large: {0} entries")]
    Envelope(usize),
}

/// Symmetric sparse matrix in CSR form (both triangles stored).
#[derive(Clone, Debug)]
pub struct SymCsr {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl SymCsr {
    /// Build from triplets; duplicate entries are summed. Only one triangle
    /// needs to be supplied for off-diagonal entries (the mirror is added),
    /// but supplying both is tolerated when `mirrored` is false.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> SymCsr {
        let mut full: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len() * 2);
        for &(i, j, v) in triplets {
            full.push((i, j, v));
            if i != j {
                full.push((j, i, v));
            }
        }
        full.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx: Vec<usize> = Vec::with_capacity(full.len());
        let mut values: Vec<f64> = Vec::with_capacity(full.len());
        let mut last: Option<(usize, usize)> = None;
        for &(i, j, v) in &full {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(j);
                values.push(v);
                row_ptr[i + 1] = col_idx.len();
                last = Some((i, j));
            }
            row_ptr[i + 1] = col_idx.len();
        }
        for i in 1..=n {
            if row_ptr[i] < row_ptr[i - 1] {
                row_ptr[i] = row_ptr[i - 1];
            }
        }
        SymCsr {
            n,
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        debug_assert_eq!(y.len(), self.n);
        for i in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[i] = acc;
        }
    }

    pub fn matvec_alloc(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.matvec(x, &mut y);
        y
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        for k in self.row_ptr[i]..self.row_ptr[i + 1] {
            if self.col_idx[k] == j {
                return self.values[k];
            }
        }
        0.0
    }

    /// Max relative asymmetry |a_ij - a_ji| / max|a|.
    pub fn asymmetry(&self) -> f64 {
        let scale = self
            .values
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(1e-300);
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                if j > i {
                    worst = worst.max((self.values[k] - self.get(j, i)).abs());
                }
            }
        }
        worst / scale
    }

    /// `a + scale * b` on the union pattern.
    pub fn add_scaled(&self, scale: f64, b: &SymCsr) -> SymCsr {
        assert_eq!(self.n, b.n);
        let mut trips = Vec::new();
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                if j >= i {
                    trips.push((i, j, self.values[k]));
                }
            }
            for k in b.row_ptr[i]..b.row_ptr[i + 1] {
                let j = b.col_idx[k];
                if j >= i {
                    trips.push((i, j, scale * b.values[k]));
                }
            }
        }
        SymCsr::from_triplets(self.n, &trips)
    }
}

/// Reverse Cuthill–McKee ordering: returns `perm` with `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &SymCsr) -> Vec<usize> {
    let n = a.n;
    let degree = |v: usize| a.row_ptr[v + 1] - a.row_ptr[v];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    loop {
        // Lowest-degree unvisited vertex starts the next component.
        let mut start = None;
        let mut best = usize::MAX;
        for v in 0..n {
            if !visited[v] && degree(v) < best {
                best = degree(v);
                start = Some(v);
            }
        }
        let Some(start) = start else { break };
        let mut queue = std::collections::VecDeque::from([start]);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let mut nbrs: Vec<usize> = (a.row_ptr[v]..a.row_ptr[v + 1])
                .map(|k| a.col_idx[k])
                .filter(|&w| !visited[w])
                .collect();
            nbrs.sort_by_key(|&w| (degree(w), w));
            nbrs.dedup();
            for w in nbrs {
                if !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order.reverse();
    order
}

/// Apply a permutation (`perm[new] = old`) to a symmetric matrix.
pub fn permute(a: &SymCsr, perm: &[usize]) -> SymCsr {
    let n = a.n;
    let mut inv = vec![0usize; n];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    let mut trips = Vec::with_capacity(a.values.len());
    for i in 0..n {
        for k in a.row_ptr[i]..a.row_ptr[i + 1] {
            let j = a.col_idx[k];
            if j >= i {
                let (ni, nj) = (inv[i], inv[j]);
                let (ni, nj) = if ni <= nj { (ni, nj) } else { (nj, ni) };
                trips.push((ni, nj, a.values[k]));
            }
        }
    }
    SymCsr::from_triplets(n, &trips)
}

/// Skyline (envelope) Cholesky factorization `A = L L^T` of a permuted
/// SPD matrix, with forward/backward solves.
pub struct SkylineCholesky {
    n: usize,
    /// First non-zero column of each row in the factor.
    first: Vec<usize>,
    /// Row storage offsets into `data`: row i occupies
    /// `data[offset[i] .. offset[i] + (i - first[i] + 1)]`, columns
    /// `first[i] ..= i`.
    offset: Vec<usize>,
    data: Vec<f64>,
    /// Permutation used (`perm[new] = old`), applied internally.
    perm: Vec<usize>,
}

pub const MAX_ENVELOPE: usize = 400_000_000;

impl SkylineCholesky {
    /// Factor `a` (symmetric positive definite). The matrix is reordered
    /// internally with RCM.
    pub fn factor(a: &SymCsr) -> Result<SkylineCholesky, SparseError> {
        let perm = reverse_cuthill_mckee(a);
        let p = permute(a, &perm);
        let n = p.n;
        let mut first = vec![0usize; n];
        for i in 0..n {
            let mut lo = i;
            for k in p.row_ptr[i]..p.row_ptr[i + 1] {
                lo = lo.min(p.col_idx[k]);
            }
            first[i] = lo;
        }
        // The factor's envelope is the union of row envelopes.
        let mut offset = vec![0usize; n + 1];
        for i in 0..n {
            offset[i + 1] = offset[i] + (i - first[i] + 1);
        }
        let total = offset[n];
        if total > MAX_ENVELOPE {
            return Err(SparseError::Envelope(total));
        }
        let mut data = vec![0.0f64; total];
        // Scatter the matrix into the envelope.
        for i in 0..n {
            for k in p.row_ptr[i]..p.row_ptr[i + 1] {
                let j = p.col_idx[k];
                if j <= i {
                    data[offset[i] + (j - first[i])] = p.values[k];
                }
            }
        }
        // Row-oriented envelope Cholesky.
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut acc = data[offset[i] + (j - fi)];
                // sum_{k < j} L[i][k] L[j][k]
                let mut ik = offset[i] + (lo - fi);
                let mut jk = offset[j] + (lo - fj);
                for _ in lo..j {
                    acc -= data[ik] * data[jk];
                    ik += 1;
                    jk += 1;
                }
                let djj = data[offset[j] + (j - fj)];
                data[offset[i] + (j - fi)] = acc / djj;
            }
            let mut acc = data[offset[i] + (i - fi)];
            for k in fi..i {
                let v = data[offset[i] + (k - fi)];
                acc -= v * v;
            }
            if acc <= 0.0 || !acc.is_finite() {
                return Err(SparseError::NotPositiveDefinite { row: i, pivot: acc });
            }
            data[offset[i] + (i - fi)] = acc.sqrt();
        }
        Ok(SkylineCholesky {
            n,
            first,
            offset,
            data,
            perm,
        })
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        debug_assert_eq!(b.len(), self.n);
        let n = self.n;
        // Permute b into factor ordering.
        let mut y = vec![0.0; n];
        for new in 0..n {
            y[new] = b[self.perm[new]];
        }
        // Forward solve L z = Pb.
        for i in 0..n {
            let fi = self.first[i];
            let mut acc = y[i];
            let base = self.offset[i];
            for k in fi..i {
                acc -= self.data[base + (k - fi)] * y[k];
            }
            y[i] = acc / self.data[base + (i - fi)];
        }
        // Backward solve L^T x = z.
        for i in (0..n).rev() {
            let fi = self.first[i];
            let base = self.offset[i];
            y[i] /= self.data[base + (i - fi)];
            let yi = y[i];
            for k in fi..i {
                y[k] -= self.data[base + (k - fi)] * yi;
            }
        }
        // Un-permute.
        let mut x = vec![0.0; n];
        for new in 0..n {
            x[self.perm[new]] = y[new];
        }
        x
    }

    pub fn envelope_size(&self) -> usize {
        self.data.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian_path(n: usize) -> SymCsr {
        // 1D path graph Laplacian + I (SPD).
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 3.0));
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        SymCsr::from_triplets(n, &t)
    }

    #[test]
    fn csr_assembly_sums_duplicates() {
        let a = SymCsr::from_triplets(3, &[(0, 1, 1.0), (0, 1, 2.0), (2, 2, 5.0)]);
        assert_eq!(a.get(0, 1), 3.0);
        assert_eq!(a.get(1, 0), 3.0);
        assert_eq!(a.get(2, 2), 5.0);
        assert_eq!(a.get(0, 2), 0.0);
        assert!(a.asymmetry() < 1e-15);
    }

    #[test]
    fn cholesky_solves() {
        let a = laplacian_path(50);
        let chol = SkylineCholesky::factor(&a).unwrap();
        let x_true: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = a.matvec_alloc(&x_true);
        let x = chol.solve(&b);
        for (u, v) in x.iter().zip(&x_true) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let a = SymCsr::from_triplets(2, &[(0, 0, 1.0), (1, 1, -1.0)]);
        assert!(matches!(
            SkylineCholesky::factor(&a),
            Err(SparseError::NotPositiveDefinite { .. })
        ));
    }

    #[test]
    fn rcm_is_a_permutation() {
        let a = laplacian_path(20);
        let mut p = reverse_cuthill_mckee(&a);
        p.sort_unstable();
        assert_eq!(p, (0..20).collect::<Vec<_>>());
    }
}
