//! Lowest eigenpairs of the generalized problem `A v = lambda M v` by
//! shift-inverted block subspace iteration with Rayleigh–Ritz projection.
//!
//! `A + sigma M` is factored once (skyline Cholesky after RCM); each sweep
//! amplifies the low end of the spectrum, and a small dense generalized
//! eigenproblem recombines the block. Residuals are certified in the
//! `M^{-1}` norm. Deterministic for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::dense::{sym_generalized_eigen, DMat};
use super::operators::OperatorPair;
use super::sparse::{SkylineCholesky, SparseError};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("factorization failed: {0}")]
    Factor(#[from] SparseError),

    #[error("k = {k} too large for dimension {dim}")]
    TooManyEigenpairs { k: usize, dim: usize },

    #[error("tolerance {0} outside [1e-12, 1e-4]")]
    BadTolerance(f64),

    #[error(
        "no convergence within {iterations} sweeps (worst residual {worst:.3e}); \
         best iterate attached"
    )]
    NoConvergence {
        iterations: usize,
        worst: f64,
        partial: SpectrumSlice,
    },

    #[error("Rayleigh-Ritz projection became singular")]
    RitzSingular,
}

/// The lowest part of a discrete spectrum.
#[derive(Clone, Debug)]
pub struct SpectrumSlice {
    /// Ascending eigenvalues (clamped at 0 when within solver noise).
    pub eigenvalues: Vec<f64>,
    /// M-orthonormal eigenvectors, one inner Vec per eigenpair.
    pub eigenvectors: Vec<Vec<f64>>,
    /// Residuals `||A v - lambda M v||_{M^{-1}}`.
    pub residuals: Vec<f64>,
    /// Index partition into clusters by the default gap rule.
    pub clusters: Vec<Vec<usize>>,
    /// Mesh size the operators came from (caller-supplied context).
    pub mesh_h: f64,
    pub tol: f64,
}

#[derive(Clone, Debug)]
pub struct SolveConfig {
    pub tol: f64,
    pub seed: u64,
    pub max_sweeps: usize,
    pub shift: f64,
    /// Extra block vectors beyond k.
    pub extra: usize,
    pub mesh_h: f64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            tol: 1e-8,
            seed: 42,
            max_sweeps: 400,
            shift: 0.5,
            extra: 6,
            mesh_h: 0.0,
        }
    }
}

/// Compute the `k` lowest eigenpairs.
pub fn solve_lowest(op: &OperatorPair, k: usize, cfg: &SolveConfig) -> Result<SpectrumSlice, SolveError> {
    solve_lowest_seeded(op, k, cfg, None)
}

/// Like [`solve_lowest`], warm-started from approximate eigenvectors (for
/// example the previous refinement level's, prolonged to this mesh).
pub fn solve_lowest_seeded(
    op: &OperatorPair,
    k: usize,
    cfg: &SolveConfig,
    initial: Option<&[Vec<f64>]>,
) -> Result<SpectrumSlice, SolveError> {
    let n = op.dim;
    if k == 0 || 10 * k > n {
        return Err(SolveError::TooManyEigenpairs { k, dim: n });
    }
    if !(1e-12..=1e-4).contains(&cfg.tol) {
        return Err(SolveError::BadTolerance(cfg.tol));
    }
    let m_block = (k + cfg.extra).min(n / 4).max(k + 1);
    let t0 = std::time::Instant::now();
    let shifted = op.stiffness.add_scaled(cfg.shift, &op.mass);
    let b_fact = SkylineCholesky::factor(&shifted)?;
    let m_fact = SkylineCholesky::factor(&op.mass)?;
    if std::env::var("HYPERLAB_PROFILE").is_ok() {
        eprintln!("factor: {:?} (envelope {} + {})", t0.elapsed(), b_fact.envelope_size(), m_fact.envelope_size());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut block: Vec<Vec<f64>> = (0..m_block)
        .map(|_| (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect();
    // Constants are the exact kernel on closed surfaces; seeding them in
    // accelerates the lowest mode.
    for x in block[0].iter_mut() {
        *x = 1.0;
    }
    if let Some(init) = initial {
        for (dst, src) in block.iter_mut().zip(init.iter()) {
            if src.len() == n {
                dst.clone_from(src);
            }
        }
    }

    let mut best: Option<(f64, SpectrumSlice)> = None;
    // Pairs 0..locked have certified residuals; their columns skip the
    // inner solve (the subspace keeps improving above them).
    let mut locked = 0usize;
    for sweep in 0..cfg.max_sweeps {
        // W = (A + sigma M)^{-1} M V, except for locked columns.
        let mut w: Vec<Vec<f64>> = Vec::with_capacity(m_block);
        for (i, v) in block.iter().enumerate() {
            if i < locked {
                w.push(v.clone());
            } else {
                let mv = op.mass.matvec_alloc(v);
                w.push(b_fact.solve(&mv));
            }
        }
        // Rayleigh-Ritz on (A, M) in span(W).
        let aw: Vec<Vec<f64>> = w.iter().map(|x| op.stiffness.matvec_alloc(x)).collect();
        let mw: Vec<Vec<f64>> = w.iter().map(|x| op.mass.matvec_alloc(x)).collect();
        let mut s = DMat::zeros(m_block, m_block);
        let mut g = DMat::zeros(m_block, m_block);
        for i in 0..m_block {
            for j in 0..m_block {
                *s.at_mut(i, j) = dot(&w[i], &aw[j]);
                *g.at_mut(i, j) = dot(&w[i], &mw[j]);
            }
        }
        symmetrize(&mut s);
        symmetrize(&mut g);
        let (ritz, q) = sym_generalized_eigen(&s, &g).ok_or(SolveError::RitzSingular)?;
        // New block: V = W Q (G-orthonormal => M-orthonormal).
        let mut new_block: Vec<Vec<f64>> = Vec::with_capacity(m_block);
        for col in 0..m_block {
            let mut v = vec![0.0; n];
            for (i, wi) in w.iter().enumerate() {
                let c = q.at(i, col);
                if c != 0.0 {
                    for (dst, &src) in v.iter_mut().zip(wi.iter()) {
                        *dst += c * src;
                    }
                }
            }
            new_block.push(v);
        }
        block = new_block;
        // Residuals of the k lowest.
        let mut residuals = Vec::with_capacity(k);
        for (i, v) in block.iter().take(k).enumerate() {
            let av = op.stiffness.matvec_alloc(v);
            let mv = op.mass.matvec_alloc(v);
            let r: Vec<f64> = av
                .iter()
                .zip(&mv)
                .map(|(a, m)| a - ritz[i] * m)
                .collect();
            let minv_r = m_fact.solve(&r);
            let rn = dot(&r, &minv_r).max(0.0).sqrt();
            residuals.push(rn);
        }
        let worst = residuals.iter().cloned().fold(0.0f64, f64::max);
        let make_slice = |residuals: Vec<f64>| -> SpectrumSlice {
            let eigenvalues: Vec<f64> = ritz
                .iter()
                .take(k)
                .map(|&l| if l.abs() < 1e-11 { l.max(0.0) } else { l })
                .collect();
            let clusters = cluster_by_gap(&eigenvalues, 5.0 * (cfg.mesh_h * cfg.mesh_h).max(cfg.tol));
            SpectrumSlice {
                eigenvalues,
                eigenvectors: block.iter().take(k).cloned().collect(),
                residuals,
                clusters,
                mesh_h: cfg.mesh_h,
                tol: cfg.tol,
            }
        };
        if worst <= cfg.tol {
            return Ok(make_slice(residuals));
        }
        if best.as_ref().map_or(true, |(bw, _)| worst < *bw) {
            best = Some((worst, make_slice(residuals.clone())));
        }
        locked = residuals
            .iter()
            .take_while(|&&r| r <= 0.2 * cfg.tol)
            .count();
        if std::env::var("HYPERLAB_PROFILE").is_ok() {
            eprintln!("sweep {sweep}: worst {worst:.2e} locked {locked}");
        }
    }
    let (worst, partial) = best.expect("at least one sweep ran");
    Err(SolveError::NoConvergence {
        iterations: cfg.max_sweeps,
        worst,
        partial,
    })
}

/// Partition ascending eigenvalues into clusters: adjacent values belong
/// together when their gap is at most `width`.
pub fn cluster_by_gap(eigenvalues: &[f64], width: f64) -> Vec<Vec<usize>> {
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (i, &l) in eigenvalues.iter().enumerate() {
        let start_new = match clusters.last() {
            None => true,
            Some(c) => {
                let prev = eigenvalues[*c.last().unwrap()];
                (l - prev) > width
            }
        };
        if start_new {
            clusters.push(vec![i]);
        } else {
            clusters.last_mut().unwrap().push(i);
        }
    }
    clusters
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn symmetrize(m: &mut DMat) {
    let n = m.n;
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m.at(i, j) + m.at(j, i));
            *m.at_mut(i, j) = avg;
            *m.at_mut(j, i) = avg;
        }
    }
}

impl SpectrumSlice {
    /// Max deviation from M-orthonormality over the computed pairs, given
    /// the mass matrix.
    pub fn orthonormality_defect(&self, op: &OperatorPair) -> f64 {
        let mut worst = 0.0f64;
        for (i, vi) in self.eigenvectors.iter().enumerate() {
            let mvi = op.mass.matvec_alloc(vi);
            for (j, vj) in self.eigenvectors.iter().enumerate() {
                let d = dot(vj, &mvi) - if i == j { 1.0 } else { 0.0 };
                worst = worst.max(d.abs());
            }
        }
        worst
    }
}
