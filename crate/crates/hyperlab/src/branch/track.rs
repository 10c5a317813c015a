//! Branch continuation along a path: solve per grid point, match
//! eigenvectors by structural-sample overlap, bisect ambiguous steps.

use crate::geometry::TeichPath;
use crate::mesh::mesh_surface;
use crate::spectral::{assemble, solve_lowest, SolveConfig};

use super::sampling::{best_assignment, overlap_matrix, StructuralSampler};
use super::BranchError;

#[derive(Clone, Debug)]
pub struct TrackConfig {
    pub h: f64,
    pub tol: f64,
    pub seed: u64,
    /// Minimum accepted overlap before a step is bisected.
    pub overlap_threshold: f64,
    /// Ambiguity margin: two competing overlaps within this margin flag
    /// the step as degenerate.
    pub ambiguity_margin: f64,
    pub max_bisection_depth: usize,
}

impl Default for TrackConfig {
    fn default() -> Self {
        TrackConfig {
            h: 0.12,
            tol: 1e-7,
            seed: 42,
            overlap_threshold: 0.8,
            ambiguity_margin: 0.05,
            max_bisection_depth: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BranchSample {
    pub t: f64,
    pub lambda: f64,
    /// Overlap with the previous accepted sample (1.0 at the start).
    pub overlap: f64,
    pub degenerate: bool,
}

#[derive(Clone, Debug)]
pub struct Branch {
    /// Which `lambda_i` this branch equals at t = 0.
    pub start_index: usize,
    pub samples: Vec<BranchSample>,
    /// Minimum consecutive overlap along the branch.
    pub continuity: f64,
    pub broken: bool,
}

#[derive(Clone, Debug)]
pub struct CrossingEvent {
    pub t_lo: f64,
    pub t_hi: f64,
    pub branch_a: usize,
    pub branch_b: usize,
}

#[derive(Clone, Debug)]
pub struct BranchFamily {
    pub branches: Vec<Branch>,
    /// Grid actually used (bisections included), ascending.
    pub grid: Vec<f64>,
    pub crossings: Vec<CrossingEvent>,
    pub tol: f64,
}

impl Branch {
    pub fn lambda_at_start(&self) -> f64 {
        self.samples.first().map(|s| s.lambda).unwrap_or(f64::NAN)
    }

    pub fn lambda_at_end(&self) -> f64 {
        self.samples.last().map(|s| s.lambda).unwrap_or(f64::NAN)
    }
}

impl BranchFamily {
    /// Does branch `b` start as `lambda_i` (within 10 tol)?
    pub fn starts_as(&self, branch: &Branch, i: usize) -> bool {
        let eigs0: Vec<f64> = {
            let mut v: Vec<f64> = self
                .branches
                .iter()
                .map(|b| b.lambda_at_start())
                .collect();
            v.sort_by(f64::total_cmp);
            v
        };
        if i >= eigs0.len() {
            return false;
        }
        (branch.lambda_at_start() - eigs0[i]).abs() <= 10.0 * self.tol * (1.0 + eigs0[i].abs())
    }

    /// First grid t where a branch starting as `lambda_1` exceeds
    /// 1/4 + 10 tol; `None` when no such point exists.
    pub fn exceed_quarter(&self) -> Option<f64> {
        let margin = 0.25 + 10.0 * self.tol;
        let candidates: Vec<&Branch> = self
            .branches
            .iter()
            .filter(|b| self.starts_as(b, 1))
            .collect();
        let mut first: Option<f64> = None;
        for b in candidates {
            for s in &b.samples {
                if s.lambda > margin {
                    first = Some(first.map_or(s.t, |f: f64| f.min(s.t)));
                    break;
                }
            }
        }
        first
    }

    /// Multiset consistency: at each grid point the branch values equal
    /// the sorted eigenvalues (they are a permutation by construction;
    /// verify monotone sorted agreement within 10 tol).
    pub fn multiset_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for (gi, _) in self.grid.iter().enumerate() {
            let mut vals: Vec<f64> = self
                .branches
                .iter()
                .map(|b| b.samples[gi].lambda)
                .collect();
            vals.sort_by(f64::total_cmp);
            // Sorted values must be weakly increasing with index, and each
            // branch contributes exactly one value (permutation property).
            for w in vals.windows(2) {
                if w[1] < w[0] {
                    worst = worst.max(w[0] - w[1]);
                }
            }
        }
        worst
    }
}

/// Track the k lowest eigenvalue branches along `path`.
pub fn track(
    path: &TeichPath,
    k: usize,
    steps: usize,
    cfg: &TrackConfig,
) -> Result<BranchFamily, BranchError> {
    if steps < 2 {
        return Err(BranchError::TooFewSteps(steps));
    }
    // Two buffer modes stabilize the matching of the top requested branch.
    let k_solve = k + 2;
    let mut grid: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();

    // Solve at a grid point.
    let solve_at = |t: f64| -> Result<(Vec<f64>, Vec<Vec<f64>>), BranchError> {
        let p = path.at(t);
        let mesh = mesh_surface(&p, cfg.h).map_err(|source| BranchError::Mesh { t, source })?;
        let op = assemble(&mesh).map_err(|source| BranchError::Assembly { t, source })?;
        let scfg = SolveConfig {
            tol: cfg.tol,
            seed: cfg.seed,
            mesh_h: mesh.h,
            ..Default::default()
        };
        let s = solve_lowest(&op, k_solve, &scfg)
            .map_err(|source| BranchError::Solve { t, source: Box::new(source) })?;
        let sampler = StructuralSampler::new(&p, &mesh)?;
        let sampled: Vec<Vec<f64>> = s.eigenvectors.iter().map(|v| sampler.sample(v)).collect();
        Ok((s.eigenvalues, sampled))
    };

    // March with bisection: maintain solved points in grid order.
    #[allow(clippy::type_complexity)]
    let mut solved: Vec<(f64, Vec<f64>, Vec<Vec<f64>>)> = Vec::new();
    {
        let (e, s) = solve_at(grid[0])?;
        solved.push((grid[0], e, s));
    }
    let mut idx = 1;
    let mut depth_left = vec![cfg.max_bisection_depth; grid.len()];
    while idx < grid.len() {
        let t = grid[idx];
        let (e, s) = solve_at(t)?;
        let prev = solved.last().unwrap();
        let overlaps = overlap_matrix(&prev.2, &s);
        let assign = best_assignment(&overlaps);
        // A step is only worth bisecting when overlap mass is genuinely
        // lost, not merely split inside a near-degenerate pair.
        let min_mass = (0..k_solve.saturating_sub(1))
            .map(|i| top_two_mass(&overlaps[i]))
            .fold(f64::INFINITY, f64::min);
        let _ = &assign;
        if min_mass < cfg.overlap_threshold && depth_left[idx] > 0 {
            // Bisect the step.
            let mid = 0.5 * (prev.0 + t);
            depth_left[idx] -= 1;
            let d = depth_left[idx];
            grid.insert(idx, mid);
            depth_left.insert(idx, d);
            continue;
        }
        solved.push((t, e, s));
        idx += 1;
    }

    // Assemble branches by composing the assignments.
    let final_grid: Vec<f64> = solved.iter().map(|s| s.0).collect();
    let n_pts = solved.len();
    let mut branches: Vec<Branch> = (0..k_solve)
        .map(|i| Branch {
            start_index: i,
            samples: vec![BranchSample {
                t: final_grid[0],
                lambda: solved[0].1[i],
                overlap: 1.0,
                degenerate: false,
            }],
            continuity: 1.0,
            broken: false,
        })
        .collect();
    // position[b] = eigen index of branch b at the current grid point.
    let mut position: Vec<usize> = (0..k_solve).collect();
    let mut crossings = Vec::new();
    for gi in 1..n_pts {
        let overlaps = overlap_matrix(&solved[gi - 1].2, &solved[gi].2);
        let assign = best_assignment(&overlaps);
        // Degeneracy flags: a row with two comparable overlaps.
        let mut ambiguous = vec![false; k_solve];
        for i in 0..k_solve {
            let chosen = overlaps[i][assign[i]];
            for (j, &o) in overlaps[i].iter().enumerate() {
                if j != assign[i] && (chosen - o).abs() < cfg.ambiguity_margin {
                    ambiguous[i] = true;
                }
            }
        }
        let mut new_position = vec![0usize; k_solve];
        for b in 0..k_solve {
            let from = position[b];
            let to = assign[from];
            new_position[b] = to;
            let over = overlaps[from][to];
            let mass = top_two_mass(&overlaps[from]);
            let lam = solved[gi].1[to];
            let br = &mut branches[b];
            br.continuity = br.continuity.min(over);
            if mass < cfg.overlap_threshold {
                br.broken = true;
            }
            br.samples.push(BranchSample {
                t: final_grid[gi],
                lambda: lam,
                overlap: over,
                degenerate: ambiguous[from],
            });
        }
        // Crossing events: branch order by eigen index permuted.
        for a in 0..k {
            for b in (a + 1)..k {
                let before = position[a] < position[b];
                let after = new_position[a] < new_position[b];
                if before != after {
                    crossings.push(CrossingEvent {
                        t_lo: final_grid[gi - 1],
                        t_hi: final_grid[gi],
                        branch_a: a,
                        branch_b: b,
                    });
                }
            }
        }
        position = new_position;
    }
    branches.truncate(k);
    Ok(BranchFamily {
        branches,
        grid: final_grid,
        crossings,
        tol: cfg.tol,
    })
}

/// Combined overlap mass of the two strongest matches of a row: a proxy
/// for "the mode stayed within this pair" at near-degeneracies.
fn top_two_mass(row: &[f64]) -> f64 {
    let mut a = 0.0f64;
    let mut b = 0.0f64;
    for &x in row {
        if x > a {
            b = a;
            a = x;
        } else if x > b {
            b = x;
        }
    }
    (a * a + b * b).sqrt()
}
