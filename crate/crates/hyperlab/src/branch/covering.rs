//! Covering experiments: spectrum containment under the cyclic cover and
//! branch lifting along paths.

use serde::Serialize;

use crate::geometry::{lift_to_cover, FnPoint, TeichPath};
use crate::mesh::mesh_surface;
use crate::spectral::{assemble, solve_lowest, SolveConfig};

use super::track::{track, BranchFamily, TrackConfig};
use super::BranchError;

/// Calibration constant for the discretization part of the matching
/// tolerance `max(20 tol, C h^2)`; the refinement studies show eigenvalue
/// errors around `0.5..1.0 * h^2 * lambda` for the lambdas audited here.
pub const MATCH_C: f64 = 2.0;

#[derive(Clone, Debug, Serialize)]
pub struct EigenvalueMatch {
    pub base_index: usize,
    pub base_lambda: f64,
    pub cover_lambda: Option<f64>,
    pub difference: Option<f64>,
    pub matched: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CoveringAuditReport {
    pub genus: usize,
    pub sheet_count: usize,
    pub matches: Vec<EigenvalueMatch>,
    pub all_matched: bool,
    /// Does lambda_1 of the base equal lambda_1 of the cover within the
    /// matching tolerance?
    pub lambda1_coincides: bool,
    pub tolerance: f64,
    /// Eigenvalues of the cover below the cutoff with no base partner
    /// (new odd part of the spectrum).
    pub extra_cover_eigenvalues: Vec<f64>,
}

/// Solve base and cover, and check that every base eigenvalue below the
/// cutoff appears in the cover's spectrum.
pub fn covering_audit(
    p: &FnPoint,
    g: usize,
    k: usize,
    h: f64,
    tol: f64,
    delta: usize,
    cutoff: f64,
) -> Result<CoveringAuditReport, BranchError> {
    let (lifted, desc) = lift_to_cover(p, g, delta)?;
    let solve = |point: &FnPoint, k: usize| -> Result<Vec<f64>, BranchError> {
        let mesh = mesh_surface(point, h).map_err(|source| BranchError::Mesh { t: 0.0, source })?;
        let op = assemble(&mesh).map_err(|source| BranchError::Assembly { t: 0.0, source })?;
        let cfg = SolveConfig {
            tol,
            mesh_h: mesh.h,
            ..Default::default()
        };
        let s = solve_lowest(&op, k, &cfg)
            .map_err(|source| BranchError::Solve { t: 0.0, source: Box::new(source) })?;
        Ok(s.eigenvalues)
    };
    let base = solve(p, k)?;
    // The cover needs proportionally more eigenvalues to reach the same
    // cutoff (its spectrum roughly interleaves sheet_count copies).
    let cover_k = (k * (desc.sheet_count + 1)).min(60);
    let cover = solve(&lifted, cover_k)?;
    let tolerance = (20.0 * tol).max(MATCH_C * h * h);
    let mut used = vec![false; cover.len()];
    let mut matches = Vec::new();
    for (i, &bl) in base.iter().enumerate() {
        if bl > cutoff {
            break;
        }
        // Nearest unused cover eigenvalue.
        let mut best: Option<(f64, usize)> = None;
        for (j, &cl) in cover.iter().enumerate() {
            if used[j] {
                continue;
            }
            let d = (cl - bl).abs();
            if best.map_or(true, |(bd, _)| d < bd) {
                best = Some((d, j));
            }
        }
        match best {
            Some((d, j)) if d <= tolerance => {
                used[j] = true;
                matches.push(EigenvalueMatch {
                    base_index: i,
                    base_lambda: bl,
                    cover_lambda: Some(cover[j]),
                    difference: Some(d),
                    matched: true,
                });
            }
            Some((d, j)) => {
                matches.push(EigenvalueMatch {
                    base_index: i,
                    base_lambda: bl,
                    cover_lambda: Some(cover[j]),
                    difference: Some(d),
                    matched: false,
                });
            }
            None => {
                matches.push(EigenvalueMatch {
                    base_index: i,
                    base_lambda: bl,
                    cover_lambda: None,
                    difference: None,
                    matched: false,
                });
            }
        }
    }
    let all_matched = matches.iter().all(|m| m.matched);
    let lambda1_coincides = base.len() > 1
        && cover.len() > 1
        && (base[1] - cover[1]).abs() <= tolerance;
    let extra_cover_eigenvalues: Vec<f64> = cover
        .iter()
        .enumerate()
        .filter(|&(j, &cl)| !used[j] && cl <= cutoff && cl > 1e-8)
        .map(|(_, &cl)| cl)
        .collect();
    Ok(CoveringAuditReport {
        genus: g,
        sheet_count: desc.sheet_count,
        matches,
        all_matched,
        lambda1_coincides,
        tolerance,
        extra_cover_eigenvalues,
    })
}

/// Track branches along the lifted path `Pi(path)` and cross-check the
/// base branches embed in the lifted family's values at every grid point.
pub struct LiftedBranches {
    pub base: BranchFamily,
    pub lifted: BranchFamily,
    /// Worst distance from a base branch value (below the cutoff) to the
    /// nearest lifted value over the common grid.
    pub containment_defect: f64,
}

pub fn lifted_branch(
    path: &TeichPath,
    g: usize,
    k: usize,
    steps: usize,
    cfg: &TrackConfig,
    delta: usize,
    cutoff: f64,
) -> Result<LiftedBranches, BranchError> {
    let base = track(path, k, steps, cfg)?;
    // Lift the path knot-wise: piecewise-linear path through lifted knots
    // at the union of breakpoints and grid points.
    let mut knots = Vec::new();
    let mut ts: Vec<f64> = (0..=steps).map(|i| i as f64 / steps as f64).collect();
    for &b in path.breakpoints() {
        if !ts.iter().any(|&t| (t - b).abs() < 1e-12) {
            ts.push(b);
        }
    }
    ts.sort_by(f64::total_cmp);
    for &t in &ts {
        let (lifted_pt, _) = lift_to_cover(&path.at(t), g, delta)?;
        knots.push((t, lifted_pt));
    }
    let lifted_path = TeichPath::piecewise(knots)?;
    let lifted_k = (k * g / 2 + k).min(40);
    let lifted = track(&lifted_path, lifted_k, steps, cfg)?;
    // Containment on the shared grid points.
    let mut defect = 0.0f64;
    for (gi, &t) in base.grid.iter().enumerate() {
        let Some(li) = lifted
            .grid
            .iter()
            .position(|&lt| (lt - t).abs() < 1e-9)
        else {
            continue;
        };
        for b in &base.branches {
            let bl = b.samples[gi].lambda;
            if bl > cutoff {
                continue;
            }
            let nearest = lifted
                .branches
                .iter()
                .map(|lb| (lb.samples[li].lambda - bl).abs())
                .fold(f64::INFINITY, f64::min);
            defect = defect.max(nearest);
        }
    }
    Ok(LiftedBranches {
        base,
        lifted,
        containment_defect: defect,
    })
}
