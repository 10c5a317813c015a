//! Refinement studies: solve on a mesh hierarchy with warm-started
//! eigenvectors and extrapolate each eigenvalue across levels.

use crate::mesh::{refine_with_map, MeshError, SurfaceMesh};

use super::eigen::{solve_lowest_seeded, SolveConfig, SolveError, SpectrumSlice};
use super::extrapolate::{extrapolate, Extrapolation};
use super::operators::{assemble, AssemblyError};

#[derive(Debug, thiserror::Error)]
pub enum StudyError {
    #[error(transparent)]
    Mesh(#[from] MeshError),
    #[error(transparent)]
    Assembly(#[from] AssemblyError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error("{0}")]
    Extrapolate(String),
}

#[derive(Clone, Debug)]
pub struct RefinementStudy {
    /// (h, spectrum) per level, coarsest first.
    pub levels: Vec<(f64, SpectrumSlice)>,
    /// Extrapolation per eigenvalue index (when 3+ levels are available).
    pub extrapolations: Vec<Extrapolation>,
}

/// Solve the lowest `k` eigenpairs on `levels` refinements of `mesh`
/// (including the base level), warm-starting each level from the previous
/// one.
pub fn refinement_study(
    mesh: &SurfaceMesh,
    k: usize,
    levels: usize,
    cfg: &SolveConfig,
) -> Result<RefinementStudy, StudyError> {
    assert!(levels >= 1);
    let mut out: Vec<(f64, SpectrumSlice)> = Vec::with_capacity(levels);
    let mut current = mesh.clone();
    let mut guess: Option<Vec<Vec<f64>>> = None;
    for level in 0..levels {
        let op = assemble(&current)?;
        let level_cfg = SolveConfig {
            mesh_h: current.h,
            ..cfg.clone()
        };
        let s = solve_lowest_seeded(&op, k, &level_cfg, guess.as_deref())?;
        out.push((current.h, s));
        if level + 1 < levels {
            let (refined, midpoints) = refine_with_map(&current)?;
            // Prolong eigenvectors: parents keep ids, midpoints average.
            let old_n = current.vertex_count;
            guess = Some(
                out.last()
                    .unwrap()
                    .1
                    .eigenvectors
                    .iter()
                    .map(|v| {
                        let mut w = Vec::with_capacity(refined.vertex_count);
                        w.extend_from_slice(v);
                        w.resize(refined.vertex_count, 0.0);
                        for (i, &(a, b)) in midpoints.iter().enumerate() {
                            w[old_n + i] = 0.5 * (v[a] + v[b]);
                        }
                        w
                    })
                    .collect(),
            );
            current = refined;
        }
    }
    let extrapolations = if out.len() >= 3 {
        (0..k)
            .map(|i| {
                let seq: Vec<f64> = out.iter().map(|(_, s)| s.eigenvalues[i]).collect();
                extrapolate(&seq).map_err(StudyError::Extrapolate)
            })
            .collect::<Result<_, _>>()?
    } else {
        Vec::new()
    };
    Ok(RefinementStudy {
        levels: out,
        extrapolations,
    })
}
