//! Fourier–Bessel coefficient extraction in truncated cusps.
//!
//! Eigenfunctions with `lambda = s(1-s) < 1/4` have, in each cusp
//! cylinder, the development `f0(y) + sum_j sqrt(2jy/pi) K_{s-1/2}(jy)
//! (fe_j cos jx + fo_j sin jx)` with `f0 = f01 y^s + f02 y^{1-s}` (log
//! form at s = 1/2). Coefficients are fitted by horocycle sampling plus
//! least squares across levels.

use thiserror::Error;

use crate::mesh::SurfaceMesh;

use super::bessel::{bessel_k, BesselError};

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("y levels must span a ratio of at least 2 (got {0:.3})")]
    NarrowRange(f64),

    #[error("need at least 4 y levels, got {0}")]
    FewLevels(usize),

    #[error("mode cutoff {j} too large for {nodes} nodes on the lowest horocycle")]
    TooManyModes { j: usize, nodes: usize },

    #[error("cusp {0} has no mesh chart data")]
    NoChart(usize),

    #[error("sample point ({0:.3}, {1:.3}) not inside any cusp triangle")]
    Location(f64, f64),

    #[error(transparent)]
    Bessel(#[from] BesselError),

    #[error("s = {0} outside (1/2, 1]")]
    BadS(f64),
}

/// Fitted cusp coefficients of one eigenfunction at one cusp.
#[derive(Clone, Debug)]
pub struct FourierBesselCoeffs {
    pub s: f64,
    /// Coefficient of `y^s` (should vanish for genuine eigenfunctions).
    pub f01: f64,
    /// Coefficient of `y^{1-s}`.
    pub f02: f64,
    /// (even, odd) coefficient pairs for j = 1..=J.
    pub modes: Vec<(f64, f64)>,
    pub j_max: usize,
    /// Relative L2 misfit over the sampled horocycles.
    pub fit_residual: f64,
}

/// Spectral parameter `s in (1/2, 1]` with `lambda = s(1-s)`.
pub fn s_from_lambda(lambda: f64) -> Option<f64> {
    if !(0.0..0.25).contains(&lambda) {
        if (lambda - 0.25).abs() < 1e-12 {
            return Some(0.5);
        }
        return None;
    }
    Some(0.5 + (0.25 - lambda).sqrt())
}

/// Fit the Fourier–Bessel development of `v` in cusp `cusp_idx`.
pub fn fit_cusp_coeffs(
    mesh: &SurfaceMesh,
    v: &[f64],
    cusp_idx: usize,
    s: f64,
    j_max: usize,
    y_levels: &[f64],
) -> Result<FourierBesselCoeffs, FitError> {
    // Nodes per lowest horocycle bound the resolvable mode count.
    let y_min = y_levels.iter().cloned().fold(f64::INFINITY, f64::min);
    let lowest_nodes = (TWO_PI / y_min / mesh.h).ceil() as usize;
    if 4 * j_max > lowest_nodes.max(16) {
        return Err(FitError::TooManyModes {
            j: j_max,
            nodes: lowest_nodes,
        });
    }
    let sampler = CuspSampler::new(mesh, cusp_idx)?;
    fit_from_samples(|x, y| sampler.eval(v, x, y), s, j_max, y_levels)
}

/// Core fitting pipeline over an arbitrary sampling closure.
pub fn fit_from_samples(
    mut sample: impl FnMut(f64, f64) -> Result<f64, FitError>,
    s: f64,
    j_max: usize,
    y_levels: &[f64],
) -> Result<FourierBesselCoeffs, FitError> {
    if y_levels.len() < 4 {
        return Err(FitError::FewLevels(y_levels.len()));
    }
    let y_min = y_levels.iter().cloned().fold(f64::INFINITY, f64::min);
    let y_max = y_levels.iter().cloned().fold(0.0f64, f64::max);
    if y_max / y_min < 2.0 {
        return Err(FitError::NarrowRange(y_max / y_min));
    }
    if !(0.5..=1.0 + 1e-9).contains(&s) {
        return Err(FitError::BadS(s));
    }
    let m_samples = (4 * j_max + 8).max(16);

    // Horocycle DFT per level.
    let mut c0 = Vec::with_capacity(y_levels.len());
    let mut ce = vec![vec![0.0; y_levels.len()]; j_max];
    let mut co = vec![vec![0.0; y_levels.len()]; j_max];
    let mut samples = vec![vec![0.0; m_samples]; y_levels.len()];
    for (li, &y) in y_levels.iter().enumerate() {
        for mi in 0..m_samples {
            let x = TWO_PI * mi as f64 / m_samples as f64;
            samples[li][mi] = sample(x, y)?;
        }
        let row = &samples[li];
        c0.push(row.iter().sum::<f64>() / m_samples as f64);
        for j in 1..=j_max {
            let mut a = 0.0;
            let mut b = 0.0;
            for (mi, &val) in row.iter().enumerate() {
                let x = TWO_PI * mi as f64 / m_samples as f64;
                a += val * (j as f64 * x).cos();
                b += val * (j as f64 * x).sin();
            }
            ce[j - 1][li] = 2.0 * a / m_samples as f64;
            co[j - 1][li] = 2.0 * b / m_samples as f64;
        }
    }

    // Mode zero: 2-parameter least squares on (y^s, y^{1-s}) or the log
    // form at s = 1/2.
    let basis: Vec<(f64, f64)> = y_levels
        .iter()
        .map(|&y| {
            if (s - 0.5).abs() < 1e-9 {
                (y.sqrt(), y.sqrt() * y.ln())
            } else {
                (y.powf(s), y.powf(1.0 - s))
            }
        })
        .collect();
    let (mut g11, mut g12, mut g22, mut r1, mut r2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (li, &(b1, b2)) in basis.iter().enumerate() {
        g11 += b1 * b1;
        g12 += b1 * b2;
        g22 += b2 * b2;
        r1 += b1 * c0[li];
        r2 += b2 * c0[li];
    }
    let det = g11 * g22 - g12 * g12;
    let (f01, f02) = if det.abs() > 1e-14 * (g11 * g22).max(1e-300) {
        ((g22 * r1 - g12 * r2) / det, (g11 * r2 - g12 * r1) / det)
    } else {
        (0.0, r2 / g22.max(1e-300))
    };

    // Modes j >= 1: one-parameter fits against the Bessel profile.
    let nu = s - 0.5;
    let mut modes = Vec::with_capacity(j_max);
    for j in 1..=j_max {
        let mut profile = Vec::with_capacity(y_levels.len());
        for &y in y_levels {
            let arg = j as f64 * y;
            let k = if arg <= 60.0 {
                bessel_k(nu, arg.max(0.02))?
            } else {
                0.0
            };
            profile.push((2.0 * j as f64 * y / std::f64::consts::PI).sqrt() * k);
        }
        let gg: f64 = profile.iter().map(|g| g * g).sum();
        let fit1 = |data: &[f64]| -> f64 {
            if gg < 1e-300 {
                return 0.0;
            }
            data.iter().zip(&profile).map(|(d, g)| d * g).sum::<f64>() / gg
        };
        modes.push((fit1(&ce[j - 1]), fit1(&co[j - 1])));
    }

    // Residual: reconstruct and compare.
    let mut num = 0.0;
    let mut den = 0.0;
    for (li, &y) in y_levels.iter().enumerate() {
        let f0 = if (s - 0.5).abs() < 1e-9 {
            f01 * y.sqrt() + f02 * y.sqrt() * y.ln()
        } else {
            f01 * y.powf(s) + f02 * y.powf(1.0 - s)
        };
        for mi in 0..m_samples {
            let x = TWO_PI * mi as f64 / m_samples as f64;
            let mut model = f0;
            for (j, &(fe, fo)) in modes.iter().enumerate() {
                let jj = (j + 1) as f64;
                let arg = jj * y;
                let k = if arg <= 60.0 {
                    bessel_k(nu, arg.max(0.02))?
                } else {
                    0.0
                };
                let prof = (2.0 * jj * y / std::f64::consts::PI).sqrt() * k;
                model += prof * (fe * (jj * x).cos() + fo * (jj * x).sin());
            }
            num += (samples[li][mi] - model).powi(2);
            den += samples[li][mi].powi(2);
        }
    }
    let fit_residual = (num / den.max(1e-300)).sqrt();

    Ok(FourierBesselCoeffs {
        s,
        f01,
        f02,
        modes,
        j_max,
        fit_residual,
    })
}

/// Synthesize vertex values from prescribed cusp coefficients (for
/// round-trip tests and the multiplicity contradiction audit).
pub fn synthesize_from_coeffs(
    mesh: &SurfaceMesh,
    cusp_idx: usize,
    coeffs: &FourierBesselCoeffs,
) -> Result<Vec<f64>, FitError> {
    let nu = coeffs.s - 0.5;
    let s = coeffs.s;
    let mut out = vec![0.0; mesh.vertex_count];
    for (vi, charts) in mesh.charts.iter().enumerate() {
        let Some((c, x, y)) = charts.cusp else {
            continue;
        };
        if c != cusp_idx {
            continue;
        }
        let mut val = if (s - 0.5).abs() < 1e-9 {
            coeffs.f01 * y.sqrt() + coeffs.f02 * y.sqrt() * y.ln()
        } else {
            coeffs.f01 * y.powf(s) + coeffs.f02 * y.powf(1.0 - s)
        };
        for (j, &(fe, fo)) in coeffs.modes.iter().enumerate() {
            let jj = (j + 1) as f64;
            let arg = jj * y;
            let k = if arg <= 60.0 {
                bessel_k(nu, arg.max(0.02))?
            } else {
                0.0
            };
            let prof = (2.0 * jj * y / std::f64::consts::PI).sqrt() * k;
            val += prof * (fe * (jj * x).cos() + fo * (jj * x).sin());
        }
        out[vi] = val;
    }
    Ok(out)
}

/// Barycentric interpolation of vertex functions inside one cusp chart.
pub struct CuspSampler {
    /// (triangle vertex ids, chart coordinates).
    tris: Vec<([usize; 3], [(f64, f64); 3])>,
}

impl CuspSampler {
    pub fn new(mesh: &SurfaceMesh, cusp_idx: usize) -> Result<CuspSampler, FitError> {
        let mut tris = Vec::new();
        for t in &mesh.triangles {
            let coords: Vec<Option<(f64, f64)>> = t
                .v
                .iter()
                .map(|&v| match mesh.charts[v].cusp {
                    Some((c, x, y)) if c == cusp_idx => Some((x, y)),
                    _ => None,
                })
                .collect();
            if coords.iter().all(|c| c.is_some()) {
                let mut pts = [(0.0, 0.0); 3];
                for (i, c) in coords.iter().enumerate() {
                    pts[i] = c.unwrap();
                }
                // Unwrap x around the first vertex.
                for i in 1..3 {
                    while pts[i].0 - pts[0].0 > std::f64::consts::PI {
                        pts[i].0 -= TWO_PI;
                    }
                    while pts[0].0 - pts[i].0 > std::f64::consts::PI {
                        pts[i].0 += TWO_PI;
                    }
                }
                tris.push((t.v, pts));
            }
        }
        if tris.is_empty() {
            return Err(FitError::NoChart(cusp_idx));
        }
        Ok(CuspSampler { tris })
    }

    /// Horocycle levels guaranteed to be sampleable: `n` levels spread
    /// geometrically between just above the spine region and just below
    /// the truncation.
    pub fn suggest_levels(&self, n: usize) -> Vec<f64> {
        let y_max = self
            .tris
            .iter()
            .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
            .fold(0.0f64, f64::max);
        let y_abs_min = self
            .tris
            .iter()
            .flat_map(|(_, pts)| pts.iter().map(|p| p.1))
            .fold(f64::INFINITY, f64::min);
        // Lowest level with full angular coverage, by probing.
        let probe = |y: f64| -> bool {
            let dummy = vec![0.0; 0];
            let _ = &dummy;
            (0..12).all(|i| {
                let x = 2.0 * std::f64::consts::PI * i as f64 / 12.0;
                self.locate_ok(x, y)
            })
        };
        let mut y_lo = y_abs_min.max(0.05);
        while y_lo < y_max && !probe(y_lo * 1.02) {
            y_lo *= 1.15;
        }
        let lo = (y_lo * 1.1).min(0.8 * y_max);
        let hi = 0.93 * y_max;
        (0..n)
            .map(|i| lo * (hi / lo).powf(i as f64 / (n.max(2) - 1) as f64))
            .collect()
    }

    fn locate_ok(&self, x: f64, y: f64) -> bool {
        let zeros = vec![0.0; self.max_id() + 1];
        self.eval(&zeros, x, y).is_ok()
    }

    fn max_id(&self) -> usize {
        self.tris
            .iter()
            .flat_map(|(ids, _)| ids.iter().cloned())
            .max()
            .unwrap_or(0)
    }

    /// Evaluate `v` at chart position (x, y) by linear interpolation.
    pub fn eval(&self, v: &[f64], x: f64, y: f64) -> Result<f64, FitError> {
        let mut best: Option<(f64, f64)> = None; // (violation, value)
        for (ids, pts) in &self.tris {
            // Try x shifted by periods to match the triangle's frame.
            for shift in [-TWO_PI, 0.0, TWO_PI] {
                let px = x + shift;
                if (px - pts[0].0).abs() > 1.5 * std::f64::consts::PI {
                    continue;
                }
                let (x0, y0) = pts[0];
                let (x1, y1) = pts[1];
                let (x2, y2) = pts[2];
                let det = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0);
                if det.abs() < 1e-300 {
                    continue;
                }
                let l1 = ((px - x0) * (y2 - y0) - (x2 - x0) * (y - y0)) / det;
                let l2 = ((x1 - x0) * (y - y0) - (px - x0) * (y1 - y0)) / det;
                let l0 = 1.0 - l1 - l2;
                let viol = (-l0).max(0.0) + (-l1).max(0.0) + (-l2).max(0.0);
                let val = l0 * v[ids[0]] + l1 * v[ids[1]] + l2 * v[ids[2]];
                if viol == 0.0 {
                    return Ok(val);
                }
                if best.map_or(true, |(bv, _)| viol < bv) {
                    best = Some((viol, val));
                }
            }
        }
        match best {
            // Tolerate small excursions outside the triangulated strip
            // (chart boundary effects).
            Some((viol, val)) if viol < 0.35 => Ok(val),
            _ => Err(FitError::Location(x, y)),
        }
    }
}
