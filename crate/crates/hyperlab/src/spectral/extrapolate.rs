//! Richardson extrapolation of eigenvalues across refinement levels,
//! assuming the model `lambda(h) = lambda* + C h^p` with `h` halving.

use serde::Serialize;

#[derive(Clone, Debug, Serialize)]
pub struct Extrapolation {
    pub lambda_star: f64,
    pub order: f64,
    pub error_bar: f64,
    pub flagged: bool,
}

/// Extrapolate from at least three levels with h halving between levels
/// (coarsest first). Non-monotone sequences are flagged and the error bar
/// is inflated tenfold.
pub fn extrapolate(lambdas: &[f64]) -> Result<Extrapolation, String> {
    if lambdas.len() < 3 {
        return Err(format!(
            "need at least 3 refinement levels, got {}",
            lambdas.len()
        ));
    }
    let n = lambdas.len();
    let (l0, l1, l2) = (lambdas[n - 3], lambdas[n - 2], lambdas[n - 1]);
    let d1 = l1 - l0;
    let d2 = l2 - l1;
    let monotone = lambdas
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-15 * w[0].abs().max(1.0))
        || lambdas
            .windows(2)
            .all(|w| w[1] >= w[0] - 1e-15 * w[0].abs().max(1.0));
    if d2.abs() < 1e-300 || d1.abs() < 1e-300 {
        // Constant tail: already converged.
        return Ok(Extrapolation {
            lambda_star: l2,
            order: f64::NAN,
            error_bar: (l2 - l1).abs(),
            flagged: !monotone,
        });
    }
    let ratio = d1 / d2;
    if ratio <= 1.0 {
        // No convergence visible; report the last value with a wide bar.
        return Ok(Extrapolation {
            lambda_star: l2,
            order: 0.0,
            error_bar: 10.0 * d2.abs(),
            flagged: true,
        });
    }
    let p = ratio.log2();
    let correction = d2 / (ratio - 1.0);
    let lambda_star = l2 + correction;
    let error_bar = correction.abs() * if monotone { 1.0 } else { 10.0 };
    Ok(Extrapolation {
        lambda_star,
        order: p,
        error_bar,
        flagged: !monotone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_quadratic_model() {
        // lambda(h) = 2 + h^2 at h = 0.2, 0.1, 0.05.
        let ls = [2.0 + 0.04, 2.0 + 0.01, 2.0 + 0.0025];
        let e = extrapolate(&ls).unwrap();
        assert!((e.lambda_star - 2.0).abs() < 1e-6, "{}", e.lambda_star);
        assert!((e.order - 2.0).abs() < 1e-9);
        assert!(!e.flagged);
    }

    #[test]
    fn constant_sequence() {
        let e = extrapolate(&[1.5, 1.5, 1.5]).unwrap();
        assert_eq!(e.lambda_star, 1.5);
        assert_eq!(e.error_bar, 0.0);
        assert!(!e.flagged);
    }

    #[test]
    fn non_monotone_is_flagged() {
        let e = extrapolate(&[2.0, 2.5, 2.2]).unwrap();
        assert!(e.flagged);
    }

    #[test]
    fn too_few_levels() {
        assert!(extrapolate(&[1.0, 2.0]).is_err());
    }
}
