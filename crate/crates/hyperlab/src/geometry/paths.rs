//! Parametrized paths in Teichmüller space over a fixed decomposition.

use std::sync::Arc;

use super::{CurveId, FnPoint, GeometryError, PantsDecomposition};

#[derive(Clone, Debug, PartialEq)]
pub enum PathKind {
    Linear,
    Pinch { curves: Vec<CurveId>, end_length: f64 },
    AppendixBeta { c1: CurveId, c2: CurveId, eps: f64 },
    Piecewise,
}

/// How one coordinate interpolates between breakpoint values.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Interp {
    Linear,
    LogLinear,
}

/// A path `t in [0,1] -> FnPoint` on a fixed decomposition, piecewise
/// linear (or log-linear, for pinched lengths) between breakpoints.
#[derive(Clone, Debug)]
pub struct TeichPath {
    pub kind: PathKind,
    decomposition: Arc<PantsDecomposition>,
    /// Strictly increasing, starting at 0.0 and ending at 1.0.
    breakpoints: Vec<f64>,
    /// lengths[i] then twists[i] at each breakpoint.
    knot_lengths: Vec<Vec<f64>>,
    knot_twists: Vec<Vec<f64>>,
    length_interp: Vec<Interp>,
}

impl TeichPath {
    pub fn decomposition(&self) -> &Arc<PantsDecomposition> {
        &self.decomposition
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Evaluate the path; `t` is clamped to [0, 1].
    pub fn at(&self, t: f64) -> FnPoint {
        let t = t.clamp(0.0, 1.0);
        let seg = match self
            .breakpoints
            .iter()
            .position(|&b| t <= b + 1e-15)
        {
            Some(0) => 0,
            Some(i) => i - 1,
            None => self.breakpoints.len() - 2,
        };
        let (t0, t1) = (self.breakpoints[seg], self.breakpoints[seg + 1]);
        let s = if t1 > t0 { (t - t0) / (t1 - t0) } else { 0.0 };
        let k = self.decomposition.curve_count();
        let mut lengths = Vec::with_capacity(k);
        let mut twists = Vec::with_capacity(k);
        for c in 0..k {
            let (l0, l1) = (self.knot_lengths[seg][c], self.knot_lengths[seg + 1][c]);
            let l = match self.length_interp[c] {
                Interp::Linear => l0 + s * (l1 - l0),
                Interp::LogLinear => (l0.ln() + s * (l1.ln() - l0.ln())).exp(),
            };
            lengths.push(l);
            let (w0, w1) = (self.knot_twists[seg][c], self.knot_twists[seg + 1][c]);
            twists.push(w0 + s * (w1 - w0));
        }
        FnPoint::new(self.decomposition.clone(), lengths, twists)
            .expect("path interpolation preserves validity")
    }

    /// Straight segment between two points on the same decomposition.
    pub fn linear(p0: &FnPoint, p1: &FnPoint) -> Result<TeichPath, GeometryError> {
        require_same_decomposition(p0, p1)?;
        Ok(TeichPath {
            kind: PathKind::Linear,
            decomposition: p0.decomposition.clone(),
            breakpoints: vec![0.0, 1.0],
            knot_lengths: vec![p0.lengths.clone(), p1.lengths.clone()],
            knot_twists: vec![p0.twists.clone(), p1.twists.clone()],
            length_interp: vec![Interp::Linear; p0.lengths.len()],
        })
    }

    /// User-supplied breakpoints; coordinates interpolate linearly between
    /// consecutive knots.
    pub fn piecewise(knots: Vec<(f64, FnPoint)>) -> Result<TeichPath, GeometryError> {
        if knots.len() < 2 {
            return Err(GeometryError::Domain("need at least two knots".into()));
        }
        for w in knots.windows(2) {
            require_same_decomposition(&w[0].1, &w[1].1)?;
            if w[1].0 <= w[0].0 {
                return Err(GeometryError::Domain(
                    "breakpoints must be strictly increasing".into(),
                ));
            }
        }
        if (knots[0].0 - 0.0).abs() > 1e-12 || (knots.last().unwrap().0 - 1.0).abs() > 1e-12 {
            return Err(GeometryError::Domain(
                "path domain must be [0, 1]".into(),
            ));
        }
        let dec = knots[0].1.decomposition.clone();
        let k = dec.curve_count();
        Ok(TeichPath {
            kind: PathKind::Piecewise,
            decomposition: dec,
            breakpoints: knots.iter().map(|(t, _)| *t).collect(),
            knot_lengths: knots.iter().map(|(_, p)| p.lengths.clone()).collect(),
            knot_twists: knots.iter().map(|(_, p)| p.twists.clone()).collect(),
            length_interp: vec![Interp::Linear; k],
        })
    }
}

fn require_same_decomposition(p0: &FnPoint, p1: &FnPoint) -> Result<(), GeometryError> {
    if *p0.decomposition != *p1.decomposition {
        return Err(GeometryError::Domain(
            "path endpoints live on different decompositions".into(),
        ));
    }
    Ok(())
}

/// Pinching path: the lengths of `curves` interpolate log-linearly from
/// their start values down to `end_length`; every other coordinate is
/// frozen.
pub fn pinch_path(
    p: &FnPoint,
    curves: &[CurveId],
    end_length: f64,
) -> Result<TeichPath, GeometryError> {
    if curves.is_empty() {
        return Err(GeometryError::Domain("pinch set must be non-empty".into()));
    }
    if !(end_length.is_finite() && end_length > 0.0) {
        return Err(GeometryError::Domain("end length must be positive".into()));
    }
    let k = p.decomposition.curve_count();
    for &c in curves {
        if c >= k {
            return Err(GeometryError::UnknownCurve(c));
        }
        if end_length >= p.lengths[c] {
            return Err(GeometryError::Domain(format!(
                "end length {end_length} is not below the current length {} of curve {c}",
                p.lengths[c]
            )));
        }
    }
    let mut end_lengths = p.lengths.clone();
    let mut interp = vec![Interp::Linear; k];
    for &c in curves {
        end_lengths[c] = end_length;
        interp[c] = Interp::LogLinear;
    }
    Ok(TeichPath {
        kind: PathKind::Pinch {
            curves: curves.to_vec(),
            end_length,
        },
        decomposition: p.decomposition.clone(),
        breakpoints: vec![0.0, 1.0],
        knot_lengths: vec![p.lengths.clone(), end_lengths],
        knot_twists: vec![p.twists.clone(), p.twists.clone()],
        length_interp: interp,
    })
}

/// Two-phase path between thin surfaces keeping a short curve short
/// throughout: phase one (t in [0, 1/2]) freezes `l(c1)` and interpolates
/// everything else; phase two freezes `l(c2)`. Twists interpolate linearly
/// over the whole path. Requires `l(c1)(p1) < eps` and `l(c2)(p2) < eps`;
/// then `min(l(c1), l(c2)) < eps` along the entire path.
///
/// For `c1 == c2` the construction degenerates; a single-phase linear
/// interpolation (which freezes nothing but keeps `l(c1) < eps` by
/// convexity) is returned instead.
pub fn appendix_beta_path(
    p1: &FnPoint,
    p2: &FnPoint,
    c1: CurveId,
    c2: CurveId,
    eps: f64,
) -> Result<TeichPath, GeometryError> {
    require_same_decomposition(p1, p2)?;
    let k = p1.decomposition.curve_count();
    if c1 >= k {
        return Err(GeometryError::UnknownCurve(c1));
    }
    if c2 >= k {
        return Err(GeometryError::UnknownCurve(c2));
    }
    if !(p1.lengths[c1] < eps) {
        return Err(GeometryError::Domain(format!(
            "l(c1) = {} must be below eps = {eps} at the start point",
            p1.lengths[c1]
        )));
    }
    if !(p2.lengths[c2] < eps) {
        return Err(GeometryError::Domain(format!(
            "l(c2) = {} must be below eps = {eps} at the end point",
            p2.lengths[c2]
        )));
    }
    if c1 == c2 {
        let mut path = TeichPath::linear(p1, p2)?;
        path.kind = PathKind::AppendixBeta { c1, c2, eps };
        return Ok(path);
    }
    // Midpoint knot: all coordinates except l(c1) have reached their end
    // values; l(c1) still frozen at its start value.
    let mut mid_lengths = p2.lengths.clone();
    mid_lengths[c1] = p1.lengths[c1];
    let mid_twists: Vec<f64> = p1
        .twists
        .iter()
        .zip(&p2.twists)
        .map(|(a, b)| 0.5 * (a + b))
        .collect();
    Ok(TeichPath {
        kind: PathKind::AppendixBeta { c1, c2, eps },
        decomposition: p1.decomposition.clone(),
        breakpoints: vec![0.0, 0.5, 1.0],
        knot_lengths: vec![p1.lengths.clone(), mid_lengths, p2.lengths.clone()],
        knot_twists: vec![p1.twists.clone(), mid_twists, p2.twists.clone()],
        length_interp: vec![Interp::Linear; k],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PantsDecomposition;

    fn theta_point(lengths: [f64; 3], twists: [f64; 3]) -> FnPoint {
        FnPoint::new(
            PantsDecomposition::genus2_theta(),
            lengths.to_vec(),
            twists.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn pinch_reaches_end_length_and_freezes_rest() {
        let p = theta_point([1.0, 2.0, 3.0], [0.1, 0.2, 0.3]);
        let path = pinch_path(&p, &[0], 0.05).unwrap();
        let end = path.at(1.0);
        assert!((end.lengths[0] - 0.05).abs() < 1e-14);
        assert_eq!(end.lengths[1], 2.0);
        assert_eq!(end.lengths[2], 3.0);
        assert_eq!(end.twists, p.twists);
        // Log-linear: halfway in log scale.
        let mid = path.at(0.5);
        assert!((mid.lengths[0] - (1.0f64.ln() + 0.5 * (0.05f64.ln())).exp()).abs() < 1e-12);
    }

    #[test]
    fn pinch_triple_stays_equal() {
        let p = theta_point([2.0, 2.0, 2.0], [0.0; 3]);
        let path = pinch_path(&p, &[0, 1, 2], 0.05).unwrap();
        for i in 0..=10 {
            let q = path.at(i as f64 / 10.0);
            assert!((q.lengths[0] - q.lengths[1]).abs() < 1e-12);
            assert!((q.lengths[1] - q.lengths[2]).abs() < 1e-12);
        }
    }

    #[test]
    fn pinch_rejects_bad_end() {
        let p = theta_point([1.0, 2.0, 3.0], [0.0; 3]);
        assert!(pinch_path(&p, &[0], 0.0).is_err());
        assert!(pinch_path(&p, &[0], 1.5).is_err());
        assert!(pinch_path(&p, &[], 0.1).is_err());
    }

    #[test]
    fn beta_path_endpoints_exact_and_thin_throughout() {
        let p1 = theta_point([0.1, 2.0, 2.5], [0.0, 0.4, 0.0]);
        let p2 = theta_point([2.2, 0.1, 1.5], [0.5, 0.0, 0.8]);
        let path = appendix_beta_path(&p1, &p2, 0, 1, 0.2).unwrap();
        let a = path.at(0.0);
        let b = path.at(1.0);
        assert_eq!(a.lengths, p1.lengths);
        assert_eq!(b.lengths, p2.lengths);
        for i in 0..=100 {
            let q = path.at(i as f64 / 100.0);
            let m = q.lengths[0].min(q.lengths[1]);
            assert!(m < 0.2, "pinched length {m} at t = {}", i as f64 / 100.0);
        }
    }

    #[test]
    fn beta_path_constant_for_identical_endpoints() {
        let p = theta_point([0.15, 2.0, 2.0], [0.0; 3]);
        let path = appendix_beta_path(&p, &p, 0, 0, 0.2).unwrap();
        let q = path.at(0.37);
        assert_eq!(q.lengths, p.lengths);
        assert_eq!(q.twists, p.twists);
    }
}
