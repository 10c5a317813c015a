//! Cyclic covers of genus-2 surfaces.
//!
//! Cutting a closed genus-2 surface along a non-separating decomposition
//! curve `delta` yields a genus-1 surface with two boundary circles;
//! arranging `g - 1` copies in a cycle and regluing produces a genus-`g`
//! surface that covers the original with `g - 1` sheets. On
//! Fenchel–Nielsen coordinates the covering is coordinate duplication.

use std::sync::Arc;

use super::decomposition::{CuspSlot, InteriorCurve};
use super::{CurveId, FnPoint, GeometryError, PantsDecomposition};

#[derive(Clone, Debug)]
pub struct CoveringDescriptor {
    pub target_genus: usize,
    pub sheet_count: usize,
    pub cut_curve: CurveId,
    /// `curve_origin[new_id] = (copy, original_id)`.
    pub curve_origin: Vec<(usize, CurveId)>,
    /// `pants_origin[new_pants] = (copy, original_pants)`.
    pub pants_origin: Vec<(usize, usize)>,
}

/// Lift a genus-2 closed surface to its cyclic genus-`g` cover obtained by
/// cutting along `delta` (which must be non-separating).
pub fn lift_to_cover(
    p: &FnPoint,
    g: usize,
    delta: CurveId,
) -> Result<(FnPoint, CoveringDescriptor), GeometryError> {
    let dec = &p.decomposition;
    if dec.genus() != 2 || dec.punctures() != 0 {
        return Err(GeometryError::Domain(
            "covering lift requires a closed genus-2 base".into(),
        ));
    }
    if g < 3 {
        return Err(GeometryError::Domain(format!(
            "target genus must be at least 3, got {g}"
        )));
    }
    if delta >= dec.curve_count() {
        return Err(GeometryError::UnknownCurve(delta));
    }
    if dec.is_separating(delta) {
        return Err(GeometryError::Domain(
            "cut curve must be non-separating".into(),
        ));
    }
    let sheets = g - 1;
    let base_pants = dec.pants_count();
    let base_curves = dec.curve_count();
    let mut curves = Vec::with_capacity(sheets * base_curves);
    let mut curve_origin = Vec::with_capacity(sheets * base_curves);
    let mut pants_origin = Vec::with_capacity(sheets * base_pants);
    for copy in 0..sheets {
        for pid in 0..base_pants {
            pants_origin.push((copy, pid));
        }
        for c in dec.curves() {
            let new_id = copy * base_curves + c.id;
            let ends = if c.id == delta {
                // End 0 stays in this copy, end 1 moves to the next copy.
                [
                    (copy * base_pants + c.ends[0].0, c.ends[0].1),
                    (((copy + 1) % sheets) * base_pants + c.ends[1].0, c.ends[1].1),
                ]
            } else {
                [
                    (copy * base_pants + c.ends[0].0, c.ends[0].1),
                    (copy * base_pants + c.ends[1].0, c.ends[1].1),
                ]
            };
            curves.push(InteriorCurve { id: new_id, ends });
            curve_origin.push((copy, c.id));
        }
    }
    let lifted_dec = Arc::new(PantsDecomposition::new(
        sheets * base_pants,
        curves,
        Vec::<CuspSlot>::new(),
    )?);
    if lifted_dec.genus() != g {
        return Err(GeometryError::BadDecomposition(format!(
            "lift produced genus {} instead of {g}",
            lifted_dec.genus()
        )));
    }
    let mut lengths = Vec::with_capacity(sheets * base_curves);
    let mut twists = Vec::with_capacity(sheets * base_curves);
    for _ in 0..sheets {
        lengths.extend_from_slice(&p.lengths);
        twists.extend_from_slice(&p.twists);
    }
    let lifted = FnPoint::new(lifted_dec, lengths, twists)?;
    let desc = CoveringDescriptor {
        target_genus: g,
        sheet_count: sheets,
        cut_curve: delta,
        curve_origin,
        pants_origin,
    };
    if !has_cyclic_symmetry(&lifted, &desc, base_pants, base_curves) {
        return Err(GeometryError::BadDecomposition(
            "lifted decomposition lacks the cyclic deck symmetry".into(),
        ));
    }
    Ok((lifted, desc))
}

/// Verify the order-`sheets` combinatorial symmetry rotating the copies.
fn has_cyclic_symmetry(
    lifted: &FnPoint,
    desc: &CoveringDescriptor,
    base_pants: usize,
    base_curves: usize,
) -> bool {
    let dec = &lifted.decomposition;
    let sheets = desc.sheet_count;
    let rot_pants = |pid: usize| -> usize {
        let (copy, orig) = (pid / base_pants, pid % base_pants);
        ((copy + 1) % sheets) * base_pants + orig
    };
    let rot_curve = |cid: usize| -> usize {
        let (copy, orig) = (cid / base_curves, cid % base_curves);
        ((copy + 1) % sheets) * base_curves + orig
    };
    for c in dec.curves() {
        let image = rot_curve(c.id);
        let img = &dec.curves()[image];
        let want = [
            (rot_pants(c.ends[0].0), c.ends[0].1),
            (rot_pants(c.ends[1].0), c.ends[1].1),
        ];
        if img.ends != want {
            return false;
        }
        if (lifted.lengths[c.id] - lifted.lengths[image]).abs() > 0.0 {
            return false;
        }
        if (lifted.twists[c.id] - lifted.twists[image]).abs() > 0.0 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::PantsDecomposition;

    fn theta_point() -> FnPoint {
        FnPoint::new(
            PantsDecomposition::genus2_theta(),
            vec![1.5, 2.0, 2.5],
            vec![0.1, 0.2, 0.3],
        )
        .unwrap()
    }

    #[test]
    fn genus3_lift_duplicates_coordinates() {
        let p = theta_point();
        let (q, desc) = lift_to_cover(&p, 3, 2).unwrap();
        assert_eq!(q.genus(), 3);
        assert_eq!(desc.sheet_count, 2);
        assert_eq!(q.lengths.len(), 6);
        assert_eq!(&q.lengths[0..3], p.lengths.as_slice());
        assert_eq!(&q.lengths[3..6], p.lengths.as_slice());
        assert_eq!(&q.twists[0..3], p.twists.as_slice());
        assert_eq!(&q.twists[3..6], p.twists.as_slice());
    }

    #[test]
    fn rejects_genus_2_request_and_separating_cut() {
        let p = theta_point();
        assert!(lift_to_cover(&p, 2, 2).is_err());
        let dumbbell = FnPoint::new(
            PantsDecomposition::genus2_dumbbell(),
            vec![1.0, 1.0, 1.0],
            vec![0.0; 3],
        )
        .unwrap();
        // Curve 0 of the dumbbell separates; it cannot be the cut curve.
        assert!(lift_to_cover(&dumbbell, 3, 0).is_err());
        // A handle curve works.
        assert!(lift_to_cover(&dumbbell, 3, 1).is_ok());
    }

    #[test]
    fn higher_genus_lift_is_valid() {
        let p = theta_point();
        for g in 3..=5 {
            let (q, desc) = lift_to_cover(&p, g, 0).unwrap();
            assert_eq!(q.genus(), g);
            assert_eq!(desc.sheet_count, g - 1);
            assert_eq!(q.lengths.len(), 3 * (g - 1));
        }
    }
}
