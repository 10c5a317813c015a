//! Weak-form assembly of the Laplace–Beltrami operator on an intrinsic
//! mesh.
//!
//! Each triangle is assembled on its Euclidean comparison triangle (same
//! side lengths): the Dirichlet form is conformally invariant in two
//! dimensions, so the flat cotangent stiffness is a second-order accurate
//! element, while the mass uses the exact hyperbolic triangle area.

use thiserror::Error;

use crate::mesh::SurfaceMesh;

use super::sparse::SymCsr;

#[derive(Debug, Error)]
pub enum AssemblyError {
    #[error("triangle {index} is too distorted to assemble (min angle {min_angle_deg:.2} deg)")]
    Quality { index: usize, min_angle_deg: f64 },
}

/// Stiffness (Dirichlet energy) and mass matrices of a mesh.
#[derive(Clone, Debug)]
pub struct OperatorPair {
    pub stiffness: SymCsr,
    pub mass: SymCsr,
    pub dim: usize,
}

pub fn assemble(mesh: &SurfaceMesh) -> Result<OperatorPair, AssemblyError> {
    let n = mesh.vertex_count;
    let mut a_trip: Vec<(usize, usize, f64)> = Vec::with_capacity(mesh.triangles.len() * 6);
    let mut m_trip: Vec<(usize, usize, f64)> = Vec::with_capacity(mesh.triangles.len() * 6);
    for (idx, t) in mesh.triangles.iter().enumerate() {
        let min_angle = t.min_angle().to_degrees();
        if min_angle < 1.0 {
            return Err(AssemblyError::Quality {
                index: idx,
                min_angle_deg: min_angle,
            });
        }
        // Euclidean comparison triangle with the same side lengths.
        let c01 = t.len[0];
        let c12 = t.len[1];
        let c20 = t.len[2];
        let x2 = (c01 * c01 + c20 * c20 - c12 * c12) / (2.0 * c01);
        let y2sq = c20 * c20 - x2 * x2;
        if y2sq <= 0.0 {
            return Err(AssemblyError::Quality {
                index: idx,
                min_angle_deg: 0.0,
            });
        }
        let y2 = y2sq.sqrt();
        let p = [(0.0, 0.0), (c01, 0.0), (x2, y2)];
        let area_e = 0.5 * c01 * y2;
        // P1 gradients: grad phi_i = rot90(opposite edge) / (2 A).
        let grads: [(f64, f64); 3] = [
            edge_normal(p[1], p[2], area_e),
            edge_normal(p[2], p[0], area_e),
            edge_normal(p[0], p[1], area_e),
        ];
        for i in 0..3 {
            for j in i..3 {
                let k = area_e * (grads[i].0 * grads[j].0 + grads[i].1 * grads[j].1);
                a_trip.push((t.v[i], t.v[j], k));
            }
        }
        // Consistent mass with the exact hyperbolic area.
        let area_h = t.area();
        for i in 0..3 {
            for j in i..3 {
                let val = if i == j { area_h / 6.0 } else { area_h / 12.0 };
                m_trip.push((t.v[i], t.v[j], val));
            }
        }
    }
    Ok(OperatorPair {
        stiffness: SymCsr::from_triplets(n, &a_trip),
        mass: SymCsr::from_triplets(n, &m_trip),
        dim: n,
    })
}

/// Gradient of the hat function at the vertex opposite to edge (a, b):
/// perpendicular of the edge scaled by 1 / (2 area).
fn edge_normal(a: (f64, f64), b: (f64, f64), area: f64) -> (f64, f64) {
    let ex = b.0 - a.0;
    let ey = b.1 - a.1;
    (-ey / (2.0 * area), ex / (2.0 * area))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{FnPoint, PantsDecomposition};
    use crate::mesh::mesh_surface;

    fn sample_op() -> (OperatorPair, f64) {
        let p = FnPoint::new(
            PantsDecomposition::genus2_theta(),
            vec![2.0, 2.0, 2.0],
            vec![0.0; 3],
        )
        .unwrap();
        let m = mesh_surface(&p, 0.2).unwrap();
        let area = m.area();
        (assemble(&m).unwrap(), area)
    }

    #[test]
    fn constants_are_in_the_kernel() {
        let (op, area) = sample_op();
        let ones = vec![1.0; op.dim];
        let a1 = op.stiffness.matvec_alloc(&ones);
        let max = a1.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(max < 1e-12, "A*1 = {max}");
        let m1 = op.mass.matvec_alloc(&ones);
        let total: f64 = m1.iter().sum();
        assert!((total - area).abs() < 1e-10 * area);
    }

    #[test]
    fn stiffness_is_positive_semidefinite() {
        let (op, _) = sample_op();
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let v: Vec<f64> = (0..op.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let av = op.stiffness.matvec_alloc(&v);
            let q: f64 = v.iter().zip(&av).map(|(a, b)| a * b).sum();
            assert!(q >= -1e-12, "v'Av = {q}");
            let mv = op.mass.matvec_alloc(&v);
            let qm: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
            assert!(qm > 0.0);
        }
    }

    #[test]
    fn matrices_are_symmetric() {
        let (op, _) = sample_op();
        assert!(op.stiffness.asymmetry() < 1e-14);
        assert!(op.mass.asymmetry() < 1e-14);
    }
}
