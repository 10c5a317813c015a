//! Eigensolver checks, including an independent dense-eigendecomposition
//! oracle on a coarse mesh.

use hyperlab::geometry::{FnPoint, PantsDecomposition};
use hyperlab::mesh::mesh_surface;
use hyperlab::spectral::dense::{sym_generalized_eigen, DMat};
use hyperlab::spectral::{assemble, solve_lowest, SolveConfig};

fn coarse_setup() -> (hyperlab::spectral::OperatorPair, f64) {
    let p = FnPoint::new(
        PantsDecomposition::genus2_theta(),
        vec![2.0, 2.2, 1.8],
        vec![0.1, 0.0, 0.6],
    )
    .unwrap();
    let mesh = mesh_surface(&p, 0.25).unwrap();
    let op = assemble(&mesh).unwrap();
    (op, mesh.h)
}

#[test]
fn sparse_path_matches_dense_oracle() {
    let (op, h) = coarse_setup();
    let n = op.dim;
    // Dense oracle: full generalized symmetric eigendecomposition.
    let mut a = DMat::zeros(n, n);
    let mut m = DMat::zeros(n, n);
    for i in 0..n {
        for k in op.stiffness.row_ptr[i]..op.stiffness.row_ptr[i + 1] {
            *a.at_mut(i, op.stiffness.col_idx[k]) = op.stiffness.values[k];
        }
        for k in op.mass.row_ptr[i]..op.mass.row_ptr[i + 1] {
            *m.at_mut(i, op.mass.col_idx[k]) = op.mass.values[k];
        }
    }
    let (dense_vals, _) = sym_generalized_eigen(&a, &m).expect("dense solve");
    let cfg = SolveConfig {
        mesh_h: h,
        tol: 1e-9,
        ..Default::default()
    };
    let s = solve_lowest(&op, 5, &cfg).unwrap();
    for i in 0..5 {
        let want = dense_vals[i].max(0.0);
        assert!(
            (s.eigenvalues[i] - want).abs() <= 1e-7 * (1.0 + want),
            "eig {i}: sparse {} vs dense {}",
            s.eigenvalues[i],
            want
        );
    }
}

#[test]
fn zero_mode_is_constant() {
    let (op, h) = coarse_setup();
    let cfg = SolveConfig {
        mesh_h: h,
        ..Default::default()
    };
    let s = solve_lowest(&op, 1, &cfg).unwrap();
    assert!(s.eigenvalues[0] <= 1e-9);
    let v = &s.eigenvectors[0];
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let dev = v
        .iter()
        .map(|x| (x - mean).abs())
        .fold(0.0f64, f64::max);
    assert!(dev <= 1e-6 * mean.abs(), "deviation {dev} vs mean {mean}");
}

#[test]
fn rayleigh_quotients_agree() {
    let (op, h) = coarse_setup();
    let cfg = SolveConfig {
        mesh_h: h,
        ..Default::default()
    };
    let s = solve_lowest(&op, 4, &cfg).unwrap();
    for (i, v) in s.eigenvectors.iter().enumerate() {
        let av = op.stiffness.matvec_alloc(v);
        let mv = op.mass.matvec_alloc(v);
        let num: f64 = v.iter().zip(&av).map(|(a, b)| a * b).sum();
        let den: f64 = v.iter().zip(&mv).map(|(a, b)| a * b).sum();
        assert!(
            (num / den - s.eigenvalues[i]).abs() <= 10.0 * cfg.tol * (1.0 + s.eigenvalues[i]),
            "pair {i}"
        );
    }
    assert!(s.orthonormality_defect(&op) <= 1e-8);
}

#[test]
fn deterministic_under_fixed_seed() {
    let (op, h) = coarse_setup();
    let cfg = SolveConfig {
        mesh_h: h,
        seed: 7,
        ..Default::default()
    };
    let s1 = solve_lowest(&op, 3, &cfg).unwrap();
    let s2 = solve_lowest(&op, 3, &cfg).unwrap();
    assert_eq!(s1.eigenvalues, s2.eigenvalues);
    for (a, b) in s1.eigenvectors.iter().zip(&s2.eigenvectors) {
        assert_eq!(a, b);
    }
}

#[test]
fn rejects_bad_parameters() {
    let (op, h) = coarse_setup();
    let mut cfg = SolveConfig {
        mesh_h: h,
        ..Default::default()
    };
    cfg.tol = 1.0;
    assert!(solve_lowest(&op, 3, &cfg).is_err());
    let cfg = SolveConfig {
        mesh_h: h,
        ..Default::default()
    };
    assert!(solve_lowest(&op, op.dim, &cfg).is_err());
}
