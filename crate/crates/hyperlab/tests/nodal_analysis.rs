//! Nodal extraction and classification against the pinch dichotomy.

use hyperlab::geometry::{FnPoint, PantsDecomposition};
use hyperlab::mesh::{mesh_cusped, mesh_surface};
use hyperlab::nodal::{
    components_match_curves, courant_otal_audit, euler_poincare_audit, extract_nodal,
    isotopy_class, nodal_domains, IsotopyLabel,
};
use hyperlab::spectral::{assemble, solve_lowest, SolveConfig};

fn eigenpairs(p: &FnPoint, h: f64, k: usize) -> (hyperlab::mesh::SurfaceMesh, hyperlab::spectral::SpectrumSlice) {
    let mesh = mesh_surface(p, h).unwrap();
    let op = assemble(&mesh).unwrap();
    let cfg = SolveConfig {
        mesh_h: mesh.h,
        ..Default::default()
    };
    let s = solve_lowest(&op, k, &cfg).unwrap();
    (mesh, s)
}

#[test]
fn constant_function_has_empty_nodal_set() {
    let p = FnPoint::new(
        PantsDecomposition::genus2_theta(),
        vec![2.0, 2.0, 2.0],
        vec![0.0; 3],
    )
    .unwrap();
    let mesh = mesh_surface(&p, 0.2).unwrap();
    let v = vec![1.0; mesh.vertex_count];
    let ng = extract_nodal(&mesh, &v).unwrap();
    assert_eq!(ng.component_count(), 0);
    let d = nodal_domains(&mesh, &ng);
    assert_eq!(d.domain_count, 1);
    // All-zero input is rejected.
    assert!(extract_nodal(&mesh, &vec![0.0; mesh.vertex_count]).is_err());
}

#[test]
fn sign_flip_gives_identical_graph() {
    let p = FnPoint::new(
        PantsDecomposition::genus2_theta(),
        vec![0.1, 2.5, 2.5],
        vec![0.0; 3],
    )
    .unwrap();
    let (mesh, s) = eigenpairs(&p, 0.12, 2);
    let v = &s.eigenvectors[1];
    let neg: Vec<f64> = v.iter().map(|x| -x).collect();
    let a = extract_nodal(&mesh, v).unwrap();
    let b = extract_nodal(&mesh, &neg).unwrap();
    assert_eq!(a.component_count(), b.component_count());
    assert_eq!(a.segments.len(), b.segments.len());
    for (x, y) in a.segments.iter().zip(&b.segments) {
        assert_eq!(x.triangle, y.triangle);
        assert_eq!(x.edges, y.edges);
    }
}

#[test]
fn perturbation_stability() {
    let p = FnPoint::new(
        PantsDecomposition::genus2_theta(),
        vec![0.1, 2.5, 2.5],
        vec![0.0; 3],
    )
    .unwrap();
    let (mesh, s) = eigenpairs(&p, 0.12, 2);
    let v = &s.eigenvectors[1];
    let vmax = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let pert: Vec<f64> = v
        .iter()
        .enumerate()
        .map(|(i, x)| x + 1e-9 * vmax * ((i % 7) as f64 - 3.0))
        .collect();
    let a = extract_nodal(&mesh, v).unwrap();
    let b = extract_nodal(&mesh, &pert).unwrap();
    assert_eq!(a.component_count(), b.component_count());
}

#[test]
fn pinched_triple_is_pants_type() {
    let p = FnPoint::new(
        PantsDecomposition::genus2_theta(),
        vec![0.08, 0.08, 0.08],
        vec![0.0; 3],
    )
    .unwrap();
    let (mesh, s) = eigenpairs(&p, 0.1, 3);
    assert!(s.eigenvalues[1] < 0.1);
    assert!(s.eigenvalues[2] > 0.25);
    let ng = extract_nodal(&mesh, &s.eigenvectors[1]).unwrap();
    let d = nodal_domains(&mesh, &ng);
    let ep = euler_poincare_audit(&mesh, &ng, &d);
    assert_eq!(ng.component_count(), 3);
    assert_eq!(d.domain_count, 2);
    assert_eq!(d.domain_chi, vec![-1, -1]);
    assert_eq!(d.nodal_chi, 0);
    assert_eq!(ep.residual, 0);
    assert!(ep.all_domains_negative);
    assert_eq!(isotopy_class(&mesh, &ng, &d), IsotopyLabel::PantsType);
    assert!(components_match_curves(&mesh, &ng, &[0, 1, 2]));
    // The two domains carry opposite signs.
    assert_eq!(d.domain_signs.iter().sum::<i8>(), 0);
    // Full nodal set has even intersection with every marked cycle.
    assert!(ng.total_crossing_parity().iter().all(|&p| p == 0));
}

#[test]
fn pinched_separating_curve_is_torus_type() {
    let p = FnPoint::new(
        PantsDecomposition::genus2_dumbbell(),
        vec![0.08, 2.0, 2.0],
        vec![0.0; 3],
    )
    .unwrap();
    let (mesh, s) = eigenpairs(&p, 0.1, 2);
    assert!(s.eigenvalues[1] < 0.1);
    let ng = extract_nodal(&mesh, &s.eigenvectors[1]).unwrap();
    let d = nodal_domains(&mesh, &ng);
    let ep = euler_poincare_audit(&mesh, &ng, &d);
    assert_eq!(ng.component_count(), 1);
    assert_eq!(d.domain_chi, vec![-1, -1]);
    assert_eq!(ep.residual, 0);
    assert_eq!(isotopy_class(&mesh, &ng, &d), IsotopyLabel::TorusType);
    assert!(components_match_curves(&mesh, &ng, &[0]));
}

#[test]
fn courant_audit_passes_for_first_eigenfunction() {
    let p = FnPoint::new(
        PantsDecomposition::genus2_theta(),
        vec![0.08, 0.08, 0.08],
        vec![0.0; 3],
    )
    .unwrap();
    let (mesh, s) = eigenpairs(&p, 0.1, 2);
    let ng = extract_nodal(&mesh, &s.eigenvectors[1]).unwrap();
    let d = nodal_domains(&mesh, &ng);
    let report = courant_otal_audit(&[(1, s.eigenvalues[1], &d)]);
    assert!(report.all_pass);
    assert_eq!(report.rows[0].domains, 2);

    // A perturbed non-eigenfunction may fail, and must not panic.
    let junk: Vec<f64> = s.eigenvectors[1]
        .iter()
        .enumerate()
        .map(|(i, x)| x + 0.5 * ((i * 2654435761) % 97) as f64 / 97.0)
        .collect();
    let ng2 = extract_nodal(&mesh, &junk).unwrap();
    let d2 = nodal_domains(&mesh, &ng2);
    let _ = courant_otal_audit(&[(1, s.eigenvalues[1], &d2)]);

    // Empty input: empty report.
    assert!(courant_otal_audit(&[]).all_pass);
    assert!(courant_otal_audit(&[]).rows.is_empty());
}

#[test]
fn punctured_sphere_nodal_audit() {
    let p = FnPoint::new(PantsDecomposition::sphere4(), vec![0.8], vec![0.0]).unwrap();
    let mesh = mesh_cusped(&p, 20.0, 0.1).unwrap();
    let op = assemble(&mesh).unwrap();
    let cfg = SolveConfig {
        mesh_h: mesh.h,
        ..Default::default()
    };
    let s = solve_lowest(&op, 2, &cfg).unwrap();
    assert!(s.eigenvalues[1] < 0.25, "lambda1 = {}", s.eigenvalues[1]);
    let ng = extract_nodal(&mesh, &s.eigenvectors[1]).unwrap();
    let d = nodal_domains(&mesh, &ng);
    let ep = euler_poincare_audit(&mesh, &ng, &d);
    assert_eq!(d.domain_count, 2);
    assert_eq!(ep.punctures_off_nodal, 4);
    assert_eq!(ep.residual, 0);
    assert_eq!(d.nodal_chi, 0);
    match isotopy_class(&mesh, &ng, &d) {
        IsotopyLabel::SphereSplit(a, b) => {
            let mut all: Vec<usize> = a.iter().chain(b.iter()).cloned().collect();
            all.sort_unstable();
            assert_eq!(all, vec![0, 1, 2, 3]);
        }
        other => panic!("unexpected label {other}"),
    }
}
