//! Branch continuation and covering containment checks.

use hyperlab::branch::{covering_audit, track, TrackConfig};
use hyperlab::geometry::{FnPoint, PantsDecomposition, TeichPath};

fn cfg() -> TrackConfig {
    TrackConfig {
        h: 0.16,
        tol: 1e-7,
        ..Default::default()
    }
}

#[test]
fn constant_path_has_constant_branches() {
    let dec = PantsDecomposition::genus2_theta();
    let p = FnPoint::new(dec, vec![2.0; 3], vec![0.3; 3]).unwrap();
    let path = TeichPath::linear(&p, &p).unwrap();
    let fam = track(&path, 3, 3, &cfg()).unwrap();
    for b in &fam.branches {
        let first = b.lambda_at_start();
        for s in &b.samples {
            assert!(
                (s.lambda - first).abs() <= 10.0 * fam.tol * (1.0 + first.abs()),
                "branch {} drifted: {} vs {first}",
                b.start_index,
                s.lambda
            );
        }
        assert!(!b.broken);
        assert!(fam.starts_as(b, b.start_index));
    }
    assert!(fam.crossings.is_empty());
    assert!(fam.exceed_quarter().is_none() || fam.branches[1].lambda_at_start() > 0.25);
}

#[test]
fn pinched_to_thick_branch_exceeds_quarter() {
    let dec = PantsDecomposition::genus2_theta();
    let a = FnPoint::new(dec.clone(), vec![0.05; 3], vec![0.0; 3]).unwrap();
    let b = FnPoint::new(dec, vec![2.5; 3], vec![0.0; 3]).unwrap();
    let path = TeichPath::linear(&a, &b).unwrap();
    let fam = track(&path, 2, 8, &cfg()).unwrap();
    let t_star = fam.exceed_quarter();
    assert!(t_star.is_some(), "branch must exceed 1/4 along this path");
    let t_star = t_star.unwrap();
    assert!(t_star > 0.0 && t_star < 1.0);
    assert!(fam.multiset_defect() <= 10.0 * fam.tol);
}

#[test]
fn pinched_path_stays_below_quarter() {
    let dec = PantsDecomposition::genus2_theta();
    let a = FnPoint::new(dec.clone(), vec![0.05; 3], vec![0.0; 3]).unwrap();
    let b = FnPoint::new(dec, vec![0.09; 3], vec![0.0; 3]).unwrap();
    let path = TeichPath::linear(&a, &b).unwrap();
    let fam = track(&path, 2, 3, &cfg()).unwrap();
    assert!(fam.exceed_quarter().is_none());
}

#[test]
fn covering_contains_base_spectrum() {
    let dec = PantsDecomposition::genus2_theta();
    // Pinched sample: lambda_1(S) = lambda_1(cover).
    let p = FnPoint::new(dec.clone(), vec![0.1; 3], vec![0.0; 3]).unwrap();
    let rep = covering_audit(&p, 3, 5, 0.16, 1e-7, 2, 1.0).unwrap();
    assert!(rep.all_matched);
    assert!(rep.lambda1_coincides);
    // lambda_0 = 0 always matches.
    assert!(rep.matches[0].matched);
    assert!(rep.matches[0].base_lambda.abs() < 1e-9);

    // Generic sample: containment only (the cover may have extras).
    let q = FnPoint::new(dec, vec![2.0, 2.2, 1.8], vec![0.5, 0.0, 0.3]).unwrap();
    let rep = covering_audit(&q, 3, 4, 0.16, 1e-7, 0, 1.0).unwrap();
    assert!(rep.all_matched);
}
