//! Derivation of the shipped high-symmetry genus-2 preset: maximize the
//! extrapolated first nonzero eigenvalue over the symmetric slice
//! (L, L, L; t, t, t) of the theta decomposition. Twists snap to whole
//! node offsets, so the search works on that lattice. Run with
//! `cargo run --release --example derive_bolza`.

use hyperlab::geometry::{FnPoint, PantsDecomposition};
use hyperlab::mesh::mesh_surface;
use hyperlab::spectral::{refinement_study, SolveConfig};

fn lambda1(l: f64, tw: f64, h: f64, levels: usize) -> f64 {
    let p = FnPoint::new(
        PantsDecomposition::genus2_theta(),
        vec![l, l, l],
        vec![tw, tw, tw],
    )
    .unwrap();
    let mesh = mesh_surface(&p, h).unwrap();
    let st = refinement_study(&mesh, 4, levels, &SolveConfig::default()).unwrap();
    if levels >= 3 {
        st.extrapolations[1].lambda_star
    } else {
        st.levels.last().unwrap().1.eigenvalues[1]
    }
}

fn main() {
    let h = 0.08;
    let mut best = (f64::MIN, 0.0f64, 0.0f64);
    // Coarse sweep over lengths and lattice twists.
    for l in [3.04f64, 3.12, 3.20, 3.28, 3.36, 3.44] {
        let n = 2 * ((l / (2.0 * h)).ceil() as usize);
        for m in 0..=(n / 2) {
            let f = m as f64 / n as f64;
            if !(0.20..=0.36).contains(&f) {
                continue;
            }
            let tw = m as f64 * l / n as f64;
            let v = lambda1(l, tw, h, 2);
            if v > best.0 {
                best = (v, l, tw);
                println!("new best: lambda1 ~ {v:.5} at L = {l}, twist = {tw:.5} (m = {m}/{n})");
            }
        }
    }
    let (v, l, tw) = best;
    println!("two-level winner: {v:.5} at L = {l}, twist = {tw}");
    let confirmed = lambda1(l, tw, 0.08, 3);
    println!("three-level extrapolated lambda1 = {confirmed:.5}");
    println!("preset: lengths = [{l}, {l}, {l}], twists = [{tw}, {tw}, {tw}]");
}
