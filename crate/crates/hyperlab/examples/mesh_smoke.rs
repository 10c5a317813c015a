use hyperlab::geometry::{FnPoint, PantsDecomposition};
use hyperlab::mesh::mesh_surface;
fn main() {
    let p = FnPoint::new(
        PantsDecomposition::genus2_theta(),
        vec![2.0, 2.0, 2.0],
        vec![0.0, 0.0, 0.0],
    ).unwrap();
    for h in [0.3, 0.2, 0.15] {
        let t0 = std::time::Instant::now();
        match mesh_surface(&p, h) {
            Ok(m) => {
                println!("h={h}: V={} T={} chi={} area={:.6} (want {:.6}) minAngle={:.1}deg  [{:?}]",
                    m.vertex_count, m.triangles.len(), m.euler_characteristic(),
                    m.area(), m.expected_area(), m.min_angle().to_degrees(), t0.elapsed());
            }
            Err(e) => println!("h={h}: ERROR {e}"),
        }
    }
}
