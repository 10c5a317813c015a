//! Triangulated models of hyperbolic surfaces with intrinsic edge lengths.
//!
//! Meshes are built per pair of pants: a structured band of equidistant
//! rows grows from every boundary circle (and horocycle rows descend from
//! every truncated cusp) until it reaches the pants' spine — geodesic cuts
//! from an interior hub point to the three seam midpoints. Bands are zipped
//! to the spine chains, pants are glued along their boundary circles with
//! twists snapped to whole node offsets, and everything downstream works
//! with the intrinsic (side-length) data only.

mod builder;
mod refine;
mod scaffold;
mod stitch;

pub use builder::{mesh_cusped, mesh_cusped_unchecked, mesh_surface, mesh_surface_unchecked};
pub use refine::{refine, refine_with_map};

use thiserror::Error;

use crate::hyp::{triangle_angles, triangle_area};

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("conditioning error: {0}")]
    Conditioning(String),

    #[error("geometry error: {0}")]
    Geometry(#[from] crate::geometry::GeometryError),

    #[error("mesh construction produced an invalid complex: {0}")]
    Invalid(String),

    #[error("triangle {0} violates the quality floor (min angle {1:.2} deg)")]
    Quality(usize, f64),
}

/// A triangle known only through its intrinsic side lengths.
/// `len[e]` is the length of the edge from `v[e]` to `v[(e+1)%3]`.
#[derive(Clone, Copy, Debug)]
pub struct MetricTriangle {
    pub v: [usize; 3],
    pub len: [f64; 3],
}

impl MetricTriangle {
    /// Interior angles at `v[0]`, `v[1]`, `v[2]`.
    pub fn angles(&self) -> [f64; 3] {
        // Side opposite v[0] is len[1] (edge v1-v2), etc.
        let (a0, a1, a2) = triangle_angles(self.len[1], self.len[2], self.len[0]);
        [a0, a1, a2]
    }

    pub fn area(&self) -> f64 {
        triangle_area(self.len[0], self.len[1], self.len[2])
    }

    pub fn min_angle(&self) -> f64 {
        let a = self.angles();
        a[0].min(a[1]).min(a[2])
    }

    pub fn is_valid(&self) -> bool {
        let [a, b, c] = self.len;
        a > 0.0 && b > 0.0 && c > 0.0 && a < b + c && b < a + c && c < a + b
    }
}

/// Truncated-cusp boundary data.
#[derive(Clone, Debug)]
pub struct CuspBoundary {
    /// Index into the decomposition's cusp list.
    pub cusp: usize,
    /// Truncation circle as a closed vertex cycle.
    pub cycle: Vec<usize>,
    /// Truncation height: the circle is the horocycle at chart height `y`,
    /// of intrinsic length `2 pi / y`.
    pub y: f64,
}

/// Per-vertex chart records used for sampling, plotting and refinement.
#[derive(Clone, Debug, Default)]
pub struct VertexCharts {
    /// Positions in pants charts (hyperboloid coordinates), possibly one
    /// entry per adjacent pants.
    pub pants: Vec<(usize, [f64; 3])>,
    /// Cusp cylinder coordinates, when the vertex lies in a cusp region.
    pub cusp: Option<(usize, f64, f64)>,
    /// Band record: (curve id, side 0/1, depth) for collar-membership tests.
    pub band: Option<(usize, u8, f64)>,
}

/// Triangulated surface with intrinsic hyperbolic geometry.
#[derive(Clone, Debug)]
pub struct SurfaceMesh {
    pub genus: usize,
    pub punctures: usize,
    /// Target maximum edge length.
    pub h: f64,
    pub vertex_count: usize,
    pub triangles: Vec<MetricTriangle>,
    /// Closed vertex cycle isotopic to each interior FN curve.
    pub marked_curves: Vec<Vec<usize>>,
    pub cusp_boundaries: Vec<CuspBoundary>,
    /// Twists actually realized by the node-offset gluing.
    pub snapped_twists: Vec<f64>,
    /// `|snapped - requested|` per curve, at most `h/2`.
    pub twist_snap_errors: Vec<f64>,
    pub charts: Vec<VertexCharts>,
    /// Content hash of (FN point JSON, h) for cache identification.
    pub content_hash: String,
}

impl SurfaceMesh {
    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| t.area()).sum()
    }

    pub fn expected_area(&self) -> f64 {
        let chi = 2.0 - 2.0 * self.genus as f64 - self.punctures as f64;
        let mut a = -2.0 * std::f64::consts::PI * chi;
        for cb in &self.cusp_boundaries {
            a -= 2.0 * std::f64::consts::PI / cb.y;
        }
        a
    }

    pub fn min_angle(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| t.min_angle())
            .fold(f64::INFINITY, f64::min)
    }

    /// Euler characteristic of the complex.
    pub fn euler_characteristic(&self) -> i64 {
        let edges = self.edge_count();
        self.vertex_count as i64 - edges as i64 + self.triangles.len() as i64
    }

    pub fn edge_count(&self) -> usize {
        let mut set = std::collections::HashSet::new();
        for t in &self.triangles {
            for e in 0..3 {
                let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
                set.insert((a.min(b), a.max(b)));
            }
        }
        set.len()
    }

    /// Undirected edge -> incident triangle count; also checks orientation
    /// (each directed edge at most once).
    pub fn validate(&self) -> Result<(), MeshError> {
        let mut directed = std::collections::HashSet::new();
        let mut undirected: std::collections::HashMap<(usize, usize), u32> =
            std::collections::HashMap::new();
        for (i, t) in self.triangles.iter().enumerate() {
            if !t.is_valid() {
                return Err(MeshError::Invalid(format!(
                    "triangle {i} violates the triangle inequality: {:?}",
                    t.len
                )));
            }
            if t.v[0] == t.v[1] || t.v[1] == t.v[2] || t.v[0] == t.v[2] {
                return Err(MeshError::Invalid(format!("triangle {i} is degenerate")));
            }
            for e in 0..3 {
                let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
                if !directed.insert((a, b)) {
                    return Err(MeshError::Invalid(format!(
                        "directed edge ({a}, {b}) used twice; inconsistent orientation"
                    )));
                }
                *undirected.entry((a.min(b), a.max(b))).or_insert(0) += 1;
            }
        }
        // Boundary edges (count 1) are only allowed on cusp truncation
        // circles.
        let mut boundary_ok = std::collections::HashSet::new();
        for cb in &self.cusp_boundaries {
            let n = cb.cycle.len();
            for i in 0..n {
                let (a, b) = (cb.cycle[i], cb.cycle[(i + 1) % n]);
                boundary_ok.insert((a.min(b), a.max(b)));
            }
        }
        for (&(a, b), &count) in &undirected {
            match count {
                2 => {}
                1 => {
                    if !boundary_ok.contains(&(a, b)) {
                        return Err(MeshError::Invalid(format!(
                            "interior edge ({a}, {b}) has one incident triangle"
                        )));
                    }
                }
                _ => {
                    return Err(MeshError::Invalid(format!(
                        "edge ({a}, {b}) has {count} incident triangles"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether the triangle graph is connected.
    pub fn is_connected(&self) -> bool {
        if self.triangles.is_empty() {
            return false;
        }
        let mut adj = vec![Vec::new(); self.vertex_count];
        for t in &self.triangles {
            for e in 0..3 {
                adj[t.v[e]].push(t.v[(e + 1) % 3]);
            }
        }
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![self.triangles[0].v[0]];
        seen[self.triangles[0].v[0]] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.vertex_count
    }

    /// Polyline length of a marked curve cycle.
    pub fn marked_curve_length(&self, curve: usize) -> f64 {
        let cyc = &self.marked_curves[curve];
        let mut lengths = std::collections::HashMap::new();
        for t in &self.triangles {
            for e in 0..3 {
                let (a, b) = (t.v[e], t.v[(e + 1) % 3]);
                lengths.insert((a.min(b), a.max(b)), t.len[e]);
            }
        }
        let n = cyc.len();
        (0..n)
            .map(|i| {
                let (a, b) = (cyc[i], cyc[(i + 1) % n]);
                lengths[&(a.min(b), a.max(b))]
            })
            .sum()
    }
}


