//! File emitters: CSV/JSON formats fixed by the external interfaces, and
//! small hand-rolled SVG plots. All output is byte-deterministic for
//! identical inputs.

use std::fmt::Write as _;

use crate::branch::BranchFamily;
use crate::cusp::{ArcEstimate, FourierBesselCoeffs, PiImage};
use crate::mesh::SurfaceMesh;
use crate::nodal::{EulerPoincareReport, IsotopyLabel, NodalDecomposition, NodalGraph};
use crate::spectral::{Extrapolation, SpectrumSlice};

fn num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{v:.1}")
    } else {
        format!("{v:.15e}")
    }
}

/// `index,lambda,residual,cluster_id` rows for a spectrum.
pub fn spectrum_csv(s: &SpectrumSlice) -> String {
    let mut out = String::from("index,lambda,residual,cluster_id\n");
    let cluster_of = |i: usize| -> usize {
        s.clusters
            .iter()
            .position(|c| c.contains(&i))
            .unwrap_or(usize::MAX)
    };
    for (i, &l) in s.eigenvalues.iter().enumerate() {
        let _ = writeln!(
            out,
            "{i},{},{},{}",
            num(l),
            num(s.residuals.get(i).cloned().unwrap_or(f64::NAN)),
            cluster_of(i)
        );
    }
    out
}

/// `t,branch_id,lambda,overlap,flag` rows for a branch family.
pub fn branch_csv(f: &BranchFamily) -> String {
    let mut out = String::from("t,branch_id,lambda,overlap,flag\n");
    for (b, branch) in f.branches.iter().enumerate() {
        for s in &branch.samples {
            let flag = if branch.broken {
                "broken"
            } else if s.degenerate {
                "degenerate"
            } else {
                "ok"
            };
            let _ = writeln!(out, "{},{b},{},{},{flag}", num(s.t), num(s.lambda), num(s.overlap));
        }
    }
    out
}

/// Extrapolation report with the fixed field order.
pub fn extrapolation_json(e: &Extrapolation) -> String {
    let order = if e.order.is_finite() {
        num(e.order)
    } else {
        "null".into()
    };
    format!(
        "{{\"lambda_star\":{},\"order\":{},\"error_bar\":{},\"flagged\":{}}}",
        num(e.lambda_star),
        order,
        num(e.error_bar),
        e.flagged
    )
}

/// Nodal report with the fixed field order. `chi_plus`/`chi_minus` are
/// the Euler characteristics of the positive / negative domains when the
/// decomposition has exactly two; otherwise they are reported as 0.
pub fn nodal_json(
    ng: &NodalGraph,
    dec: &NodalDecomposition,
    ep: &EulerPoincareReport,
    label: &IsotopyLabel,
) -> String {
    let (chi_plus, chi_minus) = if dec.domain_count == 2 {
        let plus = (0..2).find(|&d| dec.domain_signs[d] > 0);
        let minus = (0..2).find(|&d| dec.domain_signs[d] < 0);
        (
            plus.map(|d| dec.domain_chi[d]).unwrap_or(0),
            minus.map(|d| dec.domain_chi[d]).unwrap_or(0),
        )
    } else {
        (0, 0)
    };
    let vectors: Vec<String> = ng
        .crossing_vectors
        .iter()
        .map(|row| {
            let items: Vec<String> = row.iter().map(|&x| x.to_string()).collect();
            format!("[{}]", items.join(","))
        })
        .collect();
    format!(
        "{{\"components\":{},\"domains\":{},\"chi_plus\":{},\"chi_minus\":{},\"chi_nodal\":{},\"label\":\"{}\",\"crossing_vectors\":[{}],\"euler_poincare_residual\":{},\"punctures_off_nodal\":{}}}",
        ng.component_count(),
        dec.domain_count,
        chi_plus,
        chi_minus,
        dec.nodal_chi,
        label,
        vectors.join(","),
        ep.residual,
        ep.punctures_off_nodal
    )
}

/// Cusp coefficient report with the fixed field order.
pub fn coefficients_json(c: &FourierBesselCoeffs, pi: &PiImage, arc: &ArcEstimate) -> String {
    let modes: Vec<String> = c
        .modes
        .iter()
        .map(|&(e, o)| format!("[{},{}]", num(e), num(o)))
        .collect();
    let arc_str = match arc {
        ArcEstimate::NoForcedArcs => "0".to_string(),
        ArcEstimate::AtLeast(n) => n.to_string(),
        ArcEstimate::Indeterminate => "null".to_string(),
    };
    format!(
        "{{\"s\":{},\"f01\":{},\"f02\":{},\"modes\":[{}],\"residual\":{},\"pi\":[{},{},{}],\"arc_estimate\":{}}}",
        num(c.s),
        num(c.f01),
        num(c.f02),
        modes.join(","),
        num(c.fit_residual),
        num(pi.phi0),
        num(pi.phi1e),
        num(pi.phi1o),
        arc_str
    )
}

/// Line plot of branches against t with the 1/4 threshold drawn.
pub fn branches_svg(f: &BranchFamily) -> String {
    let width = 640.0;
    let height = 420.0;
    let margin = 44.0;
    let mut max_l = 0.3f64;
    for b in &f.branches {
        for s in &b.samples {
            max_l = max_l.max(s.lambda);
        }
    }
    max_l *= 1.06;
    let x = |t: f64| margin + t * (width - 2.0 * margin);
    let y = |l: f64| height - margin - (l / max_l) * (height - 2.0 * margin);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(out, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>",
        x(0.0),
        y(0.0),
        x(1.0),
        y(0.0)
    );
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"red\" stroke-dasharray=\"6 3\"/>",
        x(0.0),
        y(0.25),
        x(1.0),
        y(0.25)
    );
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"red\">1/4</text>",
        x(1.0) + 4.0,
        y(0.25) + 4.0
    );
    let colors = [
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    ];
    for (i, b) in f.branches.iter().enumerate() {
        let pts: Vec<String> = b
            .samples
            .iter()
            .map(|s| format!("{:.2},{:.2}", x(s.t), y(s.lambda)))
            .collect();
        let _ = writeln!(
            out,
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.6\"/>",
            pts.join(" "),
            colors[i % colors.len()]
        );
    }
    let _ = writeln!(out, "</svg>");
    out
}

/// Line plot of (x, lambda) pairs (pinch sweeps), with the 1/4 line.
pub fn sweep_svg(points: &[(f64, f64)], x_label: &str) -> String {
    let width = 640.0;
    let height = 420.0;
    let margin = 44.0;
    let mut max_x = 1e-9f64;
    let mut max_l = 0.3f64;
    for &(px, pl) in points {
        max_x = max_x.max(px);
        max_l = max_l.max(pl);
    }
    max_l *= 1.06;
    max_x *= 1.02;
    let x = |t: f64| margin + (t / max_x) * (width - 2.0 * margin);
    let y = |l: f64| height - margin - (l / max_l) * (height - 2.0 * margin);
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(out, "<rect width=\"{width}\" height=\"{height}\" fill=\"white\"/>");
    let _ = writeln!(
        out,
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"red\" stroke-dasharray=\"6 3\"/>",
        x(0.0),
        y(0.25),
        x(max_x / 1.02),
        y(0.25)
    );
    let pts: Vec<String> = points
        .iter()
        .map(|&(px, pl)| format!("{:.2},{:.2}", x(px), y(pl)))
        .collect();
    let _ = writeln!(
        out,
        "<polyline points=\"{}\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.6\"/>",
        pts.join(" ")
    );
    for &(px, pl) in points {
        let _ = writeln!(
            out,
            "<circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"2.6\" fill=\"#1f77b4\"/>",
            x(px),
            y(pl)
        );
    }
    let _ = writeln!(
        out,
        "<text x=\"{}\" y=\"{}\" font-size=\"12\">{}</text>",
        width / 2.0 - 20.0,
        height - 10.0,
        x_label
    );
    let _ = writeln!(out, "</svg>");
    out
}

/// Nodal snapshot: per-pants panels in upper half-plane charts with the
/// marked curves (grey) and nodal segments (red).
pub fn nodal_svg(mesh: &SurfaceMesh, ng: &NodalGraph) -> String {
    let n_pants = mesh
        .charts
        .iter()
        .flat_map(|c| c.pants.iter().map(|&(p, _)| p))
        .max()
        .map(|m| m + 1)
        .unwrap_or(1);
    let panel_w = 300.0;
    let panel_h = 300.0;
    let width = panel_w * n_pants as f64;
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{panel_h}\" viewBox=\"0 0 {width} {panel_h}\">"
    );
    let _ = writeln!(out, "<rect width=\"{width}\" height=\"{panel_h}\" fill=\"white\"/>");
    let pos = |v: usize, pants: usize| -> Option<(f64, f64)> {
        mesh.charts[v]
            .pants
            .iter()
            .find(|&&(p, _)| p == pants)
            .map(|&(_, raw)| {
                let y = 1.0 / (raw[2] - raw[0]);
                (raw[1] * y, y)
            })
    };
    for pants in 0..n_pants {
        let mut lo = (f64::INFINITY, f64::INFINITY);
        let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
        for v in 0..mesh.vertex_count {
            if let Some((px, py)) = pos(v, pants) {
                let ly = py.max(1e-9).ln();
                lo = (lo.0.min(px), lo.1.min(ly));
                hi = (hi.0.max(px), hi.1.max(ly));
            }
        }
        if !lo.0.is_finite() {
            continue;
        }
        let sx = (panel_w - 20.0) / (hi.0 - lo.0).max(1e-9);
        let sy = (panel_h - 20.0) / (hi.1 - lo.1).max(1e-9);
        let to = |px: f64, py: f64| -> (f64, f64) {
            (
                pants as f64 * panel_w + 10.0 + (px - lo.0) * sx,
                panel_h - 10.0 - (py.max(1e-9).ln() - lo.1) * sy,
            )
        };
        for cyc in &mesh.marked_curves {
            let mut pts = Vec::new();
            for &v in cyc {
                if let Some((px, py)) = pos(v, pants) {
                    let (qx, qy) = to(px, py);
                    pts.push(format!("{qx:.1},{qy:.1}"));
                }
            }
            if pts.len() > 1 {
                let _ = writeln!(
                    out,
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"#bbbbbb\" stroke-width=\"0.8\"/>",
                    pts.join(" ")
                );
            }
        }
        for seg in &ng.segments {
            let mut ends = [None, None];
            for (slot, (&(a, b), &t)) in seg.edges.iter().zip(&seg.params).enumerate() {
                if let (Some(pa), Some(pb)) = (pos(a, pants), pos(b, pants)) {
                    ends[slot] = Some((pa.0 + t * (pb.0 - pa.0), pa.1 + t * (pb.1 - pa.1)));
                }
            }
            if let (Some(p1), Some(p2)) = (ends[0], ends[1]) {
                let (x1, y1) = to(p1.0, p1.1);
                let (x2, y2) = to(p2.0, p2.1);
                let _ = writeln!(
                    out,
                    "<line x1=\"{x1:.1}\" y1=\"{y1:.1}\" x2=\"{x2:.1}\" y2=\"{y2:.1}\" stroke=\"#d62728\" stroke-width=\"1.4\"/>"
                );
            }
        }
    }
    let _ = writeln!(out, "</svg>");
    out
}
