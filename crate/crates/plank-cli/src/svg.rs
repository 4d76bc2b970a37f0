//! Deterministic SVG rendering for two-dimensional scenes.
//!
//! Every coordinate is printed with four fixed decimals and the element
//! order is fixed, so equal inputs produce identical bytes. The viewBox is
//! the scene's bounding box padded by ten percent per axis; strokes and
//! the plank palette are constants. SVG's y axis points down, so points
//! are emitted as (x, -y).

use plank_core::certifier::PeelStep;
use plank_core::coverage::residual_cells;
use plank_core::geometry::{ConvexBody, Vector};
use plank_core::planks::Plank;
use plank_core::{Params, Scalar};

const PALETTE: [&str; 8] = [
    "#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#a65628", "#f781bf", "#999999",
];
const BODY_FILL: &str = "#f2efe9";
const BODY_STROKE: &str = "#333333";
const CELL_STROKE: &str = "#000000";
const DILATION_FILL: &str = "#2ca02c";
const STEP_BEFORE_STROKE: &str = "#1f77b4";
const STEP_AFTER_STROKE: &str = "#9467bd";

fn fmt(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn point<S: Scalar>(v: &Vector<S>) -> String {
    format!("{},{}", fmt(v.coords[0].to_f64()), fmt(-v.coords[1].to_f64()))
}

fn polygon_points<S: Scalar>(vertices: &[Vector<S>]) -> String {
    vertices.iter().map(point).collect::<Vec<_>>().join(" ")
}

struct Frame {
    x0: f64,
    y0: f64,
    x1: f64,
    y1: f64,
}

impl Frame {
    /// Clips the line n.x = offset to the frame; None when it misses.
    fn clip_line(&self, n: (f64, f64), offset: f64) -> Option<((f64, f64), (f64, f64))> {
        let norm2 = n.0 * n.0 + n.1 * n.1;
        if norm2 == 0.0 {
            return None;
        }
        let p0 = (n.0 * offset / norm2, n.1 * offset / norm2);
        let d = (-n.1, n.0);
        let mut tlo = f64::NEG_INFINITY;
        let mut thi = f64::INFINITY;
        for (a, b) in [
            ((1.0, 0.0), self.x1),
            ((-1.0, 0.0), -self.x0),
            ((0.0, 1.0), self.y1),
            ((0.0, -1.0), -self.y0),
        ] {
            let ad = a.0 * d.0 + a.1 * d.1;
            let ap = a.0 * p0.0 + a.1 * p0.1;
            if ad.abs() < 1e-12 {
                if ap > b {
                    return None;
                }
            } else {
                let t = (b - ap) / ad;
                if ad > 0.0 {
                    thi = thi.min(t);
                } else {
                    tlo = tlo.max(t);
                }
            }
        }
        if tlo >= thi {
            return None;
        }
        Some((
            (p0.0 + tlo * d.0, p0.1 + tlo * d.1),
            (p0.0 + thi * d.0, p0.1 + thi * d.1),
        ))
    }
}

fn push_polygon(out: &mut String, points: &str, style: &str) {
    out.push_str(&format!("  <polygon points=\"{points}\" {style}/>\n"));
}

/// Renders a scene, optionally overlaying one certificate step. With a
/// step the residual transition and dilation witness are drawn; without
/// one the uncovered residual cells are.
pub fn render<S: Scalar>(
    body: &ConvexBody<S>,
    planks: &[Plank<S>],
    step: Option<&PeelStep<S>>,
    params: &Params<S>,
) -> Result<String, String> {
    if body.dim() != 2 {
        return Err(format!("rendering requires dimension 2, got {}", body.dim()));
    }
    let (lo, hi) = body.bounding_box().map_err(|e| e.to_string())?;
    let tenth = S::from_ratio(1, 10);
    let pads: Vec<S> = lo
        .iter()
        .zip(&hi)
        .map(|(a, b)| {
            let extent = b.clone() - a.clone();
            if extent > S::zero() {
                extent * tenth.clone()
            } else {
                S::one() * tenth.clone()
            }
        })
        .collect();
    let plo: Vec<S> = lo.iter().zip(&pads).map(|(a, p)| a.clone() - p.clone()).collect();
    let phi: Vec<S> = hi.iter().zip(&pads).map(|(b, p)| b.clone() + p.clone()).collect();
    let frame = Frame {
        x0: plo[0].to_f64(),
        y0: plo[1].to_f64(),
        x1: phi[0].to_f64(),
        y1: phi[1].to_f64(),
    };
    let frame_body = ConvexBody::from_box(&plo, &phi);

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt(frame.x0),
        fmt(-frame.y1),
        fmt(frame.x1 - frame.x0),
        fmt(frame.y1 - frame.y0),
    ));

    let body_vertices = body.vertices_2d().map_err(|e| e.to_string())?;
    push_polygon(
        &mut out,
        &polygon_points(&body_vertices),
        &format!("fill=\"{BODY_FILL}\" stroke=\"{BODY_STROKE}\" stroke-width=\"0.012\""),
    );

    for (i, plank) in planks.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let (upper, lower) = plank.as_halfspaces();
        let slab = frame_body
            .intersect_halfspace(upper)
            .intersect_halfspace(lower);
        let vertices = slab.vertices_2d().map_err(|e| e.to_string())?;
        if vertices.len() >= 3 {
            push_polygon(
                &mut out,
                &polygon_points(&vertices),
                &format!(
                    "fill=\"{color}\" fill-opacity=\"0.30\" stroke=\"{color}\" stroke-width=\"0.008\""
                ),
            );
        }
    }

    match step {
        None => {
            let cells = residual_cells(body, planks, params).map_err(|e| e.to_string())?;
            for cell in &cells {
                if !(cell.strict_radius > params.tol) {
                    continue;
                }
                let vertices = cell.closure.vertices_2d().map_err(|e| e.to_string())?;
                if vertices.len() >= 3 {
                    push_polygon(
                        &mut out,
                        &polygon_points(&vertices),
                        &format!(
                            "fill=\"none\" stroke=\"{CELL_STROKE}\" stroke-width=\"0.010\" stroke-dasharray=\"0.03,0.03\""
                        ),
                    );
                }
                if let Some(w) = &cell.witness {
                    out.push_str(&format!(
                        "  <circle cx=\"{}\" cy=\"{}\" r=\"0.02\" fill=\"{CELL_STROKE}\"/>\n",
                        fmt(w.coords[0].to_f64()),
                        fmt(-w.coords[1].to_f64()),
                    ));
                }
            }
        }
        Some(step) => {
            let before = step.body_before.vertices_2d().map_err(|e| e.to_string())?;
            if before.len() >= 3 {
                push_polygon(
                    &mut out,
                    &polygon_points(&before),
                    &format!(
                        "fill=\"none\" stroke=\"{STEP_BEFORE_STROKE}\" stroke-width=\"0.014\""
                    ),
                );
            }
            if !step.body_after.is_empty() {
                let after = step.body_after.vertices_2d().map_err(|e| e.to_string())?;
                if after.len() >= 3 {
                    push_polygon(
                        &mut out,
                        &polygon_points(&after),
                        &format!(
                            "fill=\"none\" stroke=\"{STEP_AFTER_STROKE}\" stroke-width=\"0.014\" stroke-dasharray=\"0.05,0.02\""
                        ),
                    );
                }
            }
            if let Some(witness) = &step.dilation {
                let dilated = step.body_before.dilate_about(&witness.p, &witness.rho);
                let vertices = dilated.vertices_2d().map_err(|e| e.to_string())?;
                if vertices.len() >= 3 {
                    push_polygon(
                        &mut out,
                        &polygon_points(&vertices),
                        &format!(
                            "fill=\"{DILATION_FILL}\" fill-opacity=\"0.25\" stroke=\"{DILATION_FILL}\" stroke-width=\"0.010\""
                        ),
                    );
                }
                for (label, h) in [("H1", &witness.h1), ("H2", &witness.h2)] {
                    let n = (h.normal.coords[0].to_f64(), h.normal.coords[1].to_f64());
                    if let Some((a, b)) = frame.clip_line(n, h.offset.to_f64()) {
                        out.push_str(&format!(
                            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{CELL_STROKE}\" stroke-width=\"0.008\" stroke-dasharray=\"0.04,0.04\"/>\n",
                            fmt(a.0),
                            fmt(-a.1),
                            fmt(b.0),
                            fmt(-b.1),
                        ));
                        let mid = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
                        out.push_str(&format!(
                            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"0.1\">{label}</text>\n",
                            fmt(mid.0 + 0.03),
                            fmt(-(mid.1 + 0.03)),
                        ));
                    }
                }
                out.push_str(&format!(
                    "  <circle cx=\"{}\" cy=\"{}\" r=\"0.025\" fill=\"{DILATION_FILL}\"/>\n",
                    fmt(witness.p.coords[0].to_f64()),
                    fmt(-witness.p.coords[1].to_f64()),
                ));
            }
        }
    }

    out.push_str("</svg>\n");
    Ok(out)
}
