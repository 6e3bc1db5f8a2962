//! Deterministic SVG drawings of bundled circular layouts.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bundling::{is_valid_bundling, BundledCrossing};
use crate::circular::{build_chord_arrangement, CyclicOrder};
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    pub width: f64,
    pub height: f64,
    pub vertex_radius: f64,
    pub bundle_color: String,
    /// `stroke-dasharray` of frame edges; empty for solid.
    pub frame_dash: String,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            width: 480.0,
            height: 480.0,
            vertex_radius: 6.0,
            bundle_color: "#f4a261".into(),
            frame_dash: "6 3".into(),
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        let ok = [self.width, self.height, self.vertex_radius]
            .iter()
            .all(|x| x.is_finite() && *x > 0.0);
        if !ok {
            return Err(Error::InvalidRenderSpec("sizes must be positive".into()));
        }
        let safe = |s: &str| s.chars().all(|c| c.is_ascii_alphanumeric() || " #.,()%".contains(c));
        if !safe(&self.bundle_color) || !safe(&self.frame_dash) {
            return Err(Error::InvalidRenderSpec("colour or dash pattern has stray characters".into()));
        }
        Ok(())
    }
}

type Pt = (f64, f64);

fn intersect(a: Pt, b: Pt, c: Pt, d: Pt) -> Pt {
    let den = (b.0 - a.0) * (d.1 - c.1) - (b.1 - a.1) * (d.0 - c.0);
    if den.abs() < 1e-12 {
        return ((a.0 + b.0 + c.0 + d.0) / 4.0, (a.1 + b.1 + c.1 + d.1) / 4.0);
    }
    let t = ((c.0 - a.0) * (d.1 - c.1) - (c.1 - a.1) * (d.0 - c.0)) / den;
    (a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Vertices on a circle, edges as chords, each bundled crossing shaded
/// (`class="bundle"`) and frame edges dashed.
pub fn render_svg(g: &Graph, order: &CyclicOrder, bundling: &[BundledCrossing], spec: &RenderSpec) -> Result<String> {
    spec.validate()?;
    let arr = build_chord_arrangement(g, order);
    if !is_valid_bundling(&arr, bundling) {
        return Err(Error::InvalidBundling("bundling does not fit the layout".into()));
    }
    let n = g.vertex_count().max(1) as f64;
    let (cx, cy) = (spec.width / 2.0, spec.height / 2.0);
    let radius = (spec.width.min(spec.height) / 2.0 - 3.0 * spec.vertex_radius).max(spec.vertex_radius);
    let pos = order.positions();
    let at = |v: usize| -> Pt {
        let angle = std::f64::consts::TAU * pos[v] as f64 / n - std::f64::consts::FRAC_PI_2;
        (cx + radius * angle.cos(), cy + radius * angle.sin())
    };
    let chord_pts = |c: usize| -> (Pt, Pt) {
        let (u, v) = g.edge(arr.label(c));
        (at(u), at(v))
    };
    let mut frames = vec![false; arr.chord_count()];
    let mut out = String::new();
    writeln!(
        out,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}" viewBox="0 0 {:.0} {:.0}">"##,
        spec.width, spec.height, spec.width, spec.height
    )
    .unwrap();
    writeln!(
        out,
        r##"<circle cx="{cx:.2}" cy="{cy:.2}" r="{radius:.2}" fill="none" stroke="#bbbbbb"/>"##
    )
    .unwrap();
    for (i, b) in bundling.iter().enumerate() {
        let b = crate::frames::ordered(&arr, b.clone());
        let (x1, x2) = (b.bundle1[0], *b.bundle1.last().unwrap());
        let (y1, y2) = (b.bundle2[0], *b.bundle2.last().unwrap());
        for c in [x1, x2, y1, y2] {
            frames[c] = true;
        }
        let meet = |p: usize, q: usize| {
            let (a, bb) = chord_pts(p);
            let (c, d) = chord_pts(q);
            intersect(a, bb, c, d)
        };
        let corners = [meet(x1, y1), meet(x1, y2), meet(x2, y2), meet(x2, y1)];
        let points: Vec<String> = corners.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        writeln!(
            out,
            r##"<polygon class="bundle" data-index="{i}" points="{}" fill="{}" fill-opacity="0.5" stroke="{}" stroke-width="{:.2}" stroke-linejoin="round"/>"##,
            points.join(" "),
            spec.bundle_color,
            spec.bundle_color,
            spec.vertex_radius
        )
        .unwrap();
    }
    for c in 0..arr.chord_count() {
        let ((x1, y1), (x2, y2)) = chord_pts(c);
        let dash = if frames[c] && !spec.frame_dash.is_empty() {
            format!(r##" stroke-dasharray="{}""##, spec.frame_dash)
        } else {
            String::new()
        };
        let class = if frames[c] { "edge frame" } else { "edge" };
        writeln!(
            out,
            r##"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="#333333" stroke-width="1.5"{dash}/>"##
        )
        .unwrap();
    }
    for &v in order.as_slice() {
        let (x, y) = at(v);
        writeln!(
            out,
            r##"<circle class="vertex" cx="{x:.2}" cy="{y:.2}" r="{:.2}" fill="#ffffff" stroke="#333333"/>"##,
            spec.vertex_radius
        )
        .unwrap();
        let (lx, ly) = (cx + (x - cx) * 1.12, cy + (y - cy) * 1.12);
        writeln!(
            out,
            r##"<text x="{lx:.2}" y="{ly:.2}" font-size="{:.1}" text-anchor="middle" dominant-baseline="middle">{}</text>"##,
            spec.vertex_radius * 2.0,
            escape(g.name(v))
        )
        .unwrap();
    }
    out.push_str("</svg>\n");
    Ok(out)
}
