//! Chord-diagram SVG output in the style of lamination-builder figures.
//!
//! The unit circle sits centred in a `[-1.15, 1.15]^2` view box; angle `t` is
//! drawn at `(cos 2πt, sin 2πt)` with zero at the right and counterclockwise
//! positive (the y axis is flipped for SVG). Output is a pure function of
//! the document and options.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt::Write;

use crate::circle::Angle;
use crate::error::{LamError, Result};
use crate::lamination::Lamination;

use super::json::LamDocument;

/// Index into a document's `leaves` or `polygons`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementId {
    Leaf(usize),
    Polygon(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Style {
    pub circle: String,
    /// Depth-0 leaves.
    pub generator: String,
    pub pullback: String,
    pub critical: String,
    pub polygon_fill: String,
    pub highlight: String,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            circle: "#000000".into(),
            generator: "#c0392b".into(),
            pullback: "#1f3a93".into(),
            critical: "#7f8c8d".into(),
            polygon_fill: "#f5cba7".into(),
            highlight: "#27ae60".into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenderOptions {
    pub width_px: u32,
    pub draw_labels: bool,
    pub fill_polygons: bool,
    pub highlight: BTreeSet<ElementId>,
    pub style: Style,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            width_px: 600,
            draw_labels: false,
            fill_polygons: true,
            highlight: BTreeSet::new(),
            style: Style::default(),
        }
    }
}

/// Six decimals, with negative zero folded into zero.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

fn point(t: &Angle, r: f64) -> (String, String) {
    let th = TAU * t.to_f64();
    (num(r * th.cos()), num(-r * th.sin()))
}

/// Stroke width for a leaf of the given depth, thinning with depth.
fn stroke_width(depth: Option<usize>) -> String {
    let t = depth.unwrap_or(0).min(8) as i32;
    num((0.008 * 0.8f64.powi(t)).max(0.002))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render_svg(doc: &LamDocument, opts: &RenderOptions) -> Result<String> {
    if opts.width_px == 0 {
        return Err(LamError::InvalidArgument("width_px must be positive".into()));
    }
    let mut doc = doc.clone();
    doc.canonicalize();
    let st = &opts.style;
    let mut out = String::new();
    let w = opts.width_px;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w}" viewBox="-1.15 -1.15 2.3 2.3">"#
    );
    for (i, p) in doc.polygons.iter().enumerate() {
        let pts: Vec<String> = p
            .vertices()
            .iter()
            .map(|v| {
                let (x, y) = point(v, 1.0);
                format!("{x},{y}")
            })
            .collect();
        let hl = opts.highlight.contains(&ElementId::Polygon(i));
        let fill = match (hl, opts.fill_polygons) {
            (true, _) => st.highlight.as_str(),
            (false, true) => st.polygon_fill.as_str(),
            (false, false) => "none",
        };
        let _ = writeln!(
            out,
            r#"<polygon points="{}" fill="{fill}" fill-opacity="0.6" stroke="none"/>"#,
            pts.join(" ")
        );
    }
    for (i, l) in doc.leaves.iter().enumerate() {
        let (x1, y1) = point(l.leaf.a(), 1.0);
        let (x2, y2) = point(l.leaf.b(), 1.0);
        let color = if opts.highlight.contains(&ElementId::Leaf(i)) {
            &st.highlight
        } else if l.depth.unwrap_or(0) == 0 {
            &st.generator
        } else {
            &st.pullback
        };
        let _ = writeln!(
            out,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{color}" stroke-width="{}"/>"#,
            stroke_width(l.depth)
        );
    }
    for c in doc.portrait.iter().flatten() {
        let (x1, y1) = point(c.a(), 1.0);
        let (x2, y2) = point(c.b(), 1.0);
        let _ = writeln!(
            out,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{}" stroke-width="0.006" stroke-dasharray="0.04 0.03"/>"#,
            st.critical
        );
    }
    let _ = writeln!(
        out,
        r#"<circle cx="0" cy="0" r="1" fill="none" stroke="{}" stroke-width="0.01"/>"#,
        st.circle
    );
    if opts.draw_labels {
        // Endpoints of generators and polygon vertices, once each.
        let labelled: BTreeSet<&Angle> = doc
            .leaves
            .iter()
            .filter(|l| l.depth.unwrap_or(0) == 0)
            .flat_map(|l| l.leaf.endpoints())
            .chain(doc.polygons.iter().flat_map(|p| p.vertices()))
            .collect();
        for t in labelled {
            let (x, y) = point(t, 1.08);
            let _ = writeln!(
                out,
                r#"<text x="{x}" y="{y}" font-size="0.06" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
                escape(&t.to_string())
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

pub fn render_lamination(lam: &Lamination, opts: &RenderOptions) -> Result<String> {
    render_svg(&LamDocument::from_lamination(lam), opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::leaf::Leaf;
    use crate::pullback::canonical_mac_lamination;

    #[test]
    fn empty_is_just_the_circle() {
        let svg = render_svg(&LamDocument::new(2), &RenderOptions::default()).unwrap();
        let body: Vec<&str> = svg.lines().filter(|l| !l.starts_with("<svg") && *l != "</svg>").collect();
        assert_eq!(body.len(), 1);
        assert!(body[0].starts_with("<circle"));
    }

    #[test]
    fn deterministic_and_oriented() {
        let r = canonical_mac_lamination(2, &Leaf::from_fracs(1, 7, 4, 7), 4).unwrap();
        let doc = LamDocument::from_pullback(&r);
        let opts = RenderOptions {
            draw_labels: true,
            ..Default::default()
        };
        let a = render_svg(&doc, &opts).unwrap();
        assert_eq!(a, render_svg(&doc, &opts).unwrap());
        assert_eq!(a.matches("stroke-dasharray").count(), 1);
        // 1/4 sits at the top of the picture.
        assert_eq!(point(&Angle::new(1, 4), 1.0), ("0.000000".into(), "-1.000000".into()));
        assert!(render_svg(&doc, &RenderOptions { width_px: 0, ..Default::default() }).is_err());
    }
}
