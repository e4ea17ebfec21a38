//! SVG drawings of graphs and colorings.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::chroma::{validate, Coloring, SimpleGraph};
use crate::geom::{Edge, OddGraph};

pub const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#ff7f0e", "#9467bd", "#e6c700"];
pub const OVERFLOW_GREYS: [&str; 3] = ["#404040", "#808080", "#b0b0b0"];
pub const UNCOLORED: &str = "#202020";

const WIDTH: f64 = 800.0;
const MARGIN: f64 = 20.0;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SvgError {
    #[error("coloring is not proper for this graph")]
    InvalidColoring,
    #[error("emphasized vertex {0} out of range")]
    VertexOutOfRange(usize),
}

#[derive(Clone, Debug, Default)]
pub struct RenderOptions {
    pub coloring: Option<Coloring>,
    pub emphasized: BTreeSet<usize>,
    /// Draw only edges with these lengths; `None` draws all.
    pub edge_lengths: Option<BTreeSet<u64>>,
    pub draw_edges: bool,
}

pub fn color_of(c: usize) -> &'static str {
    match PALETTE.get(c) {
        Some(p) => p,
        None => OVERFLOW_GREYS[(c - PALETTE.len()) % OVERFLOW_GREYS.len()],
    }
}

pub fn render_svg(g: &OddGraph, opts: &RenderOptions) -> Result<String, SvgError> {
    if let Some(&v) = opts.emphasized.iter().find(|&&v| v >= g.len()) {
        return Err(SvgError::VertexOutOfRange(v));
    }
    let need_edges = opts.draw_edges || opts.coloring.is_some();
    let edges: Vec<Edge> = if need_edges { g.edges() } else { Vec::new() };
    if let Some(c) = &opts.coloring {
        let sg = SimpleGraph::new(g.len(), edges.iter().map(|e| (e.u, e.v))).expect("valid edges");
        if !validate(&sg, c) {
            return Err(SvgError::InvalidColoring);
        }
    }
    let pts: Vec<(f64, f64)> = g.vertices().iter().map(|p| p.to_f64()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (i, &(x, y)) in pts.iter().enumerate() {
        if i == 0 {
            (x0, x1, y0, y1) = (x, x, y, y);
        }
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    let span = (x1 - x0).max(y1 - y0).max(1e-9);
    let k = (WIDTH - 2.0 * MARGIN) / span;
    let height = (y1 - y0) * k + 2.0 * MARGIN;
    let map = |(x, y): (f64, f64)| (MARGIN + (x - x0) * k, MARGIN + (y1 - y) * k);
    let r = (k * span / (4.0 * (g.len().max(1) as f64).sqrt())).clamp(1.5, 6.0);

    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}">"#
    )
    .unwrap();
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    if opts.draw_edges {
        writeln!(out, r##"<g stroke="#999999" stroke-width="0.5" stroke-opacity="0.6">"##).unwrap();
        for e in &edges {
            if opts.edge_lengths.as_ref().is_some_and(|s| !s.contains(&e.length)) {
                continue;
            }
            let (a, b) = (map(pts[e.u]), map(pts[e.v]));
            writeln!(out, r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/>"#, a.0, a.1, b.0, b.1).unwrap();
        }
        writeln!(out, "</g>").unwrap();
    }
    writeln!(out, r#"<g stroke="black" stroke-width="0.5">"#).unwrap();
    for (i, &p) in pts.iter().enumerate() {
        let (x, y) = map(p);
        let fill = opts.coloring.as_ref().map_or(UNCOLORED, |c| color_of(c.colors[i]));
        let radius = if opts.emphasized.contains(&i) { 2.0 * r } else { r };
        writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="{radius:.2}" fill="{fill}"/>"#).unwrap();
    }
    writeln!(out, "</g>\n</svg>").unwrap();
    Ok(out)
}
