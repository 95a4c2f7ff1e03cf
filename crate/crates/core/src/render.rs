//! Static SVG rendering of assembled structures.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use crate::assembly::StructureFile;
use crate::metrics::disc_radius;
use crate::tiles::OFFSETS;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RenderSpec {
    /// Side of one lattice cell in SVG units.
    pub cell: f64,
    /// Fill colour per tile index.
    pub palette: Vec<String>,
    /// Short marks on nonzero faces, coloured by face colour.
    pub face_ticks: bool,
    /// Outline of the density measurement disc.
    pub circle: bool,
    pub margin: f64,
}

impl Default for RenderSpec {
    fn default() -> Self {
        RenderSpec {
            cell: 10.0,
            palette: vec!["#4e79a7".into(), "#f28e2b".into()],
            face_ticks: false,
            circle: false,
            margin: 1.0,
        }
    }
}

const FACE_COLOURS: [&str; 7] = ["#000000", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Renders a structure file as an SVG document. Lattice `y` points up, so it
/// is flipped for SVG's downward axis.
pub fn render_svg(s: &StructureFile, spec: &RenderSpec) -> String {
    let c = spec.cell;
    let (mut x0, mut y0, mut x1, mut y1) = (0, 0, 0, 0);
    for p in &s.placements {
        x0 = x0.min(p.pos.0);
        y0 = y0.min(p.pos.1);
        x1 = x1.max(p.pos.0);
        y1 = y1.max(p.pos.1);
    }
    let r = disc_radius(s.placements.len().max(1));
    if spec.circle {
        let rc = r.ceil() as i32;
        x0 = x0.min(-rc);
        y0 = y0.min(-rc);
        x1 = x1.max(rc);
        y1 = y1.max(rc);
    }
    let m = spec.margin;
    let width = (x1 - x0 + 1) as f64 + 2.0 * m;
    let height = (y1 - y0 + 1) as f64 + 2.0 * m;
    // Top-left corner of cell (x, y).
    let px = |x: i32| (x - x0) as f64 * c + m * c;
    let py = |y: i32| (y1 - y) as f64 * c + m * c;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = width * c,
        h = height * c
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let tiles = &s.system;
    for p in &s.placements {
        let fill = spec.palette.get(p.tile as usize).map_or("#888888", String::as_str);
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="{c}" height="{c}" fill="{fill}" stroke="#222222" stroke-width="{}"/>"##,
            px(p.pos.0),
            py(p.pos.1),
            c * 0.05
        );
        if spec.face_ticks {
            let Some(tile) = tiles.get(p.tile as usize) else { continue };
            for dir in 0..4u8 {
                let colour = tile.face_toward(dir, p.orientation);
                if colour.is_neutral() {
                    continue;
                }
                let (dx, dy) = OFFSETS[dir as usize];
                let cx = px(p.pos.0) + c / 2.0;
                let cy = py(p.pos.1) + c / 2.0;
                let stroke = FACE_COLOURS[colour.0 as usize % FACE_COLOURS.len()];
                let _ = writeln!(
                    out,
                    r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{stroke}" stroke-width="{}"/>"#,
                    cx + dx as f64 * c * 0.2,
                    cy - dy as f64 * c * 0.2,
                    cx + dx as f64 * c * 0.45,
                    cy - dy as f64 * c * 0.45,
                    c * 0.12
                );
            }
        }
    }
    if spec.circle {
        let _ = writeln!(
            out,
            r##"<circle cx="{}" cy="{}" r="{}" fill="none" stroke="#d62728" stroke-width="{}"/>"##,
            px(0) + c / 2.0,
            py(0) + c / 2.0,
            r * c,
            c * 0.1
        );
    }
    out.push_str("</svg>\n");
    out
}
