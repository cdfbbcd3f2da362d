//! Static SVG views of a palette: sunburst wheel, icicle and swatch grid.
//!
//! Arc angles run counterclockwise from 3 o'clock and follow the nominal hue
//! positions, scaled so the virtual hue circle fills the full turn. Numbers
//! are printed with fixed precision so output is byte-stable.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::color_space::SrgbColor;
use crate::error::RenderError;
use crate::hierarchy::{Hierarchy, NodeId};
use crate::treecolors::{PaletteAssignment, PaletteEntry};

pub const MIN_SIZE: u32 = 64;
pub const MAX_SIZE: u32 = 4096;
pub const WARNING_STROKE: &str = "#ff00ff";
const MARGIN: f64 = 4.0;
const FULL_TURN_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Swatch,
    #[default]
    Sunburst,
    Icicle,
}

impl FromStr for Layout {
    type Err = RenderError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "swatch" => Ok(Layout::Swatch),
            "sunburst" => Ok(Layout::Sunburst),
            "icicle" => Ok(Layout::Icicle),
            _ => Err(RenderError::UnknownLayout(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderSpec {
    pub layout: Layout,
    pub size: u32,
    pub background: String,
    pub label: bool,
    /// Draw shrunk ranges so the unassigned gaps show the background.
    pub show_gaps: bool,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            layout: Layout::Sunburst,
            size: 512,
            background: "#ffffff".into(),
            label: false,
            show_gaps: false,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<SrgbColor, RenderError> {
        if !(MIN_SIZE..=MAX_SIZE).contains(&self.size) {
            return Err(RenderError::Size(self.size));
        }
        Ok(SrgbColor::from_hex(&self.background)?)
    }
}

pub fn render(h: &Hierarchy, p: &PaletteAssignment, spec: &RenderSpec) -> Result<String, RenderError> {
    match spec.layout {
        Layout::Sunburst => render_sunburst(h, p, spec),
        Layout::Icicle => render_icicle(h, p, spec),
        Layout::Swatch => render_swatch(p, spec),
    }
}

pub fn render_sunburst(h: &Hierarchy, p: &PaletteAssignment, spec: &RenderSpec) -> Result<String, RenderError> {
    let background = spec.validate()?;
    let entries = p.aligned(h).map_err(RenderError::Mismatch)?;
    let size = f64::from(spec.size);
    let c = size / 2.0;
    let ring = (c - MARGIN) / (h.max_depth() + 1) as f64;
    let scale = 360.0 / p.hue_modulus();

    let mut svg = open_svg(spec.size, spec.size, &background);
    for node in h.nodes() {
        let e = entries[node.id.index()];
        let (start, width) = extent(e, spec.show_gaps);
        let a0 = start * scale;
        let sweep = width * scale;
        let r0 = ring * node.depth as f64;
        let r1 = r0 + ring;
        let d = if sweep >= 360.0 - FULL_TURN_EPS {
            full_ring(c, r0, r1)
        } else {
            arc_segment(c, r0, r1, a0, sweep)
        };
        let _ = writeln!(
            svg,
            r#"<path d="{d}" fill="{}"{} fill-rule="evenodd" data-path="{}" data-depth="{}" data-start="{:.3}" data-extent="{:.3}"/>"#,
            e.clamped_hex,
            warning(e),
            escape(&e.path),
            node.depth,
            a0,
            sweep,
        );
        if spec.label {
            let mid = (a0 + sweep / 2.0).to_radians();
            let r = if node.depth == 0 { 0.0 } else { r0 + ring / 2.0 };
            let _ = writeln!(
                svg,
                r#"<text x="{:.3}" y="{:.3}" font-size="{:.3}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
                c + r * mid.cos(),
                c - r * mid.sin(),
                (ring / 4.0).clamp(4.0, 14.0),
                escape(&node.name),
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Rows by depth; each cell spans its share of the root range.
pub fn render_icicle(h: &Hierarchy, p: &PaletteAssignment, spec: &RenderSpec) -> Result<String, RenderError> {
    let background = spec.validate()?;
    let entries = p.aligned(h).map_err(RenderError::Mismatch)?;
    let size = f64::from(spec.size);
    let inner = size - 2.0 * MARGIN;
    let row = inner / (h.max_depth() + 1) as f64;
    let modulus = p.hue_modulus();
    let root = entries[NodeId::ROOT.index()];

    let mut svg = open_svg(spec.size, spec.size, &background);
    for node in h.nodes() {
        let e = entries[node.id.index()];
        let (start, width) = extent(e, spec.show_gaps);
        let mut offset = (start - root.slot_start).rem_euclid(modulus);
        if offset > modulus - FULL_TURN_EPS {
            offset = 0.0;
        }
        let x = MARGIN + offset / root.slot_width * inner;
        let w = width / root.slot_width * inner;
        let y = MARGIN + row * node.depth as f64;
        let _ = writeln!(
            svg,
            r#"<rect x="{x:.3}" y="{y:.3}" width="{w:.3}" height="{row:.3}" fill="{}"{} data-path="{}" data-depth="{}" data-start="{:.3}" data-extent="{:.3}"/>"#,
            e.clamped_hex,
            warning(e),
            escape(&e.path),
            node.depth,
            start,
            width,
        );
        if spec.label {
            let _ = writeln!(
                svg,
                r#"<text x="{:.3}" y="{:.3}" font-size="{:.3}" text-anchor="middle" dominant-baseline="middle">{}</text>"#,
                x + w / 2.0,
                y + row / 2.0,
                (row / 4.0).clamp(4.0, 14.0),
                escape(&node.name),
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// One tile per palette entry, in palette (pre-order) order.
pub fn render_swatch(p: &PaletteAssignment, spec: &RenderSpec) -> Result<String, RenderError> {
    let background = spec.validate()?;
    let n = p.nodes.len().max(1);
    let cols = (n as f64).sqrt().ceil() as usize;
    let rows = n.div_ceil(cols);
    let tile = f64::from(spec.size) / cols as f64;
    let height = (tile * rows as f64).round() as u32;

    let mut svg = open_svg(spec.size, height.max(1), &background);
    for (i, e) in p.nodes.iter().enumerate() {
        let x = (i % cols) as f64 * tile;
        let y = (i / cols) as f64 * tile;
        let _ = writeln!(
            svg,
            r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{}"{} data-path="{}"/>"#,
            x + 1.0,
            y + 1.0,
            tile - 2.0,
            tile - 2.0,
            e.clamped_hex,
            warning(e),
            escape(&e.path),
        );
        if spec.label {
            let font = (tile / 10.0).clamp(4.0, 14.0);
            let ink = if e.luminance > 55.0 { "#000000" } else { "#ffffff" };
            let _ = writeln!(
                svg,
                r#"<text x="{:.3}" y="{:.3}" font-size="{font:.3}" fill="{ink}" text-anchor="middle">{}</text>"#,
                x + tile / 2.0,
                y + tile / 2.0,
                escape(&e.path),
            );
            let _ = writeln!(
                svg,
                r#"<text x="{:.3}" y="{:.3}" font-size="{font:.3}" fill="{ink}" text-anchor="middle">{}</text>"#,
                x + tile / 2.0,
                y + tile / 2.0 + font * 1.2,
                e.clamped_hex,
            );
        }
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

fn extent(e: &PaletteEntry, show_gaps: bool) -> (f64, f64) {
    if show_gaps {
        (e.range_start, e.range_width)
    } else {
        (e.slot_start, e.slot_width)
    }
}

fn warning(e: &PaletteEntry) -> String {
    if e.in_gamut {
        String::new()
    } else {
        format!(r#" stroke="{WARNING_STROKE}" stroke-width="1" class="out-of-gamut""#)
    }
}

fn open_svg(width: u32, height: u32, background: &SrgbColor) -> String {
    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{width}" height="{height}" fill="{}"/>"#,
        background.to_hex()
    );
    svg
}

fn point(c: f64, r: f64, deg: f64) -> (f64, f64) {
    let t = deg * PI / 180.0;
    (c + r * t.cos(), c - r * t.sin())
}

/// Annular sector from `a0` sweeping `sweep` degrees counterclockwise.
/// With `r0 == 0` it closes to a pie wedge.
fn arc_segment(c: f64, r0: f64, r1: f64, a0: f64, sweep: f64) -> String {
    let a1 = a0 + sweep;
    let large = u8::from(sweep > 180.0);
    let (x0, y0) = point(c, r1, a0);
    let (x1, y1) = point(c, r1, a1);
    let mut d = format!("M{x0:.3},{y0:.3} A{r1:.3},{r1:.3} 0 {large} 0 {x1:.3},{y1:.3}");
    if r0 > 0.0 {
        let (x2, y2) = point(c, r0, a1);
        let (x3, y3) = point(c, r0, a0);
        let _ = write!(d, " L{x2:.3},{y2:.3} A{r0:.3},{r0:.3} 0 {large} 1 {x3:.3},{y3:.3} Z");
    } else {
        let _ = write!(d, " L{c:.3},{c:.3} Z");
    }
    d
}

/// Full disc or ring, drawn as two half circles per edge.
fn full_ring(c: f64, r0: f64, r1: f64) -> String {
    let circle = |r: f64| {
        format!(
            "M{:.3},{c:.3} A{r:.3},{r:.3} 0 1 0 {:.3},{c:.3} A{r:.3},{r:.3} 0 1 0 {:.3},{c:.3} Z",
            c + r,
            c - r,
            c + r
        )
    };
    if r0 > 0.0 {
        format!("{} {}", circle(r1), circle(r0))
    } else {
        circle(r1)
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for ch in text.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(ch),
        }
    }
    out
}

/// `(data-path, data-depth, data-start, data-extent)` for each shape in a
/// rendered sunburst or icicle. Used by tests and tooling.
pub fn shape_extents(svg: &str) -> Vec<(String, usize, f64, f64)> {
    fn attr<'a>(line: &'a str, name: &str) -> Option<&'a str> {
        let key = format!(" {name}=\"");
        let start = line.find(&key)? + key.len();
        let len = line[start..].find('"')?;
        Some(&line[start..start + len])
    }
    svg.lines()
        .filter_map(|line| {
            Some((
                attr(line, "data-path")?.to_string(),
                attr(line, "data-depth")?.parse().ok()?,
                attr(line, "data-start")?.parse().ok()?,
                attr(line, "data-extent")?.parse().ok()?,
            ))
        })
        .collect()
}
