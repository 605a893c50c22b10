use std::fmt::Write;

use crate::agents;
use crate::level::{pad_level, GameConfig, Orientation, SliceSequence, TileTag};

const CELL: usize = 16;

/// Overlays for [`render_svg`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Annotations {
    /// Slices of game padding at each end of the drawn level.
    pub padding: (usize, usize),
    /// `(offset, length)` of each linker, in slices from the start of the
    /// unpadded level.
    pub linkers: Vec<(usize, usize)>,
    /// Agent path as grid `(column, row)` cells of the drawn level.
    pub path: Vec<(usize, usize)>,
}

/// The level as text, one grid row per line.
pub fn render_text(level: &SliceSequence) -> String {
    level.to_grid().to_text()
}

fn fill(tile: u8, config: &GameConfig) -> Option<&'static str> {
    let has = |t| config.has_tag(tile, t);
    let color = if has(TileTag::StartMarker) {
        "#00a0a0"
    } else if has(TileTag::Portal) || has(TileTag::EndMarker) {
        "#3050e0"
    } else if has(TileTag::Hazard) {
        "#d03030"
    } else if has(TileTag::Enemy) {
        "#a020a0"
    } else if has(TileTag::Food) {
        "#20a020"
    } else if has(TileTag::Switch) {
        "#e0b000"
    } else if has(TileTag::Door) {
        "#8a5a20"
    } else if has(TileTag::PipePart) {
        "#10a040"
    } else if has(TileTag::MovingPlatform) {
        "#6090c0"
    } else if has(TileTag::PassablePlatform) {
        "#909090"
    } else if has(TileTag::Solid) {
        "#6b4f2a"
    } else if has(TileTag::Empty) {
        return None;
    } else {
        "#f0c040"
    };
    Some(color)
}

/// `(x, y, w, h)` in cells of a run of slices.
fn slice_rect(orientation: Orientation, w: usize, h: usize, offset: usize, len: usize) -> (usize, usize, usize, usize) {
    match orientation {
        Orientation::ColumnsLeftToRight => (offset, 0, len, h),
        Orientation::RowsBottomToTop => (0, h - offset - len, w, len),
    }
}

/// Schematic SVG: one square per non-empty tile, tan padding bands, a
/// magenta box per linker and the agent path as a red polyline.
pub fn render_svg(level: &SliceSequence, config: &GameConfig, ann: &Annotations) -> String {
    let grid = level.to_grid();
    let (w, h) = (grid.width(), grid.height());
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w * CELL,
        h * CELL,
        w * CELL,
        h * CELL
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(s, r#"<g class="tiles">"#);
    for y in 0..h {
        for x in 0..w {
            let t = grid.get(x, y);
            if let Some(color) = fill(t, config) {
                let _ = writeln!(
                    s,
                    r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{color}"><title>{}</title></rect>"#,
                    x * CELL,
                    y * CELL,
                    t as char
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");

    let n = level.len();
    let (pad_start, pad_end) = ann.padding;
    let rect = |s: &mut String, class: &str, (x, y, rw, rh): (usize, usize, usize, usize), style: &str| {
        let _ = writeln!(
            s,
            r#"<rect class="{class}" x="{}" y="{}" width="{}" height="{}" {style}/>"#,
            x * CELL,
            y * CELL,
            rw * CELL,
            rh * CELL
        );
    };
    let tan = r##"fill="#d2b48c" fill-opacity="0.45""##;
    if pad_start > 0 {
        rect(&mut s, "padding", slice_rect(level.orientation(), w, h, 0, pad_start), tan);
    }
    if pad_end > 0 {
        rect(&mut s, "padding", slice_rect(level.orientation(), w, h, n - pad_end, pad_end), tan);
    }
    for &(off, len) in &ann.linkers {
        rect(
            &mut s,
            "linker",
            slice_rect(level.orientation(), w, h, pad_start + off, len),
            r##"fill="none" stroke="#ff00ff" stroke-width="3""##,
        );
    }
    if !ann.path.is_empty() {
        let points: Vec<String> = ann
            .path
            .iter()
            .map(|&(x, y)| format!("{},{}", x * CELL + CELL / 2, y * CELL + CELL / 2))
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline class="path" points="{}" fill="none" stroke="#ff0000" stroke-width="2"/>"##,
            points.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

/// Pads `level`, runs the game's agent on it and returns the padded level
/// with padding, linker and path overlays ready for [`render_svg`].
pub fn annotate(level: &SliceSequence, config: &GameConfig, linkers: &[(usize, usize)]) -> (SliceSequence, Annotations) {
    let padded = pad_level(level, config);
    let path = agents::check(&padded, config, None)
        .map(|r| r.path.iter().map(|p| p.position()).collect())
        .unwrap_or_default();
    let ann = Annotations {
        padding: (config.padding.start.len(), config.padding.end.len()),
        linkers: linkers.to_vec(),
        path,
    };
    (padded, ann)
}
