use serde::{Deserialize, Serialize};

use super::{CompletenessRule, GameConfig, Orientation, SliceSequence, StructureShape, TileGrid};

/// A malformed structure: one connected region of member tiles that fails
/// its shape's completeness rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureViolation {
    pub shape: String,
    /// Top-left corner of the region's bounding box, grid coordinates.
    pub column: usize,
    pub row: usize,
    /// Play-order slice range `[first, last]` the region touches.
    pub first_slice: usize,
    pub last_slice: usize,
}

/// Every malformed structure in the level. An empty result means the level
/// is unbroken.
pub fn find_broken_structures(seq: &SliceSequence, config: &GameConfig) -> Vec<StructureViolation> {
    if config.structure_shapes.is_empty() || seq.is_empty() {
        return Vec::new();
    }
    if !seq.slices().iter().any(|s| config.is_structure_slice(s)) {
        return Vec::new();
    }
    let grid = seq.to_grid();
    let mut out = Vec::new();
    for shape in &config.structure_shapes {
        violations_for(&grid, shape, seq.orientation(), &mut out);
    }
    out
}

pub fn is_unbroken(seq: &SliceSequence, config: &GameConfig) -> bool {
    find_broken_structures(seq, config).is_empty()
}

fn violations_for(
    grid: &TileGrid,
    shape: &StructureShape,
    orientation: Orientation,
    out: &mut Vec<StructureViolation>,
) {
    let members = shape.member_bytes();
    let (w, h) = (grid.width(), grid.height());
    let is_member = |x: usize, y: usize| members.contains(&grid.get(x, y));
    if !grid.cells().iter().any(|c| members.contains(c)) {
        return;
    }
    let valid = match shape.rule {
        CompletenessRule::Pipe => pipe_validity(grid, &members),
        CompletenessRule::Door | CompletenessRule::Block => {
            template_validity(grid, &shape.template_rows(), &members)
        }
    };

    let mut seen = vec![false; w * h];
    let mut stack = Vec::new();
    for y0 in 0..h {
        for x0 in 0..w {
            if seen[y0 * w + x0] || !is_member(x0, y0) {
                continue;
            }
            // flood fill one 4-connected region
            let (mut min_x, mut max_x, mut min_y, mut max_y) = (x0, x0, y0, y0);
            let mut broken = false;
            seen[y0 * w + x0] = true;
            stack.push((x0, y0));
            while let Some((x, y)) = stack.pop() {
                broken |= !valid[y * w + x];
                min_x = min_x.min(x);
                max_x = max_x.max(x);
                min_y = min_y.min(y);
                max_y = max_y.max(y);
                let mut visit = |nx: usize, ny: usize| {
                    if !seen[ny * w + nx] && is_member(nx, ny) {
                        seen[ny * w + nx] = true;
                        stack.push((nx, ny));
                    }
                };
                if x > 0 {
                    visit(x - 1, y);
                }
                if x + 1 < w {
                    visit(x + 1, y);
                }
                if y > 0 {
                    visit(x, y - 1);
                }
                if y + 1 < h {
                    visit(x, y + 1);
                }
            }
            if broken {
                let (first_slice, last_slice) = match orientation {
                    Orientation::ColumnsLeftToRight => (min_x, max_x),
                    Orientation::RowsBottomToTop => (h - 1 - max_y, h - 1 - min_y),
                };
                out.push(StructureViolation {
                    shape: shape.id.clone(),
                    column: min_x,
                    row: min_y,
                    first_slice,
                    last_slice,
                });
            }
        }
    }
}

/// Local pipe rules: caps pair left/right, body tiles pair left/right and
/// sit under a body or cap tile of the same side.
fn pipe_validity(grid: &TileGrid, members: &[u8]) -> Vec<bool> {
    let [cap_l, cap_r, body_l, body_r] = [members[0], members[1], members[2], members[3]];
    let (w, h) = (grid.width(), grid.height());
    let at = |x: isize, y: isize| -> Option<u8> {
        if x < 0 || y < 0 || x as usize >= w || y as usize >= h {
            None
        } else {
            Some(grid.get(x as usize, y as usize))
        }
    };
    let mut valid = vec![true; w * h];
    for y in 0..h {
        for x in 0..w {
            let t = grid.get(x, y);
            let (xi, yi) = (x as isize, y as isize);
            let ok = if t == cap_l {
                at(xi + 1, yi) == Some(cap_r)
            } else if t == cap_r {
                at(xi - 1, yi) == Some(cap_l)
            } else if t == body_l {
                at(xi + 1, yi) == Some(body_r)
                    && matches!(at(xi, yi - 1), Some(a) if a == body_l || a == cap_l)
            } else if t == body_r {
                at(xi - 1, yi) == Some(body_l)
                    && matches!(at(xi, yi - 1), Some(a) if a == body_r || a == cap_r)
            } else {
                true
            };
            valid[y * w + x] = ok;
        }
    }
    valid
}

/// Greedy row-major cover of member tiles by non-overlapping template copies.
fn template_validity(grid: &TileGrid, template: &[Vec<u8>], members: &[u8]) -> Vec<bool> {
    let (w, h) = (grid.width(), grid.height());
    let th = template.len();
    let tw = template.first().map_or(0, Vec::len);
    let mut covered = vec![false; w * h];
    if th > 0 && tw > 0 && th <= h && tw <= w {
        for y in 0..=(h - th) {
            for x in 0..=(w - tw) {
                let fits = (0..th).all(|dy| {
                    (0..tw).all(|dx| {
                        !covered[(y + dy) * w + x + dx] && grid.get(x + dx, y + dy) == template[dy][dx]
                    })
                });
                if fits {
                    for dy in 0..th {
                        for dx in 0..tw {
                            covered[(y + dy) * w + x + dx] = true;
                        }
                    }
                }
            }
        }
    }
    grid.cells()
        .iter()
        .zip(&covered)
        .map(|(c, &cov)| cov || !members.contains(c))
        .collect()
}
