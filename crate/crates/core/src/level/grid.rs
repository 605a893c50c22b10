use super::{GameConfig, LevelError, Orientation, Slice, SliceSequence};

/// Rectangular grid of single-byte tile codes, row-major, row 0 at the top.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TileGrid {
    width: usize,
    height: usize,
    cells: Vec<u8>,
}

impl TileGrid {
    pub fn new(width: usize, height: usize, cells: Vec<u8>) -> Result<Self, LevelError> {
        if cells.len() != width * height {
            return Err(LevelError::CellCount {
                expected: width * height,
                found: cells.len(),
            });
        }
        Ok(TileGrid {
            width,
            height,
            cells,
        })
    }

    /// Parses a text grid without checking tiles against an alphabet.
    pub fn from_text(text: &str) -> Result<Self, LevelError> {
        let lines: Vec<&str> = text
            .lines()
            .map(|l| l.strip_suffix('\r').unwrap_or(l))
            .collect();
        let width = lines.first().map_or(0, |l| l.len());
        let mut cells = Vec::with_capacity(width * lines.len());
        for (row, line) in lines.iter().enumerate() {
            if line.len() != width {
                return Err(LevelError::RaggedInput {
                    row,
                    expected: width,
                    found: line.len(),
                });
            }
            if let Some(c) = line.chars().find(|c| !c.is_ascii()) {
                return Err(LevelError::UnknownTile { tile: c, row });
            }
            cells.extend_from_slice(line.as_bytes());
        }
        Ok(TileGrid {
            width,
            height: lines.len(),
            cells,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.cells[y * self.width + x]
    }

    pub fn set(&mut self, x: usize, y: usize, tile: u8) {
        self.cells[y * self.width + x] = tile;
    }

    pub fn row(&self, y: usize) -> &[u8] {
        &self.cells[y * self.width..(y + 1) * self.width]
    }

    /// One line per row, each terminated by `\n`.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.width + 1) * self.height);
        for y in 0..self.height {
            // cells are validated ASCII
            out.push_str(std::str::from_utf8(self.row(y)).expect("ascii tiles"));
            out.push('\n');
        }
        out
    }

    pub fn to_slices(&self, orientation: Orientation) -> SliceSequence {
        let slices = match orientation {
            Orientation::ColumnsLeftToRight => (0..self.width)
                .map(|x| {
                    let col: String = (0..self.height).map(|y| self.get(x, y) as char).collect();
                    Slice::new(col)
                })
                .collect(),
            Orientation::RowsBottomToTop => (0..self.height)
                .rev()
                .map(|y| Slice::new(std::str::from_utf8(self.row(y)).expect("ascii tiles")))
                .collect(),
        };
        SliceSequence::new(orientation, slices).expect("grid slices share one length")
    }

    pub fn from_slices(seq: &SliceSequence) -> TileGrid {
        let n = seq.len();
        let m = seq.slice_len().unwrap_or(0);
        match seq.orientation() {
            Orientation::ColumnsLeftToRight => {
                let (width, height) = (n, m);
                let mut cells = vec![0u8; width * height];
                for (x, s) in seq.slices().iter().enumerate() {
                    for (y, &t) in s.tiles().iter().enumerate() {
                        cells[y * width + x] = t;
                    }
                }
                TileGrid {
                    width,
                    height,
                    cells,
                }
            }
            Orientation::RowsBottomToTop => {
                let (width, height) = (m, n);
                let mut cells = Vec::with_capacity(width * height);
                for s in seq.slices().iter().rev() {
                    cells.extend_from_slice(s.tiles());
                }
                TileGrid {
                    width,
                    height,
                    cells,
                }
            }
        }
    }
}

/// Parses a VGLC-style text level and checks every tile against the game's
/// alphabet.
pub fn parse_level(text: &str, config: &GameConfig) -> Result<TileGrid, LevelError> {
    let grid = TileGrid::from_text(text)?;
    for (i, &t) in grid.cells.iter().enumerate() {
        if !config.has_tile(t) {
            return Err(LevelError::UnknownTile {
                tile: t as char,
                row: i / grid.width.max(1),
            });
        }
    }
    Ok(grid)
}

pub fn to_slices(grid: &TileGrid, config: &GameConfig) -> SliceSequence {
    grid.to_slices(config.orientation)
}

impl SliceSequence {
    pub fn to_grid(&self) -> TileGrid {
        TileGrid::from_slices(self)
    }
}
