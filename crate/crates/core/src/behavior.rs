//! Behavioral characteristics and linker-quality metrics.
//!
//! All values live in `[0, 1]`. Mario reports (linearity, leniency); Icarus
//! and DungeonGrams report (density, leniency).

use serde::{Deserialize, Serialize};

use crate::level::{BcKind, GameConfig, LeniencyFeature, Orientation, Slice, SliceSequence, TileTag};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BcVector {
    pub kind: BcKind,
    pub values: [f64; 2],
}

impl BcVector {
    pub fn new(kind: BcKind, a: f64, b: f64) -> Self {
        BcVector { kind, values: [a, b] }
    }

    /// Component-wise mean of two vectors of the same kind.
    pub fn mean(&self, other: &BcVector) -> BcVector {
        debug_assert_eq!(self.kind, other.kind);
        BcVector {
            kind: self.kind,
            values: [
                (self.values[0] + other.values[0]) / 2.0,
                (self.values[1] + other.values[1]) / 2.0,
            ],
        }
    }
}

/// Height of the highest solid tile in each column (0 for an empty column),
/// for column-sliced levels.
fn top_heights(slices: &[Slice], config: &GameConfig) -> Vec<f64> {
    slices
        .iter()
        .map(|s| {
            let h = s.len();
            s.tiles()
                .iter()
                .position(|&t| config.has_tag(t, TileTag::Solid))
                .map_or(0.0, |row| (h - row) as f64)
        })
        .collect()
}

/// 1 − mean absolute residual of a least-squares line through the column
/// top heights, divided by the grid height.
pub fn linearity(slices: &[Slice], config: &GameConfig) -> f64 {
    let Some(height) = slices.first().map(Slice::len) else {
        return 1.0;
    };
    let ys = top_heights(slices, config);
    1.0 - mean_abs_residual(&ys) / height as f64
}

fn mean_abs_residual(ys: &[f64]) -> f64 {
    let n = ys.len() as f64;
    if ys.len() < 2 {
        return 0.0;
    }
    let mx = (n - 1.0) / 2.0;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, &y) in ys.iter().enumerate() {
        let dx = i as f64 - mx;
        sxy += dx * (y - my);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let total: f64 = ys
        .iter()
        .enumerate()
        .map(|(i, &y)| (y - (intercept + slope * i as f64)).abs())
        .sum();
    let r = total / n;
    // floating noise on collinear inputs
    if r < 1e-12 {
        0.0
    } else {
        r
    }
}

/// Fraction of solid tiles. Empty input has density 0.
pub fn density(slices: &[Slice], config: &GameConfig) -> f64 {
    let (mut solid, mut total) = (0usize, 0usize);
    for s in slices {
        total += s.len();
        solid += s.tiles().iter().filter(|&&t| config.has_tag(t, TileTag::Solid)).count();
    }
    if total == 0 {
        0.0
    } else {
        solid as f64 / total as f64
    }
}

/// Weighted feature count for the game's leniency features.
pub fn hazard_count(slices: &[Slice], config: &GameConfig) -> f64 {
    let mut count = 0.0;
    for f in &config.leniency_features {
        match *f {
            LeniencyFeature::GapColumn { weight } => {
                if config.orientation == Orientation::ColumnsLeftToRight {
                    let gaps = slices
                        .iter()
                        .filter(|s| {
                            s.tiles()
                                .last()
                                .is_some_and(|&t| !config.has_tag(t, TileTag::Solid))
                        })
                        .count();
                    count += weight * gaps as f64;
                }
            }
            LeniencyFeature::Tile { tag, weight } => {
                let n: usize = slices
                    .iter()
                    .map(|s| s.tiles().iter().filter(|&&t| config.has_tag(t, tag)).count())
                    .sum();
                count += weight * n as f64;
            }
        }
    }
    count
}

/// 1 − weighted hazard count ÷ slice count, clamped to `[0, 1]`.
pub fn leniency(slices: &[Slice], config: &GameConfig) -> f64 {
    if slices.is_empty() {
        return 1.0;
    }
    (1.0 - hazard_count(slices, config) / slices.len() as f64).clamp(0.0, 1.0)
}

/// The game's BC pair for a slice list.
pub fn bc(slices: &[Slice], config: &GameConfig) -> BcVector {
    let first = match config.bc {
        BcKind::LinearityLeniency => linearity(slices, config),
        BcKind::DensityLeniency => density(slices, config),
    };
    BcVector::new(config.bc, first.clamp(0.0, 1.0), leniency(slices, config))
}

pub fn bc_of(seq: &SliceSequence, config: &GameConfig) -> BcVector {
    bc(seq.slices(), config)
}

/// RMSE between `linker` and the mean of the two segment vectors.
pub fn linker_rmse(linker: &BcVector, start: &BcVector, end: &BcVector) -> f64 {
    rmse(&linker.values, &start.mean(end).values)
}

pub fn rmse(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    let s: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (s / 2.0).sqrt()
}

pub fn euclidean(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Euclidean distance between the BCs of the concatenated and linked levels.
pub fn d_bc(concatenated: &[Slice], linked: &[Slice], config: &GameConfig) -> f64 {
    euclidean(&bc(concatenated, config).values, &bc(linked, config).values)
}
