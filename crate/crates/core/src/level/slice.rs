use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::LevelError;

/// Direction in which a grid is cut into slices. The slice order is always
/// the direction of play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// Slice `i` is column `i`, read top to bottom.
    ColumnsLeftToRight,
    /// Slice `i` is row `height - 1 - i`, read left to right.
    RowsBottomToTop,
}

/// One column or row of tiles. Cheap to clone; ordered lexicographically by
/// its tile string.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Slice(Arc<str>);

impl Slice {
    pub fn new(tiles: impl AsRef<str>) -> Self {
        Slice(Arc::from(tiles.as_ref()))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn tiles(&self) -> &[u8] {
        self.0.as_bytes()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains_any(&self, codes: &[u8]) -> bool {
        self.tiles().iter().any(|t| codes.contains(t))
    }
}

impl fmt::Debug for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for Slice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Slice {
    fn from(s: &str) -> Self {
        Slice::new(s)
    }
}

/// An ordered list of equal-length slices in play order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceSequence {
    orientation: Orientation,
    slices: Vec<Slice>,
}

impl SliceSequence {
    /// Builds a sequence, checking that every slice has the same length.
    pub fn new(orientation: Orientation, slices: Vec<Slice>) -> Result<Self, LevelError> {
        if let Some(first) = slices.first() {
            let len = first.len();
            if let Some(bad) = slices.iter().find(|s| s.len() != len) {
                return Err(LevelError::MixedSliceLength {
                    expected: len,
                    found: bad.len(),
                });
            }
        }
        Ok(SliceSequence {
            orientation,
            slices,
        })
    }

    pub fn empty(orientation: Orientation) -> Self {
        SliceSequence {
            orientation,
            slices: Vec::new(),
        }
    }

    /// Convenience constructor from string slices; panics on ragged input.
    pub fn from_strs(orientation: Orientation, slices: &[&str]) -> Self {
        Self::new(orientation, slices.iter().map(|s| Slice::new(s)).collect())
            .expect("slices must share one length")
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn slices(&self) -> &[Slice] {
        &self.slices
    }

    pub fn into_slices(self) -> Vec<Slice> {
        self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    /// Length of each slice, or `None` for an empty sequence.
    pub fn slice_len(&self) -> Option<usize> {
        self.slices.first().map(Slice::len)
    }

    pub fn first_n(&self, n: usize) -> &[Slice] {
        &self.slices[..n.min(self.slices.len())]
    }

    pub fn last_n(&self, n: usize) -> &[Slice] {
        &self.slices[self.slices.len().saturating_sub(n)..]
    }

    /// Same orientation, different slices.
    pub fn with_slices(&self, slices: Vec<Slice>) -> Result<Self, LevelError> {
        SliceSequence::new(self.orientation, slices)
    }
}

/// In-order concatenation. Empty parts are ignored entirely, so they act as
/// the identity regardless of orientation.
pub fn concatenate<'a, I>(parts: I) -> Result<SliceSequence, LevelError>
where
    I: IntoIterator<Item = &'a SliceSequence>,
{
    let mut orientation = None;
    let mut fallback = None;
    let mut slice_len = None;
    let mut slices = Vec::new();
    for part in parts {
        fallback.get_or_insert(part.orientation);
        if part.is_empty() {
            continue;
        }
        match orientation {
            None => orientation = Some(part.orientation),
            Some(o) if o != part.orientation => return Err(LevelError::MixedOrientation),
            Some(_) => {}
        }
        let len = part.slice_len().unwrap_or(0);
        match slice_len {
            None => slice_len = Some(len),
            Some(l) if l != len => {
                return Err(LevelError::MixedSliceLength {
                    expected: l,
                    found: len,
                })
            }
            Some(_) => {}
        }
        slices.extend_from_slice(&part.slices);
    }
    Ok(SliceSequence {
        orientation: orientation
            .or(fallback)
            .unwrap_or(Orientation::ColumnsLeftToRight),
        slices,
    })
}

/// Concatenates raw slice lists that are already known to share a length.
pub fn join_slices(orientation: Orientation, parts: &[&[Slice]]) -> SliceSequence {
    let total = parts.iter().map(|p| p.len()).sum();
    let mut slices = Vec::with_capacity(total);
    for p in parts {
        slices.extend_from_slice(p);
    }
    SliceSequence {
        orientation,
        slices,
    }
}
