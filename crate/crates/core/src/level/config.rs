use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{LevelError, Orientation, Slice, SliceSequence};
use crate::agents::AgentParams;

/// Semantic tags a tile code can carry. A code may carry several.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TileTag {
    Solid,
    Empty,
    Hazard,
    Enemy,
    Food,
    Switch,
    Portal,
    Door,
    PipePart,
    PassablePlatform,
    MovingPlatform,
    StartMarker,
    EndMarker,
}

impl TileTag {
    #[inline]
    pub const fn bit(self) -> u16 {
        1 << self as u16
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TileDef {
    pub code: char,
    #[serde(default)]
    pub name: String,
    pub tags: Vec<TileTag>,
}

/// Built-in well-formedness rule for a multi-tile structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CompletenessRule {
    /// Two columns wide, any height: a left/right cap row on top of
    /// left/right body rows. `member_tiles` are `[cap_left, cap_right,
    /// body_left, body_right]`.
    Pipe,
    /// Every member tile must be covered by a full, non-overlapping copy of
    /// `template` (a single-tile door template defaults to a solid
    /// `width`x`height` block).
    Door,
    Block,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureShape {
    pub id: String,
    pub width: usize,
    pub height: usize,
    pub member_tiles: Vec<char>,
    pub rule: CompletenessRule,
    /// Rows of the structure, top row first. Required for `block`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub template: Option<Vec<String>>,
}

impl StructureShape {
    pub fn member_bytes(&self) -> Vec<u8> {
        self.member_tiles.iter().map(|&c| c as u8).collect()
    }

    /// Template rows, top row first, falling back to a filled rectangle of
    /// the first member tile.
    pub fn template_rows(&self) -> Vec<Vec<u8>> {
        match &self.template {
            Some(rows) => rows.iter().map(|r| r.as_bytes().to_vec()).collect(),
            None => {
                let t = self.member_tiles.first().copied().unwrap_or('?') as u8;
                vec![vec![t; self.width]; self.height]
            }
        }
    }

    /// Extent of the structure along the play axis.
    pub fn extent_along(&self, orientation: Orientation) -> usize {
        match orientation {
            Orientation::ColumnsLeftToRight => self.width,
            Orientation::RowsBottomToTop => self.height,
        }
    }
}

/// Which pair of behavioral characteristics a game reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BcKind {
    LinearityLeniency,
    DensityLeniency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "feature", rename_all = "snake_case")]
pub enum LeniencyFeature {
    /// A column whose bottom tile is not solid.
    GapColumn { weight: f64 },
    /// Every tile carrying `tag`.
    Tile { tag: TileTag, weight: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Padding {
    /// Slices placed before the level, in play order.
    pub start: Vec<String>,
    /// Slices placed after the level, in play order.
    pub end: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthPresets {
    /// Depth six, the same for every game.
    pub classic: usize,
    /// Per-game depth used by default.
    pub tuned: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthPreset {
    Classic,
    Tuned,
}

fn is_zero(n: &usize) -> bool {
    *n == 0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct GameConfigSpec {
    name: String,
    orientation: Orientation,
    alphabet: Vec<TileDef>,
    #[serde(default)]
    structure_shapes: Vec<StructureShape>,
    ngram_order: usize,
    segment_length: usize,
    link_search_max_depth: usize,
    depth_presets: Option<DepthPresets>,
    padding: Padding,
    #[serde(default)]
    linking_slices: Option<Vec<String>>,
    agent_params: AgentParams,
    bc: BcKind,
    #[serde(default)]
    leniency_features: Vec<LeniencyFeature>,
    #[serde(default)]
    grid_bin_size: Option<f64>,
    #[serde(default, skip_serializing_if = "is_zero")]
    segment_end_clearance: usize,
}

/// Declarative description of one game. Load with [`GameConfig::from_json`];
/// the tile lookup table is built and every invariant checked on load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GameConfigSpec", into = "GameConfigSpec")]
pub struct GameConfig {
    pub name: String,
    pub orientation: Orientation,
    pub alphabet: Vec<TileDef>,
    pub structure_shapes: Vec<StructureShape>,
    pub ngram_order: usize,
    pub segment_length: usize,
    pub link_search_max_depth: usize,
    pub depth_presets: DepthPresets,
    pub padding: Padding,
    pub linking_slices: Option<Vec<String>>,
    pub agent_params: AgentParams,
    pub bc: BcKind,
    pub leniency_features: Vec<LeniencyFeature>,
    /// MAP-Elites bin width along each BC axis, used for neighbor pairing.
    pub grid_bin_size: Option<f64>,
    /// Sampled segments must begin and end with at least this many
    /// all-empty slices.
    pub segment_end_clearance: usize,
    tags: Box<[u16; 256]>,
    structure_bytes: Vec<u8>,
}

impl TryFrom<GameConfigSpec> for GameConfig {
    type Error = LevelError;

    fn try_from(spec: GameConfigSpec) -> Result<Self, LevelError> {
        let mut tags = Box::new([0u16; 256]);
        for def in &spec.alphabet {
            if !def.code.is_ascii() || def.code == '\n' {
                return Err(LevelError::InvalidConfig(format!(
                    "tile code {:?} must be a printable ASCII character",
                    def.code
                )));
            }
            let entry = &mut tags[def.code as usize];
            // bit 15 marks membership so tag-less codes still count
            *entry |= 1 << 15;
            for t in &def.tags {
                *entry |= t.bit();
            }
        }
        let mut structure_bytes = Vec::new();
        for shape in &spec.structure_shapes {
            for &c in &shape.member_tiles {
                if !c.is_ascii() || tags[c as usize] == 0 {
                    return Err(LevelError::InvalidConfig(format!(
                        "structure {} uses tile {c:?} outside the alphabet",
                        shape.id
                    )));
                }
                structure_bytes.push(c as u8);
            }
            if shape.rule == CompletenessRule::Pipe && shape.member_tiles.len() != 4 {
                return Err(LevelError::InvalidConfig(format!(
                    "pipe structure {} needs exactly 4 member tiles",
                    shape.id
                )));
            }
            if shape.rule == CompletenessRule::Block && shape.template.is_none() {
                return Err(LevelError::InvalidConfig(format!(
                    "block structure {} needs a template",
                    shape.id
                )));
            }
        }
        structure_bytes.sort_unstable();
        structure_bytes.dedup();
        if spec.ngram_order < 2 {
            return Err(LevelError::InvalidConfig("ngram_order must be >= 2".into()));
        }
        if spec.link_search_max_depth < 1 {
            return Err(LevelError::InvalidConfig(
                "link_search_max_depth must be >= 1".into(),
            ));
        }
        if spec.segment_length < spec.ngram_order {
            return Err(LevelError::InvalidConfig(
                "segment_length must be >= ngram_order".into(),
            ));
        }
        let config = GameConfig {
            name: spec.name,
            orientation: spec.orientation,
            alphabet: spec.alphabet,
            structure_shapes: spec.structure_shapes,
            ngram_order: spec.ngram_order,
            segment_length: spec.segment_length,
            link_search_max_depth: spec.link_search_max_depth,
            depth_presets: spec.depth_presets.unwrap_or(DepthPresets {
                classic: 6,
                tuned: spec.link_search_max_depth,
            }),
            padding: spec.padding,
            linking_slices: spec.linking_slices,
            agent_params: spec.agent_params,
            bc: spec.bc,
            leniency_features: spec.leniency_features,
            grid_bin_size: spec.grid_bin_size,
            segment_end_clearance: spec.segment_end_clearance,
            tags,
            structure_bytes,
        };
        let check = |s: &String, what: &str| -> Result<(), LevelError> {
            match s.bytes().find(|&b| !config.has_tile(b)) {
                Some(b) => Err(LevelError::InvalidConfig(format!(
                    "{what} slice {s:?} uses tile {:?} outside the alphabet",
                    b as char
                ))),
                None => Ok(()),
            }
        };
        for s in config.padding.start.iter().chain(&config.padding.end) {
            check(s, "padding")?;
        }
        for s in config.linking_slices.iter().flatten() {
            check(s, "linking")?;
        }
        config.agent_params.validate()?;
        Ok(config)
    }
}

impl From<GameConfig> for GameConfigSpec {
    fn from(c: GameConfig) -> Self {
        GameConfigSpec {
            name: c.name,
            orientation: c.orientation,
            alphabet: c.alphabet,
            structure_shapes: c.structure_shapes,
            ngram_order: c.ngram_order,
            segment_length: c.segment_length,
            link_search_max_depth: c.link_search_max_depth,
            depth_presets: Some(c.depth_presets),
            padding: c.padding,
            linking_slices: c.linking_slices,
            agent_params: c.agent_params,
            bc: c.bc,
            leniency_features: c.leniency_features,
            grid_bin_size: c.grid_bin_size,
            segment_end_clearance: c.segment_end_clearance,
        }
    }
}

impl GameConfig {
    pub fn from_json(text: &str) -> Result<Self, LevelError> {
        serde_json::from_str(text).map_err(|e| LevelError::InvalidConfig(e.to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, LevelError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| LevelError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    #[inline]
    pub fn has_tile(&self, code: u8) -> bool {
        self.tags[code as usize] != 0
    }

    #[inline]
    pub fn has_tag(&self, code: u8, tag: TileTag) -> bool {
        self.tags[code as usize] & tag.bit() != 0
    }

    /// Tag bitmask for a tile code (see [`TileTag::bit`]).
    #[inline]
    pub fn tag_bits(&self, code: u8) -> u16 {
        self.tags[code as usize]
    }

    pub fn codes_with(&self, tag: TileTag) -> Vec<u8> {
        self.alphabet
            .iter()
            .filter(|d| d.tags.contains(&tag))
            .map(|d| d.code as u8)
            .collect()
    }

    /// All tile codes that belong to some structure shape.
    pub fn structure_tiles(&self) -> &[u8] {
        &self.structure_bytes
    }

    pub fn is_structure_slice(&self, slice: &Slice) -> bool {
        !self.structure_bytes.is_empty() && slice.contains_any(&self.structure_bytes)
    }

    /// Every tile of the slice is tagged empty.
    pub fn is_empty_slice(&self, slice: &Slice) -> bool {
        slice.tiles().iter().all(|&t| self.has_tag(t, TileTag::Empty))
    }

    pub fn depth_for(&self, preset: DepthPreset) -> usize {
        match preset {
            DepthPreset::Classic => self.depth_presets.classic,
            DepthPreset::Tuned => self.depth_presets.tuned,
        }
    }

    /// Widest structure extent along the play axis (at least 1).
    pub fn max_structure_extent(&self) -> usize {
        self.structure_shapes
            .iter()
            .map(|s| s.extent_along(self.orientation))
            .max()
            .unwrap_or(1)
            .max(1)
    }

    pub fn padding_start(&self) -> SliceSequence {
        self.padding_seq(&self.padding.start)
    }

    pub fn padding_end(&self) -> SliceSequence {
        self.padding_seq(&self.padding.end)
    }

    fn padding_seq(&self, rows: &[String]) -> SliceSequence {
        SliceSequence::new(self.orientation, rows.iter().map(Slice::new).collect())
            .expect("padding slices share one length")
    }

    /// Designer linking slices, if the config declares them.
    pub fn designer_linking_slices(&self) -> Option<Vec<Slice>> {
        self.linking_slices
            .as_ref()
            .map(|v| v.iter().map(Slice::new).collect())
    }
}

/// Prepends and appends the game's padding slices.
pub fn pad_level(seq: &SliceSequence, config: &GameConfig) -> SliceSequence {
    let start = config.padding_start();
    let end = config.padding_end();
    let mut slices = Vec::with_capacity(start.len() + seq.len() + end.len());
    slices.extend_from_slice(start.slices());
    slices.extend_from_slice(seq.slices());
    slices.extend_from_slice(end.slices());
    SliceSequence::new(config.orientation, slices).expect("padding matches level slice length")
}
