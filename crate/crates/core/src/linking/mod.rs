//! Linkers between level segments.
//!
//! [`build_link`] completes structures cut at the segment boundaries with
//! the forward and backward chains, then searches the n-gram for a run of
//! linking slices that joins the two, scoring candidates with one of four
//! [`Strategy`]s. [`chain_segments`] links k segments pairwise and re-checks
//! the assembled level.

mod build;
mod judge;
mod search;

pub use build::{assemble_chain, build_link, chain_segments, link_game, ChainResult};
pub use judge::{GameJudge, LevelJudge};
pub use search::{connect_priors, ConnectSearch};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::agents::AgentParams;
use crate::level::{GameConfig, Slice, SliceSequence, TileTag};
use crate::markov::{train_ngram, train_structure_chains, MarkovError, NGramModel, StructureChain};

/// Candidates kept per request by BC-match before the enumeration stops.
pub const DEFAULT_CANDIDATE_CAP: usize = 20_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    /// Plain concatenation.
    Null,
    /// Shortest completable linker.
    Shortest,
    /// Completable linker closest in BC to the segment mean.
    BcMatch,
    /// BC-match restricted to linkers satisfying a slice predicate.
    BcMatchRequired,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Null,
        Strategy::Shortest,
        Strategy::BcMatch,
        Strategy::BcMatchRequired,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Null => "null",
            Strategy::Shortest => "shortest",
            Strategy::BcMatch => "bc_match",
            Strategy::BcMatchRequired => "bc_match_required",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "null" | "concatenation" => Ok(Strategy::Null),
            "shortest" => Ok(Strategy::Shortest),
            "bc_match" | "bcmatch" => Ok(Strategy::BcMatch),
            "bc_match_required" | "bc_match_f" => Ok(Strategy::BcMatchRequired),
            _ => Err(format!("unknown strategy {s:?}")),
        }
    }
}

/// Condition the searched part of a linker must meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum SlicePredicate {
    /// At least one slice.
    NonEmpty,
    /// At least one slice holding a tile with this tag.
    Contains(TileTag),
}

impl SlicePredicate {
    pub fn food() -> Self {
        SlicePredicate::Contains(TileTag::Food)
    }

    pub fn holds(&self, linker: &[Slice], judge: &dyn LevelJudge) -> bool {
        match *self {
            SlicePredicate::NonEmpty => !linker.is_empty(),
            SlicePredicate::Contains(tag) => linker.iter().any(|s| judge.slice_has(s, tag)),
        }
    }
}

impl fmt::Display for SlicePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlicePredicate::NonEmpty => f.write_str("non-empty"),
            SlicePredicate::Contains(tag) => {
                let t = serde_json::to_value(tag).expect("tag serializes");
                write!(f, "contains-{}", t.as_str().unwrap_or_default())
            }
        }
    }
}

impl FromStr for SlicePredicate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "non-empty" {
            return Ok(SlicePredicate::NonEmpty);
        }
        if let Some(tag) = s.strip_prefix("contains-") {
            return serde_json::from_value(serde_json::Value::String(tag.to_string()))
                .map(SlicePredicate::Contains)
                .map_err(|_| format!("unknown tile tag {tag:?}"));
        }
        Err(format!("unknown slice predicate {s:?}"))
    }
}

impl From<SlicePredicate> for String {
    fn from(p: SlicePredicate) -> String {
        p.to_string()
    }
}

impl TryFrom<String> for SlicePredicate {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

/// How "usable" is derived from the other flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UsableMode {
    CompletableAndGenerable,
    #[default]
    CompletableAndUnbroken,
}

impl UsableMode {
    pub fn usable(self, completable: bool, generable: bool, unbroken: bool) -> bool {
        completable
            && match self {
                UsableMode::CompletableAndGenerable => generable,
                UsableMode::CompletableAndUnbroken => unbroken,
            }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkingSource {
    DefaultStructureFree,
    DesignerDefined,
    /// No restriction: any vocabulary slice may be inserted.
    FullVocabulary,
}

/// Slices the search may insert between two segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkingSliceSet {
    pub slices: Vec<Slice>,
    pub source: LinkingSource,
}

impl LinkingSliceSet {
    /// Every structure-free slice of the model vocabulary.
    pub fn structure_free(model: &NGramModel, config: &GameConfig) -> Self {
        LinkingSliceSet {
            slices: model
                .vocabulary()
                .iter()
                .filter(|s| !config.is_structure_slice(s))
                .cloned()
                .collect(),
            source: LinkingSource::DefaultStructureFree,
        }
    }

    pub fn full(model: &NGramModel) -> Self {
        LinkingSliceSet {
            slices: model.vocabulary().to_vec(),
            source: LinkingSource::FullVocabulary,
        }
    }

    /// The config's designer slices when it lists any, else the
    /// structure-free default.
    pub fn for_game(model: &NGramModel, config: &GameConfig) -> Self {
        match config.designer_linking_slices() {
            Some(mut slices) => {
                slices.sort();
                slices.dedup();
                LinkingSliceSet {
                    slices,
                    source: LinkingSource::DesignerDefined,
                }
            }
            None => Self::structure_free(model, config),
        }
    }

    pub fn filter(&self) -> Option<&[Slice]> {
        match self.source {
            LinkingSource::FullVocabulary => None,
            _ => Some(&self.slices),
        }
    }
}

/// The n-gram, structure chains and linking slices trained for one game.
#[derive(Debug, Clone)]
pub struct GameModels {
    pub ngram: NGramModel,
    pub forward: StructureChain,
    pub backward: StructureChain,
    pub linking: LinkingSliceSet,
}

impl GameModels {
    pub fn train(corpus: &[SliceSequence], config: &GameConfig) -> Result<Self, MarkovError> {
        let ngram = train_ngram(corpus, config.ngram_order)?;
        let (forward, backward) = train_structure_chains(corpus, config);
        let linking = LinkingSliceSet::for_game(&ngram, config);
        Ok(GameModels {
            ngram,
            forward,
            backward,
            linking,
        })
    }

    pub fn from_parts(
        ngram: NGramModel,
        forward: StructureChain,
        backward: StructureChain,
        config: &GameConfig,
    ) -> Self {
        let linking = LinkingSliceSet::for_game(&ngram, config);
        GameModels {
            ngram,
            forward,
            backward,
            linking,
        }
    }

    pub fn env<'a>(&'a self, config: &'a GameConfig, judge: &'a dyn LevelJudge) -> LinkEnv<'a> {
        LinkEnv {
            model: &self.ngram,
            filter: self.linking.filter(),
            chains: Some(Chains {
                forward: &self.forward,
                backward: &self.backward,
                config,
            }),
            judge,
            usable_mode: UsableMode::default(),
            candidate_cap: DEFAULT_CANDIDATE_CAP,
        }
    }
}

#[derive(Clone, Copy)]
pub struct Chains<'a> {
    pub forward: &'a StructureChain,
    pub backward: &'a StructureChain,
    pub config: &'a GameConfig,
}

/// Borrowed view of everything a link request runs against.
#[derive(Clone, Copy)]
pub struct LinkEnv<'a> {
    pub model: &'a NGramModel,
    pub filter: Option<&'a [Slice]>,
    /// Structure completion; `None` skips it.
    pub chains: Option<Chains<'a>>,
    pub judge: &'a dyn LevelJudge,
    pub usable_mode: UsableMode,
    pub candidate_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkRequest {
    pub start: SliceSequence,
    pub end: SliceSequence,
    pub strategy: Strategy,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub required: Option<SlicePredicate>,
    pub max_depth: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub agent_override: Option<AgentParams>,
}

impl LinkRequest {
    pub fn new(start: SliceSequence, end: SliceSequence, strategy: Strategy, max_depth: usize) -> Self {
        LinkRequest {
            start,
            end,
            strategy,
            required: None,
            max_depth,
            agent_override: None,
        }
    }

    pub fn with_required(mut self, p: SlicePredicate) -> Self {
        self.required = Some(p);
        self
    }

    /// The predicate in force: BC-match-required falls back to
    /// [`SlicePredicate::NonEmpty`].
    pub fn predicate(&self) -> Option<SlicePredicate> {
        match (self.strategy, self.required) {
            (Strategy::Null, _) => None,
            (Strategy::BcMatchRequired, None) => Some(SlicePredicate::NonEmpty),
            (_, p) => p,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkStatus {
    Linked,
    NoLinkFound,
    StructureFailure,
}

impl LinkStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LinkStatus::Linked => "linked",
            LinkStatus::NoLinkFound => "no_link_found",
            LinkStatus::StructureFailure => "structure_failure",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchStats {
    pub nodes_expanded: usize,
    /// Longest linker length the search looked at.
    pub depth_reached: usize,
    pub candidates: usize,
    pub truncated: bool,
    pub agent_calls: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkResult {
    pub strategy: Strategy,
    pub status: LinkStatus,
    /// Full linker: `structure_prefix ++ searched ++ structure_suffix`.
    pub linker: Vec<Slice>,
    pub structure_prefix: Vec<Slice>,
    pub structure_suffix: Vec<Slice>,
    pub unbroken: bool,
    pub generable: bool,
    pub completable: bool,
    pub usable: bool,
    pub rmse: Option<f64>,
    pub d_bc: Option<f64>,
    pub search_stats: SearchStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl LinkResult {
    pub fn linked(&self) -> bool {
        self.status == LinkStatus::Linked
    }

    /// The slices inserted by the tree search, without structure completion.
    pub fn searched(&self) -> &[Slice] {
        &self.linker[self.structure_prefix.len()..self.linker.len() - self.structure_suffix.len()]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("link result serializes")
    }
}

#[cfg(test)]
mod tests;
