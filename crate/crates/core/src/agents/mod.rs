//! Deterministic completability agents.
//!
//! Both agents run a best-first search over player states on a padded
//! level and report whether the final padding region is reachable, how far
//! along the play axis the player got, and a witness path.

mod platformer;
mod roguelike;

pub use platformer::{platformer_check, platformer_check_with, vertical_platformer_check};
pub use roguelike::{roguelike_check, roguelike_check_with};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::level::{GameConfig, LevelError, Orientation, SliceSequence};

pub const DEFAULT_NODE_BUDGET: usize = 2_000_000;

fn default_budget() -> usize {
    DEFAULT_NODE_BUDGET
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AgentError {
    #[error("malformed level: {0}")]
    MalformedLevel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlatformerParams {
    /// Rows gained by a full jump.
    pub max_jump_height: usize,
    /// Lateral moves allowed while rising.
    pub max_jump_horizontal: usize,
    #[serde(default)]
    pub allow_horizontal_wrap: bool,
    #[serde(default = "default_budget")]
    pub node_budget: usize,
}

impl Default for PlatformerParams {
    fn default() -> Self {
        PlatformerParams {
            max_jump_height: 4,
            max_jump_horizontal: 2,
            allow_horizontal_wrap: false,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnemyModel {
    /// Enemies never move and kill on contact.
    StaticBlocking,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoguelikeParams {
    pub start_stamina: u32,
    pub move_cost: u32,
    pub food_gain: u32,
    pub stamina_cap: u32,
    pub enemy_model: EnemyModel,
    #[serde(default = "default_budget")]
    pub node_budget: usize,
}

impl Default for RoguelikeParams {
    fn default() -> Self {
        RoguelikeParams {
            start_stamina: 40,
            move_cost: 1,
            food_gain: 20,
            stamina_cap: 40,
            enemy_model: EnemyModel::StaticBlocking,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AgentParams {
    Platformer(PlatformerParams),
    Roguelike(RoguelikeParams),
}

impl AgentParams {
    pub fn validate(&self) -> Result<(), LevelError> {
        let bad = |m: &str| Err(LevelError::InvalidConfig(m.to_string()));
        match self {
            AgentParams::Platformer(p) => {
                if p.max_jump_height == 0 || p.max_jump_horizontal == 0 || p.node_budget == 0 {
                    return bad("platformer agent counts must be positive");
                }
                if p.max_jump_height > 30 || p.max_jump_horizontal > 30 {
                    return bad("platformer jump limits must be at most 30");
                }
            }
            AgentParams::Roguelike(r) => {
                if r.start_stamina == 0
                    || r.move_cost == 0
                    || r.food_gain == 0
                    || r.stamina_cap == 0
                    || r.node_budget == 0
                {
                    return bad("roguelike agent counts must be positive");
                }
                if r.food_gain > r.stamina_cap {
                    return bad("food_gain must not exceed stamina_cap");
                }
            }
        }
        Ok(())
    }

    /// Copy with a different roguelike starting stamina; platformer params
    /// are returned unchanged.
    pub fn with_start_stamina(&self, stamina: u32) -> AgentParams {
        match self {
            AgentParams::Roguelike(r) => AgentParams::Roguelike(RoguelikeParams {
                start_stamina: stamina,
                ..r.clone()
            }),
            other => other.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "phase", rename_all = "snake_case")]
pub enum JumpPhase {
    Grounded,
    Rising { ascended: u8, lateral: u8 },
    Falling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlayerState {
    Platformer {
        column: usize,
        row: usize,
        #[serde(flatten)]
        phase: JumpPhase,
    },
    Roguelike {
        column: usize,
        row: usize,
        stamina: u32,
        switches: u64,
    },
}

impl PlayerState {
    pub fn position(&self) -> (usize, usize) {
        match *self {
            PlayerState::Platformer { column, row, .. } => (column, row),
            PlayerState::Roguelike { column, row, .. } => (column, row),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentResult {
    pub completable: bool,
    /// Furthest play-axis coordinate reached, as a fraction of the level
    /// extent. Exactly 1.0 when completable.
    pub furthest_progress: f64,
    /// Start to goal when completable, otherwise start to the furthest state.
    pub path: Vec<PlayerState>,
    pub nodes_expanded: usize,
    pub budget_exhausted: bool,
}

impl AgentResult {
    fn unreachable() -> Self {
        AgentResult {
            completable: false,
            furthest_progress: 0.0,
            path: Vec::new(),
            nodes_expanded: 0,
            budget_exhausted: false,
        }
    }

    /// Path as JSON, for overlays.
    pub fn path_json(&self) -> String {
        serde_json::to_string(&self.path).expect("states serialize")
    }
}

/// Play-axis coordinate of a grid cell and the level's extent along it.
#[inline]
pub(crate) fn play_coord(orientation: Orientation, height: usize, x: usize, y: usize) -> usize {
    match orientation {
        Orientation::ColumnsLeftToRight => x,
        Orientation::RowsBottomToTop => height - 1 - y,
    }
}

/// Runs the agent the game config asks for on an already padded level.
pub fn check(
    padded: &SliceSequence,
    config: &GameConfig,
    params: Option<&AgentParams>,
) -> Result<AgentResult, AgentError> {
    match params.unwrap_or(&config.agent_params) {
        AgentParams::Platformer(p) => Ok(platformer_check_with(padded, config, p)),
        AgentParams::Roguelike(r) => roguelike_check_with(padded, config, r, None),
    }
}

/// Pads `level` with the game's padding and runs the game's agent.
pub fn check_unpadded(
    level: &SliceSequence,
    config: &GameConfig,
    params: Option<&AgentParams>,
) -> Result<AgentResult, AgentError> {
    check(&crate::level::pad_level(level, config), config, params)
}
