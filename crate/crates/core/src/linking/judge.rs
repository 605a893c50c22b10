use crate::agents::{self, AgentParams};
use crate::behavior::{self, BcVector};
use crate::level::{find_broken_structures, pad_level, GameConfig, Slice, SliceSequence, TileTag};

/// Everything the linker needs to know about a game besides its n-gram:
/// whether an assembled level can be beaten, whether its structures are
/// intact, and its behavioral characteristics.
///
/// Levels are passed unpadded, in play order.
pub trait LevelJudge: Sync {
    fn completable(&self, level: &[Slice]) -> bool;
    fn unbroken(&self, level: &[Slice]) -> bool;
    fn bc(&self, slices: &[Slice]) -> BcVector;
    fn slice_has(&self, slice: &Slice, tag: TileTag) -> bool;
}

/// Judge backed by a game config and its agent.
pub struct GameJudge<'a> {
    pub config: &'a GameConfig,
    /// Replaces the config's agent parameters for completability checks.
    pub agent: Option<AgentParams>,
}

impl<'a> GameJudge<'a> {
    pub fn new(config: &'a GameConfig) -> Self {
        GameJudge { config, agent: None }
    }

    pub fn with_agent(config: &'a GameConfig, agent: Option<AgentParams>) -> Self {
        GameJudge { config, agent }
    }

    fn seq(&self, level: &[Slice]) -> SliceSequence {
        SliceSequence::new(self.config.orientation, level.to_vec())
            .expect("assembled level has uniform slices")
    }

    pub fn agent_result(&self, level: &[Slice]) -> Option<agents::AgentResult> {
        let padded = pad_level(&self.seq(level), self.config);
        agents::check(&padded, self.config, self.agent.as_ref()).ok()
    }
}

impl LevelJudge for GameJudge<'_> {
    fn completable(&self, level: &[Slice]) -> bool {
        self.agent_result(level).is_some_and(|r| r.completable)
    }

    fn unbroken(&self, level: &[Slice]) -> bool {
        if !level.iter().any(|s| self.config.is_structure_slice(s)) {
            return true;
        }
        find_broken_structures(&self.seq(level), self.config).is_empty()
    }

    fn bc(&self, slices: &[Slice]) -> BcVector {
        behavior::bc(slices, self.config)
    }

    fn slice_has(&self, slice: &Slice, tag: TileTag) -> bool {
        slice.tiles().iter().any(|&t| self.config.has_tag(t, tag))
    }
}
