//! Linking procedurally generated level segments into unbroken, generable,
//! completable levels.
//!
//! The pipeline: parse tile grids into [`level::SliceSequence`]s, train an
//! n-gram ([`markov::NGramModel`]) and structure chains on a corpus, then ask
//! [`linking::build_link`] for a linker between two segments. The
//! [`harness`] module runs the sweep, chaining and usability experiments and
//! writes CSV/JSON/SVG reports.

pub mod agents;
pub mod behavior;
pub mod games;
pub mod harness;
pub mod level;
pub mod linking;
pub mod markov;

use thiserror::Error;

/// Any error raised by the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Level(#[from] level::LevelError),
    #[error(transparent)]
    Markov(#[from] markov::MarkovError),
    #[error(transparent)]
    Agent(#[from] agents::AgentError),
    #[error(transparent)]
    Harness(#[from] harness::HarnessError),
}
