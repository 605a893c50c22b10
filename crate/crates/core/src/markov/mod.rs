//! N-gram slice models and the structure-completion chains.

mod chain;
mod ngram;

pub use chain::{
    complete_structure, complete_to_fixed_point, completions, train_structure_chains,
    ChainDirection, StructureChain, FIXED_POINT_CAP,
};
pub use ngram::{
    sample_segment, sample_segment_with_budget, train_ngram, ModelStats, NGramModel,
    DEFAULT_RETRY_BUDGET, SCHEMA,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkovError {
    #[error("n-gram order must be at least 2, got {0}")]
    InvalidOrder(usize),
    #[error("corpus sequence {index} has {len} slices, order {order} needs at least that many")]
    CorpusTooShort { index: usize, len: usize, order: usize },
    #[error("corpus mixes slice orientations")]
    MixedOrientation,
    #[error("corpus mixes slice lengths")]
    MixedSliceLength,
    #[error("sequence of {len} slices is shorter than the model order {order}")]
    TooShort { len: usize, order: usize },
    #[error("no acceptable segment after {attempts} attempts")]
    Exhausted { attempts: usize },
    #[error("no chain entry for structure slice {slice:?}")]
    UnknownStructure { slice: String },
    #[error("structure completion did not settle after {passes} passes")]
    Unstable { passes: usize },
    #[error("model file: {0}")]
    Format(String),
}
