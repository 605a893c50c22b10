//! Corpora, experiments, reports and rendering.
//!
//! Every experiment is a pure function of (segments, config, spec): work is
//! spread over the current rayon pool but results are collected in input
//! order, so `--jobs` never changes a reported number.

mod corpus;
mod experiment;
mod render;
mod report;

pub use corpus::{
    acceptable_segment, load_corpus, load_models, read_level, read_segments, shipped_corpus_dir,
    synthesize_segments, write_level, write_segments, Segment, BINS_FILE, CACHE_ENV,
};
pub use experiment::{
    run_experiment, run_k_segment_experiment, run_multi_segment_usability, run_pairwise_sweep, select_pairs,
    ExperimentMode, ExperimentSpec, PairingMode, PairingUsed,
};
pub use render::{annotate, render_svg, render_text, Annotations};
pub use report::{
    link_stats, read_pair_rows, Distribution, ExperimentReport, GroupSummary, LinkStatsRow, OutputFormat,
    PairRow, TrialRow,
};

use std::path::Path;

use thiserror::Error;

use crate::markov::MarkovError;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("corpus missing or empty: {0}")]
    CorpusMissing(String),
    #[error("{0}")]
    Invalid(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Markov(#[from] MarkovError),
}

pub(crate) fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Runs `f` on a dedicated pool of `jobs` threads (0 = rayon's default).
pub fn with_jobs<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .expect("thread pool")
        .install(f)
}
