use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashSet};
use std::fs;
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{io_err, HarnessError};
use crate::behavior::{self, BcVector};
use crate::level::{parse_level, GameConfig, SliceSequence};
use crate::linking::{GameJudge, GameModels, LevelJudge};
use crate::markov::{sample_segment_with_budget, train_structure_chains, NGramModel};

/// Environment variable naming the model cache directory.
pub const CACHE_ENV: &str = "SEGLINK_CACHE";

/// Directory of the corpus shipped with the crate for `game`.
pub fn shipped_corpus_dir(game: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(game)
}

pub fn read_level(path: &Path, config: &GameConfig) -> Result<SliceSequence, HarnessError> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let grid = parse_level(&text, config)
        .map_err(|e| HarnessError::Invalid(format!("{}: {e}", path.display())))?;
    Ok(grid.to_slices(config.orientation))
}

pub fn write_level(path: &Path, level: &SliceSequence) -> Result<(), HarnessError> {
    fs::write(path, level.to_grid().to_text()).map_err(|e| io_err(path, e))
}

/// `*.txt` files of a directory in name order.
fn level_files(dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let entries = fs::read_dir(dir).map_err(|_| HarnessError::CorpusMissing(dir.display().to_string()))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(HarnessError::CorpusMissing(dir.display().to_string()));
    }
    Ok(files)
}

/// Loads every `*.txt` level in `dir`, in file name order.
pub fn load_corpus(dir: &Path, config: &GameConfig) -> Result<Vec<SliceSequence>, HarnessError> {
    level_files(dir)?.iter().map(|p| read_level(p, config)).collect()
}

fn fingerprint(corpus: &[SliceSequence], config: &GameConfig) -> u64 {
    let mut h = DefaultHasher::new();
    config.name.hash(&mut h);
    config.ngram_order.hash(&mut h);
    for level in corpus {
        level.slices().hash(&mut h);
    }
    h.finish()
}

/// Trains the game's models, reusing a cached n-gram from `cache` (or
/// [`CACHE_ENV`]) when one matches the corpus.
pub fn load_models(
    corpus: &[SliceSequence],
    config: &GameConfig,
    cache: Option<&Path>,
) -> Result<GameModels, HarnessError> {
    let cache = cache
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    let Some(cache) = cache else {
        return Ok(GameModels::train(corpus, config)?);
    };
    let file = cache.join(format!("{}-{:016x}.ngram.json", config.name, fingerprint(corpus, config)));
    if let Ok(text) = fs::read_to_string(&file) {
        if let Ok(ngram) = NGramModel::from_json(&text) {
            let (forward, backward) = train_structure_chains(corpus, config);
            return Ok(GameModels::from_parts(ngram, forward, backward, config));
        }
    }
    let models = GameModels::train(corpus, config)?;
    fs::create_dir_all(&cache).map_err(|e| io_err(&cache, e))?;
    fs::write(&file, models.ngram.to_json()).map_err(|e| io_err(&file, e))?;
    Ok(models)
}

/// One segment of an experiment corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub id: String,
    pub level: SliceSequence,
    pub bc: BcVector,
    /// MAP-Elites cell, when the segment came from an archive that has one.
    pub bin: Option<[i64; 2]>,
}

impl Segment {
    pub fn new(id: impl Into<String>, level: SliceSequence, config: &GameConfig) -> Self {
        let bc = behavior::bc_of(&level, config);
        Segment {
            id: id.into(),
            level,
            bc,
            bin: None,
        }
    }
}

/// Whether a sampled segment is kept: completable, unbroken and with the
/// game's clearance of empty slices at both ends.
pub fn acceptable_segment(level: &SliceSequence, config: &GameConfig, judge: &dyn LevelJudge) -> bool {
    let s = level.slices();
    let c = config.segment_end_clearance;
    if c > 0
        && (s.len() < c
            || !s[..c].iter().all(|x| config.is_empty_slice(x))
            || !s[s.len() - c..].iter().all(|x| config.is_empty_slice(x)))
    {
        return false;
    }
    judge.unbroken(s) && judge.completable(s)
}

fn mix(seed: u64, i: u64) -> u64 {
    // splitmix64 step
    let mut z = seed ^ i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Samples `count` distinct acceptable segments from the game's n-gram.
/// Candidates are drawn in parallel but kept in index order, so the result
/// depends only on `seed`.
pub fn synthesize_segments(
    config: &GameConfig,
    models: &GameModels,
    count: usize,
    seed: u64,
) -> Result<Vec<Segment>, HarnessError> {
    let judge = GameJudge::new(config);
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(count);
    let batch = 64u64;
    let max_batches = (count as u64 * 20).div_ceil(batch) + 1;
    for b in 0..max_batches {
        let found: Vec<Option<SliceSequence>> = (b * batch..(b + 1) * batch)
            .into_par_iter()
            .map(|i| {
                sample_segment_with_budget(&models.ngram, config.segment_length, mix(seed, i), 50, |s| {
                    acceptable_segment(s, config, &judge)
                })
                .ok()
            })
            .collect();
        for level in found.into_iter().flatten() {
            if out.len() == count {
                break;
            }
            if seen.insert(level.slices().to_vec()) {
                let id = format!("{}-{:03}", config.name, out.len());
                out.push(Segment::new(id, level, config));
            }
        }
        if out.len() == count {
            return Ok(out);
        }
    }
    Err(HarnessError::Invalid(format!(
        "only {} of {count} acceptable segments found for {}",
        out.len(),
        config.name
    )))
}

/// Bin metadata file of an ingested segment directory: `{ "<id>": [x, y] }`.
pub const BINS_FILE: &str = "bins.json";

/// Reads a segment directory: one `*.txt` level per segment, id = file stem,
/// plus optional [`BINS_FILE`] grid coordinates.
pub fn read_segments(dir: &Path, config: &GameConfig) -> Result<Vec<Segment>, HarnessError> {
    let bins: BTreeMap<String, [i64; 2]> = match fs::read_to_string(dir.join(BINS_FILE)) {
        Ok(text) => serde_json::from_str(&text).map_err(|e| HarnessError::Invalid(format!("{BINS_FILE}: {e}")))?,
        Err(_) => BTreeMap::new(),
    };
    level_files(dir)?
        .iter()
        .map(|p| {
            let id = p.file_stem().unwrap_or_default().to_string_lossy().into_owned();
            let mut seg = Segment::new(id, read_level(p, config)?, config);
            seg.bin = bins.get(&seg.id).copied();
            Ok(seg)
        })
        .collect()
}

pub fn write_segments(dir: &Path, segments: &[Segment]) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    for s in segments {
        write_level(&dir.join(format!("{}.txt", s.id)), &s.level)?;
    }
    let bins: BTreeMap<&str, [i64; 2]> = segments
        .iter()
        .filter_map(|s| s.bin.map(|b| (s.id.as_str(), b)))
        .collect();
    if !bins.is_empty() {
        let path = dir.join(BINS_FILE);
        let text = serde_json::to_string_pretty(&bins).expect("bins serialize");
        fs::write(&path, text).map_err(|e| io_err(&path, e))?;
    }
    Ok(())
}
