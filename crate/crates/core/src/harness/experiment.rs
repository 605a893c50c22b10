use std::collections::HashMap;
use std::sync::Mutex;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{DistributionRow, ExperimentReport, Flags, GroupSummary, PairRow, TrialRow};
use super::{HarnessError, Segment};
use crate::behavior;
use crate::level::{DepthPreset, GameConfig, SliceSequence, TileTag};
use crate::linking::{
    assemble_chain, build_link, ChainResult, GameJudge, GameModels, LinkEnv, LinkRequest, LinkResult,
    SlicePredicate, Strategy, UsableMode,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentMode {
    PairwiseSweep,
    KSegmentRandom,
    MultiSegmentGridWalk,
}

/// How a pairwise sweep chooses its (start, end) pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum PairingMode {
    /// Grid neighbors when every segment has a bin, else BC-nearest.
    Auto,
    /// Ordered pairs whose bins differ by at most one on each axis.
    GridNeighbors,
    /// Each segment paired with its `k` nearest segments in BC space.
    BcNearest { k: usize },
    /// Every ordered pair of distinct segments, in id order, up to `limit`.
    AllOrdered { limit: Option<usize> },
}

/// The pairing that actually ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingUsed {
    GridNeighbors,
    BcNearest,
    AllOrdered,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub game: String,
    pub mode: ExperimentMode,
    pub strategies: Vec<Strategy>,
    /// Segments per level; for the usability run, the largest k.
    pub k: usize,
    pub trials: usize,
    pub seed: u64,
    pub depth_preset: DepthPreset,
    /// Overrides the preset depth.
    pub max_depth: Option<usize>,
    pub pairing: PairingMode,
    /// Predicate for `bc_match_required`, and the second usability variant.
    pub required: Option<SlicePredicate>,
    pub usable_mode: UsableMode,
}

impl ExperimentSpec {
    pub fn new(config: &GameConfig, mode: ExperimentMode) -> Self {
        let food = config.alphabet.iter().any(|t| t.tags.contains(&TileTag::Food));
        let (strategies, k) = match mode {
            ExperimentMode::PairwiseSweep | ExperimentMode::KSegmentRandom => (Strategy::ALL.to_vec(), 2),
            ExperimentMode::MultiSegmentGridWalk => (vec![Strategy::BcMatch], 5),
        };
        ExperimentSpec {
            game: config.name.clone(),
            mode,
            strategies,
            k,
            trials: 1000,
            seed: 0,
            depth_preset: DepthPreset::Tuned,
            max_depth: None,
            pairing: PairingMode::Auto,
            required: food.then(SlicePredicate::food),
            usable_mode: UsableMode::default(),
        }
    }

    pub fn depth(&self, config: &GameConfig) -> usize {
        self.max_depth.unwrap_or_else(|| config.depth_for(self.depth_preset))
    }

    fn validate(&self, config: &GameConfig) -> Result<(), HarnessError> {
        if self.trials == 0 {
            return Err(HarnessError::Invalid("trials must be >= 1".into()));
        }
        if self.k < 2 {
            return Err(HarnessError::Invalid("k must be >= 2".into()));
        }
        if self.strategies.is_empty() {
            return Err(HarnessError::Invalid("no strategies".into()));
        }
        if self.game != config.name {
            return Err(HarnessError::Invalid(format!(
                "spec is for {} but the config is {}",
                self.game, config.name
            )));
        }
        Ok(())
    }
}

/// Runs whichever experiment `spec.mode` names.
pub fn run_experiment(
    spec: &ExperimentSpec,
    config: &GameConfig,
    models: &GameModels,
    segments: &[Segment],
) -> Result<ExperimentReport, HarnessError> {
    match spec.mode {
        ExperimentMode::PairwiseSweep => run_pairwise_sweep(spec, config, models, segments),
        ExperimentMode::KSegmentRandom => run_k_segment_experiment(spec, config, models, segments),
        ExperimentMode::MultiSegmentGridWalk => run_multi_segment_usability(spec, config, models, segments),
    }
}

fn chebyshev(a: [i64; 2], b: [i64; 2]) -> i64 {
    (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
}

/// Index pairs for a sweep, and the pairing that produced them.
pub fn select_pairs(segments: &[Segment], mode: PairingMode) -> Result<(Vec<(usize, usize)>, PairingUsed), HarnessError> {
    let n = segments.len();
    let binned = n > 0 && segments.iter().all(|s| s.bin.is_some());
    let mode = match mode {
        PairingMode::Auto if binned => PairingMode::GridNeighbors,
        PairingMode::Auto => PairingMode::BcNearest { k: 8 },
        m => m,
    };
    match mode {
        PairingMode::GridNeighbors => {
            if !binned {
                return Err(HarnessError::Invalid("grid-neighbor pairing needs bins on every segment".into()));
            }
            let mut pairs = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i != j && chebyshev(segments[i].bin.unwrap(), segments[j].bin.unwrap()) <= 1 {
                        pairs.push((i, j));
                    }
                }
            }
            Ok((pairs, PairingUsed::GridNeighbors))
        }
        PairingMode::BcNearest { k } => {
            let mut pairs = Vec::new();
            for i in 0..n {
                let mut others: Vec<(f64, usize)> = (0..n)
                    .filter(|&j| j != i)
                    .map(|j| (behavior::euclidean(&segments[i].bc.values, &segments[j].bc.values), j))
                    .collect();
                others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                pairs.extend(others.iter().take(k).map(|&(_, j)| (i, j)));
            }
            Ok((pairs, PairingUsed::BcNearest))
        }
        PairingMode::AllOrdered { limit } => {
            let pairs = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .take(limit.unwrap_or(usize::MAX))
                .collect();
            Ok((pairs, PairingUsed::AllOrdered))
        }
        PairingMode::Auto => unreachable!("resolved above"),
    }
}

fn env<'a>(spec: &ExperimentSpec, config: &'a GameConfig, models: &'a GameModels, judge: &'a GameJudge) -> LinkEnv<'a> {
    let mut env = models.env(config, judge);
    env.usable_mode = spec.usable_mode;
    env
}

fn request(spec: &ExperimentSpec, a: &SliceSequence, b: &SliceSequence, strategy: Strategy, depth: usize) -> LinkRequest {
    let mut req = LinkRequest::new(a.clone(), b.clone(), strategy, depth);
    if strategy == Strategy::BcMatchRequired {
        req.required = spec.required;
    }
    req
}

fn link_metrics(variant: &str, k: usize, r: &LinkResult, out: &mut Vec<DistributionRow>) {
    if !r.linked() {
        return;
    }
    let mut push = |metric: &str, value: f64| {
        out.push(DistributionRow {
            variant: variant.to_string(),
            strategy: r.strategy,
            k,
            metric: metric.to_string(),
            value,
        })
    };
    push("linker_len", r.linker.len() as f64);
    if let Some(v) = r.rmse {
        push("rmse", v);
    }
    if let Some(v) = r.d_bc {
        push("d_bc", v);
    }
}

/// Links every selected pair under every strategy.
pub fn run_pairwise_sweep(
    spec: &ExperimentSpec,
    config: &GameConfig,
    models: &GameModels,
    segments: &[Segment],
) -> Result<ExperimentReport, HarnessError> {
    spec.validate(config)?;
    if segments.len() < 2 {
        return Err(HarnessError::CorpusMissing(format!("{}: fewer than two segments", config.name)));
    }
    let t0 = Instant::now();
    let (pairs, used) = select_pairs(segments, spec.pairing)?;
    let judge = GameJudge::new(config);
    let env = env(spec, config, models, &judge);
    let depth = spec.depth(config);
    let tasks: Vec<(usize, usize, Strategy)> = pairs
        .iter()
        .flat_map(|&(i, j)| spec.strategies.iter().map(move |&s| (i, j, s)))
        .collect();
    let results: Vec<LinkResult> = tasks
        .par_iter()
        .map(|&(i, j, s)| build_link(&request(spec, &segments[i].level, &segments[j].level, s, depth), &env))
        .collect();

    let mut rows = Vec::with_capacity(results.len());
    let mut dist = Vec::new();
    for (&(i, j, _), r) in tasks.iter().zip(&results) {
        rows.push(PairRow::new(&config.name, &segments[i].id, &segments[j].id, r));
        link_metrics("", 2, r, &mut dist);
    }
    let groups = spec
        .strategies
        .iter()
        .map(|&s| {
            let flags: Vec<Flags> = results
                .iter()
                .filter(|r| r.strategy == s)
                .map(|r| Flags {
                    linkable: r.linked(),
                    completable: r.completable,
                    generable: r.generable,
                    unbroken: r.unbroken,
                    usable: r.usable,
                })
                .collect();
            GroupSummary::build("", s, 2, &flags, &dist)
        })
        .collect();
    Ok(ExperimentReport {
        game: config.name.clone(),
        spec: spec.clone(),
        pairing: Some(used),
        segments: segments.iter().map(|s| s.id.clone()).collect(),
        groups,
        pair_rows: rows,
        trial_rows: Vec::new(),
        distributions: dist,
        elapsed: t0.elapsed(),
    })
}

/// Pair links shared between trials, built once each.
struct LinkCache<'a> {
    spec: &'a ExperimentSpec,
    segments: &'a [Segment],
    env: LinkEnv<'a>,
    depth: usize,
    map: Mutex<HashMap<(usize, usize, Strategy, Option<SlicePredicate>), LinkResult>>,
}

impl<'a> LinkCache<'a> {
    fn get(&self, i: usize, j: usize, strategy: Strategy, required: Option<SlicePredicate>) -> LinkResult {
        let key = (i, j, strategy, required);
        if let Some(r) = self.map.lock().unwrap().get(&key) {
            return r.clone();
        }
        let mut req = request(self.spec, &self.segments[i].level, &self.segments[j].level, strategy, self.depth);
        req.required = required;
        let r = build_link(&req, &self.env);
        self.map.lock().unwrap().insert(key, r.clone());
        r
    }

    /// Builds every missing link of `keys` in parallel.
    fn fill(&self, keys: &[(usize, usize, Strategy, Option<SlicePredicate>)]) {
        let missing: Vec<_> = {
            let map = self.map.lock().unwrap();
            let mut m: Vec<_> = keys.iter().filter(|k| !map.contains_key(k)).copied().collect();
            m.sort_by_key(|&(i, j, s, _)| (i, j, s));
            m.dedup();
            m
        };
        let built: Vec<LinkResult> = missing
            .par_iter()
            .map(|&(i, j, s, p)| {
                let mut req = request(self.spec, &self.segments[i].level, &self.segments[j].level, s, self.depth);
                req.required = p;
                build_link(&req, &self.env)
            })
            .collect();
        let mut map = self.map.lock().unwrap();
        for (k, r) in missing.into_iter().zip(built) {
            map.insert(k, r);
        }
    }
}

fn trial_row(config: &GameConfig, variant: &str, strategy: Strategy, trial: usize, ids: &[usize], segments: &[Segment], c: &ChainResult) -> TrialRow {
    TrialRow {
        game: config.name.clone(),
        variant: variant.to_string(),
        strategy,
        k: ids.len(),
        trial,
        segments: ids.iter().map(|&i| segments[i].id.as_str()).collect::<Vec<_>>().join(";"),
        linkable: c.linkable,
        completable: c.completable,
        generable: c.generable,
        unbroken: c.unbroken,
        usable: c.usable,
        linker_lens: c
            .per_pair
            .iter()
            .map(|r| r.linker.len().to_string())
            .collect::<Vec<_>>()
            .join(";"),
    }
}

fn flags_of(rows: &[&TrialRow]) -> Vec<Flags> {
    rows.iter()
        .map(|r| Flags {
            linkable: r.linkable,
            completable: r.completable,
            generable: r.generable,
            unbroken: r.unbroken,
            usable: r.usable,
        })
        .collect()
}

/// Links seeded random k-tuples of distinct segments under each strategy.
pub fn run_k_segment_experiment(
    spec: &ExperimentSpec,
    config: &GameConfig,
    models: &GameModels,
    segments: &[Segment],
) -> Result<ExperimentReport, HarnessError> {
    spec.validate(config)?;
    if segments.len() < spec.k {
        return Err(HarnessError::CorpusMissing(format!(
            "{}: {} segments, k = {}",
            config.name,
            segments.len(),
            spec.k
        )));
    }
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let idx: Vec<usize> = (0..segments.len()).collect();
    let tuples: Vec<Vec<usize>> = (0..spec.trials)
        .map(|_| idx.choose_multiple(&mut rng, spec.k).copied().collect())
        .collect();

    let judge = GameJudge::new(config);
    let cache = LinkCache {
        spec,
        segments,
        env: env(spec, config, models, &judge),
        depth: spec.depth(config),
        map: Mutex::new(HashMap::new()),
    };
    let required = |s: Strategy| if s == Strategy::BcMatchRequired { spec.required } else { None };
    let keys: Vec<_> = spec
        .strategies
        .iter()
        .flat_map(|&s| {
            tuples
                .iter()
                .flat_map(move |t| t.windows(2).map(move |w| (w[0], w[1], s, required(s))))
        })
        .collect();
    cache.fill(&keys);

    let mut trial_rows = Vec::new();
    let mut dist = Vec::new();
    for &s in &spec.strategies {
        let chains: Vec<ChainResult> = tuples
            .par_iter()
            .map(|t| {
                let levels: Vec<SliceSequence> = t.iter().map(|&i| segments[i].level.clone()).collect();
                let links = t.windows(2).map(|w| cache.get(w[0], w[1], s, required(s))).collect();
                assemble_chain(&levels, links, &cache.env)
            })
            .collect();
        for (n, (t, c)) in tuples.iter().zip(&chains).enumerate() {
            trial_rows.push(trial_row(config, "", s, n, t, segments, c));
            for r in &c.per_pair {
                link_metrics("", spec.k, r, &mut dist);
            }
        }
    }
    let groups = spec
        .strategies
        .iter()
        .map(|&s| {
            let rows: Vec<&TrialRow> = trial_rows.iter().filter(|r| r.strategy == s).collect();
            GroupSummary::build("", s, spec.k, &flags_of(&rows), &dist)
        })
        .collect();
    Ok(ExperimentReport {
        game: config.name.clone(),
        spec: spec.clone(),
        pairing: None,
        segments: segments.iter().map(|s| s.id.clone()).collect(),
        groups,
        pair_rows: Vec::new(),
        trial_rows,
        distributions: dist,
        elapsed: t0.elapsed(),
    })
}

/// A usability variant: a label, its strategy and its predicate.
fn variants(spec: &ExperimentSpec) -> Vec<(String, Strategy, Option<SlicePredicate>)> {
    let plain = spec.strategies[0];
    let mut v = vec![("plain".to_string(), plain, None)];
    if let Some(p) = spec.required {
        v.push((p.to_string(), Strategy::BcMatchRequired, Some(p)));
    }
    v
}

/// Walks of `spec.k` segments in which every step links under every
/// variant, then the usability of each walk prefix of length 2..=k.
///
/// Steps go to a grid neighbor when the segments carry bins, otherwise to a
/// random segment. Prefixes of one walk are nested, so rates across k
/// compare the same levels growing.
pub fn run_multi_segment_usability(
    spec: &ExperimentSpec,
    config: &GameConfig,
    models: &GameModels,
    segments: &[Segment],
) -> Result<ExperimentReport, HarnessError> {
    spec.validate(config)?;
    let n = segments.len();
    if n < spec.k {
        return Err(HarnessError::CorpusMissing(format!("{}: {n} segments, k = {}", config.name, spec.k)));
    }
    let t0 = Instant::now();
    let judge = GameJudge::new(config);
    let cache = LinkCache {
        spec,
        segments,
        env: env(spec, config, models, &judge),
        depth: spec.depth(config),
        map: Mutex::new(HashMap::new()),
    };
    let variants = variants(spec);
    let binned = segments.iter().all(|s| s.bin.is_some());
    let links_all = |i: usize, j: usize| variants.iter().all(|(_, s, p)| cache.get(i, j, *s, *p).linked());

    let walks: Vec<Option<Vec<usize>>> = (0..spec.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed ^ (t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            for _ in 0..20 {
                let mut walk = vec![*(0..n).collect::<Vec<_>>().choose(&mut rng).unwrap()];
                while walk.len() < spec.k {
                    let cur = *walk.last().unwrap();
                    let mut near: Vec<usize> = Vec::new();
                    let mut far: Vec<usize> = Vec::new();
                    for j in (0..n).filter(|j| !walk.contains(j)) {
                        if binned && chebyshev(segments[cur].bin.unwrap(), segments[j].bin.unwrap()) <= 1 {
                            near.push(j);
                        } else {
                            far.push(j);
                        }
                    }
                    near.shuffle(&mut rng);
                    far.shuffle(&mut rng);
                    match near.into_iter().chain(far).find(|&j| links_all(cur, j)) {
                        Some(j) => walk.push(j),
                        None => break,
                    }
                }
                if walk.len() == spec.k {
                    return Some(walk);
                }
            }
            None
        })
        .collect();
    if walks.iter().any(Option::is_none) {
        return Err(HarnessError::Invalid(format!(
            "{}: could not find linkable walks of {} segments",
            config.name, spec.k
        )));
    }
    let walks: Vec<Vec<usize>> = walks.into_iter().flatten().collect();

    let mut trial_rows = Vec::new();
    let mut dist = Vec::new();
    let mut groups = Vec::new();
    for (label, s, p) in &variants {
        for k in 2..=spec.k {
            let chains: Vec<ChainResult> = walks
                .par_iter()
                .map(|w| {
                    let w = &w[..k];
                    let levels: Vec<SliceSequence> = w.iter().map(|&i| segments[i].level.clone()).collect();
                    let links = w.windows(2).map(|x| cache.get(x[0], x[1], *s, *p)).collect();
                    assemble_chain(&levels, links, &cache.env)
                })
                .collect();
            let start = trial_rows.len();
            for (t, (w, c)) in walks.iter().zip(&chains).enumerate() {
                trial_rows.push(trial_row(config, label, *s, t, &w[..k], segments, c));
                for r in &c.per_pair {
                    link_metrics(label, k, r, &mut dist);
                }
            }
            let rows: Vec<&TrialRow> = trial_rows[start..].iter().collect();
            groups.push(GroupSummary::build(label, *s, k, &flags_of(&rows), &dist));
        }
    }
    Ok(ExperimentReport {
        game: config.name.clone(),
        spec: spec.clone(),
        pairing: None,
        segments: segments.iter().map(|s| s.id.clone()).collect(),
        groups,
        pair_rows: Vec::new(),
        trial_rows,
        distributions: dist,
        elapsed: t0.elapsed(),
    })
}
