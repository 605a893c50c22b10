use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{
    ConnectSearch, GameJudge, GameModels, LinkEnv, LinkRequest, LinkResult, LinkStatus,
    SearchStats, SlicePredicate, Strategy,
};
use crate::behavior::{self, BcVector};
use crate::level::{GameConfig, Slice, SliceSequence};
use crate::markov::{complete_to_fixed_point, completions, StructureChain};

/// Links one pair with the game's own judge, honouring the request's agent
/// override.
pub fn link_game(req: &LinkRequest, config: &GameConfig, models: &GameModels) -> LinkResult {
    let judge = GameJudge::with_agent(config, req.agent_override.clone());
    build_link(req, &models.env(config, &judge))
}

struct Pair {
    s: Vec<Slice>,
    e: Vec<Slice>,
}

/// Completion runs for one side, each carried to a fixed point. `Err` holds
/// the chain failure message.
fn side_completions(
    chain: &StructureChain,
    boundary: &[Slice],
    config: &GameConfig,
) -> Result<Vec<Vec<Slice>>, String> {
    let firsts = completions(chain, boundary, config).map_err(|e| e.to_string())?;
    let mut out: Vec<Vec<Slice>> = Vec::new();
    let mut last_err = None;
    for (first, _) in firsts {
        match complete_to_fixed_point(chain, boundary, first, config) {
            Ok(v) => {
                if !out.contains(&v) {
                    out.push(v);
                }
            }
            Err(e) => last_err = Some(e.to_string()),
        }
    }
    match (out.is_empty(), last_err) {
        (true, Some(e)) => Err(e),
        _ => Ok(out),
    }
}

struct Outcome {
    s: Vec<Slice>,
    m: Vec<Slice>,
    e: Vec<Slice>,
}

fn join(parts: &[&[Slice]]) -> Vec<Slice> {
    parts.iter().flat_map(|p| p.iter().cloned()).collect()
}

/// Searches for a linker between `req.start` and `req.end`.
pub fn build_link(req: &LinkRequest, env: &LinkEnv) -> LinkResult {
    let start = req.start.slices();
    let end = req.end.slices();
    let mut stats = SearchStats::default();

    if req.strategy == Strategy::Null {
        let level = join(&[start, end]);
        let (unbroken, generable, completable) = flags(env, &level, &mut stats);
        return LinkResult {
            strategy: req.strategy,
            status: LinkStatus::Linked,
            linker: Vec::new(),
            structure_prefix: Vec::new(),
            structure_suffix: Vec::new(),
            unbroken,
            generable,
            completable,
            usable: env.usable_mode.usable(completable, generable, unbroken),
            rmse: None,
            d_bc: None,
            search_stats: stats,
            error: None,
        };
    }

    let (s_list, e_list) = match env.chains {
        None => (vec![Vec::new()], vec![Vec::new()]),
        Some(c) => {
            let s = side_completions(c.forward, start, c.config);
            let e = side_completions(c.backward, end, c.config);
            match (s, e) {
                (Ok(s), Ok(e)) => (s, e),
                (Err(msg), _) | (_, Err(msg)) => {
                    return failure(req.strategy, LinkStatus::StructureFailure, stats, Some(msg));
                }
            }
        }
    };

    let k = env.model.order() - 1;
    let mut pairs = Vec::new();
    for s in &s_list {
        for e in &e_list {
            if s.len() + e.len() > req.max_depth {
                continue;
            }
            // the completions must themselves sit generably against the segments
            let left = join(&[&start[start.len().saturating_sub(k)..], s]);
            let right = join(&[e, &end[..end.len().min(k)]]);
            if !env.model.generable_unchecked(&left) || !env.model.generable_unchecked(&right) {
                continue;
            }
            pairs.push(Pair {
                s: s.clone(),
                e: e.clone(),
            });
        }
    }

    let predicate = req.predicate();
    let bc_start = env.judge.bc(start);
    let bc_end = env.judge.bc(end);

    let found = match req.strategy {
        Strategy::Shortest => shortest(req, env, &pairs, predicate, &mut stats),
        _ => bc_match(req, env, &pairs, predicate, (&bc_start, &bc_end), &mut stats),
    };
    let Some(Outcome { s, m, e }) = found else {
        return failure(req.strategy, LinkStatus::NoLinkFound, stats, None);
    };

    let linker = join(&[&s, &m, &e]);
    let level = join(&[start, &linker, end]);
    let (unbroken, generable, completable) = flags(env, &level, &mut stats);
    let rmse = linker_rmse(env, &linker, &bc_start, &bc_end);
    let concatenated = join(&[start, end]);
    let d_bc = if linker.is_empty() {
        0.0
    } else {
        behavior::euclidean(&env.judge.bc(&concatenated).values, &env.judge.bc(&level).values)
    };
    LinkResult {
        strategy: req.strategy,
        status: LinkStatus::Linked,
        linker,
        structure_prefix: s,
        structure_suffix: e,
        unbroken,
        generable,
        completable,
        usable: env.usable_mode.usable(completable, generable, unbroken),
        rmse: Some(rmse),
        d_bc: Some(d_bc),
        search_stats: stats,
        error: None,
    }
}

fn failure(strategy: Strategy, status: LinkStatus, stats: SearchStats, error: Option<String>) -> LinkResult {
    LinkResult {
        strategy,
        status,
        linker: Vec::new(),
        structure_prefix: Vec::new(),
        structure_suffix: Vec::new(),
        unbroken: false,
        generable: false,
        completable: false,
        usable: false,
        rmse: None,
        d_bc: None,
        search_stats: stats,
        error,
    }
}

fn flags(env: &LinkEnv, level: &[Slice], stats: &mut SearchStats) -> (bool, bool, bool) {
    let unbroken = env.judge.unbroken(level);
    let generable = env.model.generable_unchecked(level);
    stats.agent_calls += 1;
    let completable = env.judge.completable(level);
    (unbroken, generable, completable)
}

fn linker_rmse(env: &LinkEnv, linker: &[Slice], start: &BcVector, end: &BcVector) -> f64 {
    if linker.is_empty() {
        // an empty linker takes the segment mean as its BC
        return 0.0;
    }
    behavior::linker_rmse(&env.judge.bc(linker), start, end)
}

fn accept(env: &LinkEnv, start: &[Slice], linker: &[Slice], end: &[Slice], stats: &mut SearchStats) -> bool {
    let level = join(&[start, linker, end]);
    if !env.judge.unbroken(&level) {
        return false;
    }
    stats.agent_calls += 1;
    env.judge.completable(&level)
}

fn searches<'m>(req: &LinkRequest, env: &LinkEnv<'m>, pairs: &[Pair]) -> Vec<ConnectSearch<'m>> {
    let start = req.start.slices();
    let end = req.end.slices();
    pairs
        .iter()
        .map(|p| {
            let left = join(&[start, &p.s]);
            let right = join(&[&p.e, end]);
            ConnectSearch::new(
                env.model,
                &left,
                &right,
                env.filter,
                req.max_depth - p.s.len() - p.e.len(),
            )
        })
        .collect()
}

/// First acceptable candidate by total linker length, then pair order, then
/// lexicographic order of the searched slices.
fn shortest(
    req: &LinkRequest,
    env: &LinkEnv,
    pairs: &[Pair],
    predicate: Option<SlicePredicate>,
    stats: &mut SearchStats,
) -> Option<Outcome> {
    let mut searches = searches(req, env, pairs);
    let start = req.start.slices();
    let end = req.end.slices();
    let mut found = None;
    'outer: for total in 0..=req.max_depth {
        stats.depth_reached = total;
        for (pair, search) in pairs.iter().zip(searches.iter_mut()) {
            let fixed = pair.s.len() + pair.e.len();
            if total < fixed {
                continue;
            }
            let flow = search.for_each_of_length(total - fixed, |ids| {
                stats.candidates += 1;
                let m = ids_to_slices(env, ids);
                if predicate.is_some_and(|p| !p.holds(&m, env.judge)) {
                    return ControlFlow::Continue(());
                }
                let linker = join(&[&pair.s, &m, &pair.e]);
                if accept(env, start, &linker, end, stats) {
                    found = Some(Outcome {
                        s: pair.s.clone(),
                        m,
                        e: pair.e.clone(),
                    });
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            });
            if flow.is_break() {
                break 'outer;
            }
        }
    }
    stats.nodes_expanded += searches.iter().map(ConnectSearch::nodes).sum::<usize>();
    found
}

struct Scored {
    rmse: f64,
    linker: Vec<Slice>,
    pair: usize,
    m: Vec<Slice>,
}

/// Every candidate within the depth limit, ranked by (RMSE, length,
/// lexicographic linker); the first acceptable one wins.
fn bc_match(
    req: &LinkRequest,
    env: &LinkEnv,
    pairs: &[Pair],
    predicate: Option<SlicePredicate>,
    (bc_start, bc_end): (&BcVector, &BcVector),
    stats: &mut SearchStats,
) -> Option<Outcome> {
    let mut searches = searches(req, env, pairs);
    let mut scored = Vec::new();
    let mut budget = env.candidate_cap;
    for (i, (pair, search)) in pairs.iter().zip(searches.iter_mut()).enumerate() {
        let (cands, truncated) = search.collect(budget);
        stats.truncated |= truncated;
        budget -= cands.len();
        stats.depth_reached = stats.depth_reached.max(search.max_depth() + pair.s.len() + pair.e.len());
        for ids in cands {
            stats.candidates += 1;
            let m = ids_to_slices(env, &ids);
            if predicate.is_some_and(|p| !p.holds(&m, env.judge)) {
                continue;
            }
            let linker = join(&[&pair.s, &m, &pair.e]);
            scored.push(Scored {
                rmse: linker_rmse(env, &linker, bc_start, bc_end),
                linker,
                pair: i,
                m,
            });
        }
        if budget == 0 {
            stats.truncated = true;
            break;
        }
    }
    stats.nodes_expanded += searches.iter().map(ConnectSearch::nodes).sum::<usize>();
    scored.sort_by(|a, b| {
        a.rmse
            .total_cmp(&b.rmse)
            .then(a.linker.len().cmp(&b.linker.len()))
            .then_with(|| a.linker.cmp(&b.linker))
            .then(a.pair.cmp(&b.pair))
    });
    let start = req.start.slices();
    let end = req.end.slices();
    scored
        .into_iter()
        .find(|c| accept(env, start, &c.linker, end, stats))
        .map(|c| Outcome {
            s: pairs[c.pair].s.clone(),
            m: c.m,
            e: pairs[c.pair].e.clone(),
        })
}

fn ids_to_slices(env: &LinkEnv, ids: &[u32]) -> Vec<Slice> {
    ids.iter().map(|&i| env.model.slice(i).clone()).collect()
}

/// Result of linking k segments pairwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainResult {
    /// Segments and linkers in play order, unpadded.
    pub level: SliceSequence,
    pub per_pair: Vec<LinkResult>,
    /// `(offset, length)` of each linker in `level`.
    pub linker_extents: Vec<(usize, usize)>,
    pub linkable: bool,
    pub completable: bool,
    pub generable: bool,
    pub unbroken: bool,
    pub usable: bool,
}

/// Links each adjacent pair independently, assembles the level and checks
/// it as a whole. The level flags are only computed when every pair linked.
pub fn chain_segments(
    segments: &[SliceSequence],
    strategy: Strategy,
    required: Option<SlicePredicate>,
    max_depth: usize,
    env: &LinkEnv,
) -> ChainResult {
    assert!(segments.len() >= 2, "chaining needs at least two segments");
    let per_pair: Vec<LinkResult> = segments
        .windows(2)
        .map(|w| {
            let mut req = LinkRequest::new(w[0].clone(), w[1].clone(), strategy, max_depth);
            req.required = required;
            build_link(&req, env)
        })
        .collect();
    assemble_chain(segments, per_pair, env)
}

/// Assembles `segments` with already built pairwise links (`per_pair[i]`
/// joins segments `i` and `i + 1`) and checks the whole level.
pub fn assemble_chain(segments: &[SliceSequence], per_pair: Vec<LinkResult>, env: &LinkEnv) -> ChainResult {
    assert_eq!(per_pair.len() + 1, segments.len(), "one link per adjacent pair");
    let linkable = per_pair.iter().all(LinkResult::linked);
    let mut slices = Vec::new();
    let mut linker_extents = Vec::new();
    for (i, seg) in segments.iter().enumerate() {
        slices.extend_from_slice(seg.slices());
        if let Some(r) = per_pair.get(i) {
            linker_extents.push((slices.len(), r.linker.len()));
            slices.extend_from_slice(&r.linker);
        }
    }
    let level = SliceSequence::new(segments[0].orientation(), slices)
        .expect("segments and linkers share a slice length");
    let (mut completable, mut generable, mut unbroken) = (false, false, false);
    if linkable {
        let mut stats = SearchStats::default();
        (unbroken, generable, completable) = flags(env, level.slices(), &mut stats);
    }
    ChainResult {
        usable: env.usable_mode.usable(completable, generable, unbroken),
        level,
        per_pair,
        linker_extents,
        linkable,
        completable,
        generable,
        unbroken,
    }
}
