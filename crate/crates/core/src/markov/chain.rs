use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::MarkovError;
use crate::level::{GameConfig, Slice, SliceSequence};

/// Completion passes before [`complete_to_fixed_point`] gives up.
pub const FIXED_POINT_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainDirection {
    Forward,
    Backward,
}

/// Markov chain from runs of structure slices to the rest of the run.
///
/// Keys and values are stored in the chain's reading direction: play order
/// for forward chains, reversed play order for backward chains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureChain {
    pub direction: ChainDirection,
    pub max_context: usize,
    transitions: BTreeMap<Vec<Slice>, BTreeMap<Vec<Slice>, u32>>,
}

impl StructureChain {
    pub fn is_empty(&self) -> bool {
        self.transitions.is_empty()
    }

    pub fn len(&self) -> usize {
        self.transitions.len()
    }

    /// Completion runs recorded for a key (in reading direction).
    pub fn get(&self, key: &[Slice]) -> Option<&BTreeMap<Vec<Slice>, u32>> {
        self.transitions.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &Vec<Slice>> {
        self.transitions.keys()
    }

    pub fn values(&self) -> impl Iterator<Item = &Vec<Slice>> {
        self.transitions.values().flat_map(|v| v.keys())
    }
}

/// Trains the forward chain on the corpus and the backward chain on the
/// reversed corpus. Only runs of consecutive structure slices contribute.
pub fn train_structure_chains(
    corpus: &[SliceSequence],
    config: &GameConfig,
) -> (StructureChain, StructureChain) {
    let max_context = config.max_structure_extent();
    let mut fwd = StructureChain {
        direction: ChainDirection::Forward,
        max_context,
        transitions: BTreeMap::new(),
    };
    let mut back = StructureChain {
        direction: ChainDirection::Backward,
        max_context,
        transitions: BTreeMap::new(),
    };
    for seq in corpus {
        let slices = seq.slices();
        let reversed: Vec<Slice> = slices.iter().rev().cloned().collect();
        train_runs(&mut fwd, slices, config);
        train_runs(&mut back, &reversed, config);
    }
    (fwd, back)
}

fn train_runs(chain: &mut StructureChain, slices: &[Slice], config: &GameConfig) {
    let mut i = 0;
    while i < slices.len() {
        if !config.is_structure_slice(&slices[i]) {
            i += 1;
            continue;
        }
        let mut j = i;
        while j < slices.len() && config.is_structure_slice(&slices[j]) {
            j += 1;
        }
        let run = &slices[i..j];
        for p in 0..run.len() {
            for c in 1..=chain.max_context.min(p + 1) {
                let key = run[p + 1 - c..=p].to_vec();
                let value = run[p + 1..].to_vec();
                *chain
                    .transitions
                    .entry(key)
                    .or_default()
                    .entry(value)
                    .or_insert(0) += 1;
            }
        }
        i = j;
    }
}

/// The boundary read in the chain's direction: the trailing slices for a
/// forward chain, the leading slices reversed for a backward chain.
fn reading_order(chain: &StructureChain, boundary: &[Slice]) -> Vec<Slice> {
    match chain.direction {
        ChainDirection::Forward => boundary.to_vec(),
        ChainDirection::Backward => boundary.iter().rev().cloned().collect(),
    }
}

/// Candidate completions for the longest matching context, best first
/// (highest count, then lexicographic), each in play order.
///
/// For a forward chain `boundary` is the end of the start segment; for a
/// backward chain it is the start of the end segment, both in play order.
/// Returns a single empty completion when the boundary does not end (or
/// start) inside a structure.
pub fn completions(
    chain: &StructureChain,
    boundary: &[Slice],
    config: &GameConfig,
) -> Result<Vec<(Vec<Slice>, u32)>, MarkovError> {
    let read = reading_order(chain, boundary);
    let Some(last) = read.last() else {
        return Ok(vec![(Vec::new(), 0)]);
    };
    if !config.is_structure_slice(last) {
        return Ok(vec![(Vec::new(), 0)]);
    }
    let n = read.len();
    let Some(mut best) = chain.get(&read[n - 1..]) else {
        return Err(MarkovError::UnknownStructure { slice: last.to_string() });
    };
    let mut c = 1;
    while c < chain.max_context && c < n && config.is_structure_slice(&read[n - 1 - c]) {
        match chain.get(&read[n - 1 - c..]) {
            Some(v) => {
                best = v;
                c += 1;
            }
            None => break,
        }
    }
    let mut out: Vec<(Vec<Slice>, u32)> = best.iter().map(|(v, &k)| (v.clone(), k)).collect();
    // BTreeMap order is lexicographic; a stable sort by count keeps it for ties
    out.sort_by(|a, b| b.1.cmp(&a.1));
    if chain.direction == ChainDirection::Backward {
        for (v, _) in &mut out {
            v.reverse();
        }
    }
    Ok(out)
}

/// Best single completion for the boundary; empty when no structure is cut.
pub fn complete_structure(
    chain: &StructureChain,
    boundary: &[Slice],
    config: &GameConfig,
) -> Result<Vec<Slice>, MarkovError> {
    Ok(completions(chain, boundary, config)?
        .into_iter()
        .next()
        .map(|(v, _)| v)
        .unwrap_or_default())
}

/// Starting from `first`, keeps asking the chain for more until it returns
/// nothing. Fails with `Unstable` after [`FIXED_POINT_CAP`] passes.
pub fn complete_to_fixed_point(
    chain: &StructureChain,
    boundary: &[Slice],
    first: Vec<Slice>,
    config: &GameConfig,
) -> Result<Vec<Slice>, MarkovError> {
    let mut acc = first;
    for _ in 0..FIXED_POINT_CAP {
        let joined: Vec<Slice> = match chain.direction {
            ChainDirection::Forward => boundary.iter().chain(&acc).cloned().collect(),
            ChainDirection::Backward => acc.iter().chain(boundary).cloned().collect(),
        };
        let more = complete_structure(chain, &joined, config)?;
        if more.is_empty() {
            return Ok(acc);
        }
        acc = match chain.direction {
            ChainDirection::Forward => acc.into_iter().chain(more).collect(),
            ChainDirection::Backward => more.into_iter().chain(acc).collect(),
        };
    }
    Err(MarkovError::Unstable { passes: FIXED_POINT_CAP })
}
