use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::MarkovError;
use crate::level::{Orientation, Slice, SliceSequence};

pub const SCHEMA: &str = "seglink/ngram@1";
pub const DEFAULT_RETRY_BUDGET: usize = 500;

/// Order-n successor model over slices.
///
/// Slices are interned; ids follow lexicographic slice order, so sorting by
/// id is sorting by slice string.
#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel {
    order: usize,
    orientation: Orientation,
    vocab: Vec<Slice>,
    ids: HashMap<Slice, u32>,
    /// prior (order-1 ids) -> successors sorted by id, with counts
    successors: HashMap<Box<[u32]>, Vec<(u32, u32)>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelStats {
    pub order: usize,
    pub vocabulary: usize,
    pub priors: usize,
    pub transitions: usize,
    pub max_out_degree: usize,
    pub mean_out_degree: f64,
}

pub fn train_ngram(corpus: &[SliceSequence], order: usize) -> Result<NGramModel, MarkovError> {
    if order < 2 {
        return Err(MarkovError::InvalidOrder(order));
    }
    let Some(first) = corpus.first() else {
        return Err(MarkovError::CorpusTooShort { index: 0, len: 0, order });
    };
    let orientation = first.orientation();
    for (index, seq) in corpus.iter().enumerate() {
        if seq.len() < order {
            return Err(MarkovError::CorpusTooShort { index, len: seq.len(), order });
        }
        if seq.orientation() != orientation {
            return Err(MarkovError::MixedOrientation);
        }
        if seq.slice_len() != first.slice_len() {
            return Err(MarkovError::MixedSliceLength);
        }
    }
    let mut vocab: Vec<Slice> = corpus.iter().flat_map(|s| s.slices().iter().cloned()).collect();
    vocab.sort();
    vocab.dedup();
    let ids: HashMap<Slice, u32> = vocab.iter().enumerate().map(|(i, s)| (s.clone(), i as u32)).collect();

    let mut counts: HashMap<Box<[u32]>, HashMap<u32, u32>> = HashMap::new();
    for seq in corpus {
        let seq_ids: Vec<u32> = seq.slices().iter().map(|s| ids[s]).collect();
        for w in seq_ids.windows(order) {
            *counts
                .entry(w[..order - 1].into())
                .or_default()
                .entry(w[order - 1])
                .or_insert(0) += 1;
        }
    }
    let successors = counts
        .into_iter()
        .map(|(k, v)| {
            let mut v: Vec<(u32, u32)> = v.into_iter().collect();
            v.sort_unstable();
            (k, v)
        })
        .collect();
    Ok(NGramModel { order, orientation, vocab, ids, successors })
}

impl NGramModel {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Every slice seen in training, sorted.
    pub fn vocabulary(&self) -> &[Slice] {
        &self.vocab
    }

    pub fn id_of(&self, slice: &Slice) -> Option<u32> {
        self.ids.get(slice).copied()
    }

    pub fn slice(&self, id: u32) -> &Slice {
        &self.vocab[id as usize]
    }

    /// Ids for `slices`, or `None` if any is outside the vocabulary.
    pub fn ids_of(&self, slices: &[Slice]) -> Option<Vec<u32>> {
        slices.iter().map(|s| self.id_of(s)).collect()
    }

    /// Successor ids of an id prior with counts, sorted by id. Empty when
    /// the prior was never seen.
    pub fn successor_ids(&self, prior: &[u32]) -> &[(u32, u32)] {
        self.successors.get(prior).map_or(&[], Vec::as_slice)
    }

    /// Successors of `prior` in lexicographic order.
    pub fn successors_of(&self, prior: &[Slice]) -> Vec<&Slice> {
        self.successor_counts(prior).into_iter().map(|(s, _)| s).collect()
    }

    pub fn successor_counts(&self, prior: &[Slice]) -> Vec<(&Slice, u32)> {
        match self.ids_of(prior) {
            Some(p) => self
                .successor_ids(&p)
                .iter()
                .map(|&(id, c)| (self.slice(id), c))
                .collect(),
            None => Vec::new(),
        }
    }

    /// Whether the window `w` (exactly `order` ids) was seen in training.
    #[inline]
    pub fn window_seen(&self, w: &[u32]) -> bool {
        let (prior, last) = w.split_at(self.order - 1);
        self.successor_ids(prior)
            .binary_search_by_key(&last[0], |&(id, _)| id)
            .is_ok()
    }

    /// True iff every length-`order` window was seen in training.
    pub fn is_generable(&self, slices: &[Slice]) -> Result<bool, MarkovError> {
        if slices.len() < self.order {
            return Err(MarkovError::TooShort { len: slices.len(), order: self.order });
        }
        Ok(self.generable_unchecked(slices))
    }

    pub fn is_generable_seq(&self, seq: &SliceSequence) -> Result<bool, MarkovError> {
        self.is_generable(seq.slices())
    }

    /// Like [`is_generable`](Self::is_generable) but vacuously true for
    /// sequences shorter than the order.
    pub fn generable_unchecked(&self, slices: &[Slice]) -> bool {
        match self.ids_of(slices) {
            Some(ids) => ids.windows(self.order).all(|w| self.window_seen(w)),
            None => false,
        }
    }

    pub fn stats(&self) -> ModelStats {
        let degrees: Vec<usize> = self.successors.values().map(Vec::len).collect();
        let transitions: usize = degrees.iter().sum();
        ModelStats {
            order: self.order,
            vocabulary: self.vocab.len(),
            priors: degrees.len(),
            transitions,
            max_out_degree: degrees.iter().copied().max().unwrap_or(0),
            mean_out_degree: if degrees.is_empty() {
                0.0
            } else {
                transitions as f64 / degrees.len() as f64
            },
        }
    }

    fn sorted_priors(&self) -> Vec<(&[u32], &Vec<(u32, u32)>)> {
        let mut priors: Vec<_> = self.successors.iter().map(|(k, v)| (&**k, v)).collect();
        priors.sort_unstable_by(|a, b| a.0.cmp(b.0));
        priors
    }

    pub fn to_json(&self) -> String {
        let doc = ModelDoc {
            schema: SCHEMA.to_string(),
            order: self.order,
            orientation: self.orientation,
            vocabulary: self.vocab.clone(),
            successors: self
                .sorted_priors()
                .into_iter()
                .map(|(p, v)| PriorDoc { prior: p.to_vec(), next: v.clone() })
                .collect(),
        };
        serde_json::to_string(&doc).expect("model serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, MarkovError> {
        let doc: ModelDoc =
            serde_json::from_str(text).map_err(|e| MarkovError::Format(e.to_string()))?;
        if doc.schema != SCHEMA {
            return Err(MarkovError::Format(format!("unsupported schema {:?}", doc.schema)));
        }
        if doc.order < 2 {
            return Err(MarkovError::InvalidOrder(doc.order));
        }
        if doc.vocabulary.windows(2).any(|w| w[0] >= w[1]) {
            return Err(MarkovError::Format("vocabulary must be sorted and unique".into()));
        }
        let n = doc.vocabulary.len() as u32;
        let mut successors = HashMap::new();
        for p in doc.successors {
            let bad_prior = p.prior.len() != doc.order - 1 || p.prior.iter().any(|&i| i >= n);
            let bad_next = p.next.iter().any(|&(i, c)| i >= n || c == 0)
                || p.next.windows(2).any(|w| w[0].0 >= w[1].0);
            if bad_prior || bad_next {
                return Err(MarkovError::Format("malformed successor entry".into()));
            }
            successors.insert(p.prior.into_boxed_slice(), p.next);
        }
        let ids = doc
            .vocabulary
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
        Ok(NGramModel {
            order: doc.order,
            orientation: doc.orientation,
            vocab: doc.vocabulary,
            ids,
            successors,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    schema: String,
    order: usize,
    orientation: Orientation,
    vocabulary: Vec<Slice>,
    successors: Vec<PriorDoc>,
}

#[derive(Serialize, Deserialize)]
struct PriorDoc {
    prior: Vec<u32>,
    next: Vec<(u32, u32)>,
}

/// Samples a generable segment by a seeded random walk over the model,
/// retrying until `accept` agrees or [`DEFAULT_RETRY_BUDGET`] walks are spent.
pub fn sample_segment(
    model: &NGramModel,
    length: usize,
    seed: u64,
    accept: impl FnMut(&SliceSequence) -> bool,
) -> Result<SliceSequence, MarkovError> {
    sample_segment_with_budget(model, length, seed, DEFAULT_RETRY_BUDGET, accept)
}

pub fn sample_segment_with_budget(
    model: &NGramModel,
    length: usize,
    seed: u64,
    budget: usize,
    mut accept: impl FnMut(&SliceSequence) -> bool,
) -> Result<SliceSequence, MarkovError> {
    if length < model.order {
        return Err(MarkovError::TooShort { len: length, order: model.order });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // start priors weighted by how often they were followed by anything
    let priors = model.sorted_priors();
    let weights: Vec<u64> = priors
        .iter()
        .map(|(_, v)| v.iter().map(|&(_, c)| c as u64).sum())
        .collect();
    let total: u64 = weights.iter().sum();
    if total == 0 {
        return Err(MarkovError::Exhausted { attempts: 0 });
    }
    for _ in 0..budget {
        let mut pick = rng.gen_range(0..total);
        let mut start = 0;
        for (i, &w) in weights.iter().enumerate() {
            if pick < w {
                start = i;
                break;
            }
            pick -= w;
        }
        let mut ids: Vec<u32> = priors[start].0.to_vec();
        while ids.len() < length {
            let next = model.successor_ids(&ids[ids.len() + 1 - model.order..]);
            if next.is_empty() {
                break;
            }
            let total: u32 = next.iter().map(|&(_, c)| c).sum();
            let mut pick = rng.gen_range(0..total);
            let mut chosen = next[0].0;
            for &(id, c) in next {
                if pick < c {
                    chosen = id;
                    break;
                }
                pick -= c;
            }
            ids.push(chosen);
        }
        if ids.len() < length {
            continue;
        }
        let seq = SliceSequence::new(
            model.orientation,
            ids.iter().map(|&i| model.slice(i).clone()).collect(),
        )
        .expect("vocabulary slices share one length");
        if accept(&seq) {
            return Ok(seq);
        }
    }
    Err(MarkovError::Exhausted { attempts: budget })
}
