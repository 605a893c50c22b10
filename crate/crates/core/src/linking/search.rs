use std::collections::HashMap;
use std::ops::ControlFlow;

use crate::level::Slice;
use crate::markov::NGramModel;

/// Depth-limited search for slice lists `L` such that
/// `start_prior ++ L ++ end_prior` is generable window by window.
///
/// Candidates come out by length, and within a length in lexicographic
/// order. A memo of "can this context still finish in exactly r slices"
/// keeps the enumeration from walking into dead ends.
pub struct ConnectSearch<'m> {
    model: &'m NGramModel,
    k: usize,
    start: Option<Vec<u32>>,
    end: Option<Vec<u32>>,
    allowed: Vec<bool>,
    max_depth: usize,
    memo: HashMap<(Box<[u32]>, usize), bool>,
    nodes: usize,
}

impl<'m> ConnectSearch<'m> {
    /// `start_prior` and `end_prior` need at least `order - 1` slices; only
    /// the last (resp. first) `order - 1` are used. With `filter`, every
    /// inserted slice must come from it.
    pub fn new(
        model: &'m NGramModel,
        start_prior: &[Slice],
        end_prior: &[Slice],
        filter: Option<&[Slice]>,
        max_depth: usize,
    ) -> Self {
        let k = model.order() - 1;
        let tail = &start_prior[start_prior.len().saturating_sub(k)..];
        let head = &end_prior[..end_prior.len().min(k)];
        let start = (tail.len() == k).then(|| model.ids_of(tail)).flatten();
        let end = (head.len() == k).then(|| model.ids_of(head)).flatten();
        let n = model.vocabulary().len();
        let allowed = match filter {
            None => vec![true; n],
            Some(f) => {
                let mut a = vec![false; n];
                for s in f {
                    if let Some(id) = model.id_of(s) {
                        a[id as usize] = true;
                    }
                }
                a
            }
        };
        ConnectSearch {
            model,
            k,
            start,
            end,
            allowed,
            max_depth,
            memo: HashMap::new(),
            nodes: 0,
        }
    }

    pub fn max_depth(&self) -> usize {
        self.max_depth
    }

    /// Search nodes visited so far.
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    fn finish_ok(&self, ctx: &[u32]) -> bool {
        let end = self.end.as_ref().expect("checked by caller");
        let joined: Vec<u32> = ctx.iter().chain(end).copied().collect();
        joined.windows(self.k + 1).all(|w| self.model.window_seen(w))
    }

    fn reach(&mut self, ctx: &[u32], remaining: usize) -> bool {
        if remaining == 0 {
            return self.finish_ok(ctx);
        }
        let key = (Box::<[u32]>::from(ctx), remaining);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let mut ok = false;
        let model = self.model;
        for &(s, _) in model.successor_ids(ctx) {
            if !self.allowed[s as usize] {
                continue;
            }
            let next: Vec<u32> = ctx[1..].iter().copied().chain([s]).collect();
            if self.reach(&next, remaining - 1) {
                ok = true;
                break;
            }
        }
        self.memo.insert(key, ok);
        ok
    }

    /// Calls `f` with every candidate of exactly `len` slices, in
    /// lexicographic order, until it breaks.
    pub fn for_each_of_length(
        &mut self,
        len: usize,
        mut f: impl FnMut(&[u32]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let Some(start) = self.start.clone() else {
            return ControlFlow::Continue(());
        };
        if self.end.is_none() || len > self.max_depth || !self.reach(&start, len) {
            return ControlFlow::Continue(());
        }
        let mut path = Vec::with_capacity(len);
        self.walk(&start, len, &mut path, &mut f)
    }

    fn walk(
        &mut self,
        ctx: &[u32],
        remaining: usize,
        path: &mut Vec<u32>,
        f: &mut impl FnMut(&[u32]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        self.nodes += 1;
        if remaining == 0 {
            return f(path);
        }
        let model = self.model;
        for &(s, _) in model.successor_ids(ctx) {
            if !self.allowed[s as usize] {
                continue;
            }
            let next: Vec<u32> = ctx[1..].iter().copied().chain([s]).collect();
            if !self.reach(&next, remaining - 1) {
                continue;
            }
            path.push(s);
            let flow = self.walk(&next, remaining - 1, path, f);
            path.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// Every candidate up to the depth limit, shortest first. Stops after
    /// `cap` candidates; the flag reports whether that happened.
    pub fn collect(&mut self, cap: usize) -> (Vec<Vec<u32>>, bool) {
        let mut out = Vec::new();
        let mut truncated = false;
        for len in 0..=self.max_depth {
            let flow = self.for_each_of_length(len, |c| {
                if out.len() >= cap {
                    truncated = true;
                    return ControlFlow::Break(());
                }
                out.push(c.to_vec());
                ControlFlow::Continue(())
            });
            if flow.is_break() {
                break;
            }
        }
        (out, truncated)
    }

    pub fn slices(&self, ids: &[u32]) -> Vec<Slice> {
        ids.iter().map(|&i| self.model.slice(i).clone()).collect()
    }
}

/// Linker candidates between two priors, shortest first, lexicographic
/// within a length.
pub fn connect_priors<'m>(
    model: &'m NGramModel,
    start_prior: &[Slice],
    end_prior: &[Slice],
    filter: Option<&[Slice]>,
    max_depth: usize,
) -> impl Iterator<Item = Vec<Slice>> + 'm {
    let mut search = ConnectSearch::new(model, start_prior, end_prior, filter, max_depth);
    (0..=max_depth).flat_map(move |len| {
        let mut batch = Vec::new();
        let _ = search.for_each_of_length(len, |c| {
            batch.push(c.to_vec());
            ControlFlow::Continue(())
        });
        batch
            .into_iter()
            .map(|ids| ids.iter().map(|&i| model.slice(i).clone()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    })
}
