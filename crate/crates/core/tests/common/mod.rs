//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::{HashSet, VecDeque};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use seglink::agents::{AgentParams, JumpPhase, PlayerState, RoguelikeParams};
use seglink::behavior::BcVector;
use seglink::level::{BcKind, GameConfig, Orientation, Slice, SliceSequence, TileGrid, TileTag};
use seglink::linking::{LevelJudge, LinkEnv, UsableMode, DEFAULT_CANDIDATE_CAP};
use seglink::markov::NGramModel;

// ---- toy games: one-letter slices ----

pub fn seq(s: &str) -> SliceSequence {
    let parts: Vec<String> = s.chars().map(String::from).collect();
    let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
    SliceSequence::from_strs(Orientation::ColumnsLeftToRight, &refs)
}

/// Adjacent letter pairs in `bad` make a level uncompletable; `e` is food.
pub struct Toy {
    pub bad: Vec<(u8, u8)>,
}

impl Toy {
    pub fn completable_str(&self, level: &[u8]) -> bool {
        level.windows(2).all(|w| !self.bad.contains(&(w[0], w[1])))
    }

    pub fn bc_str(level: &[u8]) -> [f64; 2] {
        let n = level.len().max(1) as f64;
        let a = level.iter().filter(|&&c| c == b'a').count() as f64;
        let bc = level.iter().filter(|&&c| c == b'b' || c == b'c').count() as f64;
        [a / n, bc / n]
    }
}

impl LevelJudge for Toy {
    fn completable(&self, level: &[Slice]) -> bool {
        let s: Vec<u8> = level.iter().map(|x| x.tiles()[0]).collect();
        self.completable_str(&s)
    }

    fn unbroken(&self, _: &[Slice]) -> bool {
        true
    }

    fn bc(&self, slices: &[Slice]) -> BcVector {
        let s: Vec<u8> = slices.iter().map(|x| x.tiles()[0]).collect();
        let [a, b] = Toy::bc_str(&s);
        BcVector::new(BcKind::DensityLeniency, a, b)
    }

    fn slice_has(&self, slice: &Slice, tag: TileTag) -> bool {
        tag == TileTag::Food && slice.as_str() == "e"
    }
}

pub fn toy_env<'a>(model: &'a NGramModel, judge: &'a Toy) -> LinkEnv<'a> {
    LinkEnv {
        model,
        filter: None,
        chains: None,
        judge,
        usable_mode: UsableMode::CompletableAndGenerable,
        candidate_cap: DEFAULT_CANDIDATE_CAP,
    }
}

pub struct ToyGame {
    pub alphabet: Vec<u8>,
    pub corpus: Vec<String>,
    pub order: usize,
    pub bad: Vec<(u8, u8)>,
    pub start: String,
    pub end: String,
}

pub fn random_toy(rng: &mut ChaCha8Rng) -> ToyGame {
    let alphabet: Vec<u8> = b"abcde"[..rng.gen_range(2..=5)].to_vec();
    let pick = |rng: &mut ChaCha8Rng, n: usize| -> String {
        (0..n).map(|_| alphabet[rng.gen_range(0..alphabet.len())] as char).collect()
    };
    let corpus = (0..rng.gen_range(1..=3))
        .map(|_| {
            let n = rng.gen_range(4..=10);
            pick(rng, n)
        })
        .collect();
    let bad = (0..rng.gen_range(0..=3))
        .map(|_| {
            (
                alphabet[rng.gen_range(0..alphabet.len())],
                alphabet[rng.gen_range(0..alphabet.len())],
            )
        })
        .collect();
    let (ls, le) = (rng.gen_range(2..=3), rng.gen_range(2..=3));
    ToyGame {
        order: rng.gen_range(2..=3),
        start: pick(rng, ls),
        end: pick(rng, le),
        alphabet,
        corpus,
        bad,
    }
}

/// Every filling of length `<= depth` over the game's alphabet whose
/// junction windows all occur in the corpus and whose level is completable.
pub fn brute_force_fillings(g: &ToyGame, depth: usize) -> Vec<Vec<u8>> {
    let seen: HashSet<&[u8]> = g
        .corpus
        .iter()
        .flat_map(|c| c.as_bytes().windows(g.order))
        .collect();
    let k = g.order - 1;
    let s = g.start.as_bytes();
    let e = g.end.as_bytes();
    let judge = Toy { bad: g.bad.clone() };
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![vec![]];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for l in &layer {
            let junction: Vec<u8> = s[s.len() - k..].iter().chain(l).chain(&e[..k]).copied().collect();
            let generable = junction.windows(g.order).all(|w| seen.contains(w));
            let level: Vec<u8> = s.iter().chain(l).chain(e).copied().collect();
            if generable && judge.completable_str(&level) {
                out.push(l.clone());
            }
            for &c in &g.alphabet {
                let mut l2 = l.clone();
                l2.push(c);
                next.push(l2);
            }
        }
        layer = next;
    }
    out
}

pub fn toy_rmse(linker: &[u8], start: &[u8], end: &[u8]) -> f64 {
    if linker.is_empty() {
        return 0.0;
    }
    let l = Toy::bc_str(linker);
    let (a, b) = (Toy::bc_str(start), Toy::bc_str(end));
    let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let d0 = l[0] - m[0];
    let d1 = l[1] - m[1];
    ((d0 * d0 + d1 * d1) / 2.0).sqrt()
}

// ---- platformer: exhaustive reachability ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Ground,
    Rise(usize, usize),
    Fall,
}

impl From<JumpPhase> for Phase {
    fn from(p: JumpPhase) -> Self {
        match p {
            JumpPhase::Grounded => Phase::Ground,
            JumpPhase::Falling => Phase::Fall,
            JumpPhase::Rising { ascended, lateral } => Phase::Rise(ascended as usize, lateral as usize),
        }
    }
}

pub struct Platformer<'a> {
    pub grid: TileGrid,
    pub config: &'a GameConfig,
    pub max_h: usize,
    pub max_lat: usize,
    pub wrap: bool,
}

impl<'a> Platformer<'a> {
    pub fn new(padded: &SliceSequence, config: &'a GameConfig) -> Self {
        let AgentParams::Platformer(p) = &config.agent_params else {
            panic!("not a platformer config");
        };
        Platformer {
            grid: padded.to_grid(),
            config,
            max_h: p.max_jump_height,
            max_lat: p.max_jump_horizontal,
            wrap: p.allow_horizontal_wrap,
        }
    }

    fn tag(&self, x: usize, y: usize, t: TileTag) -> bool {
        self.config.has_tag(self.grid.get(x, y), t)
    }

    /// Not solid and not deadly.
    fn enterable(&self, x: usize, y: usize) -> bool {
        !self.tag(x, y, TileTag::Solid) && !self.tag(x, y, TileTag::Hazard) && !self.tag(x, y, TileTag::Enemy)
    }

    fn platform(&self, x: usize, y: usize) -> bool {
        self.tag(x, y, TileTag::PassablePlatform) || self.tag(x, y, TileTag::MovingPlatform)
    }

    fn floor_below(&self, x: usize, y: usize) -> bool {
        y + 1 < self.grid.height() && (self.tag(x, y + 1, TileTag::Solid) || self.platform(x, y + 1))
    }

    fn col(&self, x: usize, dx: isize) -> Option<usize> {
        let w = self.grid.width() as isize;
        let n = x as isize + dx;
        if (0..w).contains(&n) {
            Some(n as usize)
        } else if self.wrap {
            Some(n.rem_euclid(w) as usize)
        } else {
            None
        }
    }

    pub fn successors(&self, (x, y, p): (usize, usize, Phase)) -> Vec<(usize, usize, Phase)> {
        let mut out = Vec::new();
        let jump = |asc: usize, lat: usize, out: &mut Vec<(usize, usize, Phase)>| {
            if y == 0 || asc >= self.max_h {
                return;
            }
            for dx in [-1isize, 0, 1] {
                let l = lat + dx.unsigned_abs();
                if l > self.max_lat {
                    continue;
                }
                if let Some(nx) = self.col(x, dx) {
                    if self.enterable(nx, y - 1) {
                        out.push((nx, y - 1, Phase::Rise(asc + 1, l)));
                    }
                }
            }
        };
        match p {
            Phase::Ground => {
                for dx in [-1isize, 1] {
                    if let Some(nx) = self.col(x, dx) {
                        if self.enterable(nx, y) {
                            let np = if self.floor_below(nx, y) { Phase::Ground } else { Phase::Fall };
                            out.push((nx, y, np));
                        }
                    }
                }
                jump(0, 0, &mut out);
            }
            Phase::Rise(asc, lat) => {
                jump(asc, lat, &mut out);
                out.push((x, y, Phase::Fall));
            }
            Phase::Fall => {
                if self.floor_below(x, y) {
                    out.push((x, y, Phase::Ground));
                } else if y + 1 < self.grid.height() {
                    for dx in [-1isize, 0, 1] {
                        if let Some(nx) = self.col(x, dx) {
                            if self.enterable(nx, y + 1) && !self.platform(nx, y + 1) {
                                out.push((nx, y + 1, Phase::Fall));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    pub fn play(&self, x: usize, y: usize) -> usize {
        match self.config.orientation {
            Orientation::ColumnsLeftToRight => x,
            Orientation::RowsBottomToTop => self.grid.height() - 1 - y,
        }
    }

    pub fn is_goal(&self, (x, y, p): (usize, usize, Phase)) -> bool {
        let extent = match self.config.orientation {
            Orientation::ColumnsLeftToRight => self.grid.width(),
            Orientation::RowsBottomToTop => self.grid.height(),
        };
        p == Phase::Ground && self.play(x, y) >= extent - self.config.padding.end.len()
    }

    /// Breadth-first search over every reachable state.
    pub fn reachable_goal(&self, start: (usize, usize, Phase)) -> bool {
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(s) = queue.pop_front() {
            if self.is_goal(s) {
                return true;
            }
            for n in self.successors(s) {
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        false
    }

    /// Checks an agent path step by step. Returns the first bad step.
    pub fn replay(&self, path: &[PlayerState], start: (usize, usize, Phase), completable: bool) -> Result<(), String> {
        let states: Vec<(usize, usize, Phase)> = path
            .iter()
            .map(|s| match *s {
                PlayerState::Platformer { column, row, phase } => (column, row, phase.into()),
                _ => panic!("roguelike state in a platformer path"),
            })
            .collect();
        if states.first() != Some(&start) {
            return Err(format!("path starts at {:?}, expected {start:?}", states.first()));
        }
        for (i, w) in states.windows(2).enumerate() {
            if !self.successors(w[0]).contains(&w[1]) {
                return Err(format!("step {i}: {:?} -> {:?} is not a legal move", w[0], w[1]));
            }
            if !self.enterable(w[1].0, w[1].1) {
                return Err(format!("step {i}: {:?} is not passable", w[1]));
            }
        }
        if completable && !self.is_goal(*states.last().unwrap()) {
            return Err("completable path does not end grounded in the end padding".into());
        }
        Ok(())
    }
}

// ---- roguelike: exhaustive reachability over the full state ----

pub struct Roguelike<'a> {
    pub grid: TileGrid,
    pub config: &'a GameConfig,
    pub params: RoguelikeParams,
}

impl<'a> Roguelike<'a> {
    pub fn new(padded: &SliceSequence, config: &'a GameConfig) -> Self {
        let AgentParams::Roguelike(p) = &config.agent_params else {
            panic!("not a roguelike config");
        };
        Roguelike {
            grid: padded.to_grid(),
            config,
            params: p.clone(),
        }
    }

    fn tag(&self, x: usize, y: usize, t: TileTag) -> bool {
        self.config.has_tag(self.grid.get(x, y), t)
    }

    fn cells_with(&self, t: TileTag) -> Vec<(usize, usize)> {
        let mut v = Vec::new();
        for y in 0..self.grid.height() {
            for x in 0..self.grid.width() {
                if self.tag(x, y, t) {
                    v.push((x, y));
                }
            }
        }
        v
    }

    pub fn start(&self) -> (usize, usize) {
        self.cells_with(TileTag::StartMarker)[0]
    }

    fn goal(&self, x: usize, y: usize) -> bool {
        self.tag(x, y, TileTag::Portal) || self.tag(x, y, TileTag::EndMarker)
    }

    fn blocked(&self, x: usize, y: usize) -> bool {
        self.tag(x, y, TileTag::Solid) || self.tag(x, y, TileTag::Hazard) || self.tag(x, y, TileTag::Enemy)
    }

    fn neighbours(&self, x: usize, y: usize) -> Vec<(usize, usize)> {
        let (w, h) = (self.grid.width() as isize, self.grid.height() as isize);
        [(1isize, 0isize), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .map(|&(dx, dy)| (x as isize + dx, y as isize + dy))
            .filter(|&(nx, ny)| nx >= 0 && ny >= 0 && nx < w && ny < h)
            .map(|(nx, ny)| (nx as usize, ny as usize))
            .collect()
    }

    /// Breadth-first search over (position, stamina, switches hit, food eaten).
    pub fn reachable_goal(&self) -> bool {
        let switches = self.cells_with(TileTag::Switch);
        let foods = self.cells_with(TileTag::Food);
        let (sx, sy) = self.start();
        let start = (sx, sy, self.params.start_stamina, 0u64, 0u64);
        let mut seen = HashSet::from([start]);
        let mut queue = VecDeque::from([start]);
        let all = (1u64 << switches.len()) - 1;
        while let Some((x, y, st, sw, fd)) = queue.pop_front() {
            if st < self.params.move_cost {
                continue;
            }
            for (nx, ny) in self.neighbours(x, y) {
                if self.goal(nx, ny) {
                    if sw == all {
                        return true;
                    }
                    continue;
                }
                if self.blocked(nx, ny) {
                    continue;
                }
                let mut st = st - self.params.move_cost;
                let mut fd = fd;
                if let Some(i) = foods.iter().position(|&c| c == (nx, ny)) {
                    if fd & (1 << i) == 0 {
                        fd |= 1 << i;
                        st = (st + self.params.food_gain).min(self.params.stamina_cap);
                    }
                }
                if st == 0 {
                    continue;
                }
                let mut sw = sw;
                if let Some(i) = switches.iter().position(|&c| c == (nx, ny)) {
                    sw |= 1 << i;
                }
                let n = (nx, ny, st, sw, fd);
                if seen.insert(n) {
                    queue.push_back(n);
                }
            }
        }
        false
    }

    /// Replays an agent path, tracking food and switches itself.
    pub fn replay(&self, path: &[PlayerState], completable: bool) -> Result<(), String> {
        let switches = self.cells_with(TileTag::Switch);
        let mut eaten = HashSet::new();
        let mut hit = 0u64;
        let mut prev: Option<(usize, usize, u32)> = None;
        for (i, s) in path.iter().enumerate() {
            let PlayerState::Roguelike { column: x, row: y, stamina, switches: sw } = *s else {
                panic!("platformer state in a roguelike path");
            };
            match prev {
                None => {
                    if (x, y) != self.start() || stamina != self.params.start_stamina {
                        return Err(format!("path starts at {s:?}"));
                    }
                }
                Some((px, py, pst)) => {
                    if px.abs_diff(x) + py.abs_diff(y) != 1 {
                        return Err(format!("step {i}: not a single move"));
                    }
                    if self.blocked(x, y) {
                        return Err(format!("step {i}: entered a blocking tile"));
                    }
                    if pst < self.params.move_cost {
                        return Err(format!("step {i}: moved without stamina"));
                    }
                    let mut want = pst - self.params.move_cost;
                    if self.tag(x, y, TileTag::Food) && eaten.insert((x, y)) {
                        want = (want + self.params.food_gain).min(self.params.stamina_cap);
                    }
                    if stamina != want {
                        return Err(format!("step {i}: stamina {stamina}, expected {want}"));
                    }
                    if stamina == 0 && !self.goal(x, y) {
                        return Err(format!("step {i}: ran out of stamina"));
                    }
                }
            }
            if let Some(k) = switches.iter().position(|&c| c == (x, y)) {
                hit |= 1 << k;
            }
            if !self.goal(x, y) && sw != hit {
                return Err(format!("step {i}: switch mask {sw:b}, expected {hit:b}"));
            }
            prev = Some((x, y, stamina));
        }
        if completable {
            let &PlayerState::Roguelike { column, row, .. } = path.last().unwrap() else { unreachable!() };
            if !self.goal(column, row) || hit.count_ones() as usize != switches.len() {
                return Err("completable path does not end on an open goal".into());
            }
        }
        Ok(())
    }
}

/// Every sequence of 1..=`max_len` picks from `alphabet`, shortest first.
pub fn all_levels<'s>(alphabet: &[&'s str], max_len: usize) -> Vec<Vec<&'s str>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<&str>> = vec![vec![]];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for l in &layer {
            for &a in alphabet {
                let mut l2 = l.clone();
                l2.push(a);
                next.push(l2);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}
