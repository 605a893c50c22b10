use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{play_coord, AgentParams, AgentResult, JumpPhase, PlatformerParams, PlayerState};
use crate::level::{GameConfig, Orientation, SliceSequence, TileTag};

const PASSABLE: u8 = 1;
const LETHAL: u8 = 2;
const STANDABLE: u8 = 4;
const PLATFORM: u8 = 8;
const START: u8 = 16;

/// Side-scrolling platformer check on a padded level. Uses the config's
/// platformer parameters, or defaults if the config names another agent.
pub fn platformer_check(level: &SliceSequence, config: &GameConfig) -> AgentResult {
    platformer_check_with(level, config, &config_params(config))
}

/// Vertical platformer check: identical rules, with "up" as the play axis.
/// The level must be sliced rows bottom to top.
pub fn vertical_platformer_check(level: &SliceSequence, config: &GameConfig) -> AgentResult {
    debug_assert_eq!(level.orientation(), Orientation::RowsBottomToTop);
    platformer_check_with(level, config, &config_params(config))
}

fn config_params(config: &GameConfig) -> PlatformerParams {
    match &config.agent_params {
        AgentParams::Platformer(p) => p.clone(),
        _ => PlatformerParams::default(),
    }
}

struct Physics {
    w: usize,
    h: usize,
    flags: Vec<u8>,
    max_h: usize,
    max_lat: usize,
    wrap: bool,
    orientation: Orientation,
}

impl Physics {
    #[inline]
    fn flag(&self, x: usize, y: usize) -> u8 {
        self.flags[y * self.w + x]
    }

    #[inline]
    fn open(&self, x: usize, y: usize) -> bool {
        self.flag(x, y) & (PASSABLE | LETHAL) == PASSABLE
    }

    /// The tile below `(x, y)` can be stood on.
    #[inline]
    fn supported(&self, x: usize, y: usize) -> bool {
        y + 1 < self.h && self.flag(x, y + 1) & STANDABLE != 0
    }

    #[inline]
    fn shift(&self, x: usize, dx: isize) -> Option<usize> {
        let nx = x as isize + dx;
        if nx >= 0 && (nx as usize) < self.w {
            Some(nx as usize)
        } else if self.wrap {
            Some(nx.rem_euclid(self.w as isize) as usize)
        } else {
            None
        }
    }

    fn phase_count(&self) -> usize {
        2 + self.max_h * (self.max_lat + 1)
    }

    fn encode(&self, phase: JumpPhase) -> usize {
        match phase {
            JumpPhase::Grounded => 0,
            JumpPhase::Falling => 1,
            JumpPhase::Rising { ascended, lateral } => {
                2 + (ascended as usize - 1) * (self.max_lat + 1) + lateral as usize
            }
        }
    }

    fn decode(&self, code: usize) -> JumpPhase {
        match code {
            0 => JumpPhase::Grounded,
            1 => JumpPhase::Falling,
            c => {
                let k = c - 2;
                JumpPhase::Rising {
                    ascended: (k / (self.max_lat + 1) + 1) as u8,
                    lateral: (k % (self.max_lat + 1)) as u8,
                }
            }
        }
    }

    /// Successor states in a fixed order.
    fn successors(&self, x: usize, y: usize, phase: JumpPhase, out: &mut Vec<(usize, usize, JumpPhase)>) {
        out.clear();
        match phase {
            JumpPhase::Grounded => {
                for dx in [-1isize, 1] {
                    if let Some(nx) = self.shift(x, dx) {
                        if self.open(nx, y) {
                            let next = if self.supported(nx, y) {
                                JumpPhase::Grounded
                            } else {
                                JumpPhase::Falling
                            };
                            out.push((nx, y, next));
                        }
                    }
                }
                self.rise(x, y, 0, 0, out);
            }
            JumpPhase::Rising { ascended, lateral } => {
                if (ascended as usize) < self.max_h {
                    self.rise(x, y, ascended, lateral, out);
                }
                out.push((x, y, JumpPhase::Falling));
            }
            JumpPhase::Falling => {
                if self.supported(x, y) {
                    out.push((x, y, JumpPhase::Grounded));
                } else if y + 1 < self.h {
                    for dx in [-1isize, 0, 1] {
                        if let Some(nx) = self.shift(x, dx) {
                            // platforms are landed on, never fallen into
                            if self.open(nx, y + 1) && self.flag(nx, y + 1) & PLATFORM == 0 {
                                out.push((nx, y + 1, JumpPhase::Falling));
                            }
                        }
                    }
                }
            }
        }
    }

    fn rise(&self, x: usize, y: usize, ascended: u8, lateral: u8, out: &mut Vec<(usize, usize, JumpPhase)>) {
        if y == 0 {
            return;
        }
        for dx in [-1isize, 0, 1] {
            let lat = lateral as usize + dx.unsigned_abs();
            if lat > self.max_lat {
                continue;
            }
            if let Some(nx) = self.shift(x, dx) {
                if self.open(nx, y - 1) {
                    out.push((
                        nx,
                        y - 1,
                        JumpPhase::Rising {
                            ascended: ascended + 1,
                            lateral: lat as u8,
                        },
                    ));
                }
            }
        }
    }

    fn play(&self, x: usize, y: usize) -> usize {
        play_coord(self.orientation, self.h, x, y)
    }

    fn extent(&self) -> usize {
        match self.orientation {
            Orientation::ColumnsLeftToRight => self.w,
            Orientation::RowsBottomToTop => self.h,
        }
    }

    fn start(&self, start_slices: usize) -> Option<(usize, usize, JumpPhase)> {
        if let Some(i) = self.flags.iter().position(|f| f & START != 0) {
            let (x, y) = (i % self.w, i / self.w);
            let phase = if self.supported(x, y) {
                JumpPhase::Grounded
            } else {
                JumpPhase::Falling
            };
            return Some((x, y, phase));
        }
        let scan = start_slices.max(1).min(self.extent());
        for s in 0..scan {
            match self.orientation {
                Orientation::ColumnsLeftToRight => {
                    let x = s;
                    for y in 0..self.h {
                        if self.open(x, y) && self.supported(x, y) {
                            return Some((x, y, JumpPhase::Grounded));
                        }
                    }
                }
                Orientation::RowsBottomToTop => {
                    let y = self.h - 1 - s;
                    let mid = self.w / 2;
                    for k in 0..self.w {
                        // center outward: mid, mid-1, mid+1, ...
                        let off = (k + 1) / 2;
                        let x = if k % 2 == 1 {
                            match mid.checked_sub(off) {
                                Some(x) => x,
                                None => continue,
                            }
                        } else {
                            mid + off
                        };
                        if x < self.w && self.open(x, y) && self.supported(x, y) {
                            return Some((x, y, JumpPhase::Grounded));
                        }
                    }
                }
            }
        }
        None
    }
}

/// Best-first search over platformer states. The level is completable once
/// the agent stands on its feet in the end padding.
pub fn platformer_check_with(
    level: &SliceSequence,
    config: &GameConfig,
    params: &PlatformerParams,
) -> AgentResult {
    let grid = level.to_grid();
    let (w, h) = (grid.width(), grid.height());
    if w == 0 || h == 0 {
        return AgentResult::unreachable();
    }
    let flags = grid
        .cells()
        .iter()
        .map(|&c| {
            let mut f = 0;
            if !config.has_tag(c, TileTag::Solid) {
                f |= PASSABLE;
            }
            if config.has_tag(c, TileTag::Hazard) || config.has_tag(c, TileTag::Enemy) {
                f |= LETHAL;
            }
            let platform = config.has_tag(c, TileTag::PassablePlatform)
                || config.has_tag(c, TileTag::MovingPlatform);
            if platform {
                f |= PLATFORM;
            }
            if platform || config.has_tag(c, TileTag::Solid) {
                f |= STANDABLE;
            }
            if config.has_tag(c, TileTag::StartMarker) {
                f |= START;
            }
            f
        })
        .collect();
    let physics = Physics {
        w,
        h,
        flags,
        max_h: params.max_jump_height,
        max_lat: params.max_jump_horizontal,
        wrap: params.allow_horizontal_wrap,
        orientation: level.orientation(),
    };
    let extent = physics.extent();
    let goal_from = extent.saturating_sub(config.padding.end.len().max(1));

    let Some((sx, sy, sphase)) = physics.start(config.padding.start.len()) else {
        return AgentResult::unreachable();
    };

    let phases = physics.phase_count();
    let index = |x: usize, y: usize, p: usize| (y * w + x) * phases + p;
    let mut parent = vec![u32::MAX; w * h * phases];
    let mut seen = vec![false; w * h * phases];
    let mut heap = BinaryHeap::new();

    let start_code = physics.encode(sphase);
    let start_idx = index(sx, sy, start_code);
    seen[start_idx] = true;
    let key = |x: usize, y: usize, code: usize| {
        let remaining = extent - 1 - physics.play(x, y);
        Reverse((remaining, x, y, code))
    };
    heap.push(key(sx, sy, start_code));

    let mut best = (physics.play(sx, sy), start_idx);
    let mut nodes = 0usize;
    let mut goal = None;
    let mut budget_exhausted = false;
    let mut succ = Vec::with_capacity(8);

    // the goal is standing in the end padding, not passing through it
    if best.0 >= goal_from && sphase == JumpPhase::Grounded {
        goal = Some(start_idx);
    }
    while goal.is_none() {
        let Some(Reverse((_, x, y, code))) = heap.pop() else {
            break;
        };
        if nodes >= params.node_budget {
            budget_exhausted = true;
            break;
        }
        nodes += 1;
        let here = index(x, y, code);
        physics.successors(x, y, physics.decode(code), &mut succ);
        for &(nx, ny, np) in &succ {
            let ncode = physics.encode(np);
            let ni = index(nx, ny, ncode);
            if seen[ni] {
                continue;
            }
            seen[ni] = true;
            parent[ni] = here as u32;
            let p = physics.play(nx, ny);
            if p > best.0 {
                best = (p, ni);
            }
            if p >= goal_from && np == JumpPhase::Grounded {
                goal = Some(ni);
                break;
            }
            heap.push(key(nx, ny, ncode));
        }
    }

    let end = goal.unwrap_or(best.1);
    let mut path = Vec::new();
    let mut cur = end as u32;
    while cur != u32::MAX {
        let i = cur as usize;
        let code = i % phases;
        let cell = i / phases;
        path.push(PlayerState::Platformer {
            column: cell % w,
            row: cell / w,
            phase: physics.decode(code),
        });
        cur = parent[i];
    }
    path.reverse();

    let completable = goal.is_some();
    AgentResult {
        completable,
        furthest_progress: if completable {
            1.0
        } else {
            (best.0 + 1) as f64 / extent as f64
        },
        path,
        nodes_expanded: nodes,
        budget_exhausted,
    }
}
