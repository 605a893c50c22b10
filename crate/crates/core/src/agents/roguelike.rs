use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use super::{play_coord, AgentError, AgentParams, AgentResult, PlayerState, RoguelikeParams};
use crate::level::{GameConfig, Orientation, SliceSequence, TileTag};

/// Stamina roguelike check on a padded level using the config's parameters.
pub fn roguelike_check(
    level: &SliceSequence,
    config: &GameConfig,
    initial_stamina: Option<u32>,
) -> Result<AgentResult, AgentError> {
    let params = match &config.agent_params {
        AgentParams::Roguelike(r) => r.clone(),
        _ => RoguelikeParams::default(),
    };
    roguelike_check_with(level, config, &params, initial_stamina)
}

#[derive(Clone, Copy)]
struct Node {
    x: u16,
    y: u16,
    stamina: u32,
    switches: u64,
    food: u64,
    parent: u32,
}

/// Best-first search over `(position, stamina, switches, eaten food)`.
///
/// Each move costs `move_cost`; entering uneaten food adds `food_gain` up to
/// `stamina_cap`. A move that leaves the player with zero stamina is only
/// allowed if it enters the goal. Spikes and enemies are lethal, walls and
/// other solid tiles block, and the goal opens once every switch is hit.
/// A state is pruned when another state at the same position and switch set
/// had at least as much stamina and had eaten no food this one hasn't.
pub fn roguelike_check_with(
    level: &SliceSequence,
    config: &GameConfig,
    params: &RoguelikeParams,
    initial_stamina: Option<u32>,
) -> Result<AgentResult, AgentError> {
    let grid = level.to_grid();
    let (w, h) = (grid.width(), grid.height());
    let orientation = level.orientation();
    let extent = match orientation {
        Orientation::ColumnsLeftToRight => w,
        Orientation::RowsBottomToTop => h,
    };
    let goal_from = extent.saturating_sub(config.padding.end.len().max(1));

    let mut food_index = vec![u8::MAX; w * h];
    let mut switch_index = vec![u8::MAX; w * h];
    let (mut foods, mut switches) = (0usize, 0usize);
    let mut goals = Vec::new();
    let mut switch_pos = Vec::new();
    let mut start = None;
    for y in 0..h {
        for x in 0..w {
            let c = grid.get(x, y);
            let i = y * w + x;
            if config.has_tag(c, TileTag::Food) {
                if foods == 64 {
                    return Err(AgentError::MalformedLevel("more than 64 food tiles".into()));
                }
                food_index[i] = foods as u8;
                foods += 1;
            }
            if config.has_tag(c, TileTag::Switch) {
                if switches == 64 {
                    return Err(AgentError::MalformedLevel("more than 64 switches".into()));
                }
                switch_index[i] = switches as u8;
                switch_pos.push((x, y));
                switches += 1;
            }
            if config.has_tag(c, TileTag::Portal) || config.has_tag(c, TileTag::EndMarker) {
                goals.push((x, y));
            }
            if start.is_none() && config.has_tag(c, TileTag::StartMarker) {
                start = Some((x, y));
            }
        }
    }
    if !goals
        .iter()
        .any(|&(x, y)| play_coord(orientation, h, x, y) >= goal_from)
    {
        return Err(AgentError::MalformedLevel(
            "no portal or goal marker in the final padding".into(),
        ));
    }
    let all_switches = if switches == 64 {
        u64::MAX
    } else {
        (1u64 << switches) - 1
    };
    let blocked = |c: u8| {
        config.has_tag(c, TileTag::Solid)
            || config.has_tag(c, TileTag::Hazard)
            || config.has_tag(c, TileTag::Enemy)
    };
    let is_goal = |x: usize, y: usize| {
        let c = grid.get(x, y);
        config.has_tag(c, TileTag::Portal) || config.has_tag(c, TileTag::EndMarker)
    };
    let start = start.or_else(|| {
        (0..extent).find_map(|s| {
            let cells: Vec<(usize, usize)> = match orientation {
                Orientation::ColumnsLeftToRight => (0..h).map(|y| (s, y)).collect(),
                Orientation::RowsBottomToTop => (0..w).map(|x| (x, h - 1 - s)).collect(),
            };
            cells
                .into_iter()
                .find(|&(x, y)| !blocked(grid.get(x, y)) && !is_goal(x, y))
        })
    });
    let Some((sx, sy)) = start else {
        return Ok(AgentResult::unreachable());
    };
    let goal_distance = |x: usize, y: usize| {
        goals
            .iter()
            .map(|&(gx, gy)| (gx.abs_diff(x) + gy.abs_diff(y)) as u64)
            .min()
            .unwrap_or(0)
    };
    // lower bound on the moves left: every missing switch, then a goal
    let moves_left = |x: usize, y: usize, sw: u64| {
        switch_pos
            .iter()
            .enumerate()
            .filter(|&(k, _)| sw & (1 << k) == 0)
            .map(|(_, &(qx, qy))| (qx.abs_diff(x) + qy.abs_diff(y)) as u64 + goal_distance(qx, qy))
            .max()
            .unwrap_or_else(|| goal_distance(x, y))
    };

    let stamina0 = initial_stamina.unwrap_or(params.start_stamina);
    let mut nodes: Vec<Node> = Vec::new();
    // Pareto front per (position, switches): (stamina, eaten food, node id)
    let mut fronts: HashMap<(u16, u16, u64), Vec<(u32, u64, u32)>> = HashMap::new();
    let mut alive: Vec<bool> = Vec::new();
    let mut heap = BinaryHeap::new();
    let priority = |n: &Node, id: u32| {
        Reverse((
            switches - n.switches.count_ones() as usize,
            moves_left(n.x as usize, n.y as usize, n.switches),
            Reverse(n.stamina),
            n.x,
            n.y,
            n.switches,
            n.food,
            id,
        ))
    };

    let mut first = Node {
        x: sx as u16,
        y: sy as u16,
        stamina: stamina0,
        switches: 0,
        food: 0,
        parent: u32::MAX,
    };
    let si = sy * w + sx;
    if food_index[si] != u8::MAX {
        first.food |= 1 << food_index[si];
        first.stamina = (first.stamina + params.food_gain).min(params.stamina_cap.max(stamina0));
    }
    if switch_index[si] != u8::MAX {
        first.switches |= 1 << switch_index[si];
    }
    fronts.insert((first.x, first.y, first.switches), vec![(first.stamina, first.food, 0)]);
    nodes.push(first);
    alive.push(true);
    heap.push(priority(&first, 0));

    let mut best = (play_coord(orientation, h, sx, sy), 0u32);
    let mut expanded = 0usize;
    let mut goal = None;
    let mut budget_exhausted = false;

    'search: while let Some(Reverse((_, _, _, _, _, _, _, id))) = heap.pop() {
        let n = nodes[id as usize];
        if !alive[id as usize] {
            continue;
        }
        if expanded >= params.node_budget {
            budget_exhausted = true;
            break;
        }
        expanded += 1;
        let (x, y) = (n.x as isize, n.y as isize);
        for (dx, dy) in [(1isize, 0isize), (0, 1), (0, -1), (-1, 0)] {
            let (nx, ny) = (x + dx, y + dy);
            if nx < 0 || ny < 0 || nx as usize >= w || ny as usize >= h {
                continue;
            }
            let (nx, ny) = (nx as usize, ny as usize);
            let c = grid.get(nx, ny);
            if n.stamina < params.move_cost {
                continue;
            }
            let goal_tile = is_goal(nx, ny);
            if goal_tile {
                if n.switches == all_switches {
                    nodes.push(Node {
                        x: nx as u16,
                        y: ny as u16,
                        stamina: n.stamina - params.move_cost,
                        switches: n.switches,
                        food: n.food,
                        parent: id,
                    });
                    goal = Some(nodes.len() as u32 - 1);
                    break 'search;
                }
                continue;
            }
            if blocked(c) {
                continue;
            }
            let i = ny * w + nx;
            let mut stamina = n.stamina - params.move_cost;
            let mut food = n.food;
            if food_index[i] != u8::MAX && food & (1 << food_index[i]) == 0 {
                food |= 1 << food_index[i];
                stamina = (stamina + params.food_gain).min(params.stamina_cap);
            }
            if stamina == 0 {
                continue;
            }
            let mut sw = n.switches;
            if switch_index[i] != u8::MAX {
                sw |= 1 << switch_index[i];
            }
            // even eating every remaining food cannot cover the distance left
            let uneaten = (foods - food.count_ones() as usize) as u64;
            if (stamina as u64 + params.food_gain as u64 * uneaten) < moves_left(nx, ny, sw) * params.move_cost as u64 {
                continue;
            }
            let front = fronts.entry((nx as u16, ny as u16, sw)).or_default();
            if front.iter().any(|&(s, f, _)| s >= stamina && f & !food == 0) {
                continue;
            }
            let nid = nodes.len() as u32;
            front.retain(|&(s, f, old)| {
                let dominated = stamina >= s && food & !f == 0;
                if dominated {
                    alive[old as usize] = false;
                }
                !dominated
            });
            front.push((stamina, food, nid));
            let node = Node {
                x: nx as u16,
                y: ny as u16,
                stamina,
                switches: sw,
                food,
                parent: id,
            };
            nodes.push(node);
            alive.push(true);
            let p = play_coord(orientation, h, nx, ny);
            if p > best.0 {
                best = (p, nid);
            }
            heap.push(priority(&node, nid));
        }
    }

    let end = goal.unwrap_or(best.1);
    let mut path = Vec::new();
    let mut cur = end;
    while cur != u32::MAX {
        let n = nodes[cur as usize];
        path.push(PlayerState::Roguelike {
            column: n.x as usize,
            row: n.y as usize,
            stamina: n.stamina,
            switches: n.switches,
        });
        cur = n.parent;
    }
    path.reverse();
    let completable = goal.is_some();
    Ok(AgentResult {
        completable,
        furthest_progress: if completable {
            1.0
        } else {
            (best.0 + 1) as f64 / extent as f64
        },
        path,
        nodes_expanded: expanded,
        budget_exhausted,
    })
}
