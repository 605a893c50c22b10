mod common;

use proptest::prelude::*;

use common::{Platformer, Phase, Roguelike};
use seglink::agents::{self, AgentParams, RoguelikeParams};
use seglink::games;
use seglink::level::{pad_level, GameConfig, Orientation, SliceSequence};

fn columns(config: &GameConfig, cols: &[&str]) -> SliceSequence {
    pad_level(&SliceSequence::from_strs(Orientation::ColumnsLeftToRight, cols), config)
}

fn rows(config: &GameConfig, rows: &[&str]) -> SliceSequence {
    pad_level(&SliceSequence::from_strs(Orientation::RowsBottomToTop, rows), config)
}

const GROUND: &str = "------------XX";
const GAP: &str = "--------------";

#[test]
fn flat_mario_level_is_completable() {
    let mario = games::mario();
    let r = agents::check(&columns(&mario, &[GROUND; 10]), &mario, None).unwrap();
    assert!(r.completable);
    assert_eq!(r.furthest_progress, 1.0);
}

#[test]
fn wide_gap_stops_mario() {
    let mario = games::mario();
    let mut level = vec![GROUND; 3];
    level.extend([GAP; 6]);
    level.extend([GROUND; 3]);
    let r = agents::check(&columns(&mario, &level), &mario, None).unwrap();
    assert!(!r.completable);
    assert!(r.furthest_progress < 1.0 && !r.path.is_empty());

    let mut short = vec![GROUND; 3];
    short.extend([GAP; 2]);
    short.extend([GROUND; 3]);
    assert!(agents::check(&columns(&mario, &short), &mario, None).unwrap().completable);
}

#[test]
fn icarus_platform_ladder_and_gap() {
    let icarus = games::icarus();
    let e = "----------------";
    let full = "TTTTTTTTTTTTTTTT";
    let ladder = [e, e, full, e, e, full, e, e, full, e, e];
    assert!(agents::check(&rows(&icarus, &ladder), &icarus, None).unwrap().completable);

    let gap = [e; 6];
    assert!(!agents::check(&rows(&icarus, &gap), &icarus, None).unwrap().completable);
    // two linking platforms at the junction bridge the same gap
    let bridged = [e, e, "----TTTTTTTT----", e, e, "TTTT--------TTTT", e, e];
    assert!(agents::check(&rows(&icarus, &bridged), &icarus, None).unwrap().completable);
}

#[test]
fn stamina_and_food_corridors() {
    let dg = games::dungeongrams();
    let open = "X------X";
    let food = "X--&---X";
    // 2 start columns + n + 2 end columns; the portal sits in the last one
    let short = vec![open; 30];
    assert!(agents::check(&columns(&dg, &short), &dg, None).unwrap().completable);
    let long = vec![open; 45];
    assert!(!agents::check(&columns(&dg, &long), &dg, None).unwrap().completable);
    let mut fed = vec![open; 45];
    fed[20] = food;
    assert!(agents::check(&columns(&dg, &fed), &dg, None).unwrap().completable);
}

#[test]
fn roguelike_needs_a_goal() {
    let mut dg = games::dungeongrams();
    dg.padding.end = vec!["X------X".into(), "X------X".into()];
    let level = columns(&dg, &["X------X"]);
    assert!(agents::check(&level, &dg, None).is_err());
}

#[test]
fn switch_gates_the_portal() {
    let dg = games::dungeongrams();
    let reachable = columns(&dg, &["X------X", "X*-----X", "X------X"]);
    let r = agents::check(&reachable, &dg, None).unwrap();
    assert!(r.completable);
    Roguelike::new(&reachable, &dg).replay(&r.path, true).unwrap();
    let walled = columns(&dg, &["X--X---X", "X-X*X--X", "X--X---X"]);
    assert!(!agents::check(&walled, &dg, None).unwrap().completable);
}

fn arb_mario_cols() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..5, 4..14)
}

const KINDS: [&str; 5] = [GROUND, GAP, "--------XXXXXX", "----------XXXX", "-----------EXX"];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn agents_are_deterministic(cols in arb_mario_cols()) {
        let mario = games::mario();
        let level: Vec<&str> = cols.iter().map(|&i| KINDS[i]).collect();
        let padded = columns(&mario, &level);
        let a = agents::check(&padded, &mario, None).unwrap();
        let b = agents::check(&padded, &mario, None).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn paths_replay(cols in arb_mario_cols()) {
        let mario = games::mario();
        let level: Vec<&str> = cols.iter().map(|&i| KINDS[i]).collect();
        let padded = columns(&mario, &level);
        let r = agents::check(&padded, &mario, None).unwrap();
        let oracle = Platformer::new(&padded, &mario);
        prop_assert!(oracle.replay(&r.path, (0, 11, Phase::Ground), r.completable).is_ok());
        prop_assert!(!r.completable || r.furthest_progress == 1.0);
    }

    #[test]
    fn added_platform_off_the_path_never_hurts(cols in arb_mario_cols(), x in 0usize..20, y in 2usize..11) {
        let mario = games::mario();
        let level: Vec<&str> = cols.iter().map(|&i| KINDS[i]).collect();
        let padded = columns(&mario, &level);
        let before = agents::check(&padded, &mario, None).unwrap();
        let mut grid = padded.to_grid();
        prop_assume!(x < grid.width() && grid.get(x, y) == b'-');
        prop_assume!(!before.path.iter().any(|s| s.position() == (x, y)));
        grid.set(x, y, b'S');
        let after = agents::check(&grid.to_slices(Orientation::ColumnsLeftToRight), &mario, None).unwrap();
        prop_assert!(after.furthest_progress >= before.furthest_progress);
    }

    #[test]
    fn more_stamina_never_hurts(cols in prop::collection::vec(0usize..4, 3..10), s in 3u32..12) {
        let mut dg = games::dungeongrams();
        let kinds = ["X------X", "X--&---X", "XXX--XXX", "X--^^^^X"];
        let level: Vec<&str> = cols.iter().map(|&i| kinds[i]).collect();
        dg.agent_params = AgentParams::Roguelike(RoguelikeParams { start_stamina: s, stamina_cap: 12, food_gain: 3, ..RoguelikeParams::default() });
        let padded = columns(&dg, &level);
        let lo = agents::check(&padded, &dg, None).unwrap();
        let hi = agents::check(&padded, &dg, Some(&dg.agent_params.with_start_stamina(s + 1))).unwrap();
        prop_assert!(!lo.completable || hi.completable);
    }
}
