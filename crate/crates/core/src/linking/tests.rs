use super::*;
use crate::behavior::BcVector;
use crate::games;
use crate::level::{parse_level, BcKind, Orientation};
use crate::markov::train_ngram;
use proptest::prelude::{prop_assert, prop_assert_eq, prop_assume, proptest, ProptestConfig};
use proptest::strategy::Strategy as Gen;

fn seq(s: &str) -> SliceSequence {
    let parts: Vec<String> = s.chars().map(String::from).collect();
    let refs: Vec<&str> = parts.iter().map(String::as_str).collect();
    SliceSequence::from_strs(Orientation::ColumnsLeftToRight, &refs)
}

fn strs(v: &[Slice]) -> String {
    v.iter().map(Slice::as_str).collect()
}

/// One-character slices; adjacent pairs listed in `bad` make a level
/// uncompletable. `e` counts as food.
struct Toy {
    bad: Vec<(u8, u8)>,
}

impl LevelJudge for Toy {
    fn completable(&self, level: &[Slice]) -> bool {
        level
            .windows(2)
            .all(|w| !self.bad.contains(&(w[0].tiles()[0], w[1].tiles()[0])))
    }

    fn unbroken(&self, _: &[Slice]) -> bool {
        true
    }

    fn bc(&self, slices: &[Slice]) -> BcVector {
        let n = slices.len().max(1) as f64;
        let a = slices.iter().filter(|s| s.as_str() == "a").count() as f64;
        let bc = slices.iter().filter(|s| matches!(s.as_str(), "b" | "c")).count() as f64;
        BcVector::new(BcKind::DensityLeniency, a / n, bc / n)
    }

    fn slice_has(&self, slice: &Slice, tag: TileTag) -> bool {
        tag == TileTag::Food && slice.as_str() == "e"
    }
}

fn toy_env<'a>(model: &'a NGramModel, judge: &'a Toy) -> LinkEnv<'a> {
    LinkEnv {
        model,
        filter: None,
        chains: None,
        judge,
        usable_mode: UsableMode::CompletableAndGenerable,
        candidate_cap: DEFAULT_CANDIDATE_CAP,
    }
}

#[test]
fn depth_zero_candidate_comes_first() {
    let m = train_ngram(&[seq("abcd")], 2).unwrap();
    let first = connect_priors(&m, &[Slice::new("b")], &[Slice::new("c")], None, 3).next();
    assert_eq!(first, Some(vec![]));
}

#[test]
fn single_step_chain() {
    let m = train_ngram(&[seq("abcd")], 2).unwrap();
    let all: Vec<Vec<Slice>> =
        connect_priors(&m, &[Slice::new("b")], &[Slice::new("d")], None, 3).collect();
    assert_eq!(all, vec![vec![Slice::new("c")]]);
}

#[test]
fn filter_restricts_inserted_slices() {
    let m = train_ngram(&[seq("abcdabxd")], 2).unwrap();
    let all: Vec<String> = connect_priors(&m, &[Slice::new("a")], &[Slice::new("d")], None, 3)
        .map(|c| strs(&c))
        .collect();
    assert_eq!(all, vec!["bc", "bx"]);
    let only_x = [Slice::new("b"), Slice::new("x")];
    let all: Vec<String> =
        connect_priors(&m, &[Slice::new("a")], &[Slice::new("d")], Some(&only_x), 3)
            .map(|c| strs(&c))
            .collect();
    assert_eq!(all, vec!["bx"]);
}

#[test]
fn strategy_and_predicate_names() {
    for s in Strategy::ALL {
        assert_eq!(s.as_str().parse::<Strategy>().unwrap(), s);
    }
    assert_eq!("bc-match-f".parse::<Strategy>().unwrap(), Strategy::BcMatchRequired);
    assert_eq!("contains-food".parse::<SlicePredicate>().unwrap(), SlicePredicate::food());
    assert_eq!(SlicePredicate::food().to_string(), "contains-food");
    assert_eq!("non-empty".parse::<SlicePredicate>().unwrap(), SlicePredicate::NonEmpty);
    assert!("contains-lava".parse::<SlicePredicate>().is_err());
}

#[test]
fn null_link_reports_flags() {
    let m = train_ngram(&[seq("abcd")], 2).unwrap();
    let judge = Toy { bad: vec![(b'b', b'd')] };
    let env = toy_env(&m, &judge);
    let r = build_link(&LinkRequest::new(seq("ab"), seq("d"), Strategy::Null, 4), &env);
    assert_eq!(r.status, LinkStatus::Linked);
    assert!(r.linker.is_empty());
    assert!(!r.completable && !r.generable && !r.usable);
    assert_eq!((r.rmse, r.d_bc), (None, None));
}

#[test]
fn shortest_prefers_empty_linker() {
    let m = train_ngram(&[seq("abcd")], 2).unwrap();
    let judge = Toy { bad: vec![] };
    let env = toy_env(&m, &judge);
    let r = build_link(&LinkRequest::new(seq("ab"), seq("cd"), Strategy::Shortest, 4), &env);
    assert!(r.linked() && r.linker.is_empty());
    assert_eq!(r.d_bc, Some(0.0));
    assert_eq!(r.rmse, Some(0.0));
}

#[test]
fn shortest_skips_uncompletable_candidates() {
    let m = train_ngram(&[seq("abcdabxcd")], 2).unwrap();
    // a -> b -> c -> d and a -> b -> x -> c -> d; forbid b followed by c
    let judge = Toy { bad: vec![(b'b', b'c')] };
    let env = toy_env(&m, &judge);
    let r = build_link(&LinkRequest::new(seq("a"), seq("d"), Strategy::Shortest, 4), &env);
    assert_eq!(strs(&r.linker), "bxc");
    let r = build_link(&LinkRequest::new(seq("a"), seq("d"), Strategy::Shortest, 2), &env);
    assert_eq!(r.status, LinkStatus::NoLinkFound);
}

#[test]
fn bc_match_singleton_equals_shortest() {
    let m = train_ngram(&[seq("abcd")], 2).unwrap();
    let judge = Toy { bad: vec![] };
    let env = toy_env(&m, &judge);
    let a = build_link(&LinkRequest::new(seq("a"), seq("d"), Strategy::Shortest, 4), &env);
    let b = build_link(&LinkRequest::new(seq("a"), seq("d"), Strategy::BcMatch, 4), &env);
    assert_eq!(a.linker, b.linker);
}

#[test]
fn required_food_is_honoured() {
    let m = train_ngram(&[seq("abcdabecd")], 2).unwrap();
    let judge = Toy { bad: vec![] };
    let env = toy_env(&m, &judge);
    let plain = build_link(&LinkRequest::new(seq("b"), seq("c"), Strategy::BcMatch, 4), &env);
    assert!(plain.linker.is_empty());
    let req = LinkRequest::new(seq("b"), seq("c"), Strategy::BcMatchRequired, 4)
        .with_required(SlicePredicate::food());
    let food = build_link(&req, &env);
    assert_eq!(strs(&food.linker), "e");
    // without an explicit predicate the required variant still refuses empty linkers
    let req = LinkRequest::new(seq("a"), seq("c"), Strategy::BcMatchRequired, 4);
    let r = build_link(&req, &env);
    assert!(r.linked() && !r.linker.is_empty());
}

#[test]
fn link_result_json_round_trip() {
    let m = train_ngram(&[seq("abcd")], 2).unwrap();
    let judge = Toy { bad: vec![] };
    let env = toy_env(&m, &judge);
    let r = build_link(&LinkRequest::new(seq("a"), seq("d"), Strategy::BcMatch, 4), &env);
    let back: LinkResult = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert_eq!(back.to_json(), r.to_json());
}

fn mario_level(rows: &[&str]) -> SliceSequence {
    let mario = games::mario();
    parse_level(&rows.join("\n"), &mario)
        .unwrap()
        .to_slices(Orientation::ColumnsLeftToRight)
}

#[test]
fn cut_pipe_is_completed_by_the_chains() {
    let mario = games::mario();
    let rows = [
        "--------------",
        "--------------",
        "--------------",
        "--------------",
        "--------------",
        "--------------",
        "--------------",
        "--------------",
        "--------------",
        "--------------",
        "----<>----<>--",
        "----[]----[]--",
        "XXXXXXXXXXXXXX",
        "XXXXXXXXXXXXXX",
    ];
    let level = mario_level(&rows);
    let models = GameModels::train(&[level.clone()], &mario).unwrap();
    let cut = level.with_slices(level.slices()[..5].to_vec()).unwrap();
    let rest = level.with_slices(level.slices()[5..].to_vec()).unwrap();
    assert!(!crate::level::is_unbroken(
        &crate::level::concatenate([&cut, &cut]).unwrap(),
        &mario
    ));
    let r = link_game(&LinkRequest::new(cut, rest.clone(), Strategy::Shortest, 7), &mario, &models);
    assert!(r.linked(), "{r:?}");
    assert_eq!(r.structure_prefix, vec![level.slices()[5].clone()]);
    assert!(r.unbroken && r.generable && r.completable && r.usable);

    // the back chain fixes an end segment that opens on a pipe's right column
    let start = level.with_slices(level.slices()[..3].to_vec()).unwrap();
    let opening = level.with_slices(level.slices()[11..].to_vec()).unwrap();
    let r = link_game(&LinkRequest::new(start, opening, Strategy::Shortest, 7), &mario, &models);
    assert!(r.linked(), "{r:?}");
    assert_eq!(r.structure_suffix, vec![level.slices()[10].clone()]);
    assert!(r.unbroken);
}

#[test]
fn unknown_structure_is_a_structure_failure() {
    let mario = games::mario();
    let mut rows = vec!["--------"; 10];
    rows.extend(["--<>----", "--[]----", "XXXXXXXX", "XXXXXXXX"]);
    let level = mario_level(&rows);
    let models = GameModels::train(&[level.clone()], &mario).unwrap();
    let mut odd = vec!["--------"; 9];
    odd.extend(["-------<", "-------[", "-------[", "XXXXXXXX", "XXXXXXXX"]);
    let start = mario_level(&odd);
    let r = link_game(&LinkRequest::new(start, level, Strategy::Shortest, 7), &mario, &models);
    assert_eq!(r.status, LinkStatus::StructureFailure);
    assert!(r.error.is_some());
}

/// Toy game generator: a random corpus over `a..=e`, random forbidden
/// adjacencies, random segments drawn from the corpus.
fn arb_toy() -> impl Gen<Value = (Vec<String>, usize, Vec<(u8, u8)>, String, String)> {
    (
        proptest::collection::vec("[a-e]{4,10}", 1..4),
        2usize..4,
        proptest::collection::vec((b'a'..=b'e', b'a'..=b'e'), 0..4),
        "[a-e]{2,3}",
        "[a-e]{2,3}",
    )
}

fn brute_force(model: &NGramModel, start: &[Slice], end: &[Slice], depth: usize) -> Vec<Vec<Slice>> {
    let k = model.order() - 1;
    let alpha: Vec<Slice> = model.vocabulary().to_vec();
    let mut out = Vec::new();
    let mut frontier: Vec<Vec<Slice>> = vec![vec![]];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for l in frontier {
            let window: Vec<Slice> = start[start.len() - k..]
                .iter()
                .chain(&l)
                .chain(&end[..k])
                .cloned()
                .collect();
            if model.generable_unchecked(&window) {
                out.push(l.clone());
            }
            for a in &alpha {
                let mut l2 = l.clone();
                l2.push(a.clone());
                next.push(l2);
            }
        }
        frontier = next;
    }
    out.sort_by(|a, b| a.len().cmp(&b.len()).then(a.cmp(b)));
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn connect_priors_matches_exhaustive_enumeration((corpus, order, _bad, s, e) in arb_toy(), depth in 0usize..4) {
        let seqs: Vec<SliceSequence> = corpus.iter().map(|c| seq(c)).collect();
        prop_assume!(seqs.iter().all(|q| q.len() >= order));
        let m = train_ngram(&seqs, order).unwrap();
        let start = seq(&s);
        let end = seq(&e);
        prop_assume!(start.len() >= order - 1 && end.len() >= order - 1);
        let got: Vec<Vec<Slice>> = connect_priors(&m, start.slices(), end.slices(), None, depth).collect();
        let want = brute_force(&m, start.slices(), end.slices(), depth);
        prop_assert_eq!(got, want);
    }

    #[test]
    fn depth_is_monotone((corpus, order, bad, s, e) in arb_toy()) {
        let seqs: Vec<SliceSequence> = corpus.iter().map(|c| seq(c)).collect();
        prop_assume!(seqs.iter().all(|q| q.len() >= order));
        let m = train_ngram(&seqs, order).unwrap();
        let judge = Toy { bad };
        let env = toy_env(&m, &judge);
        let mut prev: Option<usize> = None;
        for d in 0..=5 {
            let r = build_link(&LinkRequest::new(seq(&s), seq(&e), Strategy::Shortest, d), &env);
            match (prev, r.linked()) {
                (Some(_), false) => prop_assert!(false, "linked at a smaller depth but not at {}", d),
                (Some(p), true) => prop_assert!(r.linker.len() <= p),
                _ => {}
            }
            if r.linked() {
                prop_assert!(r.linker.len() <= d);
                prev = Some(r.linker.len());
            }
        }
    }

    #[test]
    fn required_is_a_subset_of_bc_match((corpus, order, bad, s, e) in arb_toy()) {
        let seqs: Vec<SliceSequence> = corpus.iter().map(|c| seq(c)).collect();
        prop_assume!(seqs.iter().all(|q| q.len() >= order));
        let m = train_ngram(&seqs, order).unwrap();
        let judge = Toy { bad };
        let env = toy_env(&m, &judge);
        let plain = build_link(&LinkRequest::new(seq(&s), seq(&e), Strategy::BcMatch, 4), &env);
        let req = LinkRequest::new(seq(&s), seq(&e), Strategy::BcMatchRequired, 4)
            .with_required(SlicePredicate::food());
        let food = build_link(&req, &env);
        if food.linked() {
            prop_assert!(food.linker.iter().any(|x| x.as_str() == "e"));
            prop_assert!(plain.linked());
            prop_assert!(plain.rmse.unwrap() <= food.rmse.unwrap());
        }
        let again = build_link(&req, &env);
        prop_assert_eq!(again.to_json(), food.to_json());
    }
}
