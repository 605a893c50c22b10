//! Links random k-tuples of segments into whole levels under each strategy.
//!
//! ```text
//! cargo run --release --example chain_levels -- dungeongrams 4 300
//! ```

use seglink::games;
use seglink::harness::{
    load_corpus, run_k_segment_experiment, shipped_corpus_dir, synthesize_segments, ExperimentMode, ExperimentSpec,
};
use seglink::linking::GameModels;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let game = args.next().unwrap_or_else(|| "dungeongrams".into());
    let k: usize = args.next().map_or(Ok(3), |s| s.parse())?;
    let trials: usize = args.next().map_or(Ok(200), |s| s.parse())?;

    let config = games::by_name(&game).ok_or("unknown game")?;
    let corpus = load_corpus(&shipped_corpus_dir(&config.name), &config)?;
    let models = GameModels::train(&corpus, &config)?;
    let segments = synthesize_segments(&config, &models, 40, 3)?;

    let mut spec = ExperimentSpec::new(&config, ExperimentMode::KSegmentRandom);
    (spec.k, spec.trials, spec.seed) = (k, trials, 1);
    let report = run_k_segment_experiment(&spec, &config, &models, &segments)?;
    println!("{trials} tuples of {k} in {:.1?}", report.elapsed);
    println!("strategy            linked  complete|linked  usable|complete");
    for g in &report.groups {
        let pct = |v: Option<f64>| v.map_or("-".into(), |v| format!("{v:.3}"));
        println!(
            "{:<18} {:>7.3} {:>16} {:>16}",
            g.strategy.as_str(),
            g.linkable_rate,
            pct(g.completable_given_linkable),
            pct(g.usable_given_completable)
        );
    }
    Ok(())
}
