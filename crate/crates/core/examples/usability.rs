//! Usability of whole levels built by walking k segments with pre-validated
//! pairwise linkers. DungeonGrams also runs a variant whose linkers must
//! carry food.
//!
//! ```text
//! cargo run --release --example usability -- dungeongrams 200
//! ```

use seglink::games;
use seglink::harness::{
    load_corpus, run_multi_segment_usability, shipped_corpus_dir, synthesize_segments, ExperimentMode,
    ExperimentSpec,
};
use seglink::linking::GameModels;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let game = args.next().unwrap_or_else(|| "dungeongrams".into());
    let trials: usize = args.next().map_or(Ok(200), |s| s.parse())?;

    let config = games::by_name(&game).ok_or("unknown game")?;
    let corpus = load_corpus(&shipped_corpus_dir(&config.name), &config)?;
    let models = GameModels::train(&corpus, &config)?;
    let segments = synthesize_segments(&config, &models, 50, 7)?;

    let mut spec = ExperimentSpec::new(&config, ExperimentMode::MultiSegmentGridWalk);
    spec.trials = trials;
    let report = run_multi_segment_usability(&spec, &config, &models, &segments)?;
    println!("{} walks in {:.1?}", trials, report.elapsed);
    println!("variant          k  linkable  completable  usable");
    for g in &report.groups {
        println!(
            "{:<15} {:>2} {:>9.3} {:>12.3} {:>7.3}",
            g.variant, g.k, g.linkable_rate, g.completable_rate, g.usable_rate
        );
    }
    Ok(())
}
