//! Pairwise sweep over synthesized segments, printing per-strategy rates.
//!
//! ```text
//! cargo run --release --example pairwise_sweep -- icarus 30 [out-dir]
//! ```

use std::path::PathBuf;
use std::time::Instant;

use seglink::games;
use seglink::harness::{
    load_corpus, run_pairwise_sweep, shipped_corpus_dir, synthesize_segments, ExperimentMode, ExperimentSpec,
    OutputFormat, PairingMode,
};
use seglink::linking::GameModels;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let game = args.next().unwrap_or_else(|| "mario".into());
    let count: usize = args.next().map_or(Ok(20), |s| s.parse())?;
    let out = args.next().map(PathBuf::from);

    let config = games::by_name(&game).ok_or("unknown game")?;
    let corpus = load_corpus(&shipped_corpus_dir(&config.name), &config)?;
    let models = GameModels::train(&corpus, &config)?;
    let t = Instant::now();
    let segments = synthesize_segments(&config, &models, count, 7)?;
    println!("{count} segments in {:.1?}", t.elapsed());

    let mut spec = ExperimentSpec::new(&config, ExperimentMode::PairwiseSweep);
    spec.pairing = PairingMode::AllOrdered { limit: None };
    let report = run_pairwise_sweep(&spec, &config, &models, &segments)?;
    println!("{} pairs in {:.1?}", report.pair_rows.len() / spec.strategies.len(), report.elapsed);
    println!("strategy            linked  complete  usable  median_len  mean_rmse");
    for g in &report.groups {
        println!(
            "{:<18} {:>7.3} {:>9.3} {:>7.3} {:>11} {:>10}",
            g.strategy.as_str(),
            g.linkable_rate,
            g.completable_rate,
            g.usable_rate,
            g.linker_length.median.map_or("-".into(), |v| format!("{v}")),
            g.rmse.mean.map_or("-".into(), |v| format!("{v:.4}")),
        );
    }
    if let Some(dir) = out {
        report.write(&dir, OutputFormat::Csv)?;
        println!("wrote {}", dir.display());
    }
    Ok(())
}
