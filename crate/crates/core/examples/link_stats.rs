//! Linker length statistics per game from a small pairwise sweep, written
//! as pairs.csv and re-read the way `seglink stats` does.
//!
//! ```text
//! cargo run --release --example link_stats -- 20
//! ```

use seglink::games;
use seglink::harness::{
    link_stats, load_corpus, read_pair_rows, run_pairwise_sweep, shipped_corpus_dir, synthesize_segments,
    ExperimentMode, ExperimentSpec, OutputFormat, PairingMode,
};
use seglink::linking::GameModels;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let count: usize = std::env::args().nth(1).map_or(Ok(15), |s| s.parse())?;
    let tmp = tempfile::tempdir()?;
    let dir = tmp.path();
    let mut rows = Vec::new();
    for name in games::NAMES {
        let config = games::by_name(name).unwrap();
        let corpus = load_corpus(&shipped_corpus_dir(name), &config)?;
        let models = GameModels::train(&corpus, &config)?;
        let segments = synthesize_segments(&config, &models, count, 5)?;
        let mut spec = ExperimentSpec::new(&config, ExperimentMode::PairwiseSweep);
        spec.pairing = PairingMode::AllOrdered { limit: None };
        let report = run_pairwise_sweep(&spec, &config, &models, &segments)?;
        let out = dir.join(name);
        report.write(&out, OutputFormat::Csv)?;
        rows.extend(read_pair_rows(&out.join("pairs.csv"))?);
    }
    println!("game          strategy            linked  empty  median  mean   max");
    for s in link_stats(&rows) {
        let f = |v: Option<f64>| v.map_or("-".into(), |v| format!("{v:.2}"));
        println!(
            "{:<13} {:<18} {:>7} {:>6} {:>7} {:>5} {:>5}",
            s.game,
            s.strategy.as_str(),
            s.linked,
            s.empty_linkers,
            f(s.median_len),
            f(s.mean_len),
            f(s.max_len)
        );
    }
    Ok(())
}

