//! Runs each game's agent over its shipped corpus and over a few sampled
//! segments, printing completability and search effort.
//!
//! Whole training levels mostly fail: shipped Icarus levels open with a
//! solid floor row above the start padding, and DungeonGrams levels are far
//! longer than one stamina bar. Segments are what the linker works with.
//!
//! ```text
//! cargo run --release --example agent_check
//! ```

use seglink::agents::check_unpadded;
use seglink::games;
use seglink::harness::{load_corpus, shipped_corpus_dir};
use seglink::linking::GameModels;
use seglink::markov::sample_segment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for name in games::NAMES {
        let config = games::by_name(name).unwrap();
        let corpus = load_corpus(&shipped_corpus_dir(name), &config)?;
        let models = GameModels::train(&corpus, &config)?;
        println!("{name}");
        for (i, level) in corpus.iter().enumerate() {
            let r = check_unpadded(level, &config, None)?;
            println!(
                "  corpus {i}: completable={} progress={:.2} nodes={}",
                r.completable, r.furthest_progress, r.nodes_expanded
            );
        }
        let mut ok = 0;
        for seed in 0..20 {
            let seg = sample_segment(&models.ngram, config.segment_length, seed, |_| true)?;
            ok += check_unpadded(&seg, &config, None)?.completable as usize;
        }
        println!("  {ok}/20 raw n-gram samples completable");
    }
    Ok(())
}
