//! Trains a game's n-gram, caches it on disk and shows that the cached copy
//! is reused and agrees with a fresh one.
//!
//! ```text
//! cargo run --example train_model -- mario /tmp/seglink-cache
//! ```

use std::path::PathBuf;

use seglink::games;
use seglink::harness::{load_corpus, load_models, shipped_corpus_dir};
use seglink::markov::NGramModel;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let game = args.next().unwrap_or_else(|| "mario".into());
    let cache = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("seglink-cache"));

    let config = games::by_name(&game).ok_or("unknown game")?;
    let corpus = load_corpus(&shipped_corpus_dir(&config.name), &config)?;
    let first = load_models(&corpus, &config, Some(&cache))?;
    let again = load_models(&corpus, &config, Some(&cache))?;
    assert_eq!(first.ngram, again.ngram);

    let s = first.ngram.stats();
    println!("{game}: {} levels, order {}", corpus.len(), s.order);
    println!("  vocabulary  {}", s.vocabulary);
    println!("  priors      {}", s.priors);
    println!("  transitions {}", s.transitions);
    println!("  out-degree  max {} mean {:.2}", s.max_out_degree, s.mean_out_degree);
    println!("  structure chains: {} forward, {} backward keys", first.forward.len(), first.backward.len());

    let json = first.ngram.to_json();
    assert_eq!(NGramModel::from_json(&json)?, first.ngram);
    println!("cached in {} ({} bytes of JSON)", cache.display(), json.len());

    for level in &corpus {
        assert!(first.ngram.is_generable_seq(level)?);
    }
    println!("every corpus level is generable");
    Ok(())
}
