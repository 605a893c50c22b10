//! Links two sampled segments under every strategy and writes an SVG of the
//! BC-matched level, linker boxed in magenta, agent path in red.
//!
//! ```text
//! cargo run --release --example link_pair -- icarus [out.svg]
//! ```

use seglink::games;
use seglink::harness::{annotate, load_corpus, render_svg, shipped_corpus_dir, synthesize_segments};
use seglink::linking::{link_game, GameModels, LinkRequest, Strategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let game = args.next().unwrap_or_else(|| "icarus".into());
    let out = args.next().unwrap_or_else(|| format!("{game}-link.svg"));

    let config = games::by_name(&game).ok_or("unknown game")?;
    let corpus = load_corpus(&shipped_corpus_dir(&config.name), &config)?;
    let models = GameModels::train(&corpus, &config)?;
    let segs = synthesize_segments(&config, &models, 2, 11)?;
    let (a, b) = (&segs[0].level, &segs[1].level);

    println!("strategy           status          len  completable  usable  rmse");
    for s in Strategy::ALL {
        let r = link_game(
            &LinkRequest::new(a.clone(), b.clone(), s, config.link_search_max_depth),
            &config,
            &models,
        );
        println!(
            "{:<18} {:<15} {:>3}  {:>11}  {:>6}  {}",
            s.as_str(),
            r.status.as_str(),
            r.linker.len(),
            r.completable,
            r.usable,
            r.rmse.map_or("-".into(), |v| format!("{v:.4}"))
        );
        if s == Strategy::BcMatch && r.linked() {
            let mut slices = a.slices().to_vec();
            slices.extend_from_slice(&r.linker);
            slices.extend_from_slice(b.slices());
            let level = a.with_slices(slices)?;
            let (padded, ann) = annotate(&level, &config, &[(a.len(), r.linker.len())]);
            std::fs::write(&out, render_svg(&padded, &config, &ann))?;
        }
    }
    println!("wrote {out}");
    Ok(())
}
