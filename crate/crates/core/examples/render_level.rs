//! Renders a level as text and as an SVG with the agent's path.
//!
//! ```text
//! cargo run --example render_level -- dungeongrams [level.txt] [out.svg]
//! ```

use std::path::PathBuf;

use seglink::games;
use seglink::harness::{annotate, read_level, render_svg, render_text, shipped_corpus_dir};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let game = args.next().unwrap_or_else(|| "dungeongrams".into());
    let config = games::by_name(&game).ok_or("unknown game")?;
    let path = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| shipped_corpus_dir(&config.name).join(format!("{}_01.txt", config.name)));
    let out = args.next().unwrap_or_else(|| format!("{}.svg", config.name));

    let level = read_level(&path, &config)?;
    print!("{}", render_text(&level));
    let (padded, ann) = annotate(&level, &config, &[]);
    println!("agent path: {} steps", ann.path.len());
    std::fs::write(&out, render_svg(&padded, &config, &ann))?;
    println!("wrote {out}");
    Ok(())
}
