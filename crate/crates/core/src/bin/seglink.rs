use std::error::Error;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use seglink::games;
use seglink::harness::{
    annotate, link_stats, load_corpus, load_models, read_level, read_pair_rows, read_segments, render_svg,
    render_text, run_experiment, shipped_corpus_dir, synthesize_segments, with_jobs, write_segments,
    ExperimentMode, ExperimentSpec, OutputFormat, PairingMode, Segment, CACHE_ENV,
};
use seglink::level::GameConfig;
use seglink::linking::{link_game, GameModels, LinkRequest, Strategy};

type Res<T> = Result<T, Box<dyn Error>>;

#[derive(Parser)]
#[command(name = "seglink", version, about = "Link generated level segments into playable levels")]
struct Cli {
    /// Bundled game name (mario, icarus, dungeongrams) or a config JSON path.
    #[arg(long, global = true, default_value = "mario")]
    game: String,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Link search depth; defaults to the game's preset.
    #[arg(long, global = true)]
    depth: Option<usize>,
    /// Restrict to one strategy (null, shortest, bc_match, bc_match_required).
    #[arg(long, global = true)]
    strategy: Option<Strategy>,
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,
    #[arg(long, global = true, default_value = "csv")]
    format: OutputFormat,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Source {
    /// Training corpus directory; defaults to the shipped one.
    #[arg(long)]
    corpus: Option<PathBuf>,
    /// Segment directory to ingest instead of sampling.
    #[arg(long)]
    segments: Option<PathBuf>,
    /// Segments to sample when no directory is given.
    #[arg(long, default_value_t = 50)]
    count: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Train the n-gram on a corpus and store it in the model cache.
    Train {
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Sample a segment corpus into --out.
    Segments {
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[arg(long, default_value_t = 50)]
        count: usize,
    },
    /// Link one pair under each strategy and print the results as JSON.
    Link {
        start: PathBuf,
        end: PathBuf,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Link every selected pair of segments.
    Sweep {
        #[command(flatten)]
        source: Source,
        /// auto, grid, nearest[:K] or all[:LIMIT].
        #[arg(long, default_value = "auto")]
        pairing: String,
    },
    /// Link random k-tuples of segments.
    Chain {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 3)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Usability of levels built from 2..=k segments.
    Usability {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 5)]
        k: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Print a level as text; with --out also write an annotated SVG.
    Render { level: PathBuf },
    /// Linker length statistics from one or more pairs.csv files.
    Stats {
        #[arg(required = true)]
        pairs: Vec<PathBuf>,
    },
}

fn game_config(game: &str) -> Res<GameConfig> {
    if let Some(c) = games::by_name(game) {
        return Ok(c);
    }
    if Path::new(game).is_file() {
        return Ok(GameConfig::from_path(game)?);
    }
    Err(format!("unknown game {game:?}: not a bundled name or a config file").into())
}

fn models(config: &GameConfig, corpus: Option<&Path>) -> Res<GameModels> {
    let dir = corpus.map_or_else(|| shipped_corpus_dir(&config.name), Path::to_path_buf);
    let levels = load_corpus(&dir, config)?;
    Ok(load_models(&levels, config, None)?)
}

fn parse_pairing(s: &str) -> Res<PairingMode> {
    let (name, arg) = s.split_once(':').map_or((s, None), |(a, b)| (a, Some(b)));
    let n = arg.map(str::parse::<usize>).transpose()?;
    Ok(match name {
        "auto" => PairingMode::Auto,
        "grid" => PairingMode::GridNeighbors,
        "nearest" => PairingMode::BcNearest { k: n.unwrap_or(8) },
        "all" => PairingMode::AllOrdered { limit: n },
        _ => return Err(format!("unknown pairing {s:?}").into()),
    })
}

fn segments(cli: &Cli, config: &GameConfig, models: &GameModels, source: &Source) -> Res<Vec<Segment>> {
    match &source.segments {
        Some(dir) => Ok(read_segments(dir, config)?),
        None => Ok(synthesize_segments(config, models, source.count, cli.seed)?),
    }
}

fn experiment(cli: &Cli, config: &GameConfig, source: &Source, mut spec: ExperimentSpec) -> Res<()> {
    let models = models(config, source.corpus.as_deref())?;
    let segments = segments(cli, config, &models, source)?;
    spec.seed = cli.seed;
    spec.max_depth = cli.depth;
    if let Some(s) = cli.strategy {
        spec.strategies = vec![s];
    }
    let report = run_experiment(&spec, config, &models, &segments)?;
    if let Some(dir) = &cli.out {
        report.write(dir, cli.format)?;
        eprintln!("wrote {}", dir.display());
    }
    println!("{}", report.summary_json());
    Ok(())
}

fn run(cli: &Cli) -> Res<()> {
    let config = game_config(&cli.game)?;
    match &cli.command {
        Command::Train { corpus } => {
            let cache = cli
                .out
                .clone()
                .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from))
                .ok_or_else(|| format!("train needs --out or {CACHE_ENV}"))?;
            let dir = corpus.clone().unwrap_or_else(|| shipped_corpus_dir(&config.name));
            let levels = load_corpus(&dir, &config)?;
            let m = load_models(&levels, &config, Some(&cache))?;
            println!("{}", serde_json::to_string_pretty(&m.ngram.stats())?);
        }
        Command::Segments { corpus, count } => {
            let out = cli.out.as_ref().ok_or("segments needs --out")?;
            let m = models(&config, corpus.as_deref())?;
            let segs = synthesize_segments(&config, &m, *count, cli.seed)?;
            write_segments(out, &segs)?;
            println!("wrote {} segments to {}", segs.len(), out.display());
        }
        Command::Link { start, end, corpus } => {
            let m = models(&config, corpus.as_deref())?;
            let (a, b) = (read_level(start, &config)?, read_level(end, &config)?);
            let depth = cli.depth.unwrap_or(config.link_search_max_depth);
            let strategies = cli.strategy.map_or(Strategy::ALL.to_vec(), |s| vec![s]);
            let results: Vec<_> = strategies
                .iter()
                .map(|&s| link_game(&LinkRequest::new(a.clone(), b.clone(), s, depth), &config, &m))
                .collect();
            if let Some(dir) = &cli.out {
                fs::create_dir_all(dir)?;
                for r in results.iter().filter(|r| r.linked()) {
                    let mut slices = a.slices().to_vec();
                    slices.extend_from_slice(&r.linker);
                    slices.extend_from_slice(b.slices());
                    let level = a.with_slices(slices)?;
                    let (padded, ann) = annotate(&level, &config, &[(a.len(), r.linker.len())]);
                    fs::write(dir.join(format!("{}.txt", r.strategy)), render_text(&level))?;
                    fs::write(dir.join(format!("{}.svg", r.strategy)), render_svg(&padded, &config, &ann))?;
                }
            }
            match results.as_slice() {
                [one] => println!("{}", one.to_json()),
                all => println!("{}", serde_json::to_string_pretty(all)?),
            }
        }
        Command::Sweep { source, pairing } => {
            let mut spec = ExperimentSpec::new(&config, ExperimentMode::PairwiseSweep);
            spec.pairing = parse_pairing(pairing)?;
            experiment(cli, &config, source, spec)?;
        }
        Command::Chain { source, k, trials } => {
            let mut spec = ExperimentSpec::new(&config, ExperimentMode::KSegmentRandom);
            (spec.k, spec.trials) = (*k, *trials);
            experiment(cli, &config, source, spec)?;
        }
        Command::Usability { source, k, trials } => {
            let mut spec = ExperimentSpec::new(&config, ExperimentMode::MultiSegmentGridWalk);
            (spec.k, spec.trials) = (*k, *trials);
            experiment(cli, &config, source, spec)?;
        }
        Command::Render { level } => {
            let seq = read_level(level, &config)?;
            print!("{}", render_text(&seq));
            if let Some(dir) = &cli.out {
                fs::create_dir_all(dir)?;
                let (padded, ann) = annotate(&seq, &config, &[]);
                let stem = level.file_stem().unwrap_or_default().to_string_lossy();
                fs::write(dir.join(format!("{stem}.svg")), render_svg(&padded, &config, &ann))?;
            }
        }
        Command::Stats { pairs } => {
            let mut rows = Vec::new();
            for p in pairs {
                rows.extend(read_pair_rows(p)?);
            }
            let stats = link_stats(&rows);
            match cli.format {
                OutputFormat::Json => println!("{}", serde_json::to_string_pretty(&stats)?),
                OutputFormat::Csv => {
                    let mut w = csv::Writer::from_writer(std::io::stdout());
                    for s in &stats {
                        w.serialize(s)?;
                    }
                    w.flush()?;
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_jobs(cli.jobs, || run(&cli).map_err(|e| e.to_string())) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("seglink: {e}");
            ExitCode::FAILURE
        }
    }
}
