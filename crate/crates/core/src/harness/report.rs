use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::experiment::{ExperimentSpec, PairingUsed};
use super::{io_err, HarnessError};
use crate::linking::{LinkResult, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            _ => Err(format!("unknown format {s:?} (csv or json)")),
        }
    }
}

/// One `pairs.csv` row: a single link request of a pairwise sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairRow {
    pub game: String,
    pub strategy: Strategy,
    pub start_id: String,
    pub end_id: String,
    pub status: String,
    pub unbroken: bool,
    pub generable: bool,
    pub completable: bool,
    pub usable: bool,
    pub linker_len: usize,
    pub rmse: Option<f64>,
    pub d_bc: Option<f64>,
    pub nodes: usize,
}

impl PairRow {
    pub fn new(game: &str, start_id: &str, end_id: &str, r: &LinkResult) -> Self {
        PairRow {
            game: game.to_string(),
            strategy: r.strategy,
            start_id: start_id.to_string(),
            end_id: end_id.to_string(),
            status: r.status.as_str().to_string(),
            unbroken: r.unbroken,
            generable: r.generable,
            completable: r.completable,
            usable: r.usable,
            linker_len: r.linker.len(),
            rmse: r.rmse,
            d_bc: r.d_bc,
            nodes: r.search_stats.nodes_expanded,
        }
    }

    pub fn linked(&self) -> bool {
        self.status == "linked"
    }
}

/// One assembled multi-segment level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub game: String,
    pub variant: String,
    pub strategy: Strategy,
    pub k: usize,
    pub trial: usize,
    /// Segment ids in play order, `;`-separated.
    pub segments: String,
    pub linkable: bool,
    pub completable: bool,
    pub generable: bool,
    pub unbroken: bool,
    pub usable: bool,
    /// Linker lengths in play order, `;`-separated.
    pub linker_lens: String,
}

/// A raw metric value, for plotting distributions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRow {
    pub variant: String,
    pub strategy: Strategy,
    pub k: usize,
    pub metric: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Distribution {
    pub count: usize,
    pub min: Option<f64>,
    pub median: Option<f64>,
    pub mean: Option<f64>,
    pub max: Option<f64>,
}

impl Distribution {
    pub fn of(values: &[f64]) -> Self {
        if values.is_empty() {
            return Distribution::default();
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            (v[n / 2 - 1] + v[n / 2]) / 2.0
        };
        Distribution {
            count: n,
            min: Some(v[0]),
            median: Some(median),
            mean: Some(v.iter().sum::<f64>() / n as f64),
            max: Some(v[n - 1]),
        }
    }
}

/// Counts and rates for one (variant, strategy, k) cell of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub variant: String,
    pub strategy: Strategy,
    pub k: usize,
    pub n: usize,
    pub linkable: usize,
    pub completable: usize,
    pub generable: usize,
    pub unbroken: usize,
    pub usable: usize,
    pub linkable_rate: f64,
    pub completable_rate: f64,
    pub generable_rate: f64,
    pub unbroken_rate: f64,
    pub usable_rate: f64,
    pub completable_given_linkable: Option<f64>,
    pub usable_given_completable: Option<f64>,
    pub linker_length: Distribution,
    pub rmse: Distribution,
    pub d_bc: Distribution,
}

fn rate(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Flags of one row, fed to [`GroupSummary::build`].
pub(crate) struct Flags {
    pub linkable: bool,
    pub completable: bool,
    pub generable: bool,
    pub unbroken: bool,
    pub usable: bool,
}

impl GroupSummary {
    pub(crate) fn build(
        variant: &str,
        strategy: Strategy,
        k: usize,
        rows: &[Flags],
        dist: &[DistributionRow],
    ) -> Self {
        let n = rows.len();
        let count = |f: fn(&Flags) -> bool| rows.iter().filter(|r| f(r)).count();
        let linkable = count(|r| r.linkable);
        let completable = count(|r| r.completable);
        let generable = count(|r| r.generable);
        let unbroken = count(|r| r.unbroken);
        let usable = count(|r| r.usable);
        let metric = |m: &str| {
            let v: Vec<f64> = dist
                .iter()
                .filter(|d| d.variant == variant && d.strategy == strategy && d.k == k && d.metric == m)
                .map(|d| d.value)
                .collect();
            Distribution::of(&v)
        };
        GroupSummary {
            variant: variant.to_string(),
            strategy,
            k,
            n,
            linkable,
            completable,
            generable,
            unbroken,
            usable,
            linkable_rate: rate(linkable, n),
            completable_rate: rate(completable, n),
            generable_rate: rate(generable, n),
            unbroken_rate: rate(unbroken, n),
            usable_rate: rate(usable, n),
            completable_given_linkable: (linkable > 0).then(|| rate(completable, linkable)),
            usable_given_completable: (completable > 0).then(|| rate(usable, completable)),
            linker_length: metric("linker_len"),
            rmse: metric("rmse"),
            d_bc: metric("d_bc"),
        }
    }
}

/// Everything one experiment produced. Only the summary fields serialize;
/// rows and timing are written to their own files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub game: String,
    pub spec: ExperimentSpec,
    pub pairing: Option<PairingUsed>,
    pub segments: Vec<String>,
    pub groups: Vec<GroupSummary>,
    #[serde(skip)]
    pub pair_rows: Vec<PairRow>,
    #[serde(skip)]
    pub trial_rows: Vec<TrialRow>,
    #[serde(skip)]
    pub distributions: Vec<DistributionRow>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ExperimentReport {
    pub fn group(&self, variant: &str, strategy: Strategy, k: usize) -> Option<&GroupSummary> {
        self.groups
            .iter()
            .find(|g| g.variant == variant && g.strategy == strategy && g.k == k)
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Writes `summary.json`, `timing.json`, the row file (`pairs.*` or
    /// `trials.*`) and `distributions.*` into `dir`.
    pub fn write(&self, dir: &Path, format: OutputFormat) -> Result<(), HarnessError> {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        let put = |name: &str, text: String| {
            let p = dir.join(name);
            fs::write(&p, text).map_err(|e| io_err(&p, e))
        };
        put("summary.json", self.summary_json())?;
        put(
            "timing.json",
            format!("{{\n  \"elapsed_ms\": {}\n}}\n", self.elapsed.as_millis()),
        )?;
        if !self.pair_rows.is_empty() {
            write_rows(dir, "pairs", &self.pair_rows, format)?;
        }
        if !self.trial_rows.is_empty() {
            write_rows(dir, "trials", &self.trial_rows, format)?;
        }
        write_rows(dir, "distributions", &self.distributions, format)
    }
}

pub(crate) fn rows_csv<T: Serialize>(rows: &[T]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("row serializes");
    }
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 csv")
}

fn write_rows<T: Serialize>(dir: &Path, stem: &str, rows: &[T], format: OutputFormat) -> Result<(), HarnessError> {
    let (name, text) = match format {
        OutputFormat::Csv => (format!("{stem}.csv"), rows_csv(rows)),
        OutputFormat::Json => (
            format!("{stem}.json"),
            serde_json::to_string_pretty(rows).expect("rows serialize") + "\n",
        ),
    };
    let p = dir.join(name);
    fs::write(&p, text).map_err(|e| io_err(&p, e))
}

pub fn read_pair_rows(path: &Path) -> Result<Vec<PairRow>, HarnessError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    r.deserialize()
        .collect::<Result<Vec<PairRow>, _>>()
        .map_err(|e| io_err(path, e))
}

/// Linker statistics for one game and strategy, over linked rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkStatsRow {
    pub game: String,
    pub strategy: Strategy,
    pub pairs: usize,
    pub linked: usize,
    pub empty_linkers: usize,
    pub min_len: Option<f64>,
    pub median_len: Option<f64>,
    pub mean_len: Option<f64>,
    pub max_len: Option<f64>,
    pub mean_rmse: Option<f64>,
    pub mean_d_bc: Option<f64>,
}

pub fn link_stats(rows: &[PairRow]) -> Vec<LinkStatsRow> {
    let mut keys: Vec<(String, Strategy)> = rows.iter().map(|r| (r.game.clone(), r.strategy)).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .map(|(game, strategy)| {
            let all: Vec<&PairRow> = rows.iter().filter(|r| r.game == game && r.strategy == strategy).collect();
            let linked: Vec<&PairRow> = all.iter().copied().filter(|r| r.linked()).collect();
            let lens: Vec<f64> = linked.iter().map(|r| r.linker_len as f64).collect();
            let rmse: Vec<f64> = linked.iter().filter_map(|r| r.rmse).collect();
            let d_bc: Vec<f64> = linked.iter().filter_map(|r| r.d_bc).collect();
            let len = Distribution::of(&lens);
            LinkStatsRow {
                pairs: all.len(),
                linked: linked.len(),
                empty_linkers: linked.iter().filter(|r| r.linker_len == 0).count(),
                min_len: len.min,
                median_len: len.median,
                mean_len: len.mean,
                max_len: len.max,
                mean_rmse: Distribution::of(&rmse).mean,
                mean_d_bc: Distribution::of(&d_bc).mean,
                game,
                strategy,
            }
        })
        .collect()
}
