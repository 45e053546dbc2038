use std::path::PathBuf;

use serde::Serialize;
use serde_json::json;

use super::ingest::{ingest_paths, write_trajectories, IngestReport};
use super::output::{Artifacts, OutputFormat};
use super::{par_map, with_pool, PipelineError};
use crate::diversity::{classify_users, diversity_profile, DiversityProfile};
use crate::entropy_rate::{summary_entropy_rate, trajectory_entropy_rate};
use crate::error::Error;
use crate::frequency::dataset_stats;
use crate::rank::{
    average_distribution, rank_distribution, summary_rank_distribution, RankDistribution,
};
use crate::rle::{rle_plus, segments_as_summary};
use crate::seqscan::{
    dataset_goodness, dataset_summarization_rate, summarize, unit_goodness, SeqScanParams,
    Summarizer,
};
use crate::synth::{generate_dataset, SynthConfig};
use crate::taxonomy::{classify_locations, matching_degree, mean_shares};
use crate::types::{SummaryTrajectory, SymbolicTrajectory};

const GRID_N: [usize; 4] = [2, 4, 6, 8];
const GRID_DELTA_MINUTES: [u32; 8] = [0, 2, 4, 8, 16, 30, 60, 120];

/// The 32 (N, δ) combinations of the standard sensitivity grid.
pub fn grid_params() -> Vec<SeqScanParams> {
    GRID_N
        .iter()
        .flat_map(|&n| {
            GRID_DELTA_MINUTES
                .iter()
                .map(move |&m| SeqScanParams::new(n, f64::from(m) * 60.0).expect("valid grid"))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub inputs: Vec<PathBuf>,
    pub output_dir: PathBuf,
    pub params: SeqScanParams,
    pub workers: usize,
    pub seed: u64,
    pub format: OutputFormat,
    pub strict: bool,
}

impl RunConfig {
    pub fn new(inputs: Vec<PathBuf>, output_dir: impl Into<PathBuf>) -> Self {
        Self {
            inputs,
            output_dir: output_dir.into(),
            params: SeqScanParams::default(),
            workers: 1,
            seed: 0,
            format: OutputFormat::Csv,
            strict: false,
        }
    }

    fn validate(&self, needs_input: bool) -> Result<(), PipelineError> {
        if self.workers == 0 {
            return Err(PipelineError::Usage("workers must be at least 1".into()));
        }
        if needs_input && self.inputs.is_empty() {
            return Err(PipelineError::Usage("no input file given".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthPreset {
    Basic,
    HeavyTail,
    /// Roughly `points` records per user.
    Sized {
        points: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Summarize {
        streaming: bool,
    },
    Baseline,
    /// Metrics at the configured parameters, or over the full grid.
    Metrics {
        grid: bool,
    },
    Taxonomy,
    Diversity {
        threshold: f64,
    },
    /// Entropy rate of summaries, or of the native trajectories when `raw`.
    EntropyRate {
        raw: bool,
    },
    Rank,
    Synth {
        preset: SynthPreset,
        users: usize,
    },
    Stats,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Summarize { .. } => "summarize",
            Self::Baseline => "baseline",
            Self::Metrics { .. } => "metrics",
            Self::Taxonomy => "taxonomy",
            Self::Diversity { .. } => "diversity",
            Self::EntropyRate { .. } => "entropy-rate",
            Self::Rank => "rank",
            Self::Synth { .. } => "synth",
            Self::Stats => "stats",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: &'static str,
    pub users: usize,
    pub ingest: Option<IngestReport>,
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub user_id: String,
    /// 1-based position of the unit in its summary.
    pub unit_idx: usize,
    pub t_start: i64,
    pub t_end: i64,
    pub location: String,
    pub occurrences: usize,
    pub weight_seconds: i64,
    pub goodness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridCell {
    #[serde(rename = "N")]
    pub n: usize,
    pub delta_seconds: f64,
    pub users: usize,
    pub units: usize,
    pub s_rate: f64,
    /// Absent when no trajectory produced a unit.
    pub q: Option<f64>,
    pub baseline_units: usize,
    pub baseline_s_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TaxonomyRow {
    pub user_id: String,
    pub n_types: usize,
    pub n_attractive: usize,
    pub sl: usize,
    pub tl: usize,
    pub pl: usize,
    pub il: usize,
    pub k: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiversityRow {
    pub user_id: String,
    #[serde(rename = "R")]
    pub r: usize,
    #[serde(rename = "TD_H")]
    pub td_h: f64,
    #[serde(rename = "TD_S")]
    pub td_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyRateRow {
    pub user_id: String,
    pub n_units: usize,
    pub entropy_rate_bits: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EcdfRow {
    pub entropy_rate_bits: f64,
    pub cumulative_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankRow {
    pub rank: usize,
    pub probability: f64,
}

fn params_json(p: SeqScanParams) -> serde_json::Value {
    json!({ "N": p.min_occurrences(), "delta_seconds": p.min_weight() })
}

fn summarize_streaming(t: &SymbolicTrajectory, params: SeqScanParams) -> SummaryTrajectory {
    let mut s = Summarizer::new(params);
    let mut units: Vec<_> = t
        .points()
        .iter()
        .filter_map(|p| {
            s.push(p.clone())
                .expect("trajectory points are time-ordered")
        })
        .collect();
    units.extend(s.finish());
    SummaryTrajectory::new(t.user_id(), units)
}

/// Output rows of one summary, with per-unit goodness measured against `t`.
pub fn summary_rows(t: &SymbolicTrajectory, summary: &SummaryTrajectory) -> Vec<SummaryRow> {
    summary
        .units
        .iter()
        .enumerate()
        .map(|(i, u)| SummaryRow {
            user_id: summary.user_id.clone(),
            unit_idx: i + 1,
            t_start: u.start,
            t_end: u.end,
            location: u.location.to_string(),
            occurrences: u.occurrences,
            weight_seconds: u.weight,
            goodness: unit_goodness(t, u),
        })
        .collect()
}

fn optional_goodness(
    natives: &[SymbolicTrajectory],
    summaries: &[SummaryTrajectory],
) -> Result<Option<f64>, Error> {
    match dataset_goodness(natives, summaries) {
        Ok(q) => Ok(Some(q)),
        Err(Error::NoUnits) => Ok(None),
        Err(e) => Err(e),
    }
}

fn unit_count(summaries: &[SummaryTrajectory]) -> usize {
    summaries.iter().map(SummaryTrajectory::len).sum()
}

/// Runs `command` and writes its artifacts. On error nothing is left behind
/// in the output directory.
pub fn run_batch(config: &RunConfig, command: &Command) -> Result<RunReport, PipelineError> {
    let needs_input = !matches!(command, Command::Synth { .. });
    config.validate(needs_input)?;
    let mut out = Artifacts::new(&config.output_dir)?;

    if let Command::Synth { preset, users } = *command {
        let users = synth(config, preset, users, &mut out)?;
        return Ok(RunReport {
            command: command.name(),
            users,
            ingest: None,
            files: out.commit()?,
        });
    }

    let ingested = ingest_paths(&config.inputs, config.strict)?;
    let natives = &ingested.trajectories;
    let workers = config.workers;
    let params = config.params;
    let format = config.format;
    out.json("ingest_report.json", &ingested.report)?;

    match command {
        Command::Summarize { streaming } => {
            let streaming = *streaming;
            let summaries = par_map(workers, natives, |t| {
                if streaming {
                    summarize_streaming(t, params)
                } else {
                    summarize(t, params)
                }
            })?;
            let rows: Vec<SummaryRow> = natives
                .iter()
                .zip(&summaries)
                .flat_map(|(t, s)| summary_rows(t, s))
                .collect();
            out.table("summary", format, &rows)?;
            out.json(
                "summary_metrics.json",
                &json!({
                    "params": params_json(params),
                    "users": natives.len(),
                    "units": rows.len(),
                    "s_rate": dataset_summarization_rate(natives, &summaries)?,
                    "q": optional_goodness(natives, &summaries)?,
                }),
            )?;
        }
        Command::Baseline => {
            let summaries = par_map(workers, natives, |t| {
                segments_as_summary(t.user_id(), &rle_plus(t, params))
            })?;
            let rows: Vec<SummaryRow> = summaries
                .iter()
                .flat_map(|s| {
                    s.units.iter().enumerate().map(|(i, u)| SummaryRow {
                        user_id: s.user_id.clone(),
                        unit_idx: i + 1,
                        t_start: u.start,
                        t_end: u.end,
                        location: u.location.to_string(),
                        occurrences: u.occurrences,
                        weight_seconds: u.weight,
                        goodness: 1.0,
                    })
                })
                .collect();
            out.table("summary", format, &rows)?;
            out.json(
                "summary_metrics.json",
                &json!({
                    "params": params_json(params),
                    "users": natives.len(),
                    "units": rows.len(),
                    "s_rate": dataset_summarization_rate(natives, &summaries)?,
                    "q": (!rows.is_empty()).then_some(1.0),
                }),
            )?;
        }
        Command::Metrics { grid } => {
            let cells = if *grid { grid_params() } else { vec![params] };
            let mut rows = Vec::with_capacity(cells.len());
            for p in cells {
                let pair = par_map(workers, natives, |t| {
                    let seq = summarize(t, p);
                    let base = segments_as_summary(t.user_id(), &rle_plus(t, p));
                    (seq, base)
                })?;
                let (summaries, baselines): (Vec<_>, Vec<_>) = pair.into_iter().unzip();
                let cell = GridCell {
                    n: p.min_occurrences(),
                    delta_seconds: p.min_weight(),
                    users: natives.len(),
                    units: unit_count(&summaries),
                    s_rate: dataset_summarization_rate(natives, &summaries)?,
                    q: optional_goodness(natives, &summaries)?,
                    baseline_units: unit_count(&baselines),
                    baseline_s_rate: dataset_summarization_rate(natives, &baselines)?,
                };
                out.json(
                    &format!("metrics/N{}_delta{}s.json", cell.n, cell.delta_seconds),
                    &cell,
                )?;
                rows.push(cell);
            }
            out.table("metrics_grid", format, &rows)?;
        }
        Command::Taxonomy => {
            let parts = par_map(workers, natives, |t| {
                let s = summarize(t, params);
                (classify_locations(t, &s), matching_degree(t, &s))
            })?;
            let rows: Vec<TaxonomyRow> = natives
                .iter()
                .zip(&parts)
                .map(|(t, (p, k))| TaxonomyRow {
                    user_id: t.user_id().to_string(),
                    n_types: p.n_types(),
                    n_attractive: p.n_attractive(),
                    sl: p.significant.len(),
                    tl: p.transit.len(),
                    pl: p.sporadic.len(),
                    il: p.insignificant.len(),
                    k: *k,
                })
                .collect();
            let mean = mean_shares(
                parts
                    .iter()
                    .filter(|(p, _)| p.n_types() > 0)
                    .map(|(p, _)| p.shares()),
            );
            out.table("taxonomy", format, &rows)?;
            out.json(
                "taxonomy_summary.json",
                &json!({
                    "params": params_json(params),
                    "users": rows.len(),
                    "percentages": {
                        "significant": 100.0 * mean.significant,
                        "transit": 100.0 * mean.transit,
                        "sporadic": 100.0 * mean.sporadic,
                        "insignificant": 100.0 * mean.insignificant,
                    },
                }),
            )?;
        }
        Command::Diversity { threshold } => {
            let profiles = par_map(workers, natives, |t| {
                diversity_profile(&summarize(t, params))
            })?;
            let mut rows = Vec::new();
            for (t, p) in natives.iter().zip(profiles) {
                match p {
                    Ok(DiversityProfile {
                        richness,
                        td_h,
                        td_s,
                    }) => rows.push(DiversityRow {
                        user_id: t.user_id().to_string(),
                        r: richness,
                        td_h,
                        td_s,
                    }),
                    Err(Error::EmptySummary) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            if rows.is_empty() {
                return Err(Error::NoUnits.into());
            }
            let column = |f: fn(&DiversityRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
            let report = json!({
                "params": params_json(params),
                "threshold": threshold,
                "users": rows.len(),
                "skipped_empty_summaries": natives.len() - rows.len(),
                "R": classify_users(&column(|r| r.r as f64), *threshold)?,
                "TD_H": classify_users(&column(|r| r.td_h), *threshold)?,
                "TD_S": classify_users(&column(|r| r.td_s), *threshold)?,
            });
            out.table("diversity", format, &rows)?;
            out.json("diversity_classes.json", &report)?;
        }
        Command::EntropyRate { raw } => {
            let raw = *raw;
            let rates = par_map(workers, natives, |t| {
                if raw {
                    (t.len(), trajectory_entropy_rate(t))
                } else {
                    let s = summarize(t, params);
                    (s.len(), summary_entropy_rate(&s))
                }
            })?;
            let rows: Vec<EntropyRateRow> = natives
                .iter()
                .zip(&rates)
                .map(|(t, &(n, h))| EntropyRateRow {
                    user_id: t.user_id().to_string(),
                    n_units: n,
                    entropy_rate_bits: h,
                })
                .collect();
            out.table("entropy_rate", format, &rows)?;
            out.table(
                "entropy_rate_ecdf",
                format,
                &ecdf(rates.iter().map(|r| r.1)),
            )?;
        }
        Command::Rank => {
            let native = par_map(workers, natives, |t| {
                (!t.is_empty()).then(|| rank_distribution(t)).transpose()
            })?;
            let summary = par_map(workers, natives, |t| {
                let s = summarize(t, params);
                (!s.is_empty())
                    .then(|| summary_rank_distribution(&s))
                    .transpose()
            })?;
            let average = |parts: Vec<Result<Option<RankDistribution>, Error>>| {
                let parts: Vec<RankDistribution> = parts
                    .into_iter()
                    .filter_map(Result::transpose)
                    .collect::<Result<_, _>>()?;
                average_distribution(&parts).map(|d| {
                    d.rows()
                        .map(|(rank, probability)| RankRow { rank, probability })
                        .collect::<Vec<_>>()
                })
            };
            out.table("rank_native", format, &average(native)?)?;
            out.table("rank_summary", format, &average(summary)?)?;
        }
        Command::Stats => {
            out.json(
                "stats.json",
                &json!({ "stats": dataset_stats(natives), "ingest": &ingested.report }),
            )?;
        }
        Command::Synth { .. } => unreachable!("handled above"),
    }

    Ok(RunReport {
        command: command.name(),
        users: natives.len(),
        ingest: Some(ingested.report.clone()),
        files: out.commit()?,
    })
}

fn ecdf(values: impl Iterator<Item = f64>) -> Vec<EcdfRow> {
    let mut v: Vec<f64> = values.collect();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    let mut rows: Vec<EcdfRow> = Vec::new();
    for (i, x) in v.iter().enumerate() {
        let row = EcdfRow {
            entropy_rate_bits: *x,
            cumulative_fraction: (i + 1) as f64 / n,
        };
        match rows.last_mut() {
            Some(last) if last.entropy_rate_bits == *x => *last = row,
            _ => rows.push(row),
        }
    }
    rows
}

fn synth(
    config: &RunConfig,
    preset: SynthPreset,
    users: usize,
    out: &mut Artifacts,
) -> Result<usize, PipelineError> {
    let synth_config = match preset {
        SynthPreset::Basic => SynthConfig::basic(users, config.seed),
        SynthPreset::HeavyTail => SynthConfig::heavy_tail(users, config.seed),
        SynthPreset::Sized { points } => SynthConfig::sized(users, points, config.seed),
    };
    let data = with_pool(config.workers, || generate_dataset(&synth_config))??;
    out.with_writer("trajectories.csv", |w| {
        write_trajectories(w, &data.trajectories)
    })?;
    out.json(
        "ground_truth.json",
        &json!({ "config": synth_config, "users": data.ground_truth }),
    )?;
    Ok(data.trajectories.len())
}
