//! Batch execution over CSV datasets: ingestion, a worker pool that maps
//! every analysis over users, and artifact writing.
//!
//! Results are collected in user order whatever the worker count, so every
//! output file is byte-identical between sequential and parallel runs.

mod commands;
mod ingest;
mod output;

pub use commands::{
    grid_params, run_batch, summary_rows, Command, DiversityRow, EcdfRow, EntropyRateRow, GridCell,
    RankRow, RunConfig, RunReport, SummaryRow, SynthPreset, TaxonomyRow,
};
pub use ingest::{
    ingest, ingest_paths, ingest_reader, parse_timestamp, write_trajectories, IngestReport,
    Ingested, MalformedRow,
};
pub use output::{Artifacts, OutputFormat};

use std::path::Path;

use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("input schema: {0}")]
    Schema(String),
    #[error("{count} malformed rows{}", first.as_ref().map(|r| format!(" (first at line {}: {})", r.line, r.reason)).unwrap_or_default())]
    Malformed {
        count: usize,
        first: Option<MalformedRow>,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] crate::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl PipelineError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        Self::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }

    /// True for errors caused by how the tool was invoked rather than by data.
    pub fn is_usage(&self) -> bool {
        matches!(self, Self::Usage(_))
    }
}

/// Parses a duration such as `16m`, `0.0111d`, `960s`, `2h` or a bare number
/// of seconds.
pub fn parse_duration(raw: &str) -> Result<f64, PipelineError> {
    let raw = raw.trim();
    let (number, scale) = match raw.char_indices().last() {
        Some((i, 's')) => (&raw[..i], 1.0),
        Some((i, 'm')) => (&raw[..i], 60.0),
        Some((i, 'h')) => (&raw[..i], 3600.0),
        Some((i, 'd')) => (&raw[..i], 86_400.0),
        _ => (raw, 1.0),
    };
    let value: f64 = number
        .trim()
        .parse()
        .map_err(|_| PipelineError::Usage(format!("invalid duration `{raw}`")))?;
    if !value.is_finite() || value < 0.0 {
        return Err(PipelineError::Usage(format!(
            "duration must be non-negative, got `{raw}`"
        )));
    }
    Ok(value * scale)
}

/// Order-preserving parallel map on a dedicated pool of `workers` threads.
pub fn par_map<T, R, F>(workers: usize, items: &[T], f: F) -> Result<Vec<R>, PipelineError>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if workers <= 1 {
        return Ok(items.iter().map(f).collect());
    }
    with_pool(workers, || items.par_iter().map(f).collect())
}

/// Runs `f` inside a dedicated pool of `workers` threads.
pub fn with_pool<R: Send>(
    workers: usize,
    f: impl FnOnce() -> R + Send,
) -> Result<R, PipelineError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| PipelineError::Pool(e.to_string()))?;
    Ok(pool.install(f))
}
