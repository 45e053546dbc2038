use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use locrel_core::pipeline::{
    parse_duration, run_batch, Command, OutputFormat, PipelineError, RunConfig, SynthPreset,
};
use locrel_core::SeqScanParams;

#[derive(Parser)]
#[command(
    name = "locrel",
    version,
    about = "Attractive locations and mobility metrics for symbolic trajectories"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args)]
struct Common {
    /// Input CSV with header user_id,timestamp,location[,event]. Repeatable.
    #[arg(long, short = 'i')]
    input: Vec<PathBuf>,

    #[arg(long, short = 'o', default_value = "out")]
    output_dir: PathBuf,

    /// Minimum occurrences of a dominant symbol.
    #[arg(short = 'N', default_value_t = SeqScanParams::DEFAULT_MIN_OCCURRENCES)]
    n: usize,

    /// Minimum dwell weight: seconds, or with a unit suffix (s, m, h, d).
    #[arg(long, default_value = "16m")]
    delta: String,

    #[arg(long, default_value_t = 1)]
    workers: usize,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Fail on any malformed input row instead of skipping it.
    #[arg(long)]
    strict: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Preset {
    Basic,
    HeavyTail,
    Sized,
}

#[derive(Subcommand)]
enum Cmd {
    /// Summarize each trajectory into attractive-location units.
    Summarize {
        #[command(flatten)]
        common: Common,
        /// Feed points one at a time through the streaming summarizer.
        #[arg(long)]
        streaming: bool,
    },
    /// Run-length baseline summaries.
    Baseline {
        #[command(flatten)]
        common: Common,
    },
    /// Summarization rate and goodness.
    Metrics {
        #[command(flatten)]
        common: Common,
        /// Evaluate the full N x delta grid instead of a single setting.
        #[arg(long)]
        grid: bool,
    },
    /// Significant / transit / sporadic / insignificant location classes.
    Taxonomy {
        #[command(flatten)]
        common: Common,
    },
    /// Per-user diversity profile and natural-breaks classification.
    Diversity {
        #[command(flatten)]
        common: Common,
        /// Goodness of variance fit the classification must reach.
        #[arg(long, default_value_t = 0.7)]
        threshold: f64,
    },
    /// Entropy rate of summary location sequences.
    EntropyRate {
        #[command(flatten)]
        common: Common,
        /// Use the raw trajectories instead of their summaries.
        #[arg(long)]
        raw: bool,
    },
    /// Visitation probability by location rank.
    Rank {
        #[command(flatten)]
        common: Common,
    },
    /// Generate a synthetic dataset with planted dwells.
    Synth {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Preset::Basic)]
        preset: Preset,
        #[arg(long, default_value_t = 100)]
        users: usize,
        /// Approximate records per user for the sized preset.
        #[arg(long, default_value_t = 1000)]
        points: usize,
    },
    /// Dataset size statistics.
    Stats {
        #[command(flatten)]
        common: Common,
    },
}

fn build(cmd: Cmd) -> Result<(RunConfig, Command), PipelineError> {
    let (common, command) = match cmd {
        Cmd::Summarize { common, streaming } => (common, Command::Summarize { streaming }),
        Cmd::Baseline { common } => (common, Command::Baseline),
        Cmd::Metrics { common, grid } => (common, Command::Metrics { grid }),
        Cmd::Taxonomy { common } => (common, Command::Taxonomy),
        Cmd::Diversity { common, threshold } => {
            if !(0.0..=1.0).contains(&threshold) {
                return Err(PipelineError::Usage(format!(
                    "threshold must lie in [0, 1], got {threshold}"
                )));
            }
            (common, Command::Diversity { threshold })
        }
        Cmd::EntropyRate { common, raw } => (common, Command::EntropyRate { raw }),
        Cmd::Rank { common } => (common, Command::Rank),
        Cmd::Synth {
            common,
            preset,
            users,
            points,
        } => {
            let preset = match preset {
                Preset::Basic => SynthPreset::Basic,
                Preset::HeavyTail => SynthPreset::HeavyTail,
                Preset::Sized => SynthPreset::Sized { points },
            };
            (common, Command::Synth { preset, users })
        }
        Cmd::Stats { common } => (common, Command::Stats),
    };
    let delta = parse_duration(&common.delta)?;
    let params =
        SeqScanParams::new(common.n, delta).map_err(|e| PipelineError::Usage(e.to_string()))?;
    let config = RunConfig {
        inputs: common.input,
        output_dir: common.output_dir,
        params,
        workers: common.workers,
        seed: common.seed,
        format: match common.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
        strict: common.strict,
    };
    Ok((config, command))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = build(cli.command).and_then(|(config, command)| run_batch(&config, &command));
    match result {
        Ok(report) => {
            if let Some(ingest) = &report.ingest {
                if ingest.malformed > 0 {
                    eprintln!("warning: skipped {} malformed rows", ingest.malformed);
                }
            }
            eprintln!(
                "{}: {} users, {} files written to the output directory",
                report.command,
                report.users,
                report.files.len()
            );
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 1 } else { 2 })
        }
    }
}
