//! Attractive-location extraction and mobility analytics for symbolic
//! trajectories.
//!
//! A symbolic trajectory is a time-ordered sequence of `(timestamp, location)`
//! records, as produced by cell-tower logs. [`seqscan`] summarizes it into a
//! few dwell units, [`rle`] provides a run-length baseline, and the remaining
//! modules measure what the summaries say about a user: location taxonomy,
//! diversity, entropy rate and rank distributions.

pub mod diversity;
pub mod entropy_rate;
mod error;
pub mod frequency;
pub mod pipeline;
pub mod rank;
pub mod rle;
pub mod seqscan;
pub mod synth;
pub mod taxonomy;
mod types;

pub use error::{Error, Result};
pub use seqscan::{summarize, SeqScanParams, Summarizer};
pub use types::{
    LocationSymbol, SummaryTrajectory, SummaryUnit, SymbolicTrajectory, Timestamp, TrajPoint,
};
