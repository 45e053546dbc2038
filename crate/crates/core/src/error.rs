use thiserror::Error;

use crate::types::Timestamp;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("location label must not be empty")]
    EmptyLabel,
    #[error("timestamps must be non-decreasing (violated at point {index})")]
    UnsortedTimestamps { index: usize },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("index {index} out of range for trajectory of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("point at {got} is older than the previous point at {previous}")]
    OutOfOrderPoint { previous: Timestamp, got: Timestamp },
    #[error("trajectory has no points")]
    EmptyTrajectory,
    #[error("summary trajectory has no units")]
    EmptySummary,
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("no trajectory in the dataset has a non-empty summary")]
    NoUnits,
    #[error(
        "dataset and summaries are not aligned ({natives} trajectories, {summaries} summaries)"
    )]
    Misaligned { natives: usize, summaries: usize },
    #[error("unit [{start}, {end}] lies outside the trajectory time span")]
    UnitOutsideTrajectory { start: Timestamp, end: Timestamp },
    #[error("requested {requested} items but only {available} are available")]
    NotEnoughValues { requested: usize, available: usize },
    #[error("invalid synthetic configuration: {0}")]
    InvalidConfig(String),
}
