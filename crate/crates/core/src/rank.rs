//! Probability of finding a user at their r-th most visited location.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frequency::FrequencyTable;
use crate::types::{SummaryTrajectory, SymbolicTrajectory};

/// `probabilities[r - 1]` is the probability for rank r.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RankDistribution {
    pub probabilities: Vec<f64>,
}

impl RankDistribution {
    pub fn len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probabilities.is_empty()
    }

    /// Probability at rank `r` (1-based); zero beyond the support.
    pub fn at(&self, r: usize) -> f64 {
        r.checked_sub(1)
            .and_then(|i| self.probabilities.get(i))
            .copied()
            .unwrap_or(0.0)
    }

    pub fn mass(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `(rank, probability)` pairs.
    pub fn rows(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(i, &p)| (i + 1, p))
    }
}

fn from_table(table: &FrequencyTable) -> Result<RankDistribution> {
    if table.total() == 0 {
        return Err(Error::EmptyTrajectory);
    }
    let total = table.total() as f64;
    Ok(RankDistribution {
        probabilities: table
            .entries()
            .iter()
            .map(|e| e.count as f64 / total)
            .collect(),
    })
}

pub fn rank_distribution(t: &SymbolicTrajectory) -> Result<RankDistribution> {
    from_table(&FrequencyTable::of_trajectory(t))
}

/// Rank distribution of a summary, counting one occurrence per unit.
pub fn summary_rank_distribution(s: &SummaryTrajectory) -> Result<RankDistribution> {
    from_table(&FrequencyTable::of_summary(s)).map_err(|_| Error::EmptySummary)
}

/// Unweighted mean of per-trajectory distributions, zero-padded to the
/// longest support.
pub fn average_distribution(parts: &[RankDistribution]) -> Result<RankDistribution> {
    if parts.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let len = parts.iter().map(RankDistribution::len).max().unwrap_or(0);
    let mut acc = vec![0.0; len];
    for p in parts {
        for (a, v) in acc.iter_mut().zip(&p.probabilities) {
            *a += v;
        }
    }
    let n = parts.len() as f64;
    acc.iter_mut().for_each(|a| *a /= n);
    Ok(RankDistribution { probabilities: acc })
}

/// Dataset-level distribution over native trajectories. Empty trajectories are skipped.
pub fn dataset_rank_distribution(dataset: &[SymbolicTrajectory]) -> Result<RankDistribution> {
    let parts: Vec<RankDistribution> = dataset
        .iter()
        .filter(|t| !t.is_empty())
        .map(rank_distribution)
        .collect::<Result<_>>()?;
    average_distribution(&parts)
}

/// Dataset-level distribution over summaries. Empty summaries are skipped.
pub fn summary_dataset_rank_distribution(
    summaries: &[SummaryTrajectory],
) -> Result<RankDistribution> {
    let parts: Vec<RankDistribution> = summaries
        .iter()
        .filter(|s| !s.is_empty())
        .map(summary_rank_distribution)
        .collect::<Result<_>>()?;
    average_distribution(&parts)
}
