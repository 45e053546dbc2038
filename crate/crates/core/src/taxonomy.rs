//! Frequency x attractiveness location taxonomy and matching degree.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frequency::{distinct_locations, summary_locations, FrequencyTable};
use crate::types::{LocationSymbol, SummaryTrajectory, SymbolicTrajectory};

/// The top `n` locations of the trajectory's frequency ranking.
pub fn top_n_frequent(t: &SymbolicTrajectory, n: usize) -> Result<BTreeSet<LocationSymbol>> {
    top_n(&FrequencyTable::of_trajectory(t), n)
}

fn top_n(table: &FrequencyTable, n: usize) -> Result<BTreeSet<LocationSymbol>> {
    if n > table.len() {
        return Err(Error::NotEnoughValues {
            requested: n,
            available: table.len(),
        });
    }
    Ok(table.ranking().take(n).cloned().collect())
}

/// Significant, transit, sporadic and insignificant locations of one trajectory.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct TaxonomyPartition {
    /// Frequent and attractive.
    pub significant: BTreeSet<LocationSymbol>,
    /// Frequent but not attractive.
    pub transit: BTreeSet<LocationSymbol>,
    /// Attractive but not frequent.
    pub sporadic: BTreeSet<LocationSymbol>,
    /// Neither.
    pub insignificant: BTreeSet<LocationSymbol>,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct ClassShares {
    pub significant: f64,
    pub transit: f64,
    pub sporadic: f64,
    pub insignificant: f64,
}

impl TaxonomyPartition {
    /// Number of distinct native locations.
    pub fn n_types(&self) -> usize {
        self.significant.len() + self.transit.len() + self.sporadic.len() + self.insignificant.len()
    }

    /// Number of attractive locations.
    pub fn n_attractive(&self) -> usize {
        self.significant.len() + self.sporadic.len()
    }

    /// Class sizes as fractions of the native location count (all zero for an
    /// empty trajectory).
    pub fn shares(&self) -> ClassShares {
        let n = self.n_types();
        if n == 0 {
            return ClassShares::default();
        }
        let f = |s: &BTreeSet<LocationSymbol>| s.len() as f64 / n as f64;
        ClassShares {
            significant: f(&self.significant),
            transit: f(&self.transit),
            sporadic: f(&self.sporadic),
            insignificant: f(&self.insignificant),
        }
    }
}

/// Partitions the native locations of `t` given its summary.
pub fn classify_locations(
    t: &SymbolicTrajectory,
    summary: &SummaryTrajectory,
) -> TaxonomyPartition {
    let native = distinct_locations(t);
    let attractive = summary_locations(summary);
    let table = FrequencyTable::of_trajectory(t);
    // A summary of `t` cannot hold more types than `t` has.
    let frequent: BTreeSet<LocationSymbol> =
        table.ranking().take(attractive.len()).cloned().collect();

    TaxonomyPartition {
        significant: frequent.intersection(&attractive).cloned().collect(),
        transit: frequent.difference(&attractive).cloned().collect(),
        sporadic: attractive.difference(&frequent).cloned().collect(),
        insignificant: native
            .iter()
            .filter(|l| !attractive.contains(*l) && !frequent.contains(*l))
            .cloned()
            .collect(),
    }
}

/// Largest k such that the k most frequent native locations are all attractive.
pub fn matching_degree(t: &SymbolicTrajectory, summary: &SummaryTrajectory) -> usize {
    let attractive = summary_locations(summary);
    FrequencyTable::of_trajectory(t)
        .ranking()
        .take_while(|l| attractive.contains(*l))
        .count()
}

/// Unweighted mean of per-trajectory class shares.
pub fn class_percentages(
    natives: &[SymbolicTrajectory],
    summaries: &[SummaryTrajectory],
) -> Result<ClassShares> {
    if natives.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if natives.len() != summaries.len() {
        return Err(Error::Misaligned {
            natives: natives.len(),
            summaries: summaries.len(),
        });
    }
    let partitions: Vec<TaxonomyPartition> = natives
        .iter()
        .zip(summaries)
        .map(|(t, s)| classify_locations(t, s))
        .collect();
    Ok(mean_shares(
        partitions.iter().map(TaxonomyPartition::shares),
    ))
}

pub fn mean_shares(shares: impl IntoIterator<Item = ClassShares>) -> ClassShares {
    let mut acc = ClassShares::default();
    let mut n = 0usize;
    for s in shares {
        acc.significant += s.significant;
        acc.transit += s.transit;
        acc.sporadic += s.sporadic;
        acc.insignificant += s.insignificant;
        n += 1;
    }
    if n > 0 {
        let n = n as f64;
        acc.significant /= n;
        acc.transit /= n;
        acc.sporadic /= n;
        acc.insignificant /= n;
    }
    acc
}
