//! Summarization rate and goodness.

use num_rational::Ratio;
use num_traits::{CheckedAdd, CheckedDiv, ToPrimitive};

use crate::error::{Error, Result};
use crate::frequency::{distinct_locations, summary_locations};
use crate::types::{SummaryTrajectory, SummaryUnit, SymbolicTrajectory};

use super::weight_in;

/// Fraction of the trajectory's location types that the summary drops.
pub fn summarization_rate(t: &SymbolicTrajectory, summary: &SummaryTrajectory) -> Result<f64> {
    let native = distinct_locations(t).len();
    if native == 0 {
        return Err(Error::EmptyTrajectory);
    }
    let kept = summary_locations(summary).len();
    // Subtracting the counts first keeps results like 1/3 exact.
    Ok((native as f64 - kept as f64) / native as f64)
}

/// Share of the unit's period covered by consecutive occurrences of its
/// dominant symbol. A zero-length unit scores 1.
pub fn unit_goodness(t: &SymbolicTrajectory, unit: &SummaryUnit) -> f64 {
    let (w, d) = goodness_fraction(t, unit);
    w as f64 / d as f64
}

fn goodness_fraction(t: &SymbolicTrajectory, unit: &SummaryUnit) -> (i64, i64) {
    let duration = unit.end - unit.start;
    if duration <= 0 {
        return (1, 1);
    }
    (
        weight_in(t.window(unit.start, unit.end), &unit.location),
        duration,
    )
}

/// Mean unit goodness of a summary.
///
/// The unit scores are summed as exact fractions and rounded once, so small
/// summaries give the correctly rounded mean. Sums that would overflow fall
/// back to floating point.
pub fn trajectory_goodness(t: &SymbolicTrajectory, summary: &SummaryTrajectory) -> Result<f64> {
    if summary.is_empty() {
        return Err(Error::EmptySummary);
    }
    let fractions: Vec<(i64, i64)> = summary
        .units
        .iter()
        .map(|u| goodness_fraction(t, u))
        .collect();
    let exact = fractions
        .iter()
        .try_fold(Ratio::from_integer(0i128), |acc, &(w, d)| {
            acc.checked_add(&Ratio::new(i128::from(w), i128::from(d)))
        });
    let n = summary.len() as f64;
    let count = Ratio::from_integer(summary.len() as i128);
    Ok(
        match exact
            .and_then(|sum| sum.checked_div(&count))
            .and_then(|q| q.to_f64())
        {
            Some(q) => q,
            None => {
                fractions
                    .iter()
                    .map(|&(w, d)| w as f64 / d as f64)
                    .sum::<f64>()
                    / n
            }
        },
    )
}

fn check_aligned(natives: &[SymbolicTrajectory], summaries: &[SummaryTrajectory]) -> Result<()> {
    if natives.is_empty() {
        return Err(Error::EmptyDataset);
    }
    if natives.len() != summaries.len() {
        return Err(Error::Misaligned {
            natives: natives.len(),
            summaries: summaries.len(),
        });
    }
    Ok(())
}

/// Mean trajectory goodness over trajectories whose summary is non-empty.
pub fn dataset_goodness(
    natives: &[SymbolicTrajectory],
    summaries: &[SummaryTrajectory],
) -> Result<f64> {
    check_aligned(natives, summaries)?;
    let (sum, n) = natives
        .iter()
        .zip(summaries)
        .filter(|(_, s)| !s.is_empty())
        .map(|(t, s)| trajectory_goodness(t, s))
        .try_fold((0.0, 0usize), |(sum, n), q| q.map(|q| (sum + q, n + 1)))?;
    if n == 0 {
        return Err(Error::NoUnits);
    }
    Ok(sum / n as f64)
}

/// Mean summarization rate. Empty summaries count as 1; empty trajectories
/// are skipped.
pub fn dataset_summarization_rate(
    natives: &[SymbolicTrajectory],
    summaries: &[SummaryTrajectory],
) -> Result<f64> {
    check_aligned(natives, summaries)?;
    let rates: Vec<f64> = natives
        .iter()
        .zip(summaries)
        .filter(|(t, _)| !t.is_empty())
        .map(|(t, s)| summarization_rate(t, s))
        .collect::<Result<_>>()?;
    if rates.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(rates.iter().sum::<f64>() / rates.len() as f64)
}
