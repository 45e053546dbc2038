//! Diversity indices over the locations of a summary trajectory.
//!
//! Abundance counts one occurrence per summary unit. Shannon entropy uses the
//! natural logarithm. True diversity of order q (the Hill number) is
//! `(sum p_i^q)^(1 / (1 - q))`, with order 1 taken as its limit `exp(H)`.

mod jenks;

pub use jenks::{classify_users, gvf, jenks_breaks, sdcm, UserClassification, ValueClass};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frequency::FrequencyTable;
use crate::types::SummaryTrajectory;

const SUM_TOLERANCE: f64 = 1e-9;

/// Relative frequencies of location types; all strictly positive, summing to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AbundanceVector(Vec<f64>);

impl AbundanceVector {
    pub fn from_proportions(proportions: Vec<f64>) -> Result<Self> {
        if proportions.is_empty() {
            return Err(Error::InvalidParams("abundance vector is empty".into()));
        }
        if proportions.iter().any(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::InvalidParams(
                "proportions must be finite and strictly positive".into(),
            ));
        }
        let sum: f64 = proportions.iter().sum();
        if (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidParams(format!(
                "proportions must sum to 1, got {sum}"
            )));
        }
        Ok(Self(proportions))
    }

    /// Normalizes strictly positive counts.
    pub fn from_counts(counts: &[usize]) -> Result<Self> {
        if counts.is_empty() || counts.contains(&0) {
            return Err(Error::InvalidParams(
                "counts must be non-empty and positive".into(),
            ));
        }
        let total: usize = counts.iter().sum();
        Ok(Self(
            counts.iter().map(|&c| c as f64 / total as f64).collect(),
        ))
    }

    pub fn proportions(&self) -> &[f64] {
        &self.0
    }

    /// Number of types.
    pub fn richness(&self) -> usize {
        self.0.len()
    }

    fn is_even(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }
}

/// Unit-level location proportions of a summary, in rank order.
pub fn abundance(summary: &SummaryTrajectory) -> Result<AbundanceVector> {
    if summary.is_empty() {
        return Err(Error::EmptySummary);
    }
    let table = FrequencyTable::of_summary(summary);
    let counts: Vec<usize> = table.entries().iter().map(|e| e.count).collect();
    AbundanceVector::from_counts(&counts)
}

/// Shannon-Wiener index in nats.
pub fn shannon_index(p: &AbundanceVector) -> f64 {
    -p.0.iter().map(|&x| x * x.ln()).sum::<f64>()
}

/// Simpson index: probability that two draws share a type.
pub fn simpson_index(p: &AbundanceVector) -> f64 {
    p.0.iter().map(|&x| x * x).sum()
}

/// Effective number of types at diversity order `q >= 0`.
pub fn true_diversity(p: &AbundanceVector, q: f64) -> Result<f64> {
    if !(q.is_finite() && q >= 0.0) {
        return Err(Error::InvalidParams(format!(
            "diversity order must be finite and non-negative, got {q}"
        )));
    }
    let r = p.richness() as f64;
    // Every order equals the richness for an even distribution.
    if q == 0.0 || p.is_even() {
        return Ok(r);
    }
    let d = if q == 1.0 {
        shannon_index(p).exp()
    } else if q == 2.0 {
        1.0 / simpson_index(p)
    } else {
        p.0.iter()
            .map(|&x| x.powf(q))
            .sum::<f64>()
            .powf(1.0 / (1.0 - q))
    };
    Ok(d.clamp(1.0, r))
}

/// Richness plus true diversity of order 1 and 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiversityProfile {
    pub richness: usize,
    pub td_h: f64,
    pub td_s: f64,
}

pub fn diversity_profile(summary: &SummaryTrajectory) -> Result<DiversityProfile> {
    profile_of(&abundance(summary)?)
}

pub fn profile_of(p: &AbundanceVector) -> Result<DiversityProfile> {
    Ok(DiversityProfile {
        richness: p.richness(),
        td_h: true_diversity(p, 1.0)?,
        td_s: true_diversity(p, 2.0)?,
    })
}
