//! Visit frequencies, deterministic location ranking and dataset statistics.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::types::{LocationSymbol, SummaryTrajectory, SymbolicTrajectory, Timestamp};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FrequencyEntry {
    pub location: LocationSymbol,
    pub count: usize,
    pub first_seen: Timestamp,
}

/// Visit counts per location, ranked by count descending.
///
/// Ties are broken by earliest first occurrence, then by label.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct FrequencyTable {
    ranked: Vec<FrequencyEntry>,
    total: usize,
}

impl FrequencyTable {
    pub fn from_occurrences<'a>(
        occurrences: impl IntoIterator<Item = (&'a LocationSymbol, Timestamp)>,
    ) -> Self {
        let mut index: HashMap<&LocationSymbol, usize> = HashMap::new();
        let mut ranked: Vec<FrequencyEntry> = Vec::new();
        let mut total = 0;
        for (location, ts) in occurrences {
            total += 1;
            match index.get(location) {
                Some(&i) => {
                    let e = &mut ranked[i];
                    e.count += 1;
                    e.first_seen = e.first_seen.min(ts);
                }
                None => {
                    index.insert(location, ranked.len());
                    ranked.push(FrequencyEntry {
                        location: location.clone(),
                        count: 1,
                        first_seen: ts,
                    });
                }
            }
        }
        ranked.sort_by(|a, b| {
            b.count
                .cmp(&a.count)
                .then(a.first_seen.cmp(&b.first_seen))
                .then_with(|| a.location.cmp(&b.location))
        });
        Self { ranked, total }
    }

    /// Frequency of each location among the trajectory's points.
    pub fn of_trajectory(t: &SymbolicTrajectory) -> Self {
        Self::from_occurrences(t.points().iter().map(|p| (&p.location, p.timestamp)))
    }

    /// Frequency of each location among summary units (one occurrence per unit).
    pub fn of_summary(s: &SummaryTrajectory) -> Self {
        Self::from_occurrences(s.units.iter().map(|u| (&u.location, u.start)))
    }

    /// Entries in rank order; rank r is `entries()[r - 1]`.
    pub fn entries(&self) -> &[FrequencyEntry] {
        &self.ranked
    }

    pub fn ranking(&self) -> impl Iterator<Item = &LocationSymbol> + '_ {
        self.ranked.iter().map(|e| &e.location)
    }

    pub fn count(&self, location: &LocationSymbol) -> usize {
        self.ranked
            .iter()
            .find(|e| &e.location == location)
            .map_or(0, |e| e.count)
    }

    /// Number of distinct locations.
    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    /// Sum of all counts.
    pub fn total(&self) -> usize {
        self.total
    }
}

pub fn frequency_table(t: &SymbolicTrajectory) -> FrequencyTable {
    FrequencyTable::of_trajectory(t)
}

/// The set of distinct locations visited by `t`.
pub fn distinct_locations(t: &SymbolicTrajectory) -> BTreeSet<LocationSymbol> {
    t.symbols().cloned().collect()
}

/// The set of distinct locations among summary units.
pub fn summary_locations(s: &SummaryTrajectory) -> BTreeSet<LocationSymbol> {
    s.locations().cloned().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct DatasetStats {
    pub n_traj: usize,
    pub n_records: usize,
    pub n_locations: usize,
    pub avg_len: f64,
    /// Population standard deviation of trajectory lengths.
    pub std_len: f64,
}

pub fn dataset_stats(dataset: &[SymbolicTrajectory]) -> DatasetStats {
    if dataset.is_empty() {
        return DatasetStats::default();
    }
    let n = dataset.len() as f64;
    let n_records: usize = dataset.iter().map(SymbolicTrajectory::len).sum();
    let avg_len = n_records as f64 / n;
    let var = dataset
        .iter()
        .map(|t| (t.len() as f64 - avg_len).powi(2))
        .sum::<f64>()
        / n;
    let locations: BTreeSet<&LocationSymbol> = dataset.iter().flat_map(|t| t.symbols()).collect();
    DatasetStats {
        n_traj: dataset.len(),
        n_records,
        n_locations: locations.len(),
        avg_len,
        std_len: var.sqrt(),
    }
}
