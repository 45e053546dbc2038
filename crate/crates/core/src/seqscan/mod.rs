//! Density-based segmentation of symbolic trajectories (SeqScan-d).
//!
//! A symbol becomes *dominant* once, since the last cluster opened, it has
//! occurred at least `N` times with an accumulated pair-weight of at least
//! `delta` seconds. The pair-weight of a symbol grows by `t_j - t_{j-1}`
//! whenever two consecutive points carry that symbol. A dominant symbol opens
//! a cluster which keeps absorbing its own occurrences (and any local noise in
//! between) until another symbol becomes dominant. At that moment the previous
//! cluster is closed at its last occurrence preceding the new cluster's first
//! occurrence, so units never overlap.
//!
//! Candidate counters are reset only when a cluster opens. The dominant
//! symbol's reappearance does not discard evidence other symbols are building,
//! which is what lets `b` overtake `a` in
//! `a a c a c b b a b b` with `N = 3, delta = 2`.
//!
//! [`summarize`] runs the scan over a whole trajectory; [`Summarizer`] is the
//! same state machine fed one point at a time.

mod classify;
mod metrics;

pub use classify::{classify_points, PointClass};
pub use metrics::{
    dataset_goodness, dataset_summarization_rate, summarization_rate, trajectory_goodness,
    unit_goodness,
};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::types::{
    LocationSymbol, SummaryTrajectory, SummaryUnit, SymbolicTrajectory, Timestamp, TrajPoint,
};

/// Density thresholds shared by SeqScan-d and the RLE+ baseline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeqScanParams {
    min_occurrences: usize,
    min_weight: f64,
}

impl SeqScanParams {
    pub const DEFAULT_MIN_OCCURRENCES: usize = 2;
    /// 16 minutes.
    pub const DEFAULT_MIN_WEIGHT: f64 = 960.0;

    /// `min_occurrences` is N (at least 2); `min_weight` is delta in seconds.
    pub fn new(min_occurrences: usize, min_weight: f64) -> Result<Self> {
        if min_occurrences < 2 {
            return Err(Error::InvalidParams(format!(
                "N must be at least 2, got {min_occurrences}"
            )));
        }
        if !min_weight.is_finite() || min_weight < 0.0 {
            return Err(Error::InvalidParams(format!(
                "delta must be a non-negative number of seconds, got {min_weight}"
            )));
        }
        Ok(Self {
            min_occurrences,
            min_weight,
        })
    }

    pub fn min_occurrences(&self) -> usize {
        self.min_occurrences
    }

    pub fn min_weight(&self) -> f64 {
        self.min_weight
    }

    fn satisfied_by(&self, count: usize, weight: i64) -> bool {
        count >= self.min_occurrences && weight as f64 >= self.min_weight
    }
}

impl Default for SeqScanParams {
    fn default() -> Self {
        Self {
            min_occurrences: Self::DEFAULT_MIN_OCCURRENCES,
            min_weight: Self::DEFAULT_MIN_WEIGHT,
        }
    }
}

/// Weight contributed by the point at `index`: the gap to its predecessor if
/// both carry the same symbol, otherwise zero.
pub fn occurrence_weight(t: &SymbolicTrajectory, index: usize) -> Result<i64> {
    let points = t.points();
    if index >= points.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: points.len(),
        });
    }
    Ok(pair_weight_at(points, index))
}

fn pair_weight_at(points: &[TrajPoint], index: usize) -> i64 {
    if index == 0 {
        return 0;
    }
    let (prev, cur) = (&points[index - 1], &points[index]);
    if prev.location == cur.location {
        (cur.timestamp - prev.timestamp).abs()
    } else {
        0
    }
}

/// Total weight of `location` over `points`.
pub fn weight_in(points: &[TrajPoint], location: &LocationSymbol) -> i64 {
    (1..points.len())
        .filter(|&j| &points[j].location == location)
        .map(|j| pair_weight_at(points, j))
        .sum()
}

/// Total weight of `location` over the whole trajectory.
pub fn symbol_weight(t: &SymbolicTrajectory, location: &LocationSymbol) -> i64 {
    weight_in(t.points(), location)
}

/// Per-symbol accumulator for symbols competing to become dominant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateEntry {
    pub symbol: LocationSymbol,
    pub count: usize,
    pub weight: i64,
    pub first_ts: Timestamp,
    pub last_ts: Timestamp,
    first_index: usize,
    last_index: usize,
}

#[derive(Debug, Clone, Copy)]
struct Mark {
    index: usize,
    timestamp: Timestamp,
    occurrences: usize,
    weight: i64,
}

#[derive(Debug, Clone)]
struct ActiveCluster {
    location: LocationSymbol,
    start: Timestamp,
    /// One mark per occurrence since the cluster opened; the first mark
    /// carries the seed counts inherited from the candidate entry.
    marks: Vec<Mark>,
}

impl ActiveCluster {
    fn unit_at(&self, mark: &Mark) -> SummaryUnit {
        SummaryUnit {
            start: self.start,
            end: mark.timestamp,
            location: self.location.clone(),
            occurrences: mark.occurrences,
            weight: mark.weight,
        }
    }

    /// Closes at the last occurrence preceding point `index`.
    fn close_before(&self, index: usize) -> SummaryUnit {
        let n = self.marks.partition_point(|m| m.index < index);
        // The seed mark sits at the reset point, which precedes every
        // candidate collected afterwards.
        debug_assert!(n > 0);
        self.unit_at(&self.marks[n.max(1) - 1])
    }

    fn close(&self) -> SummaryUnit {
        self.unit_at(self.marks.last().expect("cluster has a seed mark"))
    }
}

/// Incremental SeqScan-d. Feed points in time order with [`push`](Self::push)
/// and collect the trailing unit with [`finish`](Self::finish).
#[derive(Debug, Clone)]
pub struct Summarizer {
    params: SeqScanParams,
    candidates: HashMap<LocationSymbol, CandidateEntry>,
    active: Option<ActiveCluster>,
    prev: Option<(LocationSymbol, Timestamp)>,
    next_index: usize,
}

impl Summarizer {
    pub fn new(params: SeqScanParams) -> Self {
        Self {
            params,
            candidates: HashMap::new(),
            active: None,
            prev: None,
            next_index: 0,
        }
    }

    pub fn params(&self) -> SeqScanParams {
        self.params
    }

    /// Symbol of the currently open cluster, if any.
    pub fn dominant(&self) -> Option<&LocationSymbol> {
        self.active.as_ref().map(|c| &c.location)
    }

    pub fn candidate(&self, symbol: &LocationSymbol) -> Option<&CandidateEntry> {
        self.candidates.get(symbol)
    }

    /// Processes one point; returns the previous unit when this point makes a
    /// new symbol dominant.
    pub fn push(&mut self, point: TrajPoint) -> Result<Option<SummaryUnit>> {
        if let Some((_, previous)) = &self.prev {
            if point.timestamp < *previous {
                return Err(Error::OutOfOrderPoint {
                    previous: *previous,
                    got: point.timestamp,
                });
            }
        }
        Ok(self.step(point.location, point.timestamp))
    }

    fn step(&mut self, location: LocationSymbol, ts: Timestamp) -> Option<SummaryUnit> {
        let index = self.next_index;
        self.next_index += 1;
        let mut emitted = None;

        match &mut self.active {
            Some(cluster) if cluster.location == location => {
                let pair = match &self.prev {
                    Some((l, t)) if *l == location => ts - t,
                    _ => 0,
                };
                let last = *cluster.marks.last().expect("cluster has a seed mark");
                cluster.marks.push(Mark {
                    index,
                    timestamp: ts,
                    occurrences: last.occurrences + 1,
                    weight: last.weight + pair,
                });
            }
            _ => {
                let entry = self
                    .candidates
                    .entry(location.clone())
                    .and_modify(|e| {
                        e.count += 1;
                        // Only pairs whose both ends fall after the last reset.
                        if e.last_index + 1 == index {
                            e.weight += ts - e.last_ts;
                        }
                        e.last_ts = ts;
                        e.last_index = index;
                    })
                    .or_insert_with(|| CandidateEntry {
                        symbol: location.clone(),
                        count: 1,
                        weight: 0,
                        first_ts: ts,
                        last_ts: ts,
                        first_index: index,
                        last_index: index,
                    });
                if self.params.satisfied_by(entry.count, entry.weight) {
                    let seed = entry.clone();
                    self.candidates.clear();
                    if let Some(previous) = self.active.take() {
                        emitted = Some(previous.close_before(seed.first_index));
                    }
                    self.active = Some(ActiveCluster {
                        location: location.clone(),
                        start: seed.first_ts,
                        marks: vec![Mark {
                            index,
                            timestamp: ts,
                            occurrences: seed.count,
                            weight: seed.weight,
                        }],
                    });
                }
            }
        }

        self.prev = Some((location, ts));
        emitted
    }

    /// Closes the open cluster, if any, at its last occurrence.
    pub fn finish(self) -> Option<SummaryUnit> {
        self.active.as_ref().map(ActiveCluster::close)
    }
}

/// Summarizes a trajectory into its sequence of dominant-location units.
pub fn summarize(t: &SymbolicTrajectory, params: SeqScanParams) -> SummaryTrajectory {
    let mut scanner = Summarizer::new(params);
    let mut units: Vec<SummaryUnit> = t
        .points()
        .iter()
        .filter_map(|p| scanner.step(p.location.clone(), p.timestamp))
        .collect();
    units.extend(scanner.finish());
    SummaryTrajectory::new(t.user_id(), units)
}
