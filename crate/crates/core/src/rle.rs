//! Run-length encoding of symbolic trajectories and the RLE+ baseline filter.

use serde::Serialize;

use crate::seqscan::SeqScanParams;
use crate::types::{LocationSymbol, SummaryTrajectory, SummaryUnit, SymbolicTrajectory, Timestamp};

/// A maximal run of one symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RleSegment {
    pub start: Timestamp,
    pub end: Timestamp,
    pub location: LocationSymbol,
    pub count: usize,
}

impl RleSegment {
    pub fn duration(&self) -> i64 {
        self.end - self.start
    }
}

pub fn rle_encode(t: &SymbolicTrajectory) -> Vec<RleSegment> {
    let mut segments: Vec<RleSegment> = Vec::new();
    for p in t.points() {
        match segments.last_mut() {
            Some(seg) if seg.location == p.location => {
                seg.end = p.timestamp;
                seg.count += 1;
            }
            _ => segments.push(RleSegment {
                start: p.timestamp,
                end: p.timestamp,
                location: p.location.clone(),
                count: 1,
            }),
        }
    }
    segments
}

/// Runs with at least N occurrences spanning at least delta seconds.
pub fn rle_plus(t: &SymbolicTrajectory, params: SeqScanParams) -> Vec<RleSegment> {
    rle_encode(t)
        .into_iter()
        .filter(|s| {
            s.count >= params.min_occurrences() && s.duration() as f64 >= params.min_weight()
        })
        .collect()
}

/// Views RLE+ segments as summary units so they share the summary schema.
/// A run is noise-free, so its weight is its whole duration.
pub fn segments_as_summary(user_id: &str, segments: &[RleSegment]) -> SummaryTrajectory {
    SummaryTrajectory::new(
        user_id,
        segments
            .iter()
            .map(|s| SummaryUnit {
                start: s.start,
                end: s.end,
                location: s.location.clone(),
                occurrences: s.count,
                weight: s.duration(),
            })
            .collect(),
    )
}
