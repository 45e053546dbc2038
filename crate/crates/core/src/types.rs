//! Domain types shared by every analysis module.

use std::borrow::Borrow;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Seconds since the Unix epoch.
pub type Timestamp = i64;

/// Label of a location area. Cheap to clone; compares and orders by label.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct LocationSymbol(Arc<str>);

impl LocationSymbol {
    pub fn new(label: impl AsRef<str>) -> Result<Self> {
        let label = label.as_ref();
        if label.is_empty() {
            return Err(Error::EmptyLabel);
        }
        Ok(Self(Arc::from(label)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for LocationSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl fmt::Display for LocationSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for LocationSymbol {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for LocationSymbol {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        Self::new(value)
    }
}

impl TryFrom<&str> for LocationSymbol {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        Self::new(value)
    }
}

impl From<LocationSymbol> for String {
    fn from(value: LocationSymbol) -> Self {
        value.0.to_string()
    }
}

/// One timestamped location observation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajPoint {
    pub timestamp: Timestamp,
    pub location: LocationSymbol,
}

impl TrajPoint {
    pub fn new(timestamp: Timestamp, location: LocationSymbol) -> Self {
        Self {
            timestamp,
            location,
        }
    }
}

/// Time-ordered sequence of symbolic observations belonging to one user.
///
/// Timestamps are non-decreasing. Several points may share a timestamp
/// (bursty uploads); their relative order is the input order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicTrajectory {
    user_id: String,
    points: Vec<TrajPoint>,
}

impl SymbolicTrajectory {
    /// Builds a trajectory from points that are already time-ordered.
    pub fn new(user_id: impl Into<String>, points: Vec<TrajPoint>) -> Result<Self> {
        if let Some(pos) = points
            .windows(2)
            .position(|w| w[1].timestamp < w[0].timestamp)
        {
            return Err(Error::UnsortedTimestamps { index: pos + 1 });
        }
        Ok(Self {
            user_id: user_id.into(),
            points,
        })
    }

    /// Builds a trajectory from arbitrary-order points, sorting them stably by time.
    pub fn from_unsorted(user_id: impl Into<String>, mut points: Vec<TrajPoint>) -> Self {
        points.sort_by_key(|p| p.timestamp);
        Self {
            user_id: user_id.into(),
            points,
        }
    }

    /// Convenience constructor from `(label, timestamp)` pairs.
    pub fn from_pairs<S: AsRef<str>>(
        user_id: impl Into<String>,
        pairs: impl IntoIterator<Item = (S, Timestamp)>,
    ) -> Result<Self> {
        let points = pairs
            .into_iter()
            .map(|(l, t)| LocationSymbol::new(l).map(|l| TrajPoint::new(t, l)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(user_id, points)
    }

    pub fn user_id(&self) -> &str {
        &self.user_id
    }

    pub fn points(&self) -> &[TrajPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = &LocationSymbol> + '_ {
        self.points.iter().map(|p| &p.location)
    }

    pub fn first_timestamp(&self) -> Option<Timestamp> {
        self.points.first().map(|p| p.timestamp)
    }

    pub fn last_timestamp(&self) -> Option<Timestamp> {
        self.points.last().map(|p| p.timestamp)
    }

    /// The contiguous slice of points whose timestamps fall in `[start, end]`.
    pub fn window(&self, start: Timestamp, end: Timestamp) -> &[TrajPoint] {
        let lo = self.points.partition_point(|p| p.timestamp < start);
        let hi = self.points.partition_point(|p| p.timestamp <= end);
        &self.points[lo..hi.max(lo)]
    }
}

/// One unit of a summary trajectory: a dominant location and its period.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryUnit {
    pub start: Timestamp,
    pub end: Timestamp,
    pub location: LocationSymbol,
    /// Occurrences of the dominant symbol within the unit.
    pub occurrences: usize,
    /// Accumulated pair-weight of the dominant symbol within the unit, in seconds.
    pub weight: i64,
}

impl SummaryUnit {
    pub fn duration(&self) -> i64 {
        self.end - self.start
    }
}

/// Ordered, temporally disjoint units extracted from one trajectory.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct SummaryTrajectory {
    pub user_id: String,
    pub units: Vec<SummaryUnit>,
}

impl SummaryTrajectory {
    pub fn new(user_id: impl Into<String>, units: Vec<SummaryUnit>) -> Self {
        Self {
            user_id: user_id.into(),
            units,
        }
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    /// Unit locations in temporal order.
    pub fn locations(&self) -> impl Iterator<Item = &LocationSymbol> + '_ {
        self.units.iter().map(|u| &u.location)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_label_rejected() {
        assert!(matches!(LocationSymbol::new(""), Err(Error::EmptyLabel)));
    }

    #[test]
    fn unsorted_points_rejected() {
        let err = SymbolicTrajectory::from_pairs("u", [("a", 5), ("b", 3)]).unwrap_err();
        assert!(matches!(err, Error::UnsortedTimestamps { index: 1 }));
    }

    #[test]
    fn from_unsorted_is_stable() {
        let a = LocationSymbol::new("a").unwrap();
        let b = LocationSymbol::new("b").unwrap();
        let c = LocationSymbol::new("c").unwrap();
        let t = SymbolicTrajectory::from_unsorted(
            "u",
            vec![
                TrajPoint::new(4, a.clone()),
                TrajPoint::new(1, b.clone()),
                TrajPoint::new(1, c.clone()),
            ],
        );
        let labels: Vec<_> = t.symbols().map(|s| s.as_str()).collect();
        assert_eq!(labels, ["b", "c", "a"]);
    }

    #[test]
    fn window_is_inclusive() {
        let t =
            SymbolicTrajectory::from_pairs("u", [("a", 0), ("b", 2), ("c", 4), ("d", 6)]).unwrap();
        let w: Vec<_> = t.window(2, 4).iter().map(|p| p.location.as_str()).collect();
        assert_eq!(w, ["b", "c"]);
        assert!(t.window(7, 9).is_empty());
    }
}
