use serde::Serialize;

use crate::error::{Error, Result};
use crate::types::{SummaryTrajectory, SymbolicTrajectory};

/// Role of an original point with respect to a summary. Unit indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PointClass {
    /// Occurrence of the unit's dominant symbol inside its period.
    ClusterPoint(usize),
    /// Some other symbol inside a unit's period.
    LocalNoise(usize),
    /// Outside every unit period.
    Transition,
}

/// Labels every point of `t` against the units of `summary`.
pub fn classify_points(
    t: &SymbolicTrajectory,
    summary: &SummaryTrajectory,
) -> Result<Vec<PointClass>> {
    if let Some(u) = summary.units.first() {
        let (lo, hi) = match (t.first_timestamp(), t.last_timestamp()) {
            (Some(lo), Some(hi)) => (lo, hi),
            _ => {
                return Err(Error::UnitOutsideTrajectory {
                    start: u.start,
                    end: u.end,
                })
            }
        };
        if let Some(u) = summary
            .units
            .iter()
            .find(|u| u.start < lo || u.end > hi || u.start > u.end)
        {
            return Err(Error::UnitOutsideTrajectory {
                start: u.start,
                end: u.end,
            });
        }
    }

    let units = &summary.units;
    let mut cursor = 0;
    let classes = t
        .points()
        .iter()
        .map(|p| {
            while cursor < units.len() && units[cursor].end < p.timestamp {
                cursor += 1;
            }
            // With bursty timestamps a point may sit on the boundary shared by
            // two units; prefer the unit whose symbol it carries.
            let containing = (cursor..units.len())
                .take_while(|&j| units[j].start <= p.timestamp)
                .filter(|&j| units[j].end >= p.timestamp);
            let mut chosen = None;
            for j in containing {
                if units[j].location == p.location {
                    return PointClass::ClusterPoint(j);
                }
                chosen.get_or_insert(j);
            }
            chosen.map_or(PointClass::Transition, PointClass::LocalNoise)
        })
        .collect();
    Ok(classes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seqscan::{summarize, SeqScanParams};
    use crate::types::SummaryUnit;
    use crate::LocationSymbol;

    fn example() -> SymbolicTrajectory {
        let labels = ["a", "a", "c", "a", "c", "b", "b", "a", "b", "b"];
        SymbolicTrajectory::from_pairs(
            "ex",
            labels
                .iter()
                .enumerate()
                .map(|(i, l)| (*l, 2 * (i as i64 + 1))),
        )
        .unwrap()
    }

    #[test]
    fn example_classes() {
        use PointClass::*;
        let t = example();
        let s = summarize(&t, SeqScanParams::new(3, 2.0).unwrap());
        let c = classify_points(&t, &s).unwrap();
        assert_eq!(
            c,
            [
                ClusterPoint(0),
                ClusterPoint(0),
                LocalNoise(0),
                ClusterPoint(0),
                Transition,
                ClusterPoint(1),
                ClusterPoint(1),
                LocalNoise(1),
                ClusterPoint(1),
                ClusterPoint(1),
            ]
        );
    }

    #[test]
    fn empty_summary_is_all_transition() {
        let t = example();
        let c = classify_points(&t, &SummaryTrajectory::default()).unwrap();
        assert!(c.iter().all(|c| *c == PointClass::Transition));
    }

    #[test]
    fn pure_run_is_all_cluster() {
        let t = SymbolicTrajectory::from_pairs("r", [("a", 0), ("a", 2), ("a", 4)]).unwrap();
        let s = summarize(&t, SeqScanParams::new(2, 1.0).unwrap());
        let c = classify_points(&t, &s).unwrap();
        assert!(c.iter().all(|c| *c == PointClass::ClusterPoint(0)));
    }

    #[test]
    fn unit_outside_span_rejected() {
        let t = example();
        let s = SummaryTrajectory::new(
            "ex",
            vec![SummaryUnit {
                start: 0,
                end: 4,
                location: LocationSymbol::new("a").unwrap(),
                occurrences: 2,
                weight: 2,
            }],
        );
        assert!(matches!(
            classify_points(&t, &s),
            Err(Error::UnitOutsideTrajectory { start: 0, end: 4 })
        ));
    }
}
