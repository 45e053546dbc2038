//! CSV ingestion of `user_id,timestamp,location[,event]` records.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use chrono::{DateTime, NaiveDateTime};
use indexmap::IndexMap;
use serde::Serialize;

use super::PipelineError;
use crate::types::{LocationSymbol, SymbolicTrajectory, Timestamp, TrajPoint};

/// Malformed rows kept verbatim in the report; the rest are only counted.
const MAX_REPORTED_ERRORS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MalformedRow {
    /// 1-based line number in the source file (the header is line 1).
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct IngestReport {
    pub rows: usize,
    pub accepted: usize,
    pub malformed: usize,
    pub users: usize,
    pub locations: usize,
    pub errors: Vec<MalformedRow>,
}

#[derive(Debug, Clone)]
pub struct Ingested {
    pub trajectories: Vec<SymbolicTrajectory>,
    pub report: IngestReport,
}

/// Epoch seconds, RFC 3339, or a naive `YYYY-MM-DD[T ]HH:MM:SS` taken as UTC.
pub fn parse_timestamp(raw: &str) -> Option<Timestamp> {
    let raw = raw.trim();
    if let Ok(secs) = raw.parse::<i64>() {
        return (secs >= 0).then_some(secs);
    }
    if let Ok(dt) = DateTime::parse_from_rfc3339(raw) {
        return Some(dt.timestamp()).filter(|s| *s >= 0);
    }
    ["%Y-%m-%dT%H:%M:%S", "%Y-%m-%d %H:%M:%S"]
        .iter()
        .find_map(|f| NaiveDateTime::parse_from_str(raw, f).ok())
        .map(|dt| dt.and_utc().timestamp())
        .filter(|s| *s >= 0)
}

#[derive(Default)]
struct Collector {
    users: IndexMap<String, Vec<TrajPoint>>,
    vocabulary: IndexMap<String, LocationSymbol>,
    report: IngestReport,
}

impl Collector {
    fn reject(&mut self, line: u64, reason: String) {
        self.report.malformed += 1;
        if self.report.errors.len() < MAX_REPORTED_ERRORS {
            self.report.errors.push(MalformedRow { line, reason });
        }
    }

    fn read<R: Read>(&mut self, reader: R) -> Result<(), PipelineError> {
        let mut csv = csv::ReaderBuilder::new()
            .flexible(true)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let headers = csv.headers()?.clone();
        let column = |name: &str| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or_else(|| PipelineError::Schema(format!("missing `{name}` column")))
        };
        let (user_col, ts_col, loc_col) = (
            column("user_id")?,
            column("timestamp")?,
            column("location")?,
        );

        for record in csv.records() {
            self.report.rows += 1;
            let record = match record {
                Ok(r) => r,
                Err(e) => {
                    let line = e.position().map_or(0, |p| p.line());
                    self.reject(line, e.to_string());
                    continue;
                }
            };
            let line = record.position().map_or(0, |p| p.line());
            let field = |i: usize| record.get(i).unwrap_or("");
            let (user, ts, loc) = (field(user_col), field(ts_col), field(loc_col));
            if user.is_empty() {
                self.reject(line, "empty user_id".into());
                continue;
            }
            if loc.is_empty() {
                self.reject(line, "empty location".into());
                continue;
            }
            let Some(timestamp) = parse_timestamp(ts) else {
                self.reject(line, format!("unparseable timestamp `{ts}`"));
                continue;
            };
            // Unknown labels are registered on first sight.
            let location = match self.vocabulary.get(loc) {
                Some(l) => l.clone(),
                None => {
                    let l = LocationSymbol::new(loc).expect("checked non-empty");
                    self.vocabulary.insert(loc.to_string(), l.clone());
                    l
                }
            };
            self.report.accepted += 1;
            self.users
                .entry(user.to_string())
                .or_default()
                .push(TrajPoint::new(timestamp, location));
        }
        Ok(())
    }

    fn finish(mut self, strict: bool) -> Result<Ingested, PipelineError> {
        if strict && self.report.malformed > 0 {
            return Err(PipelineError::Malformed {
                count: self.report.malformed,
                first: self.report.errors.first().cloned(),
            });
        }
        self.report.users = self.users.len();
        self.report.locations = self.vocabulary.len();
        let trajectories = self
            .users
            .into_iter()
            .map(|(user, points)| SymbolicTrajectory::from_unsorted(user, points))
            .collect();
        Ok(Ingested {
            trajectories,
            report: self.report,
        })
    }
}

/// Reads trajectories from one CSV source. Points are grouped by user in
/// order of first appearance and stably sorted by time.
pub fn ingest_reader<R: Read>(reader: R, strict: bool) -> Result<Ingested, PipelineError> {
    let mut c = Collector::default();
    c.read(reader)?;
    c.finish(strict)
}

/// Reads and merges several CSV files.
pub fn ingest_paths<P: AsRef<Path>>(paths: &[P], strict: bool) -> Result<Ingested, PipelineError> {
    let mut c = Collector::default();
    for path in paths {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| PipelineError::io(path, e))?;
        c.read(file)?;
    }
    c.finish(strict)
}

pub fn ingest(path: impl AsRef<Path>, strict: bool) -> Result<Ingested, PipelineError> {
    ingest_paths(&[path], strict)
}

/// Writes trajectories in the input schema.
pub fn write_trajectories<W: Write>(
    writer: W,
    trajectories: &[SymbolicTrajectory],
) -> Result<(), PipelineError> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["user_id", "timestamp", "location"])?;
    for t in trajectories {
        for p in t.points() {
            w.write_record([t.user_id(), &p.timestamp.to_string(), p.location.as_str()])?;
        }
    }
    w.flush().map_err(|e| PipelineError::io("<writer>", e))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(s: &str) -> Ingested {
        ingest_reader(s.as_bytes(), false).unwrap()
    }

    #[test]
    fn groups_and_sorts() {
        let got = read("user_id,timestamp,location\nu1,10,A\nu2,5,B\nu1,3,C\nu1,10,D\n");
        assert_eq!(got.trajectories.len(), 2);
        let u1 = &got.trajectories[0];
        assert_eq!(u1.user_id(), "u1");
        let labels: Vec<_> = u1.symbols().map(|s| s.as_str()).collect();
        assert_eq!(labels, ["C", "A", "D"]);
        assert_eq!(got.report.locations, 4);
    }

    #[test]
    fn two_rows_one_user() {
        let got = read("user_id,timestamp,location,event\nu,1,A,call\nu,2,B,sms\n");
        assert_eq!(got.trajectories.len(), 1);
        assert_eq!(got.trajectories[0].len(), 2);
    }

    #[test]
    fn malformed_rows_counted() {
        let src = "user_id,timestamp,location\nu,1,\nu,x,A\n,1,A\nu,2,B\nu\n";
        let got = read(src);
        assert_eq!(got.report.rows, 5);
        assert_eq!(got.report.malformed, 4);
        assert_eq!(got.report.accepted, 1);
        assert_eq!(got.report.errors[0].line, 2);
        assert!(got.report.errors[0].reason.contains("location"));

        assert!(matches!(
            ingest_reader(src.as_bytes(), true),
            Err(PipelineError::Malformed { count: 4, .. })
        ));
    }

    #[test]
    fn missing_column_is_schema_error() {
        assert!(matches!(
            ingest_reader("user,timestamp,location\n".as_bytes(), false),
            Err(PipelineError::Schema(_))
        ));
    }

    #[test]
    fn timestamp_formats() {
        assert_eq!(parse_timestamp("960"), Some(960));
        assert_eq!(parse_timestamp("-1"), None);
        assert_eq!(parse_timestamp("1970-01-01T00:16:00Z"), Some(960));
        assert_eq!(parse_timestamp("1970-01-01T01:16:00+01:00"), Some(960));
        assert_eq!(parse_timestamp("1970-01-01 00:16:00"), Some(960));
        assert_eq!(parse_timestamp("1970-01-01T00:16:00"), Some(960));
        assert_eq!(parse_timestamp("12.5"), None);
        assert_eq!(parse_timestamp("yesterday"), None);
    }

    #[test]
    fn unreadable_file() {
        assert!(matches!(
            ingest("/nonexistent/trajectories.csv", false),
            Err(PipelineError::Io { .. })
        ));
    }
}
