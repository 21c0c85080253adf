//! Contact-log ingestion: `timestamp,label_a,label_b` CSV into a [`Tvg`].

use std::collections::HashMap;
use std::io::BufRead;

use crate::error::{Error, Result};
use crate::tvg::{NodeId, Tvg};

/// One detected proximity contact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContactRecord {
    pub timestamp: i64,
    pub label_a: String,
    pub label_b: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestConfig {
    pub granularity_seconds: u64,
    /// Defaults to the smallest timestamp in the log.
    pub start_timestamp: Option<i64>,
    /// Defaults to the largest timestamp in the log.
    pub end_timestamp: Option<i64>,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig {
            granularity_seconds: 30,
            start_timestamp: None,
            end_timestamp: None,
        }
    }
}

/// Streaming reader over a contact log.
///
/// Accepts LF or CRLF line endings, blank lines, and an optional first line
/// header starting with `timestamp`. Labels are kept verbatim.
pub struct ContactReader<R> {
    lines: std::io::Lines<R>,
    line_no: usize,
    seen_data: bool,
}

pub fn parse_contacts<R: BufRead>(input: R) -> ContactReader<R> {
    ContactReader {
        lines: input.lines(),
        line_no: 0,
        seen_data: false,
    }
}

impl<R: BufRead> Iterator for ContactReader<R> {
    type Item = Result<ContactRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(l) => l,
                Err(e) => {
                    return Some(Err(Error::Parse {
                        line: self.line_no + 1,
                        msg: e.to_string(),
                    }))
                }
            };
            self.line_no += 1;
            let line = line.strip_suffix('\r').unwrap_or(&line);
            if line.trim().is_empty() {
                continue;
            }
            let first = !self.seen_data;
            self.seen_data = true;
            let fields: Vec<&str> = line.split(',').collect();
            if first && fields[0].trim().eq_ignore_ascii_case("timestamp") {
                continue;
            }
            return Some(parse_record(self.line_no, &fields));
        }
    }
}

fn parse_record(line: usize, fields: &[&str]) -> Result<ContactRecord> {
    let [ts, a, b] = fields else {
        return Err(Error::Parse {
            line,
            msg: format!("expected 3 fields `timestamp,label_a,label_b`, got {}", fields.len()),
        });
    };
    let timestamp = ts.trim().parse::<i64>().map_err(|_| Error::Parse {
        line,
        msg: format!("timestamp {ts:?} is not an integer"),
    })?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::Parse {
            line,
            msg: "empty node label".into(),
        });
    }
    if a == b {
        return Err(Error::Parse {
            line,
            msg: format!("self-contact of {a:?}"),
        });
    }
    Ok(ContactRecord {
        timestamp,
        label_a: a.to_string(),
        label_b: b.to_string(),
    })
}

/// Result of binning a contact log.
#[derive(Debug, Clone)]
pub struct Discretized {
    pub tvg: Tvg,
    /// Records whose timestamp fell outside `[start, end]`.
    pub rejected: usize,
    pub start_timestamp: i64,
    pub end_timestamp: i64,
}

/// Bins records into snapshots of `granularity_seconds`.
///
/// Record at `s` lands in snapshot `floor((s - start) / granularity)`.
/// Labels become dense node ids in first-appearance order over the whole log.
pub fn discretize<I>(records: I, cfg: &IngestConfig) -> Result<Discretized>
where
    I: IntoIterator<Item = ContactRecord>,
{
    if cfg.granularity_seconds == 0 {
        return Err(Error::InvalidConfig("granularity must be at least 1 second".into()));
    }
    let records: Vec<ContactRecord> = records.into_iter().collect();
    let start = cfg
        .start_timestamp
        .or_else(|| records.iter().map(|r| r.timestamp).min())
        .ok_or_else(|| Error::InvalidConfig("empty log and no explicit start".into()))?;
    let end = cfg
        .end_timestamp
        .or_else(|| records.iter().map(|r| r.timestamp).max())
        .ok_or_else(|| Error::InvalidConfig("empty log and no explicit end".into()))?;
    if end < start {
        return Err(Error::InvalidConfig(format!("end {end} precedes start {start}")));
    }
    let g = cfg.granularity_seconds as i128;
    let num_instants = usize::try_from((end as i128 - start as i128) / g + 1)
        .map_err(|_| Error::InvalidConfig("time span too large".into()))?;

    let mut ids: HashMap<&str, NodeId> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut per_instant: Vec<Vec<(NodeId, NodeId)>> = vec![Vec::new(); num_instants];
    let mut rejected = 0;
    for r in &records {
        let a = *ids.entry(r.label_a.as_str()).or_insert_with(|| {
            labels.push(r.label_a.clone());
            NodeId(labels.len() as u32 - 1)
        });
        let b = *ids.entry(r.label_b.as_str()).or_insert_with(|| {
            labels.push(r.label_b.clone());
            NodeId(labels.len() as u32 - 1)
        });
        if r.timestamp < start || r.timestamp > end {
            rejected += 1;
            continue;
        }
        let bin = ((r.timestamp as i128 - start as i128) / g) as usize;
        per_instant[bin].push(if a < b { (a, b) } else { (b, a) });
    }
    if labels.is_empty() {
        return Err(Error::NoNodes);
    }
    let tvg = Tvg::from_snapshot_pairs(labels.len(), per_instant).with_labels(labels)?;
    Ok(Discretized {
        tvg,
        rejected,
        start_timestamp: start,
        end_timestamp: end,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(t: i64, a: &str, b: &str) -> ContactRecord {
        ContactRecord {
            timestamp: t,
            label_a: a.into(),
            label_b: b.into(),
        }
    }

    fn parse_all(s: &str) -> Result<Vec<ContactRecord>> {
        parse_contacts(s.as_bytes()).collect()
    }

    #[test]
    fn parses_records() {
        assert_eq!(parse_all("0,alice,bob").unwrap(), vec![rec(0, "alice", "bob")]);
        assert_eq!(parse_all("30,bob,alice\n").unwrap(), vec![rec(30, "bob", "alice")]);
        assert_eq!(
            parse_all("timestamp,label_a,label_b\r\n0,a,b\r\n\r\n5,b,c\r\n").unwrap(),
            vec![rec(0, "a", "b"), rec(5, "b", "c")]
        );
    }

    #[test]
    fn malformed_lines_report_line_number() {
        assert!(matches!(parse_all("x,a,b"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_all("0,a,b\n1,a"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_all("0,a,b\n\n1,c,c"), Err(Error::Parse { line: 3, .. })));
        // a header is only recognised on the first data line
        assert!(matches!(parse_all("0,a,b\ntimestamp,a,b"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn one_record_per_bin() {
        let d = discretize([rec(0, "a", "b"), rec(30, "b", "c")], &IngestConfig::default()).unwrap();
        assert_eq!(d.tvg.num_instants(), 2);
        assert_eq!(d.tvg.snapshots()[0].len(), 1);
        assert_eq!(d.tvg.snapshots()[1].len(), 1);
        assert_eq!(d.tvg.labels().unwrap(), ["a", "b", "c"]);
    }

    #[test]
    fn dedup_within_bin() {
        let d = discretize([rec(0, "a", "b"), rec(10, "b", "a")], &IngestConfig::default()).unwrap();
        assert_eq!(d.tvg.num_instants(), 1);
        assert_eq!(d.tvg.num_contacts(), 1);
    }

    #[test]
    fn boundary_goes_to_later_bin() {
        let d = discretize([rec(0, "a", "b"), rec(29, "a", "c"), rec(30, "b", "c")], &IngestConfig::default()).unwrap();
        assert_eq!(d.tvg.snapshots()[0].len(), 2);
        assert_eq!(d.tvg.snapshots()[1].len(), 1);
    }

    #[test]
    fn two_weeks_at_thirty_seconds() {
        let cfg = IngestConfig {
            granularity_seconds: 30,
            start_timestamp: Some(0),
            end_timestamp: Some(14 * 24 * 3600 - 1),
        };
        let d = discretize([rec(0, "a", "b"), rec(14 * 24 * 3600 - 1, "a", "b")], &cfg).unwrap();
        assert_eq!(d.tvg.num_instants(), 40320);
    }

    #[test]
    fn out_of_window_records_are_counted() {
        let cfg = IngestConfig {
            granularity_seconds: 10,
            start_timestamp: Some(100),
            end_timestamp: Some(199),
        };
        let d = discretize([rec(50, "a", "b"), rec(100, "a", "b"), rec(250, "b", "c")], &cfg).unwrap();
        assert_eq!(d.rejected, 2);
        assert_eq!(d.tvg.num_instants(), 10);
        assert_eq!(d.tvg.num_contacts(), 1);
    }

    #[test]
    fn config_errors() {
        let zero = IngestConfig {
            granularity_seconds: 0,
            ..Default::default()
        };
        assert!(discretize([rec(0, "a", "b")], &zero).is_err());
        assert!(discretize([], &IngestConfig::default()).is_err());
        let backwards = IngestConfig {
            start_timestamp: Some(10),
            end_timestamp: Some(0),
            ..Default::default()
        };
        assert!(discretize([rec(5, "a", "b")], &backwards).is_err());
    }
}
