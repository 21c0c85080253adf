//! Time centrality: Cover Time (CT) and Time-Constrained Coverage (TCC) per
//! instant, plus ranking, empirical distributions and top-k comparisons.
//!
//! `CT(t_i, τ)` is the mean over all start nodes of the cover steps, and is
//! infinite as soon as one start node never reaches the threshold.
//! `TCC(t_i, Φ)` is `Σ_u d_c(t_i, u, Φ) / |V|²`.

use std::cmp::Ordering;
use std::fmt;
use std::io::{BufRead, Write};
use std::ops::Range;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diffusion::{constrained_counts_all, cover_steps_all, Cover, CoverageThreshold};
use crate::error::{Error, Result};
use crate::tvg::{TimeIndex, Tvg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricKind {
    CoverTime,
    Tcc,
}

impl MetricKind {
    pub fn name(self) -> &'static str {
        match self {
            MetricKind::CoverTime => "ct",
            MetricKind::Tcc => "tcc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricSpec {
    CoverTime(CoverageThreshold),
    /// Step budget `Φ ≥ 1`.
    Tcc(usize),
}

impl MetricSpec {
    pub fn kind(&self) -> MetricKind {
        match self {
            MetricSpec::CoverTime(_) => MetricKind::CoverTime,
            MetricSpec::Tcc(_) => MetricKind::Tcc,
        }
    }
}

/// A metric value; `Inf` orders above every finite value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetricValue {
    Finite(f64),
    Inf,
}

impl MetricValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            MetricValue::Finite(v) => Some(v),
            MetricValue::Inf => None,
        }
    }

    pub fn is_inf(self) -> bool {
        matches!(self, MetricValue::Inf)
    }

    pub fn total_cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (MetricValue::Finite(a), MetricValue::Finite(b)) => a.total_cmp(b),
            (MetricValue::Finite(_), MetricValue::Inf) => Ordering::Less,
            (MetricValue::Inf, MetricValue::Finite(_)) => Ordering::Greater,
            (MetricValue::Inf, MetricValue::Inf) => Ordering::Equal,
        }
    }

    fn parse(s: &str) -> Option<Self> {
        if s == "inf" {
            return Some(MetricValue::Inf);
        }
        s.parse::<f64>().ok().filter(|v| v.is_finite()).map(MetricValue::Finite)
    }
}

impl fmt::Display for MetricValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricValue::Finite(v) => write!(f, "{v}"),
            MetricValue::Inf => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricRow {
    pub time: TimeIndex,
    pub value: MetricValue,
    /// Start nodes that never reached the threshold (CT only).
    pub unreached_starts: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricTable {
    pub kind: MetricKind,
    /// Rows in ascending time order.
    pub rows: Vec<MetricRow>,
}

/// Cover time at one instant, with the number of start nodes that failed.
pub fn cover_time_detail(tvg: &Tvg, t_i: TimeIndex, thr: CoverageThreshold) -> Result<(MetricValue, usize)> {
    let covers = cover_steps_all(tvg, t_i, thr)?;
    let mut sum = 0u64;
    let mut unreached = 0;
    for c in covers {
        match c {
            Cover::Reached(s) => sum += s as u64,
            Cover::Unreached => unreached += 1,
        }
    }
    let value = if unreached > 0 {
        MetricValue::Inf
    } else {
        MetricValue::Finite(sum as f64 / tvg.num_nodes() as f64)
    };
    Ok((value, unreached))
}

pub fn cover_time(tvg: &Tvg, t_i: TimeIndex, thr: CoverageThreshold) -> Result<MetricValue> {
    cover_time_detail(tvg, t_i, thr).map(|(v, _)| v)
}

pub fn tcc(tvg: &Tvg, t_i: TimeIndex, phi: usize) -> Result<f64> {
    let total: u64 = constrained_counts_all(tvg, t_i, phi)?.iter().map(|&c| c as u64).sum();
    let n = tvg.num_nodes() as f64;
    Ok(total as f64 / (n * n))
}

/// The first `⌈0.825·N⌉` instants, leaving the tail of the graph for spreading.
pub fn default_eval_range(num_instants: usize) -> Range<usize> {
    0..(825 * num_instants).div_ceil(1000)
}

/// Evaluates the metric at every instant of `range`, in parallel on the current rayon pool.
pub fn metric_sweep(tvg: &Tvg, spec: MetricSpec, range: Range<usize>) -> Result<MetricTable> {
    if range.is_empty() || range.end > tvg.num_instants() {
        return Err(Error::InvalidRange {
            start: range.start,
            end: range.end,
            num_instants: tvg.num_instants(),
        });
    }
    if let MetricSpec::Tcc(0) = spec {
        return Err(Error::ZeroBudget);
    }
    let rows = range
        .into_par_iter()
        .map(|t| {
            let time = TimeIndex(t as u32);
            Ok(match spec {
                MetricSpec::CoverTime(thr) => {
                    let (value, unreached) = cover_time_detail(tvg, time, thr)?;
                    MetricRow {
                        time,
                        value,
                        unreached_starts: Some(unreached),
                    }
                }
                MetricSpec::Tcc(phi) => MetricRow {
                    time,
                    value: MetricValue::Finite(tcc(tvg, time, phi)?),
                    unreached_starts: None,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MetricTable { kind: spec.kind(), rows })
}

impl MetricTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Most central first: CT ascending (infinite last), TCC descending; ties by time.
    fn centrality_order(&self, x: &MetricRow, y: &MetricRow) -> Ordering {
        let by_value = match self.kind {
            MetricKind::CoverTime => x.value.total_cmp(&y.value),
            MetricKind::Tcc => y.value.total_cmp(&x.value),
        };
        by_value.then(x.time.cmp(&y.time))
    }

    /// Median of the finite values, or `None` if there are none.
    pub fn finite_median(&self) -> Option<f64> {
        let mut v: Vec<f64> = self.rows.iter().filter_map(|r| r.value.finite()).collect();
        v.sort_by(f64::total_cmp);
        median_sorted(&v)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "time_index,value,unreached_starts")?;
        for r in &self.rows {
            match r.unreached_starts {
                Some(u) => writeln!(out, "{},{},{}", r.time, r.value, u)?,
                None => writeln!(out, "{},{},", r.time, r.value)?,
            }
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R, kind: MetricKind) -> Result<Self> {
        let mut rows = Vec::new();
        for (i, line) in input.lines().enumerate() {
            let line_no = i + 1;
            let line = line.map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() {
                continue;
            }
            if line_no == 1 && line.starts_with("time_index") {
                continue;
            }
            let bad = |msg: &str| Error::Parse {
                line: line_no,
                msg: msg.to_string(),
            };
            let fields: Vec<&str> = line.split(',').collect();
            let [t, v, u] = fields.as_slice() else {
                return Err(bad("expected `time_index,value,unreached_starts`"));
            };
            let time = t.trim().parse::<u32>().map_err(|_| bad("invalid time index"))?;
            let value = MetricValue::parse(v.trim()).ok_or_else(|| bad("invalid value"))?;
            let unreached_starts = match u.trim() {
                "" => None,
                s => Some(s.parse().map_err(|_| bad("invalid unreached count"))?),
            };
            rows.push(MetricRow {
                time: TimeIndex(time),
                value,
                unreached_starts,
            });
        }
        rows.sort_by_key(|r| r.time);
        Ok(MetricTable { kind, rows })
    }
}

fn median_sorted(v: &[f64]) -> Option<f64> {
    match v.len() {
        0 => None,
        n if n % 2 == 1 => Some(v[n / 2]),
        n => Some((v[n / 2 - 1] + v[n / 2]) / 2.0),
    }
}

/// The `k` most central instants of the table.
pub fn rank_instants(table: &MetricTable, k: usize) -> Result<Vec<MetricRow>> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut rows = table.rows.clone();
    rows.sort_by(|x, y| table.centrality_order(x, y));
    rows.truncate(k);
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    /// `(v, fraction of values <= v)`.
    Cdf,
    /// `(v, fraction of values >= v)`.
    Ccdf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    pub kind: DistributionKind,
    /// One point per distinct finite value, ascending in value.
    pub points: Vec<(f64, f64)>,
    /// Infinite entries left out of the distribution.
    pub excluded: usize,
}

impl Distribution {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "value,cum_fraction")?;
        for (v, f) in &self.points {
            writeln!(out, "{v},{f}")?;
        }
        Ok(())
    }
}

pub fn empirical_distribution(table: &MetricTable, kind: DistributionKind) -> Result<Distribution> {
    if table.is_empty() {
        return Err(Error::EmptyTable);
    }
    let mut values: Vec<f64> = table.rows.iter().filter_map(|r| r.value.finite()).collect();
    let excluded = table.len() - values.len();
    if values.is_empty() {
        return Err(Error::AllInfinite);
    }
    values.sort_by(f64::total_cmp);
    let total = values.len();
    let mut points = Vec::new();
    let mut i = 0;
    while i < total {
        let v = values[i];
        let j = values[i..].partition_point(|&x| x == v) + i;
        let count = match kind {
            DistributionKind::Cdf => j,
            DistributionKind::Ccdf => total - i,
        };
        points.push((v, count as f64 / total as f64));
        i = j;
    }
    Ok(Distribution { kind, points, excluded })
}

/// Five-number-ish summary of a group of metric values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub min: MetricValue,
    pub median: MetricValue,
    pub max: MetricValue,
}

impl Summary {
    /// Infinite values sort last; an even-sized median touching `inf` is `inf`.
    pub fn of(rows: &[MetricRow]) -> Option<Self> {
        let mut v: Vec<MetricValue> = rows.iter().map(|r| r.value).collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(MetricValue::total_cmp);
        let n = v.len();
        let median = if n % 2 == 1 {
            v[n / 2]
        } else {
            match (v[n / 2 - 1], v[n / 2]) {
                (MetricValue::Finite(a), MetricValue::Finite(b)) => MetricValue::Finite((a + b) / 2.0),
                _ => MetricValue::Inf,
            }
        };
        Some(Summary {
            min: v[0],
            median,
            max: v[n - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub kind: MetricKind,
    pub k: usize,
    pub seed: u64,
    /// Most central first.
    pub top: Vec<MetricRow>,
    /// Random instants outside the top-k set, in time order.
    pub random: Vec<MetricRow>,
    pub top_summary: Summary,
    pub random_summary: Summary,
}

/// Top-k instants against k instants drawn uniformly (seeded, without
/// replacement) from the rest of the evaluated range.
pub fn compare_topk_random(table: &MetricTable, k: usize, seed: u64) -> Result<Comparison> {
    if k == 0 {
        return Err(Error::ZeroK);
    }
    if table.len() < 2 * k {
        return Err(Error::RangeTooSmall {
            available: table.len(),
            needed: 2 * k,
        });
    }
    let top = rank_instants(table, k)?;
    let rest: Vec<MetricRow> = table
        .rows
        .iter()
        .filter(|r| !top.iter().any(|t| t.time == r.time))
        .copied()
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picks = rand::seq::index::sample(&mut rng, rest.len(), k).into_vec();
    picks.sort_unstable();
    let random: Vec<MetricRow> = picks.into_iter().map(|i| rest[i]).collect();
    Ok(Comparison {
        kind: table.kind,
        k,
        seed,
        top_summary: Summary::of(&top).expect("k >= 1"),
        random_summary: Summary::of(&random).expect("k >= 1"),
        top,
        random,
    })
}

impl Comparison {
    /// `group,rank,time_index,value` rows: the top group in rank order, then the random group.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "group,rank,time_index,value")?;
        for (i, r) in self.top.iter().enumerate() {
            writeln!(out, "top,{},{},{}", i + 1, r.time, r.value)?;
        }
        for (i, r) in self.random.iter().enumerate() {
            writeln!(out, "random,{},{},{}", i + 1, r.time, r.value)?;
        }
        Ok(())
    }

    pub fn summary_text(&self) -> String {
        let line = |name: &str, s: &Summary| {
            format!("{name:<7} min={} median={} max={}\n", s.min, s.median, s.max)
        };
        format!(
            "metric={} k={} seed={}\n{}{}",
            self.kind.name(),
            self.k,
            self.seed,
            line("top", &self.top_summary),
            line("random", &self.random_summary)
        )
    }
}
