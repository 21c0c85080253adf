//! `tvgc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Every run prints a
//! reproducibility header to stderr; data goes to `--out` or stdout.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::centrality::{
    compare_topk_random, default_eval_range, empirical_distribution, metric_sweep, rank_instants, DistributionKind,
    MetricKind, MetricSpec, MetricTable,
};
use crate::diffusion::CoverageThreshold;
use crate::error::Error;
use crate::ingest::{discretize, parse_contacts, IngestConfig};
use crate::oracle::check_equivalence;
use crate::synth::{generate_er_tvg, ErTvgSpec};
use crate::tvg::Tvg;

#[derive(Debug, Parser)]
#[command(name = "tvgc", version, about = "Time centrality over time-varying graphs")]
pub struct Cli {
    /// Worker threads for sweeps (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a randomized TVG of independent Erdős–Rényi snapshots.
    Generate(GenerateArgs),
    /// Discretize a `timestamp,label_a,label_b` contact log into a TVG.
    Ingest(IngestArgs),
    /// Cover time of every instant in the range.
    Ct(CtArgs),
    /// Time-constrained coverage of every instant in the range.
    Tcc(TccArgs),
    /// Empirical CDF/CCDF of a metric table (finite values only).
    Dist(DistArgs),
    /// Top-k most central instants of a metric table.
    Rank(RankArgs),
    /// Top-k instants against k random instants.
    Compare(CompareArgs),
    /// Edge churn rate between consecutive snapshots.
    Churn(ChurnArgs),
    /// Cross-check diffusion against the expanded-digraph oracle.
    #[command(name = "oracle-check", hide = true)]
    OracleCheck(OracleCheckArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, required_unless_present = "paper_defaults", conflicts_with = "paper_defaults")]
    pub nodes: Option<usize>,
    #[arg(long, required_unless_present = "paper_defaults", conflicts_with = "paper_defaults")]
    pub instants: Option<usize>,
    /// Edge probability per pair and snapshot.
    #[arg(long, required_unless_present = "paper_defaults", conflicts_with = "paper_defaults")]
    pub prob: Option<f64>,
    /// 160 nodes, 800 instants, p = 0.01·ln(160)/160.
    #[arg(long)]
    pub paper_defaults: bool,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    /// Contact log CSV.
    pub input: PathBuf,
    /// Snapshot width in seconds.
    #[arg(long, default_value_t = 30)]
    pub granularity: u64,
    /// First timestamp (default: earliest in the log).
    #[arg(long, allow_negative_numbers = true)]
    pub start: Option<i64>,
    /// Last timestamp (default: latest in the log).
    #[arg(long, allow_negative_numbers = true)]
    pub end: Option<i64>,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write a `node_id,label` CSV.
    #[arg(long)]
    pub labels: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RangeArg {
    /// Half-open instant range `A:B` (default: first ⌈0.825·N⌉ instants).
    #[arg(long, value_parser = parse_range)]
    pub range: Option<Range<usize>>,
}

#[derive(Debug, Args)]
pub struct CtArgs {
    /// Coverage fraction as a decimal in (0, 1].
    #[arg(long)]
    pub tau: String,
    #[command(flatten)]
    pub range: RangeArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    pub tvg: PathBuf,
}

#[derive(Debug, Args)]
pub struct TccArgs {
    /// Step budget Φ ≥ 1.
    #[arg(long)]
    pub phi: usize,
    #[command(flatten)]
    pub range: RangeArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    pub tvg: PathBuf,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MetricArg {
    Ct,
    Tcc,
}

impl From<MetricArg> for MetricKind {
    fn from(m: MetricArg) -> Self {
        match m {
            MetricArg::Ct => MetricKind::CoverTime,
            MetricArg::Tcc => MetricKind::Tcc,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum DistArg {
    Cdf,
    Ccdf,
}

#[derive(Debug, Args)]
pub struct DistArgs {
    /// Distribution kind (default: cdf for ct, ccdf for tcc).
    #[arg(long, value_enum)]
    pub kind: Option<DistArg>,
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Metric table CSV written by `ct` or `tcc`.
    pub table: PathBuf,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Metric table CSV written by `ct` or `tcc`.
    pub table: PathBuf,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    /// Required with `--metric ct`.
    #[arg(long)]
    pub tau: Option<String>,
    /// Required with `--metric tcc`.
    #[arg(long)]
    pub phi: Option<usize>,
    #[arg(long, default_value_t = 10)]
    pub k: usize,
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub range: RangeArg,
    /// Comparison CSV; the summary always goes to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    pub tvg: PathBuf,
}

#[derive(Debug, Args)]
pub struct ChurnArgs {
    pub tvg: PathBuf,
}

#[derive(Debug, Args)]
pub struct OracleCheckArgs {
    #[arg(long, default_value_t = 1000)]
    pub instances: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub max_nodes: usize,
    #[arg(long, default_value_t = 12)]
    pub max_instants: usize,
}

fn parse_range(s: &str) -> std::result::Result<Range<usize>, String> {
    let (a, b) = s.split_once(':').ok_or("expected A:B")?;
    let a: usize = a.trim().parse().map_err(|_| format!("invalid range start {a:?}"))?;
    let b: usize = b.trim().parse().map_err(|_| format!("invalid range end {b:?}"))?;
    if a >= b {
        return Err(format!("empty range {a}:{b}"));
    }
    Ok(a..b)
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidTau(_) | Error::ZeroBudget | Error::ZeroK | Error::InvalidSpec(_) | Error::InvalidConfig(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Data(e.to_string()),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    eprintln!("# tvgc {} {:?}", env!("CARGO_PKG_VERSION"), cli);
    let outcome = match build_pool(cli.workers) {
        Ok(pool) => pool.install(|| dispatch(&cli.command)),
        Err(e) => Err(e),
    };
    match outcome {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(CliError::Data(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn build_pool(workers: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = workers {
        if w == 0 {
            return Err(CliError::Usage("--workers must be at least 1".into()));
        }
        b = b.num_threads(w);
    }
    b.build().map_err(|e| CliError::Data(e.to_string()))
}

fn dispatch(cmd: &Command) -> CliResult<()> {
    match cmd {
        Command::Generate(a) => generate(a),
        Command::Ingest(a) => ingest(a),
        Command::Ct(a) => {
            let tvg = load_tvg(&a.tvg)?;
            let thr = CoverageThreshold::from_decimal(&a.tau, tvg.num_nodes())?;
            let table = sweep(&tvg, MetricSpec::CoverTime(thr), &a.range)?;
            write_output(a.out.as_deref(), |w| table.write_csv(w))
        }
        Command::Tcc(a) => {
            let tvg = load_tvg(&a.tvg)?;
            let table = sweep(&tvg, MetricSpec::Tcc(a.phi), &a.range)?;
            write_output(a.out.as_deref(), |w| table.write_csv(w))
        }
        Command::Dist(a) => {
            let table = load_table(&a.table, a.metric.into())?;
            let kind = match (a.kind, a.metric) {
                (Some(DistArg::Cdf), _) | (None, MetricArg::Ct) => DistributionKind::Cdf,
                (Some(DistArg::Ccdf), _) | (None, MetricArg::Tcc) => DistributionKind::Ccdf,
            };
            let dist = empirical_distribution(&table, kind)?;
            if dist.excluded > 0 {
                eprintln!("# excluded {} infinite entries", dist.excluded);
            }
            write_output(a.out.as_deref(), |w| dist.write_csv(w))
        }
        Command::Rank(a) => {
            let table = load_table(&a.table, a.metric.into())?;
            let top = rank_instants(&table, a.k)?;
            write_output(a.out.as_deref(), |w| {
                writeln!(w, "rank,time_index,value")?;
                for (i, r) in top.iter().enumerate() {
                    writeln!(w, "{},{},{}", i + 1, r.time, r.value)?;
                }
                Ok(())
            })
        }
        Command::Compare(a) => compare(a),
        Command::Churn(a) => {
            let tvg = load_tvg(&a.tvg)?;
            let churn = tvg.churn_rate()?;
            println!("churn_rate,{churn}");
            Ok(())
        }
        Command::OracleCheck(a) => {
            let report = check_equivalence(a.instances, a.seed, a.max_nodes, a.max_instants)?;
            println!(
                "instances={} comparisons={} mismatches={}",
                report.instances,
                report.comparisons,
                report.mismatches.len()
            );
            for (i, start, steps) in report.mismatches.iter().take(20) {
                println!("mismatch instance={i} start=({}, {}) steps={steps}", start.node, start.time);
            }
            if report.mismatches.is_empty() {
                Ok(())
            } else {
                Err(CliError::Data("diffusion disagrees with the oracle".into()))
            }
        }
    }
}

fn generate(a: &GenerateArgs) -> CliResult<()> {
    let spec = if a.paper_defaults {
        ErTvgSpec::sparse_default(a.seed)
    } else {
        // clap guarantees all three are present without --paper-defaults
        ErTvgSpec::new(a.nodes.unwrap(), a.instants.unwrap(), a.prob.unwrap(), a.seed)?
    };
    eprintln!(
        "# generate nodes={} instants={} prob={:.12e} seed={}",
        spec.num_nodes, spec.num_instants, spec.edge_probability, spec.seed
    );
    let tvg = generate_er_tvg(&spec)?;
    write_output(Some(&a.out), |w| tvg.write_text(w))
}

fn ingest(a: &IngestArgs) -> CliResult<()> {
    let file = File::open(&a.input).map_err(|e| CliError::Data(format!("{}: {e}", a.input.display())))?;
    let records = parse_contacts(BufReader::new(file)).collect::<crate::error::Result<Vec<_>>>()?;
    let cfg = IngestConfig {
        granularity_seconds: a.granularity,
        start_timestamp: a.start,
        end_timestamp: a.end,
    };
    let d = discretize(records, &cfg)?;
    eprintln!(
        "# ingest nodes={} instants={} contacts={} rejected={} start={} end={}",
        d.tvg.num_nodes(),
        d.tvg.num_instants(),
        d.tvg.num_contacts(),
        d.rejected,
        d.start_timestamp,
        d.end_timestamp
    );
    write_output(Some(&a.out), |w| d.tvg.write_text(w))?;
    if let Some(path) = &a.labels {
        let labels = d.tvg.labels().unwrap_or_default();
        write_output(Some(path), |w| {
            writeln!(w, "node_id,label")?;
            for (i, l) in labels.iter().enumerate() {
                writeln!(w, "{i},{l}")?;
            }
            Ok(())
        })?;
    }
    Ok(())
}

fn compare(a: &CompareArgs) -> CliResult<()> {
    let tvg = load_tvg(&a.tvg)?;
    let spec = match (a.metric, &a.tau, a.phi) {
        (MetricArg::Ct, Some(tau), _) => MetricSpec::CoverTime(CoverageThreshold::from_decimal(tau, tvg.num_nodes())?),
        (MetricArg::Tcc, _, Some(phi)) => MetricSpec::Tcc(phi),
        (MetricArg::Ct, None, _) => return Err(CliError::Usage("--metric ct needs --tau".into())),
        (MetricArg::Tcc, _, None) => return Err(CliError::Usage("--metric tcc needs --phi".into())),
    };
    let table = sweep(&tvg, spec, &a.range)?;
    let cmp = compare_topk_random(&table, a.k, a.seed)?;
    print!("{}", cmp.summary_text());
    if let Some(path) = &a.out {
        write_output(Some(path), |w| cmp.write_csv(w))?;
    }
    Ok(())
}

fn sweep(tvg: &Tvg, spec: MetricSpec, range: &RangeArg) -> CliResult<MetricTable> {
    let range = range.range.clone().unwrap_or_else(|| default_eval_range(tvg.num_instants()));
    eprintln!("# range {}:{}", range.start, range.end);
    if range.end > tvg.num_instants() {
        return Err(CliError::Usage(format!(
            "range end {} exceeds {} instants",
            range.end,
            tvg.num_instants()
        )));
    }
    Ok(metric_sweep(tvg, spec, range)?)
}

fn load_tvg(path: &Path) -> CliResult<Tvg> {
    let file = File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    Tvg::read_text(BufReader::new(file)).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path, kind: MetricKind) -> CliResult<MetricTable> {
    let file = File::open(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    MetricTable::read_csv(BufReader::new(file), kind).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> CliResult<()> {
    let io_err = |e: std::io::Error| CliError::Data(e.to_string());
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::Data(format!("{}: {e}", p.display())))?;
            let mut w = BufWriter::new(file);
            f(&mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            f(&mut w).map_err(io_err)?;
            w.flush().map_err(io_err)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_parsing() {
        assert_eq!(parse_range("0:660"), Ok(0..660));
        assert!(parse_range("5:5").is_err());
        assert!(parse_range("5").is_err());
        assert!(parse_range("a:3").is_err());
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["tvgc", "frobnicate"]), 1);
        assert_eq!(run(["tvgc", "generate", "--seed", "1"]), 1);
        assert_eq!(run(["tvgc", "--help"]), 0);
    }

    #[test]
    fn missing_input_is_a_data_error() {
        assert_eq!(run(["tvgc", "churn", "/nonexistent/x.tvg"]), 2);
    }
}
