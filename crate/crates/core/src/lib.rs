//! Time centrality for time-varying graphs.
//!
//! A [`Tvg`] is a sequence of contact snapshots over a fixed node set.
//! Diffusions started at a temporal node `(u, t_i)` spread one hop per
//! snapshot; averaging them over all start nodes ranks instants by how fast
//! ([`cover_time`]) or how far ([`tcc`]) information spreads from them.

pub mod centrality;
pub mod cli;
pub mod diffusion;
pub mod error;
pub mod ingest;
pub mod oracle;
pub mod synth;
pub mod tvg;

pub use centrality::{
    compare_topk_random, cover_time, default_eval_range, empirical_distribution, metric_sweep, rank_instants, tcc,
    Comparison, Distribution, DistributionKind, MetricKind, MetricRow, MetricSpec, MetricTable, MetricValue, Summary,
};
pub use diffusion::{
    constrained_count, cover_steps, diffuse, Cover, CoverageThreshold, DiffusionTrace, MultiSourceDiffusion, StopRule,
};
pub use error::{Error, Result};
pub use ingest::{discretize, parse_contacts, ContactRecord, IngestConfig};
pub use synth::{generate_er_tvg, ErTvgSpec};
pub use tvg::{Contact, NodeId, Snapshot, TemporalNode, TimeIndex, Tvg};
