use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("node index {node} out of range (graph has {num_nodes} nodes)")]
    NodeOutOfRange { node: usize, num_nodes: usize },

    #[error("time index {time} out of range (graph has {num_instants} instants)")]
    TimeOutOfRange { time: usize, num_instants: usize },

    #[error("self-contact of node {node} at time {time}")]
    SelfContact { node: usize, time: usize },

    #[error("a graph needs at least one node")]
    NoNodes,

    #[error("churn needs at least 2 snapshots, got {0}")]
    TooFewSnapshots(usize),

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid coverage fraction {0:?}: expected a decimal in (0, 1]")]
    InvalidTau(String),

    #[error("step budget must be at least 1")]
    ZeroBudget,

    #[error("invalid generator parameters: {0}")]
    InvalidSpec(String),

    #[error("invalid ingest configuration: {0}")]
    InvalidConfig(String),

    #[error("evaluation range {start}..{end} is empty or exceeds {num_instants} instants")]
    InvalidRange {
        start: usize,
        end: usize,
        num_instants: usize,
    },

    #[error("k must be at least 1")]
    ZeroK,

    #[error("evaluation range has {available} instants, need at least {needed}")]
    RangeTooSmall { available: usize, needed: usize },

    #[error("metric table is empty")]
    EmptyTable,

    #[error("every value in the table is infinite")]
    AllInfinite,
}

pub type Result<T> = std::result::Result<T, Error>;
