//! Time-varying graph stored as a sequence of snapshots over a fixed node set.
//!
//! A contact `{u, v}` in snapshot `t_i` stands for the two directed temporal
//! edges `(u, t_i) -> (v, t_{i+1})` and `(v, t_i) -> (u, t_{i+1})`. Only the
//! per-snapshot adjacency is stored; the cross-time part of an edge is applied
//! by the diffusion step rule.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Dense node index in `[0, |V|)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Index of a time instant (snapshot) in `[0, N)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeIndex(pub u32);

impl TimeIndex {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for TimeIndex {
    fn from(i: usize) -> Self {
        TimeIndex(i as u32)
    }
}

impl fmt::Display for TimeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A `(node, instant)` pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TemporalNode {
    pub node: NodeId,
    pub time: TimeIndex,
}

impl TemporalNode {
    pub fn new(node: impl Into<NodeId>, time: impl Into<TimeIndex>) -> Self {
        TemporalNode {
            node: node.into(),
            time: time.into(),
        }
    }
}

/// Undirected contact, stored with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Contact {
    pub a: NodeId,
    pub b: NodeId,
    pub time: TimeIndex,
}

impl Contact {
    pub fn new(a: impl Into<NodeId>, b: impl Into<NodeId>, time: impl Into<TimeIndex>) -> Result<Self> {
        let (a, b, time) = (a.into(), b.into(), time.into());
        if a == b {
            return Err(Error::SelfContact {
                node: a.index(),
                time: time.index(),
            });
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Ok(Contact { a, b, time })
    }
}

/// Contacts active at one instant.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Snapshot {
    /// Canonical pairs, sorted and unique.
    contacts: Vec<(NodeId, NodeId)>,
    /// Both orientations of every contact, sorted by source.
    arcs: Vec<(NodeId, NodeId)>,
}

impl Snapshot {
    fn from_pairs(mut contacts: Vec<(NodeId, NodeId)>) -> Self {
        contacts.sort_unstable();
        contacts.dedup();
        let mut arcs: Vec<(NodeId, NodeId)> = contacts
            .iter()
            .flat_map(|&(a, b)| [(a, b), (b, a)])
            .collect();
        arcs.sort_unstable();
        Snapshot { contacts, arcs }
    }

    pub fn contacts(&self) -> &[(NodeId, NodeId)] {
        &self.contacts
    }

    pub fn len(&self) -> usize {
        self.contacts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.contacts.is_empty()
    }

    pub fn neighbors(&self, node: NodeId) -> impl Iterator<Item = NodeId> + '_ {
        let lo = self.arcs.partition_point(|&(s, _)| s < node);
        let hi = self.arcs.partition_point(|&(s, _)| s <= node);
        self.arcs[lo..hi].iter().map(|&(_, d)| d)
    }

    pub fn contains(&self, a: NodeId, b: NodeId) -> bool {
        let key = if a < b { (a, b) } else { (b, a) };
        self.contacts.binary_search(&key).is_ok()
    }

    /// Whether the snapshot, read as a static graph on `num_nodes` nodes, is connected.
    pub fn is_connected(&self, num_nodes: usize) -> bool {
        if num_nodes <= 1 {
            return true;
        }
        if self.contacts.len() < num_nodes - 1 {
            return false;
        }
        let mut parent: Vec<usize> = (0..num_nodes).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut components = num_nodes;
        for &(a, b) in &self.contacts {
            let (ra, rb) = (find(&mut parent, a.index()), find(&mut parent, b.index()));
            if ra != rb {
                parent[ra] = rb;
                components -= 1;
            }
        }
        components == 1
    }
}

/// Immutable time-varying graph `H = (V, E, T)` in snapshot form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tvg {
    num_nodes: usize,
    snapshots: Vec<Snapshot>,
    labels: Option<Vec<String>>,
}

impl Tvg {
    /// Builds a TVG from a stream of contacts. Duplicates are dropped.
    pub fn build<I>(num_nodes: usize, num_instants: usize, contacts: I) -> Result<Self>
    where
        I: IntoIterator<Item = Contact>,
    {
        if num_nodes == 0 {
            return Err(Error::NoNodes);
        }
        let mut per_instant: Vec<Vec<(NodeId, NodeId)>> = vec![Vec::new(); num_instants];
        for c in contacts {
            if c.a == c.b {
                return Err(Error::SelfContact {
                    node: c.a.index(),
                    time: c.time.index(),
                });
            }
            for n in [c.a, c.b] {
                if n.index() >= num_nodes {
                    return Err(Error::NodeOutOfRange {
                        node: n.index(),
                        num_nodes,
                    });
                }
            }
            let t = c.time.index();
            if t >= num_instants {
                return Err(Error::TimeOutOfRange {
                    time: t,
                    num_instants,
                });
            }
            let pair = if c.a < c.b { (c.a, c.b) } else { (c.b, c.a) };
            per_instant[t].push(pair);
        }
        Ok(Self::from_snapshot_pairs(num_nodes, per_instant))
    }

    /// Builds directly from per-instant pair lists that are already known to be valid.
    pub(crate) fn from_snapshot_pairs(num_nodes: usize, per_instant: Vec<Vec<(NodeId, NodeId)>>) -> Self {
        Tvg {
            num_nodes,
            snapshots: per_instant.into_iter().map(Snapshot::from_pairs).collect(),
            labels: None,
        }
    }

    /// Attaches node labels; `labels[i]` names node `i`.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.num_nodes {
            return Err(Error::InvalidConfig(format!(
                "{} labels for {} nodes",
                labels.len(),
                self.num_nodes
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_instants(&self) -> usize {
        self.snapshots.len()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn snapshots(&self) -> &[Snapshot] {
        &self.snapshots
    }

    pub fn snapshot(&self, time: TimeIndex) -> Result<&Snapshot> {
        self.snapshots.get(time.index()).ok_or(Error::TimeOutOfRange {
            time: time.index(),
            num_instants: self.snapshots.len(),
        })
    }

    pub fn check_node(&self, node: NodeId) -> Result<()> {
        if node.index() < self.num_nodes {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange {
                node: node.index(),
                num_nodes: self.num_nodes,
            })
        }
    }

    pub fn check_temporal_node(&self, tn: TemporalNode) -> Result<()> {
        self.check_node(tn.node)?;
        self.snapshot(tn.time).map(|_| ())
    }

    /// Nodes in contact with `node` at `time`, ascending.
    pub fn neighbors(&self, node: NodeId, time: TimeIndex) -> Result<Vec<NodeId>> {
        self.check_node(node)?;
        Ok(self.snapshot(time)?.neighbors(node).collect())
    }

    /// All contacts ordered by `(time, a, b)`.
    pub fn contacts(&self) -> impl Iterator<Item = Contact> + '_ {
        self.snapshots.iter().enumerate().flat_map(|(t, s)| {
            s.contacts.iter().map(move |&(a, b)| Contact {
                a,
                b,
                time: TimeIndex(t as u32),
            })
        })
    }

    pub fn num_contacts(&self) -> usize {
        self.snapshots.iter().map(Snapshot::len).sum()
    }

    /// Fraction of active node pairs that change state between consecutive
    /// snapshots, pooled over all consecutive pairs.
    ///
    /// A pair is active for `(i, i+1)` if it is in contact in either snapshot.
    /// Returns 0 when no pair is ever active.
    pub fn churn_rate(&self) -> Result<f64> {
        if self.snapshots.len() < 2 {
            return Err(Error::TooFewSnapshots(self.snapshots.len()));
        }
        let mut flipped = 0u64;
        let mut active = 0u64;
        for w in self.snapshots.windows(2) {
            let (x, y) = (&w[0].contacts, &w[1].contacts);
            let (mut i, mut j, mut common) = (0, 0, 0u64);
            while i < x.len() && j < y.len() {
                match x[i].cmp(&y[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => {
                        common += 1;
                        i += 1;
                        j += 1;
                    }
                }
            }
            let union = x.len() as u64 + y.len() as u64 - common;
            active += union;
            flipped += union - common;
        }
        if active == 0 {
            return Ok(0.0);
        }
        Ok(flipped as f64 / active as f64)
    }

    /// Writes the canonical `tvg v1` text form.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "tvg v1 {} {}", self.num_nodes, self.snapshots.len())?;
        for c in self.contacts() {
            writeln!(out, "{} {} {}", c.time, c.a, c.b)?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("tvg text is ASCII")
    }

    /// Parses the `tvg v1` text form. Contact lines may appear in any order.
    pub fn read_text<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let (num_nodes, num_instants) = loop {
            let Some((i, line)) = lines.next() else {
                return Err(Error::Parse {
                    line: 1,
                    msg: "missing `tvg v1` header".into(),
                });
            };
            let line = line.map_err(|e| io_parse(i + 1, e))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            match fields.as_slice() {
                ["tvg", "v1", n, t] => {
                    break (parse_field(i + 1, n, "node count")?, parse_field(i + 1, t, "instant count")?)
                }
                ["tvg", v, ..] if *v != "v1" => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("unsupported format version {v:?}"),
                    })
                }
                _ => {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: "expected header `tvg v1 <num_nodes> <num_instants>`".into(),
                    })
                }
            }
        };
        let mut contacts = Vec::new();
        for (i, line) in lines {
            let line = line.map_err(|e| io_parse(i + 1, e))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [t, a, b] = fields.as_slice() else {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: "expected `<time> <a> <b>`".into(),
                });
            };
            let t: usize = parse_field(i + 1, t, "time")?;
            let a: usize = parse_field(i + 1, a, "node")?;
            let b: usize = parse_field(i + 1, b, "node")?;
            let c = Contact::new(a, b, t).map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
            contacts.push(c);
        }
        Tvg::build(num_nodes, num_instants, contacts)
    }
}

fn parse_field(line: usize, s: &str, what: &str) -> Result<usize> {
    s.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("invalid {what} {s:?}"),
    })
}

fn io_parse(line: usize, e: std::io::Error) -> Error {
    Error::Parse {
        line,
        msg: e.to_string(),
    }
}
