//! Brute-force reference: the TVG expanded into a static digraph over
//! temporal nodes, with reachability computed by plain BFS.
//!
//! Vertex `(v, t_i)` has id `i * |V| + v`. Arcs:
//! * `(u, t_i) -> (v, t_{i+1})` and `(v, t_i) -> (u, t_{i+1})` for each contact `{u, v}` at `t_i`, `i + 1 < N`;
//! * `(w, t_i) -> (w, t_{i+1})` for every node `w` and `i + 1 < N` (an informed node stays informed).
//!
//! Contacts of the last instant have no target instant and produce no arcs.
//! They are kept aside so [`oracle_reach_through_end`] can apply them as a
//! final one-hop step, which is what the diffusion does with snapshot `t_{N-1}`.

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diffusion::{diffuse, MultiSourceDiffusion, StopRule};
use crate::error::{Error, Result};
use crate::synth::{generate_er_tvg, ErTvgSpec};
use crate::tvg::{NodeId, TemporalNode, TimeIndex, Tvg};

#[derive(Debug, Clone)]
pub struct ExpandedDigraph {
    num_nodes: usize,
    num_instants: usize,
    offsets: Vec<usize>,
    targets: Vec<usize>,
    final_contacts: Vec<(NodeId, NodeId)>,
}

impl ExpandedDigraph {
    pub fn num_vertices(&self) -> usize {
        self.num_nodes * self.num_instants
    }

    pub fn num_arcs(&self) -> usize {
        self.targets.len()
    }

    pub fn vertex(&self, tn: TemporalNode) -> usize {
        tn.time.index() * self.num_nodes + tn.node.index()
    }

    pub fn successors(&self, vertex: usize) -> &[usize] {
        &self.targets[self.offsets[vertex]..self.offsets[vertex + 1]]
    }
}

pub fn expand(tvg: &Tvg) -> ExpandedDigraph {
    let n = tvg.num_nodes();
    let big_n = tvg.num_instants();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n * big_n];
    for (t, snap) in tvg.snapshots().iter().enumerate() {
        if t + 1 >= big_n {
            break;
        }
        for w in 0..n {
            out[t * n + w].push((t + 1) * n + w);
        }
        for &(a, b) in snap.contacts() {
            out[t * n + a.index()].push((t + 1) * n + b.index());
            out[t * n + b.index()].push((t + 1) * n + a.index());
        }
    }
    let mut offsets = Vec::with_capacity(out.len() + 1);
    let mut targets = Vec::new();
    offsets.push(0);
    for mut succ in out {
        succ.sort_unstable();
        targets.extend(succ);
        offsets.push(targets.len());
    }
    let final_contacts = tvg
        .snapshots()
        .last()
        .map(|s| s.contacts().to_vec())
        .unwrap_or_default();
    ExpandedDigraph {
        num_nodes: n,
        num_instants: big_n,
        offsets,
        targets,
        final_contacts,
    }
}

/// Nodes `v` such that `(v, t + s')` is reachable from `start = (u, t)` for some `s' <= steps`.
pub fn oracle_reach(g: &ExpandedDigraph, start: TemporalNode, steps: usize) -> Result<Vec<NodeId>> {
    check_start(g, start)?;
    let n = g.num_nodes;
    let limit = start.time.index().saturating_add(steps);
    let mut seen = vec![false; g.num_vertices()];
    let mut queue = VecDeque::new();
    let s = g.vertex(start);
    seen[s] = true;
    queue.push_back(s);
    let mut nodes = vec![false; n];
    while let Some(x) = queue.pop_front() {
        nodes[x % n] = true;
        if x / n >= limit {
            continue;
        }
        for &y in g.successors(x) {
            if !seen[y] {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    Ok(collect(&nodes))
}

/// Like [`oracle_reach`], but when the budget covers the last instant the
/// last snapshot's contacts are applied as one more hop.
pub fn oracle_reach_through_end(g: &ExpandedDigraph, start: TemporalNode, steps: usize) -> Result<Vec<NodeId>> {
    check_start(g, start)?;
    let last = g.num_instants - 1;
    let t = start.time.index();
    if t + steps <= last {
        return oracle_reach(g, start, steps);
    }
    let reached = oracle_reach(g, start, last - t)?;
    let mut nodes = vec![false; g.num_nodes];
    for v in &reached {
        nodes[v.index()] = true;
    }
    for &(a, b) in &g.final_contacts {
        if reached.binary_search(&a).is_ok() || reached.binary_search(&b).is_ok() {
            nodes[a.index()] = true;
            nodes[b.index()] = true;
        }
    }
    Ok(collect(&nodes))
}

/// Outcome of [`check_equivalence`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub instances: usize,
    pub comparisons: usize,
    /// `(instance, start, steps)` of every disagreement.
    pub mismatches: Vec<(usize, TemporalNode, usize)>,
}

/// Edge probabilities cycled through by [`check_equivalence`].
pub const CHECK_PROBABILITIES: [f64; 3] = [0.1, 0.3, 0.6];

/// Compares diffusion informed sets against oracle reachability on random
/// small TVGs, for every temporal start node and every step budget up to
/// one past the end of the graph.
///
/// Instance `i` has `|V|` and `N` drawn uniformly from `1..=max_nodes` and
/// `1..=max_instants`, and `p = CHECK_PROBABILITIES[i % 3]`.
pub fn check_equivalence(instances: usize, seed: u64, max_nodes: usize, max_instants: usize) -> Result<EquivalenceReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = EquivalenceReport::default();
    for i in 0..instances {
        let n = rng.gen_range(1..=max_nodes.max(1));
        let big_n = rng.gen_range(1..=max_instants.max(1));
        let spec = ErTvgSpec::new(n, big_n, CHECK_PROBABILITIES[i % 3], rng.gen())?;
        let tvg = generate_er_tvg(&spec)?;
        let g = expand(&tvg);
        for t in 0..big_n {
            let mut batch = MultiSourceDiffusion::new(&tvg, TimeIndex(t as u32))?;
            let max_steps = big_n - t + 1;
            let mut batch_sets: Vec<Vec<Vec<NodeId>>> = Vec::with_capacity(max_steps + 1);
            for steps in 0..=max_steps {
                if steps > 0 {
                    batch.step();
                }
                batch_sets.push(
                    (0..n)
                        .map(|u| {
                            (0..n)
                                .map(|v| NodeId(v as u32))
                                .filter(|&v| batch.informs(NodeId(u as u32), v))
                                .collect()
                        })
                        .collect(),
                );
            }
            for u in 0..n {
                let start = TemporalNode::new(u, t);
                for (steps, batch_at) in batch_sets.iter().enumerate() {
                    let informed = diffuse(&tvg, start, StopRule::Budget(steps))?.informed;
                    let reference = oracle_reach_through_end(&g, start, steps)?;
                    report.comparisons += 1;
                    if informed != reference || batch_at[u] != reference {
                        report.mismatches.push((i, start, steps));
                    }
                }
            }
        }
        report.instances += 1;
    }
    Ok(report)
}

fn check_start(g: &ExpandedDigraph, start: TemporalNode) -> Result<()> {
    if start.node.index() >= g.num_nodes {
        return Err(Error::NodeOutOfRange {
            node: start.node.index(),
            num_nodes: g.num_nodes,
        });
    }
    if start.time.index() >= g.num_instants {
        return Err(Error::TimeOutOfRange {
            time: start.time.index(),
            num_instants: g.num_instants,
        });
    }
    Ok(())
}

fn collect(nodes: &[bool]) -> Vec<NodeId> {
    nodes
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| NodeId(i as u32))
        .collect()
}
