//! BFS-style diffusion over a [`Tvg`].
//!
//! Step rule: `I_0 = {u}` for a start `(u, t_i)`, and
//! `I_{s+1} = I_s ∪ { v : w ∈ I_s, {w, v} ∈ snapshot(t_i + s) }`.
//! Exactly one hop is taken per snapshot; nodes informed during step `s`
//! relay from snapshot `t_i + s + 1` on. Snapshot `t_{N-1}` is processed like
//! any other, so a diffusion from `t_i` runs for at most `N - i` steps.

use std::fmt;

use crate::error::{Error, Result};
use crate::tvg::{NodeId, TemporalNode, TimeIndex, Tvg};

/// Coverage target `⌈τ·|V|⌉`, computed exactly from a decimal `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverageThreshold {
    required_count: usize,
}

impl CoverageThreshold {
    /// Parses `tau` as an exact decimal in `(0, 1]` (e.g. `"0.1"`, `"1"`, `".25"`).
    pub fn from_decimal(tau: &str, num_nodes: usize) -> Result<Self> {
        let (num, den) = parse_unit_decimal(tau).ok_or_else(|| Error::InvalidTau(tau.to_string()))?;
        let n = num_nodes as u128;
        let required = (num * n).div_ceil(den);
        Ok(CoverageThreshold {
            required_count: (required as usize).max(1),
        })
    }

    pub fn from_count(required_count: usize, num_nodes: usize) -> Result<Self> {
        if required_count == 0 || required_count > num_nodes {
            return Err(Error::InvalidTau(format!("{required_count} of {num_nodes} nodes")));
        }
        Ok(CoverageThreshold { required_count })
    }

    pub fn required_count(&self) -> usize {
        self.required_count
    }
}

/// Returns `(numerator, denominator)` with `0 < num/den <= 1`.
fn parse_unit_decimal(s: &str) -> Option<(u128, u128)> {
    let s = s.trim();
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let int = int.trim_start_matches('0');
    let frac = frac.trim_end_matches('0');
    if int.len() > 1 || frac.len() > 18 {
        return None;
    }
    let den = 10u128.pow(frac.len() as u32);
    let int_val: u128 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let frac_val: u128 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    let num = int_val * den + frac_val;
    (num > 0 && num <= den).then_some((num, den))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopRule {
    /// Run until the snapshots run out.
    Exhaustion,
    /// Stop as soon as `|I_s|` reaches the threshold.
    Threshold(CoverageThreshold),
    /// Stop after at most this many steps.
    Budget(usize),
}

/// Result of [`cover_steps`]: the first step meeting the threshold, if any.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Cover {
    Reached(usize),
    Unreached,
}

impl fmt::Display for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cover::Reached(s) => write!(f, "{s}"),
            Cover::Unreached => f.write_str("unreached"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffusionTrace {
    pub start: TemporalNode,
    /// `sizes[s] = |I_s|`.
    pub sizes: Vec<usize>,
    /// True when the run ended because no snapshots were left.
    pub exhausted: bool,
    /// Final informed set, ascending.
    pub informed: Vec<NodeId>,
}

impl DiffusionTrace {
    pub fn steps(&self) -> usize {
        self.sizes.len() - 1
    }
}

/// Incremental single-source diffusion.
#[derive(Debug, Clone)]
pub struct Diffusion<'g> {
    tvg: &'g Tvg,
    start: TemporalNode,
    steps: usize,
    informed: Vec<bool>,
    members: Vec<NodeId>,
    fresh: Vec<NodeId>,
}

impl<'g> Diffusion<'g> {
    pub fn new(tvg: &'g Tvg, start: TemporalNode) -> Result<Self> {
        tvg.check_temporal_node(start)?;
        let mut informed = vec![false; tvg.num_nodes()];
        informed[start.node.index()] = true;
        Ok(Diffusion {
            tvg,
            start,
            steps: 0,
            informed,
            members: vec![start.node],
            fresh: Vec::new(),
        })
    }

    pub fn steps_taken(&self) -> usize {
        self.steps
    }

    pub fn informed_count(&self) -> usize {
        self.members.len()
    }

    pub fn is_informed(&self, node: NodeId) -> bool {
        self.informed[node.index()]
    }

    pub fn informed(&self) -> Vec<NodeId> {
        let mut v = self.members.clone();
        v.sort_unstable();
        v
    }

    pub fn is_exhausted(&self) -> bool {
        self.start.time.index() + self.steps >= self.tvg.num_instants()
    }

    /// Applies the next snapshot. Returns false if none is left.
    pub fn step(&mut self) -> bool {
        if self.is_exhausted() {
            return false;
        }
        let snap = &self.tvg.snapshots()[self.start.time.index() + self.steps];
        self.fresh.clear();
        if self.members.len() < snap.len() {
            for &w in &self.members {
                for v in snap.neighbors(w) {
                    if !self.informed[v.index()] {
                        self.fresh.push(v);
                    }
                }
            }
        } else {
            for &(a, b) in snap.contacts() {
                match (self.informed[a.index()], self.informed[b.index()]) {
                    (true, false) => self.fresh.push(b),
                    (false, true) => self.fresh.push(a),
                    _ => {}
                }
            }
        }
        // membership is updated only after the whole snapshot has been scanned
        for &v in &self.fresh {
            if !self.informed[v.index()] {
                self.informed[v.index()] = true;
                self.members.push(v);
            }
        }
        self.steps += 1;
        true
    }
}

pub fn diffuse(tvg: &Tvg, start: TemporalNode, stop: StopRule) -> Result<DiffusionTrace> {
    let mut d = Diffusion::new(tvg, start)?;
    let mut sizes = vec![1];
    let mut exhausted = false;
    loop {
        let done = match stop {
            StopRule::Exhaustion => false,
            StopRule::Threshold(thr) => d.informed_count() >= thr.required_count(),
            StopRule::Budget(b) => d.steps_taken() >= b,
        };
        if done {
            break;
        }
        if !d.step() {
            exhausted = true;
            break;
        }
        sizes.push(d.informed_count());
    }
    Ok(DiffusionTrace {
        start,
        sizes,
        exhausted,
        informed: d.informed(),
    })
}

/// Steps needed for a diffusion from `start` to inform `thr.required_count()` nodes.
pub fn cover_steps(tvg: &Tvg, start: TemporalNode, thr: CoverageThreshold) -> Result<Cover> {
    let trace = diffuse(tvg, start, StopRule::Threshold(thr))?;
    Ok(if *trace.sizes.last().unwrap() >= thr.required_count() {
        Cover::Reached(trace.steps())
    } else {
        Cover::Unreached
    })
}

/// Nodes informed (start included) after at most `phi` steps from `start`.
pub fn constrained_count(tvg: &Tvg, start: TemporalNode, phi: usize) -> Result<usize> {
    if phi == 0 {
        return Err(Error::ZeroBudget);
    }
    let trace = diffuse(tvg, start, StopRule::Budget(phi))?;
    Ok(*trace.sizes.last().unwrap())
}

/// All `|V|` diffusions starting at one instant, advanced together.
///
/// Keeps, for each node `v`, the bitset of start nodes whose diffusion has
/// informed `v`. One step costs `O(contacts · |V|/64)`.
#[derive(Debug, Clone)]
pub struct MultiSourceDiffusion<'g> {
    tvg: &'g Tvg,
    start_time: TimeIndex,
    steps: usize,
    words: usize,
    /// `reach[v * words .. (v + 1) * words]` = starts that informed `v`.
    reach: Vec<u64>,
    /// `counts[u] = |I(u)|`.
    counts: Vec<usize>,
    gains: Vec<(NodeId, usize)>,
    gain_bits: Vec<u64>,
}

impl<'g> MultiSourceDiffusion<'g> {
    pub fn new(tvg: &'g Tvg, start_time: TimeIndex) -> Result<Self> {
        tvg.snapshot(start_time)?;
        let n = tvg.num_nodes();
        let words = n.div_ceil(64);
        let mut reach = vec![0u64; n * words];
        for v in 0..n {
            reach[v * words + v / 64] |= 1 << (v % 64);
        }
        Ok(MultiSourceDiffusion {
            tvg,
            start_time,
            steps: 0,
            words,
            reach,
            counts: vec![1; n],
            gains: Vec::new(),
            gain_bits: Vec::new(),
        })
    }

    pub fn steps_taken(&self) -> usize {
        self.steps
    }

    /// `|I(u)|` for every start node `u`.
    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Whether the diffusion from `start` has informed `node`.
    pub fn informs(&self, start: NodeId, node: NodeId) -> bool {
        let s = start.index();
        self.reach[node.index() * self.words + s / 64] >> (s % 64) & 1 == 1
    }

    pub fn is_exhausted(&self) -> bool {
        self.start_time.index() + self.steps >= self.tvg.num_instants()
    }

    /// Applies the next snapshot to every diffusion; `on_gain(u)` fires once
    /// per newly informed node of start `u`. Returns false if no snapshot is left.
    pub fn step_with(&mut self, mut on_gain: impl FnMut(usize)) -> bool {
        if self.is_exhausted() {
            return false;
        }
        let w = self.words;
        let snap = &self.tvg.snapshots()[self.start_time.index() + self.steps];
        self.gains.clear();
        self.gain_bits.clear();
        for &(a, b) in snap.contacts() {
            let (ra, rb) = (a.index() * w, b.index() * w);
            for (dst, src_off, dst_off) in [(b, ra, rb), (a, rb, ra)] {
                let base = self.gain_bits.len();
                let mut any = 0u64;
                for k in 0..w {
                    let g = self.reach[src_off + k] & !self.reach[dst_off + k];
                    any |= g;
                    self.gain_bits.push(g);
                }
                if any == 0 {
                    self.gain_bits.truncate(base);
                } else {
                    self.gains.push((dst, base));
                }
            }
        }
        for &(dst, base) in &self.gains {
            let off = dst.index() * w;
            for k in 0..w {
                let mut fresh = self.gain_bits[base + k] & !self.reach[off + k];
                self.reach[off + k] |= fresh;
                while fresh != 0 {
                    let u = k * 64 + fresh.trailing_zeros() as usize;
                    self.counts[u] += 1;
                    on_gain(u);
                    fresh &= fresh - 1;
                }
            }
        }
        self.steps += 1;
        true
    }

    pub fn step(&mut self) -> bool {
        self.step_with(|_| {})
    }
}

/// [`cover_steps`] for every start node at `start_time`, indexed by node.
pub fn cover_steps_all(tvg: &Tvg, start_time: TimeIndex, thr: CoverageThreshold) -> Result<Vec<Cover>> {
    let mut engine = MultiSourceDiffusion::new(tvg, start_time)?;
    let req = thr.required_count();
    let mut result = vec![Cover::Unreached; tvg.num_nodes()];
    let mut pending = tvg.num_nodes();
    if req <= 1 {
        result.fill(Cover::Reached(0));
        return Ok(result);
    }
    let mut newly = Vec::new();
    while pending > 0 {
        let s = engine.steps_taken() + 1;
        newly.clear();
        if !engine.step_with(|u| newly.push(u)) {
            break;
        }
        for &u in &newly {
            if result[u] == Cover::Unreached && engine.counts()[u] >= req {
                result[u] = Cover::Reached(s);
                pending -= 1;
            }
        }
    }
    Ok(result)
}

/// [`constrained_count`] for every start node at `start_time`, indexed by node.
pub fn constrained_counts_all(tvg: &Tvg, start_time: TimeIndex, phi: usize) -> Result<Vec<usize>> {
    if phi == 0 {
        return Err(Error::ZeroBudget);
    }
    let mut engine = MultiSourceDiffusion::new(tvg, start_time)?;
    while engine.steps_taken() < phi && engine.step() {}
    Ok(engine.counts().to_vec())
}
