//! Randomized TVGs built from independent Erdős–Rényi `G(n, p)` snapshots.
//!
//! Reproducibility contract: snapshot `t` is drawn from a `ChaCha8Rng`
//! seeded with `seed_from_u64(seed)` and switched to stream `t`. Pairs are
//! visited in lexicographic order `(a, b)`, `a < b`, with exactly one
//! `gen::<f64>()` draw each; the pair is kept when the draw is `< p`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::tvg::{NodeId, Tvg};

pub const SPARSE_NUM_NODES: usize = 160;
pub const SPARSE_NUM_INSTANTS: usize = 800;

/// `0.01 * ln(160) / 160`, about `3.17198363452e-4`.
pub fn sparse_edge_probability() -> f64 {
    0.01 * (SPARSE_NUM_NODES as f64).ln() / SPARSE_NUM_NODES as f64
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErTvgSpec {
    pub num_nodes: usize,
    pub num_instants: usize,
    pub edge_probability: f64,
    pub seed: u64,
}

impl ErTvgSpec {
    pub fn new(num_nodes: usize, num_instants: usize, edge_probability: f64, seed: u64) -> Result<Self> {
        let spec = ErTvgSpec {
            num_nodes,
            num_instants,
            edge_probability,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The sparse sub-threshold regime: 160 nodes, 800 instants, `p = 0.01 ln(160)/160`.
    pub fn sparse_default(seed: u64) -> Self {
        ErTvgSpec {
            num_nodes: SPARSE_NUM_NODES,
            num_instants: SPARSE_NUM_INSTANTS,
            edge_probability: sparse_edge_probability(),
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_nodes == 0 {
            return Err(Error::InvalidSpec("need at least one node".into()));
        }
        if self.num_instants == 0 {
            return Err(Error::InvalidSpec("need at least one instant".into()));
        }
        if !(0.0..=1.0).contains(&self.edge_probability) {
            return Err(Error::InvalidSpec(format!(
                "edge probability {} outside [0, 1]",
                self.edge_probability
            )));
        }
        Ok(())
    }

    /// Expected contacts per snapshot, `p * C(n, 2)`.
    pub fn expected_contacts_per_snapshot(&self) -> f64 {
        let n = self.num_nodes as f64;
        self.edge_probability * n * (n - 1.0) / 2.0
    }
}

pub fn generate_er_tvg(spec: &ErTvgSpec) -> Result<Tvg> {
    spec.validate()?;
    let per_instant: Vec<Vec<(NodeId, NodeId)>> = (0..spec.num_instants)
        .into_par_iter()
        .map(|t| er_snapshot(spec, t as u64))
        .collect();
    Ok(Tvg::from_snapshot_pairs(spec.num_nodes, per_instant))
}

fn er_snapshot(spec: &ErTvgSpec, stream: u64) -> Vec<(NodeId, NodeId)> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream(stream);
    let n = spec.num_nodes as u32;
    let mut pairs = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen::<f64>() < spec.edge_probability {
                pairs.push((NodeId(a), NodeId(b)));
            }
        }
    }
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_zero_and_one() {
        let empty = generate_er_tvg(&ErTvgSpec::new(4, 3, 0.0, 9).unwrap()).unwrap();
        assert_eq!(empty.num_instants(), 3);
        assert_eq!(empty.num_contacts(), 0);
        let full = generate_er_tvg(&ErTvgSpec::new(4, 3, 1.0, 9).unwrap()).unwrap();
        assert!(full.snapshots().iter().all(|s| s.len() == 6));
    }

    #[test]
    fn sparse_defaults() {
        let spec = ErTvgSpec::sparse_default(1);
        assert_eq!((spec.num_nodes, spec.num_instants, spec.seed), (160, 800, 1));
        assert!((spec.edge_probability - 3.17198363452e-4).abs() < 1e-15);
        assert!((spec.expected_contacts_per_snapshot() - 4.03476318311).abs() < 1e-10);
    }

    #[test]
    fn seeded_determinism() {
        let a = generate_er_tvg(&ErTvgSpec::new(30, 20, 0.1, 5).unwrap()).unwrap();
        let b = generate_er_tvg(&ErTvgSpec::new(30, 20, 0.1, 5).unwrap()).unwrap();
        let c = generate_er_tvg(&ErTvgSpec::new(30, 20, 0.1, 6).unwrap()).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_ne!(a.to_text(), c.to_text());
    }

    #[test]
    fn snapshots_use_distinct_streams() {
        let g = generate_er_tvg(&ErTvgSpec::new(40, 5, 0.2, 1).unwrap()).unwrap();
        let s = g.snapshots();
        assert!(s.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(ErTvgSpec::new(0, 3, 0.5, 0).is_err());
        assert!(ErTvgSpec::new(3, 0, 0.5, 0).is_err());
        assert!(ErTvgSpec::new(3, 3, 1.5, 0).is_err());
        assert!(ErTvgSpec::new(3, 3, f64::NAN, 0).is_err());
    }
}
