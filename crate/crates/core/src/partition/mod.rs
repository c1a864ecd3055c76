//! Multilevel 2-way hypergraph bipartitioning inside a recursive-bisection
//! driver with a cache-size stopping rule.

pub mod bipartition;
pub mod coarsen;
pub mod rb;
pub mod refine;

pub use bipartition::{bipartition, Bipartition};
pub use rb::{recursive_bisect, RbLeaf, RbMode, RbNode, RbResult};

use crate::error::{Error, Result};
use crate::hypergraph::{Hypergraph, NetMetric};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coarsening {
    /// Heavy connectivity clustering: greedy vertex matching rated by
    /// sum over shared nets of cost / (pins - 1).
    Hcc,
    /// Absorption clustering using nets: nets visited in random order
    /// absorb their unclustered pins into one cluster.
    AbsHcc,
}

#[derive(Debug, Clone, Copy)]
pub struct PartitionerConfig {
    pub cache_bytes: u64,
    pub imbalance_eps: f64,
    pub coarsening: Coarsening,
    pub seed: u64,
    pub n_runs: usize,
}

impl Default for PartitionerConfig {
    fn default() -> Self {
        PartitionerConfig {
            cache_bytes: 2 << 20,
            imbalance_eps: 0.10,
            coarsening: Coarsening::Hcc,
            seed: 0,
            n_runs: 10,
        }
    }
}

impl PartitionerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.cache_bytes == 0 {
            return Err(Error::InvalidConfig("cache_bytes must be positive".into()));
        }
        if !(0.0..1.0).contains(&self.imbalance_eps) {
            return Err(Error::InvalidConfig("imbalance_eps must be in [0, 1)".into()));
        }
        if self.n_runs == 0 {
            return Err(Error::InvalidConfig("n_runs must be positive".into()));
        }
        Ok(())
    }
}

/// Derives independent seeds for sub-computations; splitmix64 step.
pub(crate) fn derive_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9e3779b97f4a7c15);
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Internal flat representation used by coarsening and FM refinement.
/// Metric tags are irrelevant to 2-way moves (connectivity and cut-net
/// cutsizes coincide for two parts), so only costs are kept.
#[derive(Debug, Clone)]
pub(crate) struct WorkGraph {
    pub weights: Vec<u64>,
    pub net_cost: Vec<u64>,
    pub net_pins: Vec<Vec<u32>>,
    pub vertex_nets: Vec<Vec<u32>>,
}

impl WorkGraph {
    pub fn n_vertices(&self) -> usize {
        self.weights.len()
    }

    pub fn from_parts(weights: Vec<u64>, net_cost: Vec<u64>, net_pins: Vec<Vec<u32>>) -> WorkGraph {
        let mut vertex_nets = vec![Vec::new(); weights.len()];
        for (n, pins) in net_pins.iter().enumerate() {
            for &p in pins {
                vertex_nets[p as usize].push(n as u32);
            }
        }
        WorkGraph { weights, net_cost, net_pins, vertex_nets }
    }

    pub fn from_hypergraph(h: &Hypergraph) -> WorkGraph {
        WorkGraph::from_parts(
            h.vertex_weight.clone(),
            h.nets.iter().map(|n| n.cost).collect(),
            h.nets.iter().map(|n| n.pins.iter().map(|&p| p as u32).collect()).collect(),
        )
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().sum()
    }

    /// 2-way cutsize: sum of costs of nets with pins on both sides.
    pub fn cut_of(&self, side: &[u8]) -> i64 {
        let mut cut = 0i64;
        for (n, pins) in self.net_pins.iter().enumerate() {
            let first = side[pins[0] as usize];
            if pins.iter().any(|&p| side[p as usize] != first) {
                cut += self.net_cost[n] as i64;
            }
        }
        cut
    }
}

/// Metric-aware cutsize of a k-way assignment on the original hypergraph.
/// `part_of[v] = None` marks a removed vertex (border of the enhanced
/// model). A cut-net-metric net counts once when its surviving pins span
/// more than one part or when any of its pins was removed.
pub fn cutsize_kway(h: &Hypergraph, part_of: &[Option<usize>], n_parts: usize) -> i64 {
    assert_eq!(part_of.len(), h.n_vertices, "assignment must cover all vertices");
    let mut seen = vec![false; n_parts];
    let mut total = 0i64;
    for net in &h.nets {
        let mut touched: Vec<usize> = Vec::new();
        let mut removed_pin = false;
        for &p in &net.pins {
            match part_of[p] {
                Some(part) => {
                    if !seen[part] {
                        seen[part] = true;
                        touched.push(part);
                    }
                }
                None => removed_pin = true,
            }
        }
        let lambda = touched.len();
        for part in touched {
            seen[part] = false;
        }
        total += match net.metric {
            NetMetric::Connectivity => net.cost as i64 * lambda.saturating_sub(1) as i64,
            NetMetric::CutNet => {
                if lambda > 1 || removed_pin {
                    net.cost as i64
                } else {
                    0
                }
            }
        };
    }
    total
}

/// 2-way cutsize of a bipartition side vector (every vertex assigned).
pub fn cutsize_bipartition(h: &Hypergraph, side: &[u8]) -> i64 {
    let part_of: Vec<Option<usize>> = side.iter().map(|&s| Some(s as usize)).collect();
    cutsize_kway(h, &part_of, 2)
}
