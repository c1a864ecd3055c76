//! Coarsening heuristics for the multilevel bipartitioner.

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Coarsening, WorkGraph};

/// Nets larger than this are ignored while rating match candidates; their
/// per-pin contribution is negligible and scanning them dominates runtime.
const RATING_NET_PIN_LIMIT: usize = 256;

/// Stop coarsening below this many vertices.
pub const MIN_COARSE_VERTICES: usize = 100;

/// Stop when a level shrinks the vertex count by less than 10%.
pub const MIN_REDUCTION: f64 = 0.9;

/// One coarsening level. Returns the coarse graph and the fine-to-coarse
/// vertex map.
pub(crate) fn coarsen_level(
    g: &WorkGraph,
    kind: Coarsening,
    max_cluster_weight: u64,
    rng: &mut impl Rng,
) -> (WorkGraph, Vec<u32>) {
    let map = match kind {
        Coarsening::Hcc => hcc_match(g, max_cluster_weight, rng),
        Coarsening::AbsHcc => abshcc_clusters(g, max_cluster_weight, rng),
    };
    (project(g, &map), map)
}

/// Heavy connectivity clustering: visit vertices in random order; an
/// unmatched vertex pairs with the unmatched neighbour maximizing
/// sum over shared nets of cost(n) / (|pins(n)| - 1).
fn hcc_match(g: &WorkGraph, max_cluster_weight: u64, rng: &mut impl Rng) -> Vec<u32> {
    let n = g.n_vertices();
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);

    let mut cluster = vec![u32::MAX; n];
    let mut next = 0u32;
    // encounter-ordered rating accumulator, reset per vertex
    let mut rating = vec![0.0f64; n];
    let mut candidates: Vec<u32> = Vec::new();

    for &v in &order {
        let v = v as usize;
        if cluster[v] != u32::MAX {
            continue;
        }
        candidates.clear();
        for &nid in &g.vertex_nets[v] {
            let pins = &g.net_pins[nid as usize];
            if pins.len() < 2 || pins.len() > RATING_NET_PIN_LIMIT {
                continue;
            }
            let r = g.net_cost[nid as usize] as f64 / (pins.len() - 1) as f64;
            for &u in pins {
                let u = u as usize;
                if u == v || cluster[u] != u32::MAX {
                    continue;
                }
                if g.weights[v] + g.weights[u] > max_cluster_weight {
                    continue;
                }
                if rating[u] == 0.0 {
                    candidates.push(u as u32);
                }
                rating[u] += r;
            }
        }
        let mut best: Option<(f64, u32)> = None;
        for &u in &candidates {
            let r = rating[u as usize];
            let better = match best {
                None => true,
                Some((br, bu)) => r > br || (r == br && u < bu),
            };
            if better {
                best = Some((r, u));
            }
        }
        for &u in &candidates {
            rating[u as usize] = 0.0;
        }
        cluster[v] = next;
        if let Some((_, u)) = best {
            cluster[u as usize] = next;
        }
        next += 1;
    }
    cluster
}

/// Absorption clustering using nets: visit nets in random order; each net
/// absorbs its still-unclustered pins into one cluster (the cluster of its
/// first clustered pin, or a fresh one), respecting the weight cap.
fn abshcc_clusters(g: &WorkGraph, max_cluster_weight: u64, rng: &mut impl Rng) -> Vec<u32> {
    let n = g.n_vertices();
    let mut order: Vec<u32> = (0..g.net_pins.len() as u32).collect();
    order.shuffle(rng);

    let mut cluster = vec![u32::MAX; n];
    let mut cluster_weight: Vec<u64> = Vec::new();

    for &nid in &order {
        let pins = &g.net_pins[nid as usize];
        let mut cid = pins
            .iter()
            .find(|&&p| cluster[p as usize] != u32::MAX)
            .map(|&p| cluster[p as usize]);
        for &p in pins {
            let p = p as usize;
            if cluster[p] != u32::MAX {
                continue;
            }
            match cid {
                Some(c) if cluster_weight[c as usize] + g.weights[p] <= max_cluster_weight => {
                    cluster[p] = c;
                    cluster_weight[c as usize] += g.weights[p];
                }
                _ => {
                    let c = cluster_weight.len() as u32;
                    cluster_weight.push(g.weights[p]);
                    cluster[p] = c;
                    cid = Some(c);
                }
            }
        }
    }
    for c in cluster.iter_mut() {
        if *c == u32::MAX {
            let id = cluster_weight.len() as u32;
            cluster_weight.push(0);
            *c = id;
        }
    }
    // compact ids to 0..k in first-appearance order
    let mut remap = vec![u32::MAX; cluster_weight.len()];
    let mut next = 0u32;
    for c in cluster.iter_mut() {
        if remap[*c as usize] == u32::MAX {
            remap[*c as usize] = next;
            next += 1;
        }
        *c = remap[*c as usize];
    }
    cluster
}

/// Builds the coarse graph for a fine-to-coarse map: weights summed, net
/// pins remapped and deduplicated, nets reduced to a single pin dropped.
fn project(g: &WorkGraph, map: &[u32]) -> WorkGraph {
    let n_coarse = map.iter().copied().max().map_or(0, |m| m as usize + 1);
    let mut weights = vec![0u64; n_coarse];
    for (v, &c) in map.iter().enumerate() {
        weights[c as usize] += g.weights[v];
    }
    let mut net_cost = Vec::new();
    let mut net_pins = Vec::new();
    for (n, pins) in g.net_pins.iter().enumerate() {
        let mut coarse: Vec<u32> = pins.iter().map(|&p| map[p as usize]).collect();
        coarse.sort_unstable();
        coarse.dedup();
        if coarse.len() >= 2 {
            net_cost.push(g.net_cost[n]);
            net_pins.push(coarse);
        }
    }
    WorkGraph::from_parts(weights, net_cost, net_pins)
}
