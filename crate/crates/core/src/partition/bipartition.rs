//! Multilevel 2-way partitioning: coarsen, net-growing initial partition,
//! FM refinement while uncoarsening. Best cutsize over `n_runs` seeded runs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hypergraph::Hypergraph;

use super::coarsen::{coarsen_level, MIN_COARSE_VERTICES, MIN_REDUCTION};
use super::refine::{fm_refine, repair_balance, FmState};
use super::{derive_seed, PartitionerConfig, WorkGraph};

const INITIAL_TRIES: usize = 8;
const LEVEL_PASS_LIMIT: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    pub side: Vec<u8>,
    pub part_weights: [u64; 2],
    pub cutsize: i64,
    /// True when a vertex heavier than the balance ceiling forced the
    /// ceiling to be relaxed to that vertex's weight.
    pub balance_relaxed: bool,
}

pub fn bipartition(h: &Hypergraph, cfg: &PartitionerConfig) -> Result<Bipartition> {
    cfg.validate()?;
    let g = WorkGraph::from_hypergraph(h);
    bipartition_work(&g, cfg, cfg.seed)
}

pub(crate) fn bipartition_work(
    g: &WorkGraph,
    cfg: &PartitionerConfig,
    seed: u64,
) -> Result<Bipartition> {
    if g.n_vertices() <= 1 {
        return Err(Error::InfeasibleSplit(format!(
            "{} vertex cannot be bisected",
            g.n_vertices()
        )));
    }
    let total = g.total_weight();
    let ceiling = (((1.0 + cfg.imbalance_eps) / 2.0) * total as f64).ceil() as u64;
    let heaviest = g.weights.iter().copied().max().unwrap_or(0);
    let balance_relaxed = heaviest > ceiling;
    let max_part = ceiling.max(heaviest);

    let mut best: Option<Bipartition> = None;
    for run in 0..cfg.n_runs {
        let state = multilevel_run(g, cfg, max_part, derive_seed(seed, run as u64));
        let candidate = Bipartition {
            part_weights: state.part_weights,
            cutsize: state.cutsize,
            side: state.side,
            balance_relaxed,
        };
        if best.as_ref().is_none_or(|b| candidate.cutsize < b.cutsize) {
            best = Some(candidate);
        }
    }
    Ok(best.expect("n_runs >= 1"))
}

fn multilevel_run(g: &WorkGraph, cfg: &PartitionerConfig, max_part: u64, seed: u64) -> FmState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // coarsening phase
    let mut levels: Vec<(WorkGraph, Vec<u32>)> = Vec::new();
    let mut current = g.clone();
    while current.n_vertices() > MIN_COARSE_VERTICES {
        let (coarse, map) = coarsen_level(&current, cfg.coarsening, max_part, &mut rng);
        if coarse.n_vertices() as f64 > MIN_REDUCTION * current.n_vertices() as f64 {
            break;
        }
        levels.push((std::mem::replace(&mut current, coarse), map));
    }

    // initial partition on the coarsest graph; the finest level always gets
    // an unlimited refinement so the result is locally minimal
    let had_levels = !levels.is_empty();
    let mut state = initial_partition(&current, max_part, &mut rng);
    repair_balance(&current, &mut state, max_part);
    fm_refine(&current, &mut state, max_part, if had_levels { LEVEL_PASS_LIMIT } else { 0 });

    // uncoarsen with refinement at every level
    while let Some((fine, map)) = levels.pop() {
        let side: Vec<u8> = map.iter().map(|&c| state.side[c as usize]).collect();
        state = FmState::new(&fine, side);
        let passes = if levels.is_empty() { 0 } else { LEVEL_PASS_LIMIT };
        fm_refine(&fine, &mut state, max_part, passes);
        current = fine;
    }
    ensure_nonempty(&current, &mut state);
    state
}

/// Greedy net growing from a random seed vertex; best of a few tries.
fn initial_partition(g: &WorkGraph, max_part: u64, rng: &mut impl Rng) -> FmState {
    let n = g.n_vertices();
    let total = g.total_weight();
    let target = total / 2;
    let mut best: Option<FmState> = None;
    for _ in 0..INITIAL_TRIES {
        let seed_vertex = rng.gen_range(0..n);
        let side = grow_from(g, seed_vertex, target);
        let state = FmState::new(g, side);
        let better = match &best {
            None => true,
            Some(b) => {
                let cand_ok = state.balanced(max_part);
                let best_ok = b.balanced(max_part);
                (cand_ok && !best_ok) || (cand_ok == best_ok && state.cutsize < b.cutsize)
            }
        };
        if better {
            best = Some(state);
        }
    }
    best.expect("at least one try")
}

fn grow_from(g: &WorkGraph, seed_vertex: usize, target: u64) -> Vec<u8> {
    let n = g.n_vertices();
    let mut side = vec![1u8; n];
    let mut visited = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    let mut grown = 0u64;
    let mut next_restart = 0usize;
    queue.push_back(seed_vertex);
    visited[seed_vertex] = true;
    while grown < target {
        let Some(v) = queue.pop_front() else {
            // disconnected: restart from the lowest-index unvisited vertex
            while next_restart < n && visited[next_restart] {
                next_restart += 1;
            }
            if next_restart == n {
                break;
            }
            visited[next_restart] = true;
            queue.push_back(next_restart);
            continue;
        };
        side[v] = 0;
        grown += g.weights[v];
        for &nid in &g.vertex_nets[v] {
            for &p in &g.net_pins[nid as usize] {
                let p = p as usize;
                if !visited[p] {
                    visited[p] = true;
                    queue.push_back(p);
                }
            }
        }
    }
    side
}

/// Guards against degenerate empty sides (possible only with zero-weight
/// corner cases); moves the lowest-index vertex over if needed.
fn ensure_nonempty(g: &WorkGraph, state: &mut FmState) {
    for s in 0..2usize {
        let count = state.side.iter().filter(|&&x| x as usize == s).count();
        if count == 0 {
            let v = 0usize;
            let from = state.side[v] as usize;
            state.side[v] = s as u8;
            state.part_weights[from] -= g.weights[v];
            state.part_weights[s] += g.weights[v];
            state.cutsize = g.cut_of(&state.side);
        }
    }
}
