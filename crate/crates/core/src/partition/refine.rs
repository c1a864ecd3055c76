//! Fiduccia-Mattheyses refinement with gain buckets and best-prefix
//! rollback. Two-way only; gains are exact for both cut metrics since they
//! coincide at two parts.

use std::collections::BTreeMap;

use super::WorkGraph;

/// Gain-indexed buckets with lazy invalidation: entries are (re)inserted on
/// every gain change and validated against `gain` on extraction.
struct GainTable {
    buckets: BTreeMap<i64, Vec<u32>>,
}

impl GainTable {
    fn new() -> GainTable {
        GainTable { buckets: BTreeMap::new() }
    }

    fn push(&mut self, gain: i64, v: u32) {
        self.buckets.entry(gain).or_default().push(v);
    }

    /// Highest-gain vertex accepted by `feasible`, skipping stale entries.
    fn pop_best(
        &mut self,
        gain: &[i64],
        locked: &[bool],
        mut feasible: impl FnMut(u32) -> bool,
    ) -> Option<u32> {
        let keys: Vec<i64> = self.buckets.keys().rev().copied().collect();
        for key in keys {
            let bucket = self.buckets.get_mut(&key).unwrap();
            let mut chosen = None;
            let mut i = 0;
            while i < bucket.len() {
                let v = bucket[i];
                let stale = locked[v as usize] || gain[v as usize] != key;
                if stale {
                    bucket.swap_remove(i);
                    continue;
                }
                if feasible(v) {
                    chosen = Some(v);
                    bucket.swap_remove(i);
                    break;
                }
                i += 1;
            }
            if self.buckets.get(&key).is_some_and(|b| b.is_empty()) {
                self.buckets.remove(&key);
            }
            if chosen.is_some() {
                return chosen;
            }
        }
        None
    }
}

pub(crate) struct FmState {
    pub side: Vec<u8>,
    pub part_weights: [u64; 2],
    pub cutsize: i64,
}

impl FmState {
    pub fn new(g: &WorkGraph, side: Vec<u8>) -> FmState {
        let mut part_weights = [0u64; 2];
        for (v, &s) in side.iter().enumerate() {
            part_weights[s as usize] += g.weights[v];
        }
        let cutsize = g.cut_of(&side);
        FmState { side, part_weights, cutsize }
    }

    pub fn balanced(&self, max_part: u64) -> bool {
        self.part_weights[0] <= max_part && self.part_weights[1] <= max_part
    }
}

fn pin_counts(g: &WorkGraph, side: &[u8]) -> Vec<[u32; 2]> {
    let mut counts = vec![[0u32; 2]; g.net_pins.len()];
    for (n, pins) in g.net_pins.iter().enumerate() {
        for &p in pins {
            counts[n][side[p as usize] as usize] += 1;
        }
    }
    counts
}

fn initial_gains(g: &WorkGraph, side: &[u8], counts: &[[u32; 2]]) -> Vec<i64> {
    let mut gain = vec![0i64; g.n_vertices()];
    for (v, nets) in g.vertex_nets.iter().enumerate() {
        let s = side[v] as usize;
        for &n in nets {
            let n = n as usize;
            let c = g.net_cost[n] as i64;
            if counts[n][1 - s] == 0 {
                gain[v] -= c;
            } else if counts[n][s] == 1 {
                gain[v] += c;
            }
        }
    }
    gain
}

/// One FM pass: tentative best-gain moves with rollback to the best prefix.
/// Returns the cutsize improvement (>= 0) applied to `state`.
fn fm_pass(g: &WorkGraph, state: &mut FmState, max_part: u64) -> i64 {
    let n = g.n_vertices();
    let mut counts = pin_counts(g, &state.side);
    let mut gain = initial_gains(g, &state.side, &counts);
    let mut table = GainTable::new();
    for v in 0..n as u32 {
        table.push(gain[v as usize], v);
    }
    let mut locked = vec![false; n];
    let mut part_weights = state.part_weights;
    let mut moves: Vec<u32> = Vec::new();
    let mut cumulative = 0i64;
    let mut best_gain = 0i64;
    let mut best_len = 0usize;

    loop {
        let side = &state.side;
        let balanced_now = part_weights[0] <= max_part && part_weights[1] <= max_part;
        let pick = table.pop_best(&gain, &locked, |v| {
            let from = side[v as usize] as usize;
            let to = 1 - from;
            let ok = part_weights[to] + g.weights[v as usize] <= max_part;
            // when already unbalanced, any move out of the heavy side helps
            ok || (!balanced_now && part_weights[from] > max_part)
        });
        let Some(v) = pick else { break };
        let v = v as usize;
        let from = state.side[v] as usize;
        let to = 1 - from;
        locked[v] = true;
        cumulative += gain[v];

        // gain updates before/after the pin-count change (standard FM rules)
        for &nid in &g.vertex_nets[v] {
            let nid = nid as usize;
            let c = g.net_cost[nid] as i64;
            let pins = &g.net_pins[nid];
            if counts[nid][to] == 0 {
                for &p in pins {
                    let p = p as usize;
                    if !locked[p] {
                        gain[p] += c;
                        table.push(gain[p], p as u32);
                    }
                }
            } else if counts[nid][to] == 1 {
                for &p in pins {
                    let p = p as usize;
                    if !locked[p] && state.side[p] as usize == to {
                        gain[p] -= c;
                        table.push(gain[p], p as u32);
                    }
                }
            }
            counts[nid][from] -= 1;
            counts[nid][to] += 1;
            if counts[nid][from] == 0 {
                for &p in pins {
                    let p = p as usize;
                    if !locked[p] {
                        gain[p] -= c;
                        table.push(gain[p], p as u32);
                    }
                }
            } else if counts[nid][from] == 1 {
                for &p in pins {
                    let p = p as usize;
                    if !locked[p] && state.side[p] as usize == from {
                        gain[p] += c;
                        table.push(gain[p], p as u32);
                    }
                }
            }
        }
        part_weights[from] -= g.weights[v];
        part_weights[to] += g.weights[v];
        state.side[v] = to as u8;
        moves.push(v as u32);

        // state.part_weights still holds the pass-start weights here
        let started_unbalanced = !state.balanced(max_part);
        let balanced_after = part_weights[0] <= max_part && part_weights[1] <= max_part;
        if balanced_after && (cumulative > best_gain || (best_len == 0 && started_unbalanced)) {
            best_gain = cumulative;
            best_len = moves.len();
        }
    }

    // roll back everything past the best prefix
    for &v in moves[best_len..].iter().rev() {
        let v = v as usize;
        let cur = state.side[v] as usize;
        state.side[v] = (1 - cur) as u8;
    }
    state.part_weights = [0, 0];
    for (v, &s) in state.side.iter().enumerate() {
        state.part_weights[s as usize] += g.weights[v];
    }
    state.cutsize -= best_gain;
    best_gain
}

/// Refines until no improving pass remains (local minimality under
/// single-vertex moves). `max_passes = 0` means unlimited.
pub(crate) fn fm_refine(g: &WorkGraph, state: &mut FmState, max_part: u64, max_passes: usize) {
    let mut passes = 0;
    loop {
        let before = state.cutsize;
        let improved = fm_pass(g, state, max_part);
        passes += 1;
        if improved == 0 {
            break;
        }
        if max_passes > 0 && passes >= max_passes {
            break;
        }
        // early exit when a pass improves by less than 0.1%
        if max_passes > 0 && before > 0 && (improved as f64) < 0.001 * before as f64 {
            break;
        }
    }
}

/// Moves vertices out of an overweight side until balance holds (or no move
/// is possible). Used to repair infeasible initial partitions.
pub(crate) fn repair_balance(g: &WorkGraph, state: &mut FmState, max_part: u64) {
    while !state.balanced(max_part) {
        let heavy = if state.part_weights[0] > max_part { 0usize } else { 1usize };
        let light = 1 - heavy;
        let counts = pin_counts(g, &state.side);
        let gain = initial_gains(g, &state.side, &counts);
        let mut best: Option<(i64, usize)> = None;
        for v in 0..g.n_vertices() {
            if state.side[v] as usize != heavy {
                continue;
            }
            if state.part_weights[light] + g.weights[v] > max_part
                && state.part_weights[light] + g.weights[v] >= state.part_weights[heavy]
            {
                continue;
            }
            if best.is_none_or(|(bg, _)| gain[v] > bg) {
                best = Some((gain[v], v));
            }
        }
        let Some((g_v, v)) = best else { break };
        state.side[v] = light as u8;
        state.part_weights[heavy] -= g.weights[v];
        state.part_weights[light] += g.weights[v];
        state.cutsize -= g_v;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path_graph(n: usize) -> WorkGraph {
        let pins: Vec<Vec<u32>> = (0..n - 1).map(|i| vec![i as u32, i as u32 + 1]).collect();
        WorkGraph::from_parts(vec![1; n], vec![1; n - 1], pins)
    }

    #[test]
    fn alternating_path_reaches_single_cut() {
        // max_part 5 models the usual ~10% imbalance slack; with a ceiling
        // of exactly half the weight no single move is ever feasible
        let g = path_graph(8);
        let side: Vec<u8> = (0..8).map(|i| (i % 2) as u8).collect();
        let mut state = FmState::new(&g, side);
        assert_eq!(state.cutsize, 7);
        fm_refine(&g, &mut state, 5, 0);
        assert_eq!(state.cutsize, 1);
        assert_eq!(state.cutsize, g.cut_of(&state.side));
        assert!(state.balanced(5));
    }

    #[test]
    fn pass_never_worsens() {
        let g = path_graph(9);
        let side: Vec<u8> = (0..9).map(|i| ((i / 2) % 2) as u8).collect();
        let mut state = FmState::new(&g, side);
        let before = state.cutsize;
        fm_refine(&g, &mut state, 5, 0);
        assert!(state.cutsize <= before);
        assert_eq!(state.cutsize, g.cut_of(&state.side));
    }

    #[test]
    fn repair_fixes_overweight_side() {
        let g = path_graph(6);
        let mut state = FmState::new(&g, vec![0; 6]);
        repair_balance(&g, &mut state, 4);
        assert!(state.balanced(4));
        assert_eq!(state.cutsize, g.cut_of(&state.side));
    }

    #[test]
    fn incremental_cutsize_matches_recompute() {
        let g = path_graph(10);
        let side: Vec<u8> = (0..10).map(|i| ((i * 3) % 2) as u8).collect();
        let mut state = FmState::new(&g, side);
        fm_refine(&g, &mut state, 6, 0);
        assert_eq!(state.cutsize, g.cut_of(&state.side));
    }
}
