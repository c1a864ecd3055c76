//! Baseline traversal orderings on the bipartite graph of the matrix
//! (row vertices 0..n_rows, column vertices n_rows..n_rows+n_cols, one edge
//! per nonzero): plain BFS and reverse Cuthill-McKee.

use std::collections::VecDeque;

use crate::error::Result;
use crate::matrix::{Permutation, TripletMatrix};

use super::{k1_result, MethodKind, ReorderResult};

fn bipartite_adjacency(m: &TripletMatrix) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); m.n_rows + m.n_cols];
    // entries are row-major sorted, so both row and column lists come out
    // in ascending neighbour order
    for &(r, c, _) in &m.entries {
        adj[r].push(m.n_rows + c);
        adj[m.n_rows + c].push(r);
    }
    adj
}

/// Splits a combined bipartite visit order into row/column permutations.
fn perms_of_order(m: &TripletMatrix, order: &[usize]) -> Result<(Permutation, Permutation)> {
    let mut row_seq = Vec::with_capacity(m.n_rows);
    let mut col_seq = Vec::with_capacity(m.n_cols);
    for &v in order {
        if v < m.n_rows {
            row_seq.push(v);
        } else {
            col_seq.push(v - m.n_rows);
        }
    }
    Ok((Permutation::from_sequence(&row_seq)?, Permutation::from_sequence(&col_seq)?))
}

/// Breadth-first ordering: restarts at the lowest-index unvisited row, with
/// columns never reached from any row appended last in ascending order.
pub fn sbfs(m: &TripletMatrix) -> Result<ReorderResult> {
    let adj = bipartite_adjacency(m);
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::new();
    for start in 0..m.n_rows {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in &adj[v] {
                if !visited[u] {
                    visited[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    for c in m.n_rows..n {
        if !visited[c] {
            order.push(c);
        }
    }
    let (rp, cp) = perms_of_order(m, &order)?;
    Ok(k1_result(m, MethodKind::Sbfs, rp, cp))
}

/// Reverse Cuthill-McKee ordering: per connected component (in ascending
/// smallest-vertex order), Cuthill-McKee from a pseudo-peripheral start with
/// neighbours expanded in ascending (degree, index) order; the combined
/// order is then reversed.
pub fn srcm(m: &TripletMatrix) -> Result<ReorderResult> {
    let adj = bipartite_adjacency(m);
    let n = adj.len();
    let degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut dist = vec![usize::MAX; n];
    for v in 0..n {
        if visited[v] {
            continue;
        }
        let component = collect_component(&adj, v);
        let start = pseudo_peripheral(&adj, &degree, &component, &mut dist);
        cuthill_mckee(&adj, &degree, start, &mut visited, &mut order);
    }
    order.reverse();
    let (rp, cp) = perms_of_order(m, &order)?;
    Ok(k1_result(m, MethodKind::Srcm, rp, cp))
}

fn collect_component(adj: &[Vec<usize>], v: usize) -> Vec<usize> {
    let mut comp = vec![v];
    let mut seen = std::collections::HashSet::from([v]);
    let mut i = 0;
    while i < comp.len() {
        for &u in &adj[comp[i]] {
            if seen.insert(u) {
                comp.push(u);
            }
        }
        i += 1;
    }
    comp
}

/// Repeated-BFS pseudo-peripheral search from the minimum-degree vertex of
/// the component. `dist` is reusable scratch (reset over the component).
fn pseudo_peripheral(
    adj: &[Vec<usize>],
    degree: &[usize],
    component: &[usize],
    dist: &mut [usize],
) -> usize {
    let mut start = *component.iter().min_by_key(|&&u| (degree[u], u)).unwrap();
    if component.len() == 1 {
        return start;
    }
    let (mut ecc, mut frontier) = bfs_eccentricity(adj, start, component, dist);
    loop {
        let cand = *frontier.iter().min_by_key(|&&u| (degree[u], u)).unwrap();
        let (e, f) = bfs_eccentricity(adj, cand, component, dist);
        if e > ecc {
            start = cand;
            ecc = e;
            frontier = f;
        } else {
            return start;
        }
    }
}

/// Eccentricity of `start` within its component plus the last BFS level.
fn bfs_eccentricity(
    adj: &[Vec<usize>],
    start: usize,
    component: &[usize],
    dist: &mut [usize],
) -> (usize, Vec<usize>) {
    for &u in component {
        dist[u] = usize::MAX;
    }
    dist[start] = 0;
    let mut queue = VecDeque::from([start]);
    let mut ecc = 0;
    let mut frontier = vec![start];
    while let Some(v) = queue.pop_front() {
        if dist[v] > ecc {
            ecc = dist[v];
            frontier.clear();
        }
        if dist[v] == ecc {
            frontier.push(v);
        }
        for &u in &adj[v] {
            if dist[u] == usize::MAX {
                dist[u] = dist[v] + 1;
                queue.push_back(u);
            }
        }
    }
    (ecc, frontier)
}

fn cuthill_mckee(
    adj: &[Vec<usize>],
    degree: &[usize],
    start: usize,
    visited: &mut [bool],
    order: &mut Vec<usize>,
) {
    visited[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        let mut next: Vec<usize> = adj[v].iter().copied().filter(|&u| !visited[u]).collect();
        next.sort_unstable_by_key(|&u| (degree[u], u));
        for u in next {
            visited[u] = true;
            queue.push_back(u);
        }
    }
}
