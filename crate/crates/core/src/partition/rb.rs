//! Recursive bisection with cut-net handling.
//!
//! In `SplitConn` mode every cut net is split into one sub-net per side, so
//! the bisection cutsizes accumulated over the tree equal the flat
//! connectivity cutsize of the induced K-way assignment.
//!
//! In `MixedErcn` mode cut-net-metric nets (row nets of the enhanced
//! row-column-net model) are instead removed when cut, and all their pin
//! vertices leave the recursion into a border set.

use crate::error::Result;
use crate::hypergraph::{Hypergraph, NetMetric};

use super::bipartition::bipartition_work;
use super::{derive_seed, PartitionerConfig, WorkGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RbMode {
    SplitConn,
    MixedErcn,
}

#[derive(Debug, Clone)]
pub struct RbLeaf {
    /// Original vertex ids.
    pub vertices: Vec<usize>,
    /// Leaf failed the fit test but could not be split further.
    pub oversized: bool,
}

#[derive(Debug, Clone)]
pub struct RbNode {
    pub id: usize,
    pub cutsize: i64,
    pub children: Option<(Box<RbNode>, Box<RbNode>)>,
    /// Index into `RbResult::leaves` when this node is a leaf.
    pub leaf: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RbResult {
    pub root: RbNode,
    /// Left-to-right leaf order.
    pub leaves: Vec<RbLeaf>,
    /// Original ids of vertices removed with cut cut-net-metric nets.
    pub border_vertices: Vec<usize>,
    /// Sum of bisection cutsizes over all internal nodes.
    pub accumulated_cutsize: i64,
}

impl RbResult {
    pub fn has_oversized_leaf(&self) -> bool {
        self.leaves.iter().any(|l| l.oversized)
    }

    /// Flat leaf assignment per original vertex; `None` for border vertices.
    pub fn assignment(&self, n_vertices: usize) -> Vec<Option<usize>> {
        let mut part_of = vec![None; n_vertices];
        for (k, leaf) in self.leaves.iter().enumerate() {
            for &v in &leaf.vertices {
                part_of[v] = Some(k);
            }
        }
        part_of
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        self.write_node(&self.root, &mut out);
        out
    }

    fn write_node(&self, node: &RbNode, out: &mut String) {
        use std::fmt::Write;
        match (&node.children, node.leaf) {
            (Some((a, b)), _) => {
                write!(out, "{{\"id\":{},\"cutsize\":{},\"children\":[", node.id, node.cutsize)
                    .unwrap();
                self.write_node(a, out);
                out.push(',');
                self.write_node(b, out);
                out.push_str("]}");
            }
            (None, Some(k)) => {
                let leaf = &self.leaves[k];
                write!(
                    out,
                    "{{\"id\":{},\"leaf\":{},\"oversized\":{},\"vertices\":{:?}}}",
                    node.id, k, leaf.oversized, leaf.vertices
                )
                .unwrap();
            }
            (None, None) => unreachable!("node is neither internal nor leaf"),
        }
    }
}

/// A sub-hypergraph under recursion: vertices by original id, nets carrying
/// their surviving pins (as positions into `verts`).
struct SubProblem {
    verts: Vec<usize>,
    weights: Vec<u64>,
    nets: Vec<SubNet>,
}

#[derive(Clone)]
struct SubNet {
    pins: Vec<u32>,
    cost: u64,
    metric: NetMetric,
}

pub fn recursive_bisect(
    h: &Hypergraph,
    cfg: &PartitionerConfig,
    fit_test: &dyn Fn(&[usize]) -> bool,
    mode: RbMode,
) -> Result<RbResult> {
    cfg.validate()?;
    let root_problem = SubProblem {
        verts: (0..h.n_vertices).collect(),
        weights: h.vertex_weight.clone(),
        nets: h
            .nets
            .iter()
            .filter(|n| n.pins.len() >= 2) // single-pin nets can never be cut
            .map(|n| SubNet {
                pins: n.pins.iter().map(|&p| p as u32).collect(),
                cost: n.cost,
                metric: n.metric,
            })
            .collect(),
    };
    let mut driver = Driver {
        cfg,
        fit_test,
        mode,
        leaves: Vec::new(),
        border: Vec::new(),
        accumulated: 0,
        next_id: 0,
    };
    let root = driver.solve(root_problem, cfg.seed)?;
    Ok(RbResult {
        root,
        leaves: driver.leaves,
        border_vertices: driver.border,
        accumulated_cutsize: driver.accumulated,
    })
}

struct Driver<'a> {
    cfg: &'a PartitionerConfig,
    fit_test: &'a dyn Fn(&[usize]) -> bool,
    mode: RbMode,
    leaves: Vec<RbLeaf>,
    border: Vec<usize>,
    accumulated: i64,
    next_id: usize,
}

impl Driver<'_> {
    fn leaf(&mut self, verts: Vec<usize>, oversized: bool) -> RbNode {
        let id = self.next_id;
        self.next_id += 1;
        self.leaves.push(RbLeaf { vertices: verts, oversized });
        RbNode { id, cutsize: 0, children: None, leaf: Some(self.leaves.len() - 1) }
    }

    fn solve(&mut self, p: SubProblem, seed: u64) -> Result<RbNode> {
        if (self.fit_test)(&p.verts) {
            return Ok(self.leaf(p.verts, false));
        }
        if p.verts.len() <= 1 {
            return Ok(self.leaf(p.verts, true));
        }

        let g = WorkGraph::from_parts(
            p.weights.clone(),
            p.nets.iter().map(|n| n.cost).collect(),
            p.nets.iter().map(|n| n.pins.clone()).collect(),
        );
        let b = bipartition_work(&g, self.cfg, derive_seed(seed, 0xb15))?;
        if b.side.iter().all(|&s| s == 0) || b.side.iter().all(|&s| s == 1) {
            return Ok(self.leaf(p.verts, true));
        }

        let id = self.next_id;
        self.next_id += 1;
        self.accumulated += b.cutsize;

        // vertex deletion for cut cut-net-metric nets (MixedErcn)
        let mut deleted = vec![false; p.verts.len()];
        if self.mode == RbMode::MixedErcn {
            for net in &p.nets {
                if net.metric != NetMetric::CutNet {
                    continue;
                }
                let first = b.side[net.pins[0] as usize];
                if net.pins.iter().any(|&q| b.side[q as usize] != first) {
                    for &q in &net.pins {
                        if !deleted[q as usize] {
                            deleted[q as usize] = true;
                            self.border.push(p.verts[q as usize]);
                        }
                    }
                }
            }
        }

        // build the two child sub-problems
        let mut local_new = vec![u32::MAX; p.verts.len()];
        let mut children: Vec<SubProblem> = Vec::new();
        for side in 0..2u8 {
            let mut verts = Vec::new();
            let mut weights = Vec::new();
            for (q, &orig) in p.verts.iter().enumerate() {
                if b.side[q] == side && !deleted[q] {
                    local_new[q] = verts.len() as u32;
                    verts.push(orig);
                    weights.push(p.weights[q]);
                }
            }
            let mut nets = Vec::new();
            for net in &p.nets {
                if net.metric == NetMetric::CutNet {
                    let first = b.side[net.pins[0] as usize];
                    let cut = net.pins.iter().any(|&q| b.side[q as usize] != first);
                    if cut || first != side {
                        continue; // removed when cut; else belongs to one side
                    }
                }
                let pins: Vec<u32> = net
                    .pins
                    .iter()
                    .filter(|&&q| b.side[q as usize] == side && !deleted[q as usize])
                    .map(|&q| local_new[q as usize])
                    .collect();
                let keep = if net.metric == NetMetric::CutNet {
                    !pins.is_empty()
                } else {
                    pins.len() >= 2
                };
                if keep {
                    nets.push(SubNet { pins, cost: net.cost, metric: net.metric });
                }
            }
            children.push(SubProblem { verts, weights, nets });
        }

        let right = children.pop().unwrap();
        let left = children.pop().unwrap();
        let left_node = self.solve_or_skip(left, derive_seed(seed, 1))?;
        let right_node = self.solve_or_skip(right, derive_seed(seed, 2))?;
        Ok(RbNode {
            id,
            cutsize: b.cutsize,
            children: Some((Box::new(left_node), Box::new(right_node))),
            leaf: None,
        })
    }

    /// Deletions can empty a child entirely; an empty side becomes an empty
    /// (non-reported) leaf node.
    fn solve_or_skip(&mut self, p: SubProblem, seed: u64) -> Result<RbNode> {
        if p.verts.is_empty() {
            let id = self.next_id;
            self.next_id += 1;
            return Ok(RbNode { id, cutsize: 0, children: None, leaf: None });
        }
        self.solve(p, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergraph::{Net, NetTag, VertexOrigin};
    use crate::partition::cutsize_kway;

    fn hg(n: usize, weights: Vec<u64>, nets: Vec<(Vec<usize>, u64, NetMetric)>) -> Hypergraph {
        Hypergraph {
            n_vertices: n,
            vertex_weight: weights,
            nets: nets
                .into_iter()
                .enumerate()
                .map(|(i, (pins, cost, metric))| Net { pins, cost, metric, tag: NetTag::Row(i) })
                .collect(),
            origin: (0..n).map(VertexOrigin::Row).collect(),
        }
    }

    fn cfg() -> PartitionerConfig {
        PartitionerConfig { n_runs: 4, ..Default::default() }
    }

    #[test]
    fn fitting_graph_is_single_leaf() {
        let h = hg(4, vec![1; 4], vec![(vec![0, 1, 2, 3], 1, NetMetric::Connectivity)]);
        let r = recursive_bisect(&h, &cfg(), &|_| true, RbMode::SplitConn).unwrap();
        assert_eq!(r.leaves.len(), 1);
        assert_eq!(r.accumulated_cutsize, 0);
        assert_eq!(r.leaves[0].vertices, vec![0, 1, 2, 3]);
    }

    #[test]
    fn disconnected_blocks_split_with_zero_cut() {
        let nets = vec![
            (vec![0, 1], 1, NetMetric::Connectivity),
            (vec![1, 2], 1, NetMetric::Connectivity),
            (vec![3, 4], 1, NetMetric::Connectivity),
            (vec![4, 5], 1, NetMetric::Connectivity),
        ];
        let h = hg(6, vec![1; 6], nets);
        let r = recursive_bisect(&h, &cfg(), &|v| v.len() <= 3, RbMode::SplitConn).unwrap();
        assert_eq!(r.leaves.len(), 2);
        assert_eq!(r.accumulated_cutsize, 0);
    }

    #[test]
    fn accumulated_equals_flat_connectivity_cutsize() {
        let nets: Vec<(Vec<usize>, u64, NetMetric)> = (0..11)
            .map(|i| (vec![i, i + 1], 1, NetMetric::Connectivity))
            .collect();
        let h = hg(12, vec![1; 12], nets);
        let r = recursive_bisect(&h, &cfg(), &|v| v.len() <= 3, RbMode::SplitConn).unwrap();
        let flat = cutsize_kway(&h, &r.assignment(12), r.leaves.len());
        assert_eq!(r.accumulated_cutsize, flat);
    }

    #[test]
    fn mixed_mode_removes_cut_row_net_pins() {
        // one CutNet net spanning everything: once cut, all its pins leave
        let nets = vec![
            (vec![0, 1, 2, 3], 9, NetMetric::CutNet),
            (vec![0, 4], 1, NetMetric::Connectivity),
            (vec![4, 5], 1, NetMetric::Connectivity),
            (vec![3, 6], 1, NetMetric::Connectivity),
            (vec![6, 7], 1, NetMetric::Connectivity),
        ];
        let h = hg(8, vec![1; 8], nets);
        let r = recursive_bisect(&h, &cfg(), &|v| v.len() <= 3, RbMode::MixedErcn).unwrap();
        if !r.border_vertices.is_empty() {
            let mut border = r.border_vertices.clone();
            border.sort_unstable();
            assert_eq!(border, vec![0, 1, 2, 3]);
        }
        // border vertices are in no leaf
        let assign = r.assignment(8);
        for &v in &r.border_vertices {
            assert!(assign[v].is_none());
        }
    }

    #[test]
    fn oversized_unsplittable_leaf_reported() {
        let h = hg(1, vec![10], vec![]);
        let r = recursive_bisect(&h, &cfg(), &|_| false, RbMode::SplitConn).unwrap();
        assert!(r.has_oversized_leaf());
    }

    #[test]
    fn json_dump_mentions_leaves() {
        let h = hg(4, vec![1; 4], vec![(vec![0, 1], 1, NetMetric::Connectivity)]);
        let r = recursive_bisect(&h, &cfg(), &|v| v.len() <= 2, RbMode::SplitConn).unwrap();
        let json = r.to_json();
        assert!(json.contains("\"cutsize\""));
        assert!(json.contains("\"leaf\""));
    }
}
