//! Seeded generators for matrices, hypergraphs and access traces. Used by
//! the test suites and available to the CLI for structured demo instances.

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::cachesim::{Access, ArrayClass, ARRAY_CLASSES};
use crate::hypergraph::{Hypergraph, Net, NetMetric, NetTag, VertexOrigin};
use crate::matrix::TripletMatrix;

/// Uniform random sparse matrix with `nnz` distinct positions (or as many
/// as the shape allows).
pub fn random_sparse(
    n_rows: usize,
    n_cols: usize,
    nnz: usize,
    rng: &mut impl Rng,
) -> TripletMatrix {
    let capacity = n_rows.saturating_mul(n_cols);
    let nnz = nnz.min(capacity);
    let mut seen = std::collections::HashSet::with_capacity(nnz);
    let mut entries = Vec::with_capacity(nnz);
    while entries.len() < nnz {
        let r = rng.gen_range(0..n_rows);
        let c = rng.gen_range(0..n_cols);
        if seen.insert((r, c)) {
            entries.push((r, c, rng.gen_range(0.5..1.5)));
        }
    }
    TripletMatrix::new(n_rows, n_cols, entries).expect("generated entries are in bounds")
}

/// Block-diagonal matrix of `n_blocks` dense blocks with `coupling_cols`
/// extra columns shared by every block and `coupling_rows` extra rows
/// spanning all block columns. With both zero the blocks are independent.
pub fn coupled_blocks(
    n_blocks: usize,
    block_size: usize,
    coupling_cols: usize,
    coupling_rows: usize,
    rng: &mut impl Rng,
) -> TripletMatrix {
    let n_rows = n_blocks * block_size + coupling_rows;
    let n_cols = n_blocks * block_size + coupling_cols;
    let mut entries = Vec::new();
    for b in 0..n_blocks {
        for i in 0..block_size {
            for j in 0..block_size {
                entries.push((b * block_size + i, b * block_size + j, rng.gen_range(0.5..1.5)));
            }
        }
        for i in 0..block_size {
            for cc in 0..coupling_cols {
                entries.push((
                    b * block_size + i,
                    n_blocks * block_size + cc,
                    rng.gen_range(0.5..1.5),
                ));
            }
        }
    }
    for cr in 0..coupling_rows {
        for j in 0..n_blocks * block_size {
            entries.push((n_blocks * block_size + cr, j, rng.gen_range(0.5..1.5)));
        }
    }
    TripletMatrix::new(n_rows, n_cols, entries).expect("generated entries are in bounds")
}

/// Irregular matrix with skewed row lengths: a random sparse base plus a
/// few dense-ish rows and columns, the kind of structure reordering helps.
pub fn irregular(n: usize, avg_row_nnz: usize, seed: u64) -> TripletMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::HashSet::new();
    let mut entries = Vec::new();
    let push = |r: usize, c: usize, rng: &mut ChaCha8Rng, entries: &mut Vec<(usize, usize, f64)>, seen: &mut std::collections::HashSet<(usize, usize)>| {
        if seen.insert((r, c)) {
            entries.push((r, c, rng.gen_range(0.5..1.5)));
        }
    };
    // localized base: each row clusters around a random center
    for r in 0..n {
        let center = rng.gen_range(0..n);
        let count = rng.gen_range(1..=2 * avg_row_nnz);
        for _ in 0..count {
            let span = n.div_ceil(8).max(1);
            let offset = rng.gen_range(0..span);
            let c = (center + offset) % n;
            push(r, c, &mut rng, &mut entries, &mut seen);
        }
    }
    // a few rows and columns with global reach
    for _ in 0..n.div_ceil(50).max(1) {
        let r = rng.gen_range(0..n);
        for _ in 0..n / 4 {
            let c = rng.gen_range(0..n);
            push(r, c, &mut rng, &mut entries, &mut seen);
        }
        let c = rng.gen_range(0..n);
        for _ in 0..n / 4 {
            let r = rng.gen_range(0..n);
            push(r, c, &mut rng, &mut entries, &mut seen);
        }
    }
    TripletMatrix::new(n, n, entries).expect("generated entries are in bounds")
}

/// Random hypergraph with unit-ish weights, for partitioner stress tests.
pub fn random_hypergraph(
    n_vertices: usize,
    n_nets: usize,
    max_pins: usize,
    rng: &mut impl Rng,
) -> Hypergraph {
    let mut nets = Vec::with_capacity(n_nets);
    for i in 0..n_nets {
        let size = rng.gen_range(2..=max_pins.max(2).min(n_vertices.max(2)));
        let mut pins: Vec<usize> = (0..n_vertices).collect();
        pins.shuffle(rng);
        pins.truncate(size.min(n_vertices));
        pins.sort_unstable();
        nets.push(Net {
            pins,
            cost: rng.gen_range(1..=3),
            metric: NetMetric::Connectivity,
            tag: NetTag::Row(i),
        });
    }
    Hypergraph {
        n_vertices,
        vertex_weight: (0..n_vertices).map(|_| rng.gen_range(1..=4)).collect(),
        nets,
        origin: (0..n_vertices).map(VertexOrigin::Row).collect(),
    }
}

/// Random access trace over a compact line range, for LRU oracle tests.
pub fn random_trace(n_accesses: usize, n_lines: u64, rng: &mut impl Rng) -> Vec<Access> {
    (0..n_accesses)
        .map(|_| {
            let class = ARRAY_CLASSES[rng.gen_range(0..ARRAY_CLASSES.len())];
            let size = if matches!(class, ArrayClass::ColIndex | ArrayClass::RowStart) { 4 } else { 8 };
            Access { class, addr: rng.gen_range(0..n_lines) * 8, size }
        })
        .collect()
}
