//! Row/column permutations, stored as old-index -> new-position maps.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use super::triplet::TripletMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Permutation {
    /// order[old] = new position.
    pub order: Vec<usize>,
    /// inverse[new] = old position.
    pub inverse: Vec<usize>,
}

impl Permutation {
    pub fn new(order: Vec<usize>) -> Result<Permutation> {
        let n = order.len();
        let mut inverse = vec![usize::MAX; n];
        for (old, &new) in order.iter().enumerate() {
            if new >= n {
                return Err(Error::InvalidPermutation(format!("position {new} out of range")));
            }
            if inverse[new] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("position {new} assigned twice")));
            }
            inverse[new] = old;
        }
        Ok(Permutation { order, inverse })
    }

    pub fn identity(n: usize) -> Permutation {
        let order: Vec<usize> = (0..n).collect();
        Permutation { inverse: order.clone(), order }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Builds the permutation that places old indices in the order given by
    /// `sequence` (a bijective listing of 0..n).
    pub fn from_sequence(sequence: &[usize]) -> Result<Permutation> {
        let n = sequence.len();
        let mut order = vec![usize::MAX; n];
        for (new, &old) in sequence.iter().enumerate() {
            if old >= n {
                return Err(Error::InvalidPermutation(format!("index {old} out of range")));
            }
            if order[old] != usize::MAX {
                return Err(Error::InvalidPermutation(format!("index {old} listed twice")));
            }
            order[old] = new;
        }
        Permutation::new(order)
    }

    pub fn apply_to_vector(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; x.len()];
        for (old, &new) in self.order.iter().enumerate() {
            out[new] = x[old];
        }
        out
    }

    /// Text format: line 1 holds n, then n lines of 0-based new position
    /// per old index.
    pub fn write_file(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "{}", self.len())?;
        for &p in &self.order {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Permutation> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut lines = f.lines().enumerate();
        let (_, first) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "empty permutation file"))?;
        let n: usize = first?
            .trim()
            .parse()
            .map_err(|_| Error::parse(1, "expected vector length"))?;
        let mut order = Vec::with_capacity(n);
        for (idx, line) in lines.take(n) {
            let p: usize = line?
                .trim()
                .parse()
                .map_err(|_| Error::parse(idx + 1, "expected 0-based position"))?;
            order.push(p);
        }
        if order.len() != n {
            return Err(Error::parse(n + 1, "fewer positions than declared"));
        }
        Permutation::new(order)
    }
}

/// Computes P_r * A * P_c as a triplet matrix: entry (i, j) moves to
/// (p_r.order[i], p_c.order[j]).
pub fn apply_permutations(
    m: &TripletMatrix,
    p_r: &Permutation,
    p_c: &Permutation,
) -> Result<TripletMatrix> {
    if p_r.len() != m.n_rows || p_c.len() != m.n_cols {
        return Err(Error::DimensionMismatch(format!(
            "permutation sizes ({}, {}) vs matrix {}x{}",
            p_r.len(),
            p_c.len(),
            m.n_rows,
            m.n_cols
        )));
    }
    let entries = m
        .entries
        .iter()
        .map(|&(r, c, v)| (p_r.order[r], p_c.order[c], v))
        .collect();
    TripletMatrix::new(m.n_rows, m.n_cols, entries)
}
