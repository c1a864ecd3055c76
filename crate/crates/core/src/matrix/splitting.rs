//! Nonzero-disjoint splittings A = A^1 + ... + A^K for the multiple-SpMxV
//! framework. Part ids are parallel to the canonical row-major nonzero order.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use super::triplet::TripletMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct Splitting {
    pub k: usize,
    pub part_of_nonzero: Vec<usize>,
}

impl Splitting {
    pub fn new(k: usize, part_of_nonzero: Vec<usize>) -> Result<Splitting> {
        if let Some(&p) = part_of_nonzero.iter().find(|&&p| p >= k) {
            return Err(Error::InvalidData(format!("part id {p} out of range (K={k})")));
        }
        Ok(Splitting { k, part_of_nonzero })
    }

    pub fn single(nnz: usize) -> Splitting {
        Splitting { k: 1, part_of_nonzero: vec![0; nnz] }
    }

    /// Triplet matrices of the parts, each with the global dimensions.
    pub fn parts(&self, m: &TripletMatrix) -> Vec<TripletMatrix> {
        assert_eq!(self.part_of_nonzero.len(), m.nnz(), "splitting does not cover matrix");
        let mut parts: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); self.k];
        for (t, &(r, c, v)) in m.entries.iter().enumerate() {
            parts[self.part_of_nonzero[t]].push((r, c, v));
        }
        parts
            .into_iter()
            .map(|entries| TripletMatrix { n_rows: m.n_rows, n_cols: m.n_cols, entries })
            .collect()
    }

    /// Text format: line 1 holds `K nnz`, then one part id per nonzero in
    /// canonical order.
    pub fn write_file(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        writeln!(f, "{} {}", self.k, self.part_of_nonzero.len())?;
        for &p in &self.part_of_nonzero {
            writeln!(f, "{p}")?;
        }
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Splitting> {
        let f = std::io::BufReader::new(std::fs::File::open(path)?);
        let mut lines = f.lines().enumerate();
        let (_, first) = lines.next().ok_or_else(|| Error::parse(1, "empty splitting file"))?;
        let first = first?;
        let mut it = first.split_whitespace();
        let k: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(1, "expected `K nnz`"))?;
        let nnz: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::parse(1, "expected `K nnz`"))?;
        let mut part_of_nonzero = Vec::with_capacity(nnz);
        for (idx, line) in lines.take(nnz) {
            let p: usize = line?
                .trim()
                .parse()
                .map_err(|_| Error::parse(idx + 1, "expected part id"))?;
            part_of_nonzero.push(p);
        }
        if part_of_nonzero.len() != nnz {
            return Err(Error::parse(nnz + 1, "fewer part ids than declared"));
        }
        Splitting::new(k, part_of_nonzero)
    }
}

/// Per-row and per-column connectivity of a splitting: the number of
/// distinct parts touching each row / column.
pub fn splitting_connectivity(s: &Splitting, m: &TripletMatrix) -> (Vec<usize>, Vec<usize>) {
    assert_eq!(s.part_of_nonzero.len(), m.nnz(), "splitting does not cover matrix");
    let mut row_seen: Vec<Option<Vec<bool>>> = vec![None; m.n_rows];
    let mut col_seen: Vec<Option<Vec<bool>>> = vec![None; m.n_cols];
    let mut row_lambda = vec![0usize; m.n_rows];
    let mut col_lambda = vec![0usize; m.n_cols];
    for (t, &(r, c, _)) in m.entries.iter().enumerate() {
        let p = s.part_of_nonzero[t];
        let marks = row_seen[r].get_or_insert_with(|| vec![false; s.k]);
        if !marks[p] {
            marks[p] = true;
            row_lambda[r] += 1;
        }
        let marks = col_seen[c].get_or_insert_with(|| vec![false; s.k]);
        if !marks[p] {
            marks[p] = true;
            col_lambda[c] += 1;
        }
    }
    (row_lambda, col_lambda)
}
