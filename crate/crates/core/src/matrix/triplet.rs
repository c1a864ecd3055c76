//! Coordinate-format sparse matrices.
//!
//! All other representations are derived from a canonicalized triplet list:
//! entries sorted row-major with duplicates summed. The position of an entry
//! in this canonical order is its *nonzero id*, used by splittings and the
//! fine-grain hypergraph models.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct TripletMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    /// Canonical row-major order, no duplicate (row, col) pairs.
    pub entries: Vec<(usize, usize, f64)>,
}

impl TripletMatrix {
    /// Builds a matrix from raw entries: bounds-checked, sorted row-major,
    /// duplicate coordinates summed.
    pub fn new(n_rows: usize, n_cols: usize, mut entries: Vec<(usize, usize, f64)>) -> Result<Self> {
        for &(r, c, _) in &entries {
            if r >= n_rows || c >= n_cols {
                return Err(Error::InvalidData(format!(
                    "entry ({r}, {c}) outside {n_rows}x{n_cols} matrix"
                )));
            }
        }
        entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut canon: Vec<(usize, usize, f64)> = Vec::with_capacity(entries.len());
        for (r, c, v) in entries {
            match canon.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => canon.push((r, c, v)),
            }
        }
        Ok(TripletMatrix { n_rows, n_cols, entries: canon })
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn row_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_rows];
        for &(r, _, _) in &self.entries {
            counts[r] += 1;
        }
        counts
    }

    pub fn col_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_cols];
        for &(_, c, _) in &self.entries {
            counts[c] += 1;
        }
        counts
    }

    pub fn n_nonempty_rows(&self) -> usize {
        self.row_counts().iter().filter(|&&c| c > 0).count()
    }

    pub fn n_nonempty_cols(&self) -> usize {
        self.col_counts().iter().filter(|&&c| c > 0).count()
    }

    pub fn transpose(&self) -> TripletMatrix {
        let entries = self.entries.iter().map(|&(r, c, v)| (c, r, v)).collect();
        TripletMatrix::new(self.n_cols, self.n_rows, entries)
            .expect("transpose of a valid matrix is valid")
    }

    /// Dense rendering, row-major. Test and oracle helper; do not use on
    /// large matrices.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n_cols]; self.n_rows];
        for &(r, c, v) in &self.entries {
            d[r][c] += v;
        }
        d
    }
}
