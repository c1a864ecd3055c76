//! Compressed storage by rows: `nonzero`, `col_index` and `row_start` arrays.

use super::triplet::TripletMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub row_start: Vec<usize>,
    pub col_index: Vec<usize>,
    pub nonzero: Vec<f64>,
}

impl CsrMatrix {
    pub fn from_triplet(m: &TripletMatrix) -> CsrMatrix {
        let mut row_start = vec![0usize; m.n_rows + 1];
        for &(r, _, _) in &m.entries {
            row_start[r + 1] += 1;
        }
        for i in 0..m.n_rows {
            row_start[i + 1] += row_start[i];
        }
        let col_index = m.entries.iter().map(|&(_, c, _)| c).collect();
        let nonzero = m.entries.iter().map(|&(_, _, v)| v).collect();
        CsrMatrix { n_rows: m.n_rows, n_cols: m.n_cols, row_start, col_index, nonzero }
    }

    pub fn nnz(&self) -> usize {
        self.nonzero.len()
    }

    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.row_start[i]..self.row_start[i + 1]
    }

    pub fn to_triplet(&self) -> TripletMatrix {
        let mut entries = Vec::with_capacity(self.nnz());
        for i in 0..self.n_rows {
            for t in self.row_range(i) {
                entries.push((i, self.col_index[t], self.nonzero[t]));
            }
        }
        TripletMatrix { n_rows: self.n_rows, n_cols: self.n_cols, entries }
    }

    /// Nonzero ids (positions in canonical order) of every nonzero in the
    /// given rows, in row-major order.
    pub fn nonzeros_of_rows(&self, rows: &[usize]) -> Vec<usize> {
        let mut sorted: Vec<usize> = rows.to_vec();
        sorted.sort_unstable();
        let mut ids = Vec::new();
        for &r in &sorted {
            ids.extend(self.row_range(r));
        }
        ids
    }
}
