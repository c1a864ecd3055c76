//! Incremental CSR: column indices and row indices stored as increments.
//!
//! `col_diff[t]` is the increment from the previous column index, with
//! `n_cols` added when nonzero `t` starts a new row. A decoded column index
//! reaching `n_cols` therefore signals a row change, at which point the next
//! `row_jump` entry advances the row index. Empty rows never appear: a jump
//! simply skips them, which is why this layout backs the multiple-SpMxV
//! parts (they contain many empty rows).

use super::csr::CsrMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct IcsrMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub n_nonempty_rows: usize,
    pub col_diff: Vec<i64>,
    pub row_jump: Vec<i64>,
    pub nonzero: Vec<f64>,
    pub first_row: usize,
    pub first_col: usize,
}

impl IcsrMatrix {
    pub fn from_csr(m: &CsrMatrix) -> IcsrMatrix {
        let mut col_diff = Vec::with_capacity(m.nnz());
        let mut row_jump = Vec::new();
        let mut prev_row: i64 = 0;
        let mut prev_col: i64 = 0;
        let mut first_row = 0;
        let mut first_col = 0;
        let mut seen_any = false;
        for i in 0..m.n_rows {
            let range = m.row_range(i);
            if range.is_empty() {
                continue;
            }
            if !seen_any {
                first_row = i;
                first_col = m.col_index[range.start];
                seen_any = true;
            }
            row_jump.push(i as i64 - prev_row);
            prev_row = i as i64;
            for (k, t) in range.enumerate() {
                let c = m.col_index[t] as i64;
                let mut d = c - prev_col;
                if k == 0 {
                    d += m.n_cols as i64;
                }
                col_diff.push(d);
                prev_col = c;
            }
        }
        IcsrMatrix {
            n_rows: m.n_rows,
            n_cols: m.n_cols,
            n_nonempty_rows: row_jump.len(),
            col_diff,
            row_jump,
            nonzero: m.nonzero.clone(),
            first_row,
            first_col,
        }
    }

    pub fn nnz(&self) -> usize {
        self.nonzero.len()
    }

    /// Decodes the absolute (row, col) sequence from the increments.
    pub fn decode_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.nnz());
        let mut row: i64 = 0;
        let mut col: i64 = 0;
        let mut jump = 0usize;
        let n_cols = self.n_cols as i64;
        for &d in &self.col_diff {
            col += d;
            if col >= n_cols {
                col -= n_cols;
                row += self.row_jump[jump];
                jump += 1;
            }
            out.push((row as usize, col as usize));
        }
        out
    }

    pub fn to_csr(&self) -> CsrMatrix {
        let mut row_start = vec![0usize; self.n_rows + 1];
        let positions = self.decode_positions();
        for &(r, _) in &positions {
            row_start[r + 1] += 1;
        }
        for i in 0..self.n_rows {
            row_start[i + 1] += row_start[i];
        }
        CsrMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            row_start,
            col_index: positions.iter().map(|&(_, c)| c).collect(),
            nonzero: self.nonzero.clone(),
        }
    }
}
