//! Singly- and doubly-bordered block-diagonal forms.
//!
//! A block form records, for every row and column of the *original* matrix,
//! the diagonal block it belongs to (with id `k` reserved for the border)
//! plus the permutations that realize the block layout.

use crate::error::{Error, Result};
use super::perm::Permutation;
use super::triplet::TripletMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    /// Column border only (coupling columns).
    Sb,
    /// Column border plus row border (coupling rows).
    Db,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockForm {
    pub kind: BlockKind,
    pub k: usize,
    /// Block id per original row; `k` marks the row border (DB only).
    pub row_block_of: Vec<usize>,
    /// Block id per original column; `k` marks the column border.
    pub col_block_of: Vec<usize>,
    pub row_perm: Permutation,
    pub col_perm: Permutation,
}

impl BlockForm {
    pub fn trivial(n_rows: usize, n_cols: usize, row_perm: Permutation, col_perm: Permutation) -> BlockForm {
        BlockForm {
            kind: BlockKind::Sb,
            k: 1,
            row_block_of: vec![0; n_rows],
            col_block_of: vec![0; n_cols],
            row_perm,
            col_perm,
        }
    }

    /// Checks every nonzero against the block sparsity envelope: a nonzero
    /// (i, j) must lie in a diagonal block, the column border, or (DB only)
    /// the row border.
    pub fn validate(&self, m: &TripletMatrix) -> Result<()> {
        if self.row_block_of.len() != m.n_rows || self.col_block_of.len() != m.n_cols {
            return Err(Error::DimensionMismatch("block form does not cover matrix".into()));
        }
        for &(i, j, _) in &m.entries {
            let rb = self.row_block_of[i];
            let cb = self.col_block_of[j];
            if rb == self.k {
                if self.kind == BlockKind::Sb {
                    return Err(Error::InvalidData(format!("SB form has border row {i}")));
                }
                continue; // row border spans all columns
            }
            if cb == self.k {
                continue; // column border spans all rows
            }
            if rb != cb {
                return Err(Error::InvalidData(format!(
                    "nonzero ({i}, {j}) outside envelope: row block {rb}, col block {cb}"
                )));
            }
        }
        Ok(())
    }

    /// Connectivity per column: the number of distinct non-border row blocks
    /// containing a nonzero of that column. For a DB form this is the
    /// lambda' of the SB part, since border-row nonzeros are excluded.
    pub fn column_connectivity(&self, m: &TripletMatrix) -> Vec<usize> {
        let mut seen: Vec<Option<Vec<bool>>> = vec![None; m.n_cols];
        let mut lambda = vec![0usize; m.n_cols];
        for &(i, j, _) in &m.entries {
            let rb = self.row_block_of[i];
            if rb == self.k {
                continue;
            }
            let marks = seen[j].get_or_insert_with(|| vec![false; self.k]);
            if !marks[rb] {
                marks[rb] = true;
                lambda[j] += 1;
            }
        }
        lambda
    }

    /// Rows in the border (DB forms).
    pub fn border_rows(&self) -> Vec<usize> {
        (0..self.row_block_of.len()).filter(|&i| self.row_block_of[i] == self.k).collect()
    }
}
