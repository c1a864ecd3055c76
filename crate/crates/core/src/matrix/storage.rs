//! CSR storage-size accounting used by the cache-fit tests.
//!
//! Values are 8 bytes (double precision), indices 4 bytes. The x-subvector
//! cost counts unique touched columns, the y-subvector cost counts the rows
//! of the submatrix.

use std::collections::HashSet;

use super::csr::CsrMatrix;

pub const VALUE_BYTES: u64 = 8;
pub const INDEX_BYTES: u64 = 4;

/// Headroom subtracted from the cache capacity in fit tests, covering line
/// rounding at the submatrix array boundaries.
pub const FIT_SLACK_BYTES: u64 = 64;

/// CSR bytes of the submatrix formed by `rows` (all their nonzeros),
/// together with the associated x and y subvectors.
pub fn storage_bytes_rows(m: &CsrMatrix, rows: &[usize]) -> u64 {
    let mut nnz = 0u64;
    let mut cols: HashSet<usize> = HashSet::new();
    for &r in rows {
        for t in m.row_range(r) {
            nnz += 1;
            cols.insert(m.col_index[t]);
        }
    }
    submatrix_bytes(nnz, rows.len() as u64, cols.len() as u64)
}

/// Same accounting for an arbitrary nonzero subset, given by nonzero ids in
/// canonical (row-major) order. Rows and columns are the ones touched.
pub fn storage_bytes_nonzeros(m: &CsrMatrix, nonzero_ids: &[usize]) -> u64 {
    let row_of = row_of_nonzero(m);
    let mut rows: HashSet<usize> = HashSet::new();
    let mut cols: HashSet<usize> = HashSet::new();
    for &t in nonzero_ids {
        rows.insert(row_of[t]);
        cols.insert(m.col_index[t]);
    }
    submatrix_bytes(nonzero_ids.len() as u64, rows.len() as u64, cols.len() as u64)
}

pub fn submatrix_bytes(nnz: u64, n_rows: u64, n_uniq_cols: u64) -> u64 {
    (VALUE_BYTES + INDEX_BYTES) * nnz
        + INDEX_BYTES * (n_rows + 1)
        + VALUE_BYTES * n_rows
        + VALUE_BYTES * n_uniq_cols
}

pub fn fits_in_cache(bytes: u64, cache_bytes: u64) -> bool {
    bytes + FIT_SLACK_BYTES <= cache_bytes
}

/// Row index of each nonzero id.
pub fn row_of_nonzero(m: &CsrMatrix) -> Vec<usize> {
    let mut row_of = vec![0usize; m.nnz()];
    for i in 0..m.n_rows {
        for t in m.row_range(i) {
            row_of[t] = i;
        }
    }
    row_of
}
