//! Per-row and per-column nonzero-count statistics (avg, max, coefficient
//! of variation).

use crate::error::{Error, Result};
use super::triplet::TripletMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisStats {
    pub avg: f64,
    pub max: usize,
    /// Coefficient of variation: stddev / mean; 0 when all counts equal.
    pub cov: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatrixStats {
    pub n_rows: usize,
    pub n_cols: usize,
    pub nnz: usize,
    pub row: AxisStats,
    pub col: AxisStats,
}

fn axis_stats(counts: &[usize]) -> AxisStats {
    let n = counts.len() as f64;
    let sum: usize = counts.iter().sum();
    let mean = sum as f64 / n;
    let var = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum::<f64>() / n;
    let cov = if mean > 0.0 { var.sqrt() / mean } else { 0.0 };
    AxisStats { avg: mean, max: counts.iter().copied().max().unwrap_or(0), cov }
}

pub fn matrix_stats(m: &TripletMatrix) -> Result<MatrixStats> {
    if m.nnz() == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(MatrixStats {
        n_rows: m.n_rows,
        n_cols: m.n_cols,
        nnz: m.nnz(),
        row: axis_stats(&m.row_counts()),
        col: axis_stats(&m.col_counts()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_zero_cov() {
        let m = TripletMatrix::new(3, 3, vec![(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)]).unwrap();
        let s = matrix_stats(&m).unwrap();
        assert_eq!(s.row.avg, 1.0);
        assert_eq!(s.row.max, 1);
        assert_eq!(s.row.cov, 0.0);
        assert_eq!(s.col.cov, 0.0);
    }

    #[test]
    fn counts_one_and_three() {
        // rows with counts {1, 3}: mean 2, stddev 1, cov 0.5
        let m = TripletMatrix::new(
            2,
            3,
            vec![(0, 0, 1.0), (1, 0, 1.0), (1, 1, 1.0), (1, 2, 1.0)],
        )
        .unwrap();
        let s = matrix_stats(&m).unwrap();
        assert_eq!(s.row.avg, 2.0);
        assert_eq!(s.row.max, 3);
        assert!((s.row.cov - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_matrix_is_error() {
        let m = TripletMatrix::new(2, 2, vec![]).unwrap();
        assert!(matrix_stats(&m).is_err());
    }

    #[test]
    fn avg_times_count_matches_nnz() {
        let m = TripletMatrix::new(4, 5, vec![(0, 0, 1.0), (1, 2, 1.0), (3, 4, 1.0)]).unwrap();
        let s = matrix_stats(&m).unwrap();
        assert!((s.row.avg * s.n_rows as f64 - s.nnz as f64).abs() < 1e-9);
        assert!((s.col.avg * s.n_cols as f64 - s.nnz as f64).abs() < 1e-9);
    }
}
