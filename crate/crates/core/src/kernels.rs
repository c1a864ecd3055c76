//! Reference SpMxV kernels.
//!
//! All kernels accumulate each row into a scalar temporary and store once,
//! in row-major nonzero order, so CSR and ICSR results are bitwise equal.
//! The multiple-SpMxV kernel accumulates into y across parts and therefore
//! reassociates sums; callers compare against single-SpMxV results with a
//! relative tolerance.

use std::io::{BufRead, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::{CsrMatrix, IcsrMatrix};

pub fn spmv_csr(m: &CsrMatrix, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != m.n_cols {
        return Err(Error::DimensionMismatch(format!(
            "x has length {}, matrix has {} columns",
            x.len(),
            m.n_cols
        )));
    }
    let mut y = vec![0.0; m.n_rows];
    for i in 0..m.n_rows {
        let mut sum = 0.0;
        for t in m.row_range(i) {
            sum += m.nonzero[t] * x[m.col_index[t]];
        }
        y[i] = sum;
    }
    Ok(y)
}

pub fn spmv_icsr(m: &IcsrMatrix, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != m.n_cols {
        return Err(Error::DimensionMismatch(format!(
            "x has length {}, matrix has {} columns",
            x.len(),
            m.n_cols
        )));
    }
    let mut y = vec![0.0; m.n_rows];
    spmv_icsr_accumulate(m, x, &mut y)?;
    Ok(y)
}

/// y += A x for an ICSR part. Empty rows are skipped entirely: the row
/// pointer jumps straight to the next nonzero row.
pub fn spmv_icsr_accumulate(m: &IcsrMatrix, x: &[f64], y: &mut [f64]) -> Result<()> {
    if x.len() != m.n_cols || y.len() != m.n_rows {
        return Err(Error::DimensionMismatch("icsr part dimensions".into()));
    }
    if m.nnz() == 0 {
        return Ok(());
    }
    let n_cols = m.n_cols as i64;
    let mut row: i64 = 0;
    let mut col: i64 = 0;
    let mut jump = 0usize;
    let mut sum = 0.0;
    let mut started = false;
    for (t, &d) in m.col_diff.iter().enumerate() {
        col += d;
        if col >= n_cols {
            col -= n_cols;
            if started {
                y[row as usize] += sum;
            }
            row += m.row_jump[jump];
            jump += 1;
            sum = 0.0;
            started = true;
        }
        sum += m.nonzero[t] * x[col as usize];
    }
    y[row as usize] += sum;
    Ok(())
}

/// CSR augmented with a list of non-empty row indices (GCSR). Provided as a
/// storage alternative to ICSR behind the same multi-SpMxV contract.
#[derive(Debug, Clone, PartialEq)]
pub struct GcsrMatrix {
    pub csr: CsrMatrix,
    pub nonempty_rows: Vec<usize>,
}

impl GcsrMatrix {
    pub fn from_csr(csr: CsrMatrix) -> GcsrMatrix {
        let nonempty_rows = (0..csr.n_rows).filter(|&i| !csr.row_range(i).is_empty()).collect();
        GcsrMatrix { csr, nonempty_rows }
    }
}

pub fn spmv_gcsr_accumulate(m: &GcsrMatrix, x: &[f64], y: &mut [f64]) -> Result<()> {
    if x.len() != m.csr.n_cols || y.len() != m.csr.n_rows {
        return Err(Error::DimensionMismatch("gcsr part dimensions".into()));
    }
    for &i in &m.nonempty_rows {
        let mut sum = 0.0;
        for t in m.csr.row_range(i) {
            sum += m.csr.nonzero[t] * x[m.csr.col_index[t]];
        }
        y[i] += sum;
    }
    Ok(())
}

/// A splitting's parts in ICSR storage, sharing global dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiMatrix {
    pub n_rows: usize,
    pub n_cols: usize,
    pub parts: Vec<IcsrMatrix>,
}

impl MultiMatrix {
    pub fn new(parts: Vec<IcsrMatrix>) -> Result<MultiMatrix> {
        let (n_rows, n_cols) = match parts.first() {
            Some(p) => (p.n_rows, p.n_cols),
            None => return Err(Error::InvalidData("multi-matrix needs at least one part".into())),
        };
        if parts.iter().any(|p| p.n_rows != n_rows || p.n_cols != n_cols) {
            return Err(Error::DimensionMismatch("multi-matrix parts disagree on dimensions".into()));
        }
        Ok(MultiMatrix { n_rows, n_cols, parts })
    }
}

/// y <- 0; y <- y + A^k x for k = 1..K in part order.
pub fn spmv_multi(mm: &MultiMatrix, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != mm.n_cols {
        return Err(Error::DimensionMismatch(format!(
            "x has length {}, matrix has {} columns",
            x.len(),
            mm.n_cols
        )));
    }
    let mut y = vec![0.0; mm.n_rows];
    for part in &mm.parts {
        spmv_icsr_accumulate(part, x, &mut y)?;
    }
    Ok(y)
}

pub fn spmv_multi_gcsr(parts: &[GcsrMatrix], x: &[f64]) -> Result<Vec<f64>> {
    let n_rows = parts.first().map(|p| p.csr.n_rows).unwrap_or(0);
    let mut y = vec![0.0; n_rows];
    for part in parts {
        spmv_gcsr_accumulate(part, x, &mut y)?;
    }
    Ok(y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VectorFormat {
    /// Little-endian raw f64.
    Raw,
    /// One value per line.
    Text,
}

pub fn read_vector(path: &Path, format: VectorFormat) -> Result<Vec<f64>> {
    match format {
        VectorFormat::Raw => {
            let mut bytes = Vec::new();
            std::fs::File::open(path)?.read_to_end(&mut bytes)?;
            if bytes.len() % 8 != 0 {
                return Err(Error::InvalidData("raw vector length not a multiple of 8".into()));
            }
            Ok(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
        }
        VectorFormat::Text => {
            let f = std::io::BufReader::new(std::fs::File::open(path)?);
            let mut out = Vec::new();
            for (idx, line) in f.lines().enumerate() {
                let line = line?;
                let t = line.trim();
                if t.is_empty() {
                    continue;
                }
                out.push(t.parse::<f64>().map_err(|_| Error::parse(idx + 1, "malformed value"))?);
            }
            Ok(out)
        }
    }
}

pub fn write_vector(path: &Path, v: &[f64], format: VectorFormat) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    match format {
        VectorFormat::Raw => {
            for &x in v {
                f.write_all(&x.to_le_bytes())?;
            }
        }
        VectorFormat::Text => {
            for &x in v {
                writeln!(f, "{x:.17e}")?;
            }
        }
    }
    Ok(())
}
