//! Matrix Market coordinate-format reader and writer.
//!
//! Supports real/integer/pattern fields with general, symmetric or
//! skew-symmetric structure. Symmetric inputs are expanded to full storage,
//! pattern values are set to 1.0, duplicates are summed, and 1-based indices
//! become 0-based.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use super::triplet::TripletMatrix;

pub fn read_matrix_market(path: &Path) -> Result<TripletMatrix> {
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    parse_matrix_market(f)
}

pub fn parse_matrix_market<R: BufRead>(reader: R) -> Result<TripletMatrix> {
    let mut lines = reader.lines().enumerate();

    let (_, banner) = lines.next().ok_or_else(|| Error::parse(1, "empty file"))?;
    let banner = banner?;
    let fields: Vec<String> = banner.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if fields.len() < 5 || fields[0] != "%%matrixmarket" || fields[1] != "matrix" {
        return Err(Error::parse(1, "malformed MatrixMarket banner"));
    }
    if fields[2] != "coordinate" {
        return Err(Error::parse(1, format!("unsupported format `{}` (only coordinate)", fields[2])));
    }
    let field = fields[3].as_str();
    if !matches!(field, "real" | "integer" | "pattern") {
        return Err(Error::parse(1, format!("unsupported field type `{field}`")));
    }
    let pattern = field == "pattern";
    let symmetry = fields[4].as_str();
    if !matches!(symmetry, "general" | "symmetric" | "skew-symmetric") {
        return Err(Error::parse(1, format!("unsupported symmetry `{symmetry}`")));
    }

    // size line: first non-comment, non-blank line
    let (mut n_rows, mut n_cols, mut declared_nnz) = (0usize, 0usize, 0usize);
    let mut have_size = false;
    let mut data_lines = 0usize;
    let mut entries: Vec<(usize, usize, f64)> = Vec::new();
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut tok = trimmed.split_whitespace();
        if !have_size {
            n_rows = parse_tok(tok.next(), lineno, "row count")?;
            n_cols = parse_tok(tok.next(), lineno, "column count")?;
            declared_nnz = parse_tok(tok.next(), lineno, "nonzero count")?;
            have_size = true;
            entries.reserve(declared_nnz);
            continue;
        }
        let r: usize = parse_tok(tok.next(), lineno, "row index")?;
        let c: usize = parse_tok(tok.next(), lineno, "column index")?;
        let v = if pattern {
            1.0
        } else {
            tok.next()
                .ok_or_else(|| Error::parse(lineno, "missing value"))?
                .parse::<f64>()
                .map_err(|_| Error::parse(lineno, "malformed value"))?
        };
        if r == 0 || c == 0 || r > n_rows || c > n_cols {
            return Err(Error::parse(
                lineno,
                format!("index ({r}, {c}) outside declared bounds {n_rows}x{n_cols}"),
            ));
        }
        entries.push((r - 1, c - 1, v));
        data_lines += 1;
        if symmetry != "general" && r != c {
            let mirrored = if symmetry == "skew-symmetric" { -v } else { v };
            entries.push((c - 1, r - 1, mirrored));
        }
    }
    if !have_size {
        return Err(Error::parse(2, "missing size line"));
    }
    if data_lines != declared_nnz {
        return Err(Error::parse(
            0,
            format!("size line declares {declared_nnz} entries, found {data_lines}"),
        ));
    }
    TripletMatrix::new(n_rows, n_cols, entries)
}

fn parse_tok(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("malformed {what}")))
}

/// Writes general real coordinate format, 1-based.
pub fn write_matrix_market(m: &TripletMatrix, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    writeln!(f, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(f, "{} {} {}", m.n_rows, m.n_cols, m.nnz())?;
    for &(r, c, v) in &m.entries {
        writeln!(f, "{} {} {:.17e}", r + 1, c + 1, v)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn parse(text: &str) -> Result<TripletMatrix> {
        parse_matrix_market(Cursor::new(text))
    }

    #[test]
    fn single_entry() {
        let m = parse("%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 5.0\n").unwrap();
        assert_eq!(m.n_rows, 1);
        assert_eq!(m.n_cols, 1);
        assert_eq!(m.entries, vec![(0, 0, 5.0)]);
    }

    #[test]
    fn duplicates_summed() {
        let m = parse("%%MatrixMarket matrix coordinate real general\n1 1 2\n1 1 2.0\n1 1 3.0\n")
            .unwrap();
        assert_eq!(m.entries, vec![(0, 0, 5.0)]);
    }

    #[test]
    fn symmetric_expanded() {
        let m = parse(
            "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.0\n2 1 3.0\n",
        )
        .unwrap();
        assert_eq!(m.entries, vec![(0, 0, 1.0), (0, 1, 3.0), (1, 0, 3.0)]);
    }

    #[test]
    fn pattern_values_are_one() {
        let m = parse("%%MatrixMarket matrix coordinate pattern general\n2 2 1\n2 1\n").unwrap();
        assert_eq!(m.entries, vec![(1, 0, 1.0)]);
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let m = parse(
            "%%MatrixMarket matrix coordinate real general\n% a comment\n\n2 3 1\n1 3 -1.5\n",
        )
        .unwrap();
        assert_eq!(m.entries, vec![(0, 2, -1.5)]);
    }

    #[test]
    fn bad_header_names_line() {
        match parse("%%MatrixMarket matrix array real general\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn out_of_bounds_index_names_line() {
        match parse("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn write_read_round_trip() {
        let m = TripletMatrix::new(3, 2, vec![(0, 1, 1.25), (2, 0, -4.0)]).unwrap();
        let dir = std::env::temp_dir().join("spmvl-mm-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("rt.mtx");
        write_matrix_market(&m, &path).unwrap();
        let back = read_matrix_market(&path).unwrap();
        assert_eq!(back, m);
    }
}
