//! Hypergraph models of sparse matrices.
//!
//! Four builders: the column-net model (vertex per row, net per column),
//! its transpose the row-net model, the fine-grain row-column-net model
//! (vertex per nonzero, nets per row and per column), and the enhanced
//! variant in which row nets carry the cut-net metric with cost nnz(r_i).
//!
//! Vertex weights are storage bytes so that recursive bisection can stop on
//! a cache-size threshold directly.

use std::io::{BufRead, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::storage::submatrix_bytes;
use crate::matrix::TripletMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetMetric {
    /// Contributes cost * (lambda - 1) to the cutsize.
    Connectivity,
    /// Contributes cost once when cut.
    CutNet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetTag {
    Row(usize),
    Col(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Net {
    pub pins: Vec<usize>,
    pub cost: u64,
    pub metric: NetMetric,
    pub tag: NetTag,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexOrigin {
    Row(usize),
    Col(usize),
    /// Index into the canonical row-major nonzero order.
    Nonzero(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hypergraph {
    pub n_vertices: usize,
    pub vertex_weight: Vec<u64>,
    pub nets: Vec<Net>,
    pub origin: Vec<VertexOrigin>,
}

impl Hypergraph {
    pub fn total_weight(&self) -> u64 {
        self.vertex_weight.iter().sum()
    }

    pub fn n_pins(&self) -> usize {
        self.nets.iter().map(|n| n.pins.len()).sum()
    }
}

/// Vertex per row, net per nonempty column, unit cost, connectivity metric.
pub fn build_column_net(m: &TripletMatrix) -> Result<Hypergraph> {
    if m.nnz() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let row_counts = m.row_counts();
    let vertex_weight = row_counts
        .iter()
        .map(|&nnz| submatrix_bytes(nnz as u64, 1, nnz as u64))
        .collect();
    let mut pins_per_col: Vec<Vec<usize>> = vec![Vec::new(); m.n_cols];
    for &(r, c, _) in &m.entries {
        pins_per_col[c].push(r);
    }
    let nets = pins_per_col
        .into_iter()
        .enumerate()
        .filter(|(_, pins)| !pins.is_empty())
        .map(|(j, mut pins)| {
            pins.dedup(); // a (row, col) pair appears once; entries are sorted by row
            Net { pins, cost: 1, metric: NetMetric::Connectivity, tag: NetTag::Col(j) }
        })
        .collect();
    Ok(Hypergraph {
        n_vertices: m.n_rows,
        vertex_weight,
        nets,
        origin: (0..m.n_rows).map(VertexOrigin::Row).collect(),
    })
}

/// Vertex per column, net per nonempty row: the column-net model of the
/// transpose.
pub fn build_row_net(m: &TripletMatrix) -> Result<Hypergraph> {
    let t = m.transpose();
    let mut h = build_column_net(&t)?;
    for net in &mut h.nets {
        if let NetTag::Col(j) = net.tag {
            net.tag = NetTag::Row(j);
        }
    }
    h.origin = (0..m.n_cols).map(VertexOrigin::Col).collect();
    Ok(h)
}

/// Fine-grain model: vertex per nonzero (12 bytes), a net per nonempty row
/// and per nonempty column, all unit-cost connectivity nets. Total pins are
/// 2 * nnz.
pub fn build_row_column_net(m: &TripletMatrix) -> Result<Hypergraph> {
    if m.nnz() == 0 {
        return Err(Error::EmptyMatrix);
    }
    let mut pins_per_row: Vec<Vec<usize>> = vec![Vec::new(); m.n_rows];
    let mut pins_per_col: Vec<Vec<usize>> = vec![Vec::new(); m.n_cols];
    for (t, &(r, c, _)) in m.entries.iter().enumerate() {
        pins_per_row[r].push(t);
        pins_per_col[c].push(t);
    }
    let mut nets = Vec::new();
    for (i, pins) in pins_per_row.into_iter().enumerate() {
        if !pins.is_empty() {
            nets.push(Net { pins, cost: 1, metric: NetMetric::Connectivity, tag: NetTag::Row(i) });
        }
    }
    for (j, pins) in pins_per_col.into_iter().enumerate() {
        if !pins.is_empty() {
            nets.push(Net { pins, cost: 1, metric: NetMetric::Connectivity, tag: NetTag::Col(j) });
        }
    }
    Ok(Hypergraph {
        n_vertices: m.nnz(),
        vertex_weight: vec![12; m.nnz()],
        nets,
        origin: (0..m.nnz()).map(VertexOrigin::Nonzero).collect(),
    })
}

/// Same vertices and pins as the plain row-column-net model, but row nets
/// carry the cut-net metric with cost nnz(r_i) while column nets stay
/// unit-cost connectivity nets.
pub fn build_enhanced_row_column_net(m: &TripletMatrix) -> Result<Hypergraph> {
    let mut h = build_row_column_net(m)?;
    for net in &mut h.nets {
        if let NetTag::Row(_) = net.tag {
            net.metric = NetMetric::CutNet;
            net.cost = net.pins.len() as u64;
        }
    }
    Ok(h)
}

/// Dumps in hMetis-style text: header `nets vertices fmt`, one pin line per
/// net (1-based), then one vertex weight per line.
pub fn write_hmetis(h: &Hypergraph, path: &Path) -> Result<()> {
    let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
    // fmt 11: net costs and vertex weights both present
    writeln!(f, "{} {} 11", h.nets.len(), h.n_vertices)?;
    for net in &h.nets {
        write!(f, "{}", net.cost)?;
        for &p in &net.pins {
            write!(f, " {}", p + 1)?;
        }
        writeln!(f)?;
    }
    for &w in &h.vertex_weight {
        writeln!(f, "{w}")?;
    }
    Ok(())
}

/// Parses the hMetis-style format written by [`write_hmetis`]; fmt 0 (no
/// weights), 1 (net costs), 10 (vertex weights) and 11 are accepted.
pub fn read_hmetis(path: &Path) -> Result<Hypergraph> {
    let f = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut lines = f.lines().enumerate().filter_map(|(i, l)| match l {
        Ok(s) if s.trim().is_empty() || s.trim_start().starts_with('%') => None,
        other => Some((i + 1, other)),
    });
    let (lineno, header) = lines.next().ok_or_else(|| Error::parse(1, "empty hypergraph file"))?;
    let header = header?;
    let mut tok = header.split_whitespace();
    let n_nets: usize = next_num(&mut tok, lineno, "net count")?;
    let n_vertices: usize = next_num(&mut tok, lineno, "vertex count")?;
    let fmt: usize = match tok.next() {
        Some(s) => s.parse().map_err(|_| Error::parse(lineno, "malformed fmt"))?,
        None => 0,
    };
    let has_net_costs = fmt % 10 == 1;
    let has_vertex_weights = fmt / 10 == 1;
    let mut nets = Vec::with_capacity(n_nets);
    for i in 0..n_nets {
        let (lineno, line) = lines.next().ok_or_else(|| Error::parse(0, "missing net line"))?;
        let line = line?;
        let mut tok = line.split_whitespace();
        let cost: u64 = if has_net_costs { next_num(&mut tok, lineno, "net cost")? as u64 } else { 1 };
        let mut pins = Vec::new();
        for t in tok {
            let p: usize = t.parse().map_err(|_| Error::parse(lineno, "malformed pin"))?;
            if p == 0 || p > n_vertices {
                return Err(Error::parse(lineno, format!("pin {p} out of range")));
            }
            pins.push(p - 1);
        }
        nets.push(Net { pins, cost, metric: NetMetric::Connectivity, tag: NetTag::Row(i) });
    }
    let mut vertex_weight = vec![1u64; n_vertices];
    if has_vertex_weights {
        for w in vertex_weight.iter_mut() {
            let (lineno, line) = lines.next().ok_or_else(|| Error::parse(0, "missing weight line"))?;
            *w = line?
                .trim()
                .parse()
                .map_err(|_| Error::parse(lineno, "malformed vertex weight"))?;
        }
    }
    Ok(Hypergraph {
        n_vertices,
        vertex_weight,
        nets,
        origin: (0..n_vertices).map(VertexOrigin::Row).collect(),
    })
}

fn next_num<'a>(
    tok: &mut impl Iterator<Item = &'a str>,
    line: usize,
    what: &str,
) -> Result<usize> {
    tok.next()
        .ok_or_else(|| Error::parse(line, format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::parse(line, format!("malformed {what}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity3() -> TripletMatrix {
        TripletMatrix::new(3, 3, vec![(0, 0, 1.0), (1, 1, 1.0), (2, 2, 1.0)]).unwrap()
    }

    #[test]
    fn column_net_of_identity() {
        let h = build_column_net(&identity3()).unwrap();
        assert_eq!(h.n_vertices, 3);
        assert_eq!(h.nets.len(), 3);
        assert!(h.nets.iter().all(|n| n.pins.len() == 1 && n.cost == 1));
        assert_eq!(h.n_pins(), 3); // sum of pin counts = nnz
    }

    #[test]
    fn dense_column_has_full_pin_set() {
        let m = TripletMatrix::new(
            4,
            4,
            (0..4).map(|r| (r, 1, 1.0)).collect(),
        )
        .unwrap();
        let h = build_column_net(&m).unwrap();
        assert_eq!(h.nets.len(), 1);
        assert_eq!(h.nets[0].pins, vec![0, 1, 2, 3]);
        assert_eq!(h.nets[0].tag, NetTag::Col(1));
    }

    #[test]
    fn empty_column_has_no_net() {
        let m = TripletMatrix::new(2, 2, vec![(0, 0, 1.0), (1, 0, 1.0)]).unwrap();
        let h = build_column_net(&m).unwrap();
        assert_eq!(h.nets.len(), 1);
        assert_eq!(h.nets[0].pins, vec![0, 1]);
    }

    #[test]
    fn row_net_is_transpose_of_column_net() {
        let m = TripletMatrix::new(2, 3, vec![(0, 0, 1.0), (0, 2, 1.0), (1, 2, 1.0)]).unwrap();
        let h = build_row_net(&m).unwrap();
        let ht = build_column_net(&m.transpose()).unwrap();
        assert_eq!(h.n_vertices, 3);
        assert_eq!(h.nets.len(), ht.nets.len());
        for (a, b) in h.nets.iter().zip(&ht.nets) {
            assert_eq!(a.pins, b.pins);
        }
    }

    #[test]
    fn row_column_net_sizes() {
        let h = build_row_column_net(&identity3()).unwrap();
        assert_eq!(h.n_vertices, 3);
        assert_eq!(h.nets.len(), 6);
        assert_eq!(h.n_pins(), 6); // 2 * nnz
        assert!(h.vertex_weight.iter().all(|&w| w == 12));
    }

    #[test]
    fn single_nonzero_fine_grain() {
        let m = TripletMatrix::new(1, 1, vec![(0, 0, 1.0)]).unwrap();
        let h = build_row_column_net(&m).unwrap();
        assert_eq!(h.n_vertices, 1);
        assert_eq!(h.nets.len(), 2);
        assert_eq!(h.n_pins(), 2);
    }

    #[test]
    fn cross_shaped_pin_counts() {
        // center row 1 holds 3 nonzeros, plus one above and one below in col 1
        let m = TripletMatrix::new(
            3,
            3,
            vec![(0, 1, 1.0), (1, 0, 1.0), (1, 1, 1.0), (1, 2, 1.0), (2, 1, 1.0)],
        )
        .unwrap();
        let h = build_row_column_net(&m).unwrap();
        assert_eq!(h.n_pins(), 10);
        let center_row = h.nets.iter().find(|n| n.tag == NetTag::Row(1)).unwrap();
        assert_eq!(center_row.pins.len(), 3);
    }

    #[test]
    fn enhanced_row_net_costs() {
        let m = TripletMatrix::new(
            2,
            5,
            vec![(0, 0, 1.0), (0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0), (0, 4, 1.0), (1, 0, 1.0)],
        )
        .unwrap();
        let h = build_enhanced_row_column_net(&m).unwrap();
        let row0 = h.nets.iter().find(|n| n.tag == NetTag::Row(0)).unwrap();
        assert_eq!(row0.cost, 5);
        assert_eq!(row0.metric, NetMetric::CutNet);
        let col0 = h.nets.iter().find(|n| n.tag == NetTag::Col(0)).unwrap();
        assert_eq!(col0.cost, 1);
        assert_eq!(col0.metric, NetMetric::Connectivity);
        // row-net costs account for all nonzeros
        let total: u64 = h
            .nets
            .iter()
            .filter(|n| matches!(n.tag, NetTag::Row(_)))
            .map(|n| n.cost)
            .sum();
        assert_eq!(total, m.nnz() as u64);
    }

    #[test]
    fn enhanced_differs_only_in_row_net_fields() {
        let m = TripletMatrix::new(3, 3, vec![(0, 0, 1.0), (0, 1, 1.0), (2, 1, 1.0)]).unwrap();
        let plain = build_row_column_net(&m).unwrap();
        let enh = build_enhanced_row_column_net(&m).unwrap();
        assert_eq!(plain.nets.len(), enh.nets.len());
        for (p, e) in plain.nets.iter().zip(&enh.nets) {
            assert_eq!(p.pins, e.pins);
            assert_eq!(p.tag, e.tag);
            if matches!(p.tag, NetTag::Col(_)) {
                assert_eq!(p, e);
            }
        }
    }

    #[test]
    fn hmetis_round_trip() {
        let h = build_column_net(&identity3()).unwrap();
        let dir = std::env::temp_dir().join("spmvl-hg-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("h.hgr");
        write_hmetis(&h, &path).unwrap();
        let back = read_hmetis(&path).unwrap();
        assert_eq!(back.n_vertices, h.n_vertices);
        assert_eq!(back.vertex_weight, h.vertex_weight);
        for (a, b) in back.nets.iter().zip(&h.nets) {
            assert_eq!(a.pins, b.pins);
            assert_eq!(a.cost, b.cost);
        }
    }
}
