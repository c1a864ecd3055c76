//! Trace-driven fully associative LRU cache simulator.
//!
//! Traces list every memory access a CSR or multiple-SpMxV ICSR kernel
//! performs, tagged by array class. The simulator counts misses per class;
//! Phi_x and Phi_y are the x- and y-vector miss counts that the reordering
//! methods certify upper bounds for.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::kernels::MultiMatrix;
use crate::matrix::storage::{submatrix_bytes, INDEX_BYTES, VALUE_BYTES};
use crate::matrix::{
    apply_permutations, fits_in_cache, storage_bytes_rows, CsrMatrix, IcsrMatrix, TripletMatrix,
};
use crate::reorder::ReorderResult;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Policy {
    Lru,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheConfig {
    pub capacity_bytes: u64,
    pub line_bytes: u64,
    pub policy: Policy,
}

impl CacheConfig {
    pub fn new(capacity_bytes: u64, line_bytes: u64) -> Result<CacheConfig> {
        if line_bytes < 8 {
            return Err(Error::InvalidConfig("line size must be at least 8 bytes".into()));
        }
        if capacity_bytes == 0 || capacity_bytes % line_bytes != 0 {
            return Err(Error::InvalidConfig("capacity must be a positive multiple of the line size".into()));
        }
        Ok(CacheConfig { capacity_bytes, line_bytes, policy: Policy::Lru })
    }

    pub fn n_lines(&self) -> usize {
        (self.capacity_bytes / self.line_bytes) as usize
    }
}

/// Array classes of the SpMxV working set. `ColIndex` covers colDiff and
/// `RowStart` covers rowJump in ICSR traces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ArrayClass {
    Nonzero,
    ColIndex,
    RowStart,
    X,
    Y,
}

pub const ARRAY_CLASSES: [ArrayClass; 5] = [
    ArrayClass::Nonzero,
    ArrayClass::ColIndex,
    ArrayClass::RowStart,
    ArrayClass::X,
    ArrayClass::Y,
];

impl ArrayClass {
    pub fn index(self) -> usize {
        match self {
            ArrayClass::Nonzero => 0,
            ArrayClass::ColIndex => 1,
            ArrayClass::RowStart => 2,
            ArrayClass::X => 3,
            ArrayClass::Y => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ArrayClass::Nonzero => "nonzero",
            ArrayClass::ColIndex => "colIndex",
            ArrayClass::RowStart => "rowStart",
            ArrayClass::X => "x",
            ArrayClass::Y => "y",
        }
    }
}

/// One access: absolute byte address (arrays live in disjoint, 64-byte
/// aligned regions) plus the class the address belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Access {
    pub class: ArrayClass,
    pub addr: u64,
    pub size: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MissCounts {
    pub misses: [u64; 5],
    pub accesses: [u64; 5],
}

impl MissCounts {
    pub fn phi_x(&self) -> u64 {
        self.misses[ArrayClass::X.index()]
    }

    pub fn phi_y(&self) -> u64 {
        self.misses[ArrayClass::Y.index()]
    }

    pub fn phi(&self) -> u64 {
        self.phi_x() + self.phi_y()
    }

    pub fn total_misses(&self) -> u64 {
        self.misses.iter().sum()
    }
}

fn align64(x: u64) -> u64 {
    (x + 63) & !63
}

/// Address regions for one CSR matrix plus the shared x and y vectors.
struct Layout {
    nonzero: u64,
    col_index: u64,
    row_start: u64,
    x: u64,
    y: u64,
}

fn csr_layout(m: &CsrMatrix) -> Layout {
    let mut cursor = 0u64;
    let mut place = |bytes: u64| {
        let base = cursor;
        cursor = align64(cursor + bytes);
        base
    };
    Layout {
        nonzero: place(VALUE_BYTES * m.nnz() as u64),
        col_index: place(INDEX_BYTES * m.nnz() as u64),
        row_start: place(INDEX_BYTES * (m.n_rows as u64 + 1)),
        x: place(VALUE_BYTES * m.n_cols as u64),
        y: place(VALUE_BYTES * m.n_rows as u64),
    }
}

/// Access trace of the CSR kernel: per row the two rowStart reads, then per
/// nonzero the value, column index and x entry, then one y store per row
/// (the row sum lives in a register until then).
pub fn trace_csr(m: &CsrMatrix) -> Vec<Access> {
    let l = csr_layout(m);
    let mut trace = Vec::with_capacity(3 * m.nnz() + 3 * m.n_rows);
    for i in 0..m.n_rows {
        let i64_ = i as u64;
        trace.push(Access { class: ArrayClass::RowStart, addr: l.row_start + INDEX_BYTES * i64_, size: INDEX_BYTES as u32 });
        trace.push(Access { class: ArrayClass::RowStart, addr: l.row_start + INDEX_BYTES * (i64_ + 1), size: INDEX_BYTES as u32 });
        for t in m.row_range(i) {
            let t64 = t as u64;
            trace.push(Access { class: ArrayClass::Nonzero, addr: l.nonzero + VALUE_BYTES * t64, size: VALUE_BYTES as u32 });
            trace.push(Access { class: ArrayClass::ColIndex, addr: l.col_index + INDEX_BYTES * t64, size: INDEX_BYTES as u32 });
            trace.push(Access { class: ArrayClass::X, addr: l.x + VALUE_BYTES * m.col_index[t] as u64, size: VALUE_BYTES as u32 });
        }
        trace.push(Access { class: ArrayClass::Y, addr: l.y + VALUE_BYTES * i64_, size: VALUE_BYTES as u32 });
    }
    trace
}

/// Concatenated ICSR traces of the parts: per part, each nonzero reads the
/// value, colDiff entry and x entry; each nonempty row reads its rowJump
/// entry and touches its y entry once (read-modify-write, one line access).
/// x and y are shared across parts, matrix arrays are per part.
pub fn trace_multi(mm: &MultiMatrix) -> Vec<Access> {
    let total_nnz: usize = mm.parts.iter().map(|p| p.nnz()).sum();
    let total_rows: usize = mm.parts.iter().map(|p| p.n_nonempty_rows).sum();
    let mut trace = Vec::with_capacity(3 * total_nnz + 2 * total_rows);

    let mut cursor = 0u64;
    let mut place = |bytes: u64| {
        let base = cursor;
        cursor = align64(cursor + bytes);
        base
    };
    let x_base = place(VALUE_BYTES * mm.n_cols as u64);
    let y_base = place(VALUE_BYTES * mm.n_rows as u64);

    for part in &mm.parts {
        let nonzero_base = place(VALUE_BYTES * part.nnz() as u64);
        let col_diff_base = place(INDEX_BYTES * part.nnz() as u64);
        let row_jump_base = place(INDEX_BYTES * part.row_jump.len() as u64);
        let positions = part.decode_positions();
        let mut prev_row = usize::MAX;
        let mut jumps = 0u64;
        for (t, &(row, col)) in positions.iter().enumerate() {
            if row != prev_row {
                trace.push(Access { class: ArrayClass::RowStart, addr: row_jump_base + INDEX_BYTES * jumps, size: INDEX_BYTES as u32 });
                jumps += 1;
                trace.push(Access { class: ArrayClass::Y, addr: y_base + VALUE_BYTES * row as u64, size: VALUE_BYTES as u32 });
                prev_row = row;
            }
            let t64 = t as u64;
            trace.push(Access { class: ArrayClass::Nonzero, addr: nonzero_base + VALUE_BYTES * t64, size: VALUE_BYTES as u32 });
            trace.push(Access { class: ArrayClass::ColIndex, addr: col_diff_base + INDEX_BYTES * t64, size: INDEX_BYTES as u32 });
            trace.push(Access { class: ArrayClass::X, addr: x_base + VALUE_BYTES * col as u64, size: VALUE_BYTES as u32 });
        }
    }
    trace
}

/// Exact LRU over line-granular addresses; misses classified by array class.
pub fn simulate<'a>(trace: impl IntoIterator<Item = &'a Access>, cc: &CacheConfig) -> MissCounts {
    let n_lines = cc.n_lines();
    let mut counts = MissCounts::default();
    let mut lru = LruSet::new(n_lines);
    for access in trace {
        counts.accesses[access.class.index()] += 1;
        let first = access.addr / cc.line_bytes;
        let last = (access.addr + access.size as u64 - 1) / cc.line_bytes;
        let mut missed = false;
        for line in first..=last {
            if !lru.touch(line) {
                missed = true;
            }
        }
        if missed {
            counts.misses[access.class.index()] += 1;
        }
    }
    counts
}

/// Fixed-capacity LRU set over u64 keys: hash map into an intrusive
/// doubly-linked list of slots.
struct LruSet {
    capacity: usize,
    map: HashMap<u64, usize>,
    keys: Vec<u64>,
    prev: Vec<usize>,
    next: Vec<usize>,
    head: usize, // most recent
    tail: usize, // least recent
}

const NIL: usize = usize::MAX;

impl LruSet {
    fn new(capacity: usize) -> LruSet {
        LruSet {
            capacity,
            map: HashMap::with_capacity(capacity + 1),
            keys: Vec::with_capacity(capacity),
            prev: Vec::with_capacity(capacity),
            next: Vec::with_capacity(capacity),
            head: NIL,
            tail: NIL,
        }
    }

    /// Returns true on a hit. On a miss the key is inserted, evicting the
    /// least recently used key if at capacity.
    fn touch(&mut self, key: u64) -> bool {
        if let Some(&slot) = self.map.get(&key) {
            self.unlink(slot);
            self.push_front(slot);
            return true;
        }
        let slot = if self.keys.len() < self.capacity {
            self.keys.push(key);
            self.prev.push(NIL);
            self.next.push(NIL);
            self.keys.len() - 1
        } else {
            let victim = self.tail;
            self.unlink(victim);
            self.map.remove(&self.keys[victim]);
            self.keys[victim] = key;
            victim
        };
        self.map.insert(key, slot);
        self.push_front(slot);
        false
    }

    fn unlink(&mut self, slot: usize) {
        let (p, n) = (self.prev[slot], self.next[slot]);
        if p != NIL {
            self.next[p] = n;
        } else if self.head == slot {
            self.head = n;
        }
        if n != NIL {
            self.prev[n] = p;
        } else if self.tail == slot {
            self.tail = p;
        }
        self.prev[slot] = NIL;
        self.next[slot] = NIL;
    }

    fn push_front(&mut self, slot: usize) {
        self.prev[slot] = NIL;
        self.next[slot] = self.head;
        if self.head != NIL {
            self.prev[self.head] = slot;
        }
        self.head = slot;
        if self.tail == NIL {
            self.tail = slot;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundReport {
    pub phi_x: u64,
    pub phi_y: u64,
    pub bound_value: u64,
    /// Measured misses within the bound: x misses for permutation-based
    /// results, x+y misses for splittings.
    pub holds: bool,
    /// Bound precondition: every block / part fits in the cache.
    pub fit_ok: bool,
}

/// Simulates the reordered kernel and compares the measured miss counts
/// against the result's bound. A violated bound is a report outcome, not an
/// error. Meant for `line_bytes = 8`, where one x or y entry occupies one
/// line and the simulator counts entry-granular misses.
pub fn check_bounds(result: &ReorderResult, m: &TripletMatrix, cc: &CacheConfig) -> Result<BoundReport> {
    if let Some(splitting) = &result.splitting {
        let parts = splitting.parts(m);
        let fit_ok = parts.iter().all(|p| {
            let bytes = submatrix_bytes(
                p.nnz() as u64,
                p.n_nonempty_rows() as u64,
                p.n_nonempty_cols() as u64,
            );
            fits_in_cache(bytes, cc.capacity_bytes)
        });
        let icsr: Vec<IcsrMatrix> =
            parts.iter().map(|p| IcsrMatrix::from_csr(&CsrMatrix::from_triplet(p))).collect();
        let mm = MultiMatrix::new(icsr)?;
        let counts = simulate(&trace_multi(&mm), cc);
        return Ok(BoundReport {
            phi_x: counts.phi_x(),
            phi_y: counts.phi_y(),
            bound_value: result.bound_value,
            holds: counts.phi() <= result.bound_value,
            fit_ok,
        });
    }
    let bf = result
        .block_form
        .as_ref()
        .ok_or_else(|| Error::InvalidData("result carries neither block form nor splitting".into()))?;
    let csr = CsrMatrix::from_triplet(m);
    // the fit precondition is per diagonal block, on original row ids
    // (permutation does not change a block's storage size); empty rows are
    // excluded since they add nothing to the working set of their block
    let mut block_rows: Vec<Vec<usize>> = vec![Vec::new(); bf.k];
    for (r, &b) in bf.row_block_of.iter().enumerate() {
        if b < bf.k && !csr.row_range(r).is_empty() {
            block_rows[b].push(r);
        }
    }
    let fit_ok = block_rows
        .iter()
        .all(|rows| fits_in_cache(storage_bytes_rows(&csr, rows), cc.capacity_bytes));
    let permuted = apply_permutations(m, &bf.row_perm, &bf.col_perm)?;
    let counts = simulate(&trace_csr(&CsrMatrix::from_triplet(&permuted)), cc);
    Ok(BoundReport {
        phi_x: counts.phi_x(),
        phi_y: counts.phi_y(),
        bound_value: result.bound_value,
        holds: counts.phi_x() <= result.bound_value,
        fit_ok,
    })
}

/// Text dump, one line per access: `class offset_bytes size_bytes`.
pub fn write_trace(trace: &[Access], w: &mut impl std::io::Write) -> Result<()> {
    for a in trace {
        writeln!(w, "{} {} {}", a.class.name(), a.addr, a.size)?;
    }
    Ok(())
}
