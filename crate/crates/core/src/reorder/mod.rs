//! End-to-end reordering methods.
//!
//! Single-SpMxV methods produce row/column permutations wrapped in a
//! [`BlockForm`]; the multiple-SpMxV method produces a [`Splitting`]. Every
//! result carries the cache-miss upper bound implied by its block or
//! splitting structure.

mod hp;
mod traversal;

pub use hp::{mhp_rcn, shp_cn, shp_ercn, shp_rn};
pub use traversal::{sbfs, srcm};

use crate::error::{Error, Result};
use crate::matrix::{BlockForm, Permutation, Splitting, TripletMatrix};
use crate::partition::PartitionerConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodKind {
    Identity,
    Sbfs,
    Srcm,
    ShpRn,
    ShpCn,
    ShpErcn,
    MhpRcn,
}

impl MethodKind {
    pub const ALL: [MethodKind; 7] = [
        MethodKind::Identity,
        MethodKind::Sbfs,
        MethodKind::Srcm,
        MethodKind::ShpRn,
        MethodKind::ShpCn,
        MethodKind::ShpErcn,
        MethodKind::MhpRcn,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MethodKind::Identity => "identity",
            MethodKind::Sbfs => "sbfs",
            MethodKind::Srcm => "srcm",
            MethodKind::ShpRn => "shp_rn",
            MethodKind::ShpCn => "shp_cn",
            MethodKind::ShpErcn => "shp_ercn",
            MethodKind::MhpRcn => "mhp_rcn",
        }
    }

    pub fn parse(s: &str) -> Result<MethodKind> {
        MethodKind::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown method `{s}`")))
    }

    /// Methods built on hypergraph partitioning (seed- and cache-dependent).
    pub fn is_hp(self) -> bool {
        matches!(
            self,
            MethodKind::ShpRn | MethodKind::ShpCn | MethodKind::ShpErcn | MethodKind::MhpRcn
        )
    }
}

#[derive(Debug, Clone)]
pub struct ReorderResult {
    pub method: MethodKind,
    /// Present for all single-SpMxV methods.
    pub block_form: Option<BlockForm>,
    /// Present for the multiple-SpMxV method.
    pub splitting: Option<Splitting>,
    /// Upper bound on the x-miss count (single framework) or the x+y miss
    /// count (multiple framework), valid when every block/part fits in cache.
    pub bound_value: u64,
    pub seed: u64,
    pub k: usize,
    /// Accumulated recursive-bisection cutsize; 0 for non-HP methods.
    pub cutsize: i64,
    /// True when recursive bisection could not split some over-cache leaf.
    pub oversized: bool,
}

pub fn reorder(m: &TripletMatrix, method: MethodKind, cfg: &PartitionerConfig) -> Result<ReorderResult> {
    match method {
        MethodKind::Identity => Ok(identity(m)),
        MethodKind::Sbfs => sbfs(m),
        MethodKind::Srcm => srcm(m),
        MethodKind::ShpRn => shp_rn(m, cfg),
        MethodKind::ShpCn => shp_cn(m, cfg),
        MethodKind::ShpErcn => shp_ercn(m, cfg),
        MethodKind::MhpRcn => mhp_rcn(m, cfg),
    }
}

pub fn identity(m: &TripletMatrix) -> ReorderResult {
    k1_result(
        m,
        MethodKind::Identity,
        Permutation::identity(m.n_rows),
        Permutation::identity(m.n_cols),
    )
}

/// Wraps plain permutations in a one-block form. The bound is the K=1 miss
/// bound: one x miss per nonempty column, valid when the matrix fits.
pub(crate) fn k1_result(
    m: &TripletMatrix,
    method: MethodKind,
    row_perm: Permutation,
    col_perm: Permutation,
) -> ReorderResult {
    ReorderResult {
        method,
        block_form: Some(BlockForm::trivial(m.n_rows, m.n_cols, row_perm, col_perm)),
        splitting: None,
        bound_value: m.n_nonempty_cols() as u64,
        seed: 0,
        k: 1,
        cutsize: 0,
        oversized: false,
    }
}
