//! Cache-locality reordering for repeated sparse matrix-vector multiplication.
//!
//! The crate turns a sparse matrix into either a row/column reordering with
//! a bordered block-diagonal structure (single-SpMxV framework) or a
//! nonzero-disjoint splitting run as a sequence of accumulating products
//! (multiple-SpMxV framework). Both aim to keep the x- and y-vector working
//! sets inside the cache, and both come with provable upper bounds on the
//! vector miss counts that a trace-driven LRU simulator can verify.
//!
//! Main entry points:
//! * [`matrix`] - triplet/CSR/ICSR representations, Matrix Market I/O,
//!   permutations, block forms, splittings.
//! * [`kernels`] - CSR/ICSR/multi-part SpMxV kernels.
//! * [`hypergraph`] + [`partition`] - the models and the multilevel
//!   recursive-bisection partitioner behind the HP methods.
//! * [`reorder`] - the six methods (`sbfs`, `srcm`, `shp_rn`, `shp_cn`,
//!   `shp_ercn`, `mhp_rcn`).
//! * [`cachesim`] - fully associative LRU simulation and bound checking.

pub mod cachesim;
pub mod error;
pub mod hypergraph;
pub mod kernels;
pub mod matrix;
pub mod partition;
pub mod reorder;
pub mod synth;

pub use error::{Error, Result};
