//! Sparse matrix representations, Matrix Market I/O, permutations, block
//! forms, splittings and storage-size accounting.

pub mod block;
pub mod csr;
pub mod icsr;
pub mod market;
pub mod perm;
pub mod splitting;
pub mod stats;
pub mod storage;
pub mod triplet;

pub use block::{BlockForm, BlockKind};
pub use csr::CsrMatrix;
pub use icsr::IcsrMatrix;
pub use market::{read_matrix_market, write_matrix_market};
pub use perm::{apply_permutations, Permutation};
pub use splitting::{splitting_connectivity, Splitting};
pub use stats::{matrix_stats, AxisStats, MatrixStats};
pub use storage::{fits_in_cache, storage_bytes_nonzeros, storage_bytes_rows};
pub use triplet::TripletMatrix;
