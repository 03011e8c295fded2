//! Sparse and dense linear algebra for the solver: symmetric CSR storage,
//! an envelope LDL^T direct factorization with reverse Cuthill-McKee
//! reordering, preconditioned conjugate gradients with a Lanczos condition
//! number harvest, and a dense symmetric eigensolver used as the independent
//! oracle for those estimates.

pub mod dense;
pub mod factor;
pub mod pcg;
pub mod sparse;

pub use dense::{dense_spectrum, preconditioned_spectrum, tridiag_extreme_eigs, DenseMat};
pub use factor::{reverse_cuthill_mckee, Factorization};
pub use pcg::{lanczos_condition, pcg, PcgOptions, SolveStats};
pub use sparse::{LinearOp, SparseSym};
