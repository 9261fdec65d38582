//! Dense complex linear algebra for small Hilbert spaces.

pub mod eig;
pub mod hermitian;
pub mod matrix;
pub mod schmidt;
pub mod state;

pub use eig::{eig_general, BiorthogonalEigensystem};
pub use hermitian::{eigh, HermitianEigen};
pub use matrix::{vector, ComplexMatrix};
pub use schmidt::{schmidt, SchmidtDecomposition};
pub use state::{partial_trace, BipartiteState, Subsystem};
