//! Geometric phases of open bipartite quantum systems along quantum
//! trajectories.
//!
//! Everything is generic over the real scalar type (`f32` or `f64`); the
//! aliases below fix it to `f64`.

// `!(a > b)` is used on purpose so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::type_complexity)]

pub mod error;
pub mod linalg;
pub mod open_system;
pub mod phase;
pub mod scalar;
pub mod spin;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Complex64 = num_complex::Complex<f64>;
pub type Matrix = linalg::ComplexMatrix<f64>;
pub type State = linalg::BipartiteState<f64>;
pub type Eigensystem = linalg::BiorthogonalEigensystem<f64>;
pub type Schmidt = linalg::SchmidtDecomposition<f64>;
pub type Model<X> = open_system::LindbladModel<f64, X>;
pub type Report = phase::PhaseReport<f64>;
pub type Split = phase::SubsystemPhaseSplit<f64>;
pub type Params = spin::ModelParams<f64>;
pub type Branch = spin::AnalyticBranch<f64>;
