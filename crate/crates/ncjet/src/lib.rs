//! Exact computations with first-order differential calculi, jets and
//! linear differential operators over finite-dimensional algebras.

pub mod algebra;
pub mod calculus;
pub mod cli;
pub mod diffops;
pub mod error;
pub mod exterior;
pub mod homology;
pub mod io;
pub mod jets;
pub mod linalg;
pub mod report;

pub use error::{Error, Result};
