//! Gnowee: a hybrid metaheuristic for mixed-integer, combinatorial and
//! continuous design optimization.

pub mod benchmarks;
pub mod definition;
pub mod engine;
pub mod error;
pub mod harness;
pub mod levy;
pub mod operators;
pub mod problem;
pub mod quadrature;
pub mod space;

pub use error::{Error, Result};
