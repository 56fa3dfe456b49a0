//! Exact computer algebra for kappa-Minkowski realizations, the kappa-Poincare
//! Hopf algebra and its bicovariant differential calculus.

// Index loops mirror the tensor formulas.
#![allow(clippy::needless_range_loop)]

pub mod calculus;
pub mod catalog;
pub mod config;
pub mod dsl;
pub mod error;
pub mod export;
pub mod hopf;
pub mod realization;
pub mod report;
pub mod scalar;
pub mod series;
pub mod suite;
pub mod tensor;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::GaussScalar;
pub use series::TruncSeries;
pub use weyl::{AlgElement, Context, NormalMonomial, Parity};
