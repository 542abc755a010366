//! p-adic analysis in finite Eisenstein towers: exact-valuation arithmetic,
//! the exponential, logarithm and binomial p-th root with their strict
//! convergence domains, Gauss norms on restricted power series, and the
//! rank-one small correspondence between (Picard log point, Higgs field)
//! pairs and small characters.

pub mod combinatorics;
pub mod element;
pub mod error;
pub mod linalg;
pub mod literal;
pub mod sample;
pub mod series;
pub mod simpson;
pub mod suite;
pub mod tate;
pub mod tower;
pub mod valuation;

pub use element::Element;
pub use error::{Error, Result};
pub use tower::Tower;
pub use valuation::Valuation;
