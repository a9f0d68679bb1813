//! Percolation-robust reductions: constructions, random deletion, exact
//! oracles, decoders and a Monte Carlo harness.

pub mod decode;
pub mod error;
pub mod instances;
pub mod lab;
pub mod percolate;
pub mod reduce;
pub mod solve;

pub use error::{Error, Result};
pub use instances::{Assignment, Clause, Coloring, CspInstance, Format, Graph, Instance, SubsetSumInstance};
pub use percolate::{Mode, PercolationSpec, SurvivorMap};
pub use reduce::{CloudKind, CloudMap, ReductionOutput, ReductionParams};

/// Exact rational used for CSP values.
pub type Rational = num_rational::BigRational;
