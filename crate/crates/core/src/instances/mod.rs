//! Immutable instance types and their text formats.

mod csp;
pub mod format;
mod graph;
mod subset_sum;

pub(crate) use csp::fraction;
pub use csp::{Assignment, Clause, CspInstance};
pub use format::{parse_instance, serialize_instance, Format, Instance};
pub use graph::{Coloring, Graph};
pub use subset_sum::SubsetSumInstance;
