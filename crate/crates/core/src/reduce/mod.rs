//! Robust reductions and their parameter planners.

mod blowup;
mod cloud;
mod csp;
mod ham;
mod params;
mod subset_sum;

pub use blowup::{blowup_graph, coloring_blowup, coloring_blowup_factor};
pub use cloud::{CloudKind, CloudMap, ReductionOutput};
pub use csp::{csp_cloud_blowup, CspBlowup};
pub use ham::ham_gadget;
pub use params::{plan_parameters, PlanInput, ReductionParams, Theorem, PLAN_SIZE_CAP};
pub use subset_sum::{minimal_c_prime, padded_items, subset_sum_gadget, GadgetCheck, GadgetItem, SubsetSumGadget};
