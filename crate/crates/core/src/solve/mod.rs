//! Exact exponential-time oracles for desk-scale ground truth.
//!
//! Every oracle enforces a hard size cap and refuses larger inputs with
//! [`Error::SizeCap`](crate::Error::SizeCap) rather than running unbounded.
//! Branching orders are fixed so witnesses are reproducible.

mod coloring;
mod csp;
mod hamilton;
mod mis;
mod subset_sum;

pub use coloring::{chromatic_number, is_k_colorable, CHROMATIC_CAP, COLORING_CAP};
pub use csp::{max_csp_value, max_satisfied, MAX_CSP_VARS};
pub use hamilton::{has_hamiltonian_cycle, is_hamiltonian_cycle, HamStrategy, HAM_BACKTRACK_CAP, HAM_DP_CAP};
pub use mis::{max_independent_set, min_vertex_cover, MIS_CAP};
pub use subset_sum::{subset_sum_decide, SsStrategy, MITM_CAP, PRUNED_STATE_CAP};

use crate::error::{Error, Result};

/// An optimum (or decision) value plus an optional certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult<V, W> {
    pub value: V,
    pub witness: Option<W>,
}

impl<V, W> SolveResult<V, W> {
    pub fn new(value: V, witness: Option<W>) -> Self {
        SolveResult { value, witness }
    }
}

pub(crate) fn check_cap(what: &'static str, actual: usize, limit: usize) -> Result<()> {
    if actual > limit {
        return Err(Error::SizeCap { what, limit, actual });
    }
    Ok(())
}
