//! Monte Carlo harness: experiments, bound checks, generators and reports.

mod checks;
mod experiment;
pub mod generate;
mod report;
mod stats;

pub use checks::{
    check_alpha_percolation, check_chernoff, check_krr_lemma, check_turan_bound, check_val_concentration,
    check_vc_sandwich, AlphaPercolationReport, ChernoffReport, KrrPoint, KrrReport, SweepPoint, TuranReport,
    ValConcentrationReport, VcSandwichReport, KRR_CAP, TURAN_SUBSET_CAP,
};
pub use experiment::{
    parse_rational, run_experiment, summarize, Experiment, Property, Reduction, TrialReport, Verdict,
};
pub use report::report_csv;
pub use stats::{wilson_interval, FrequencySummary, Z95};

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Runs `f` on every trial index in parallel. Results come back in trial
/// order and the reported error is the one with the smallest index.
pub(crate) fn par_trials<T: Send>(trials: u64, f: impl Fn(u64) -> Result<T> + Sync) -> Result<Vec<T>> {
    (0..trials)
        .into_par_iter()
        .map(|t| {
            f(t).map_err(|err| Error::Trial {
                trial: t,
                source: Box::new(err),
            })
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}
