use super::experiment::{summarize, TrialReport};
use crate::error::{Error, Result};

/// CSV with header `trial,seed,survivors,verdict,detail`, one row per trial
/// and, when there are trials, a final
/// `summary,,,<successes>/<trials>,<wilson_lo>:<wilson_hi>` row.
pub fn report_csv(reports: &[TrialReport]) -> Result<String> {
    let io = |e: csv::Error| Error::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["trial", "seed", "survivors", "verdict", "detail"])
        .map_err(io)?;
    for r in reports {
        w.write_record([
            r.trial.to_string(),
            r.seed.to_string(),
            r.survivors.to_string(),
            r.verdict.to_string(),
            r.detail.clone(),
        ])
        .map_err(io)?;
    }
    if !reports.is_empty() {
        let s = summarize(reports);
        w.write_record([
            "summary".to_string(),
            String::new(),
            String::new(),
            format!("{}/{}", s.successes, s.trials),
            format!("{:.6}:{:.6}", s.lower, s.upper),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}
