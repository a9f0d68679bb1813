use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest produced instance the planner will propose.
pub const PLAN_SIZE_CAP: f64 = 1e7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theorem {
    Coloring,
    VcEdge,
    VcVertex,
    Ham,
    CspClause,
    CspVariable,
    SubsetSum,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::Coloring,
        Theorem::VcEdge,
        Theorem::VcVertex,
        Theorem::Ham,
        Theorem::CspClause,
        Theorem::CspVariable,
        Theorem::SubsetSum,
    ];

    fn name(self) -> &'static str {
        match self {
            Theorem::Coloring => "coloring",
            Theorem::VcEdge => "vc_edge",
            Theorem::VcVertex => "vc_vertex",
            Theorem::Ham => "ham",
            Theorem::CspClause => "csp_clause",
            Theorem::CspVariable => "csp_variable",
            Theorem::SubsetSum => "subset_sum",
        }
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::param(format!("unknown theorem {s:?}")))
    }
}

/// Inputs to [`plan_parameters`]. `n` is the original size (vertices,
/// variables or items).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanInput {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub k: usize,
    /// The unspecified "large enough" constant `C`.
    pub c: f64,
}

impl PlanInput {
    pub fn new(n: usize, p: f64) -> Self {
        PlanInput {
            n,
            p,
            epsilon: 0.5,
            delta: 0.5,
            k: 3,
            c: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReductionParams {
    pub r: usize,
    pub c: f64,
    pub c_prime: Option<u32>,
    pub epsilon: f64,
    pub delta: f64,
    pub p: f64,
    /// `c = ln(p n) / ln n` (or its subset-sum variant) at the chosen `R`,
    /// where `n` is the produced size.
    pub achieved_c: Option<f64>,
}

fn exponent(p: f64, n: f64, sqrt: bool) -> f64 {
    let pn = if sqrt { p * n.sqrt() } else { p * n };
    pn.ln() / n.ln()
}

/// Smallest `r >= 1` with `ok(r)`, assuming the feasible set is upward closed;
/// `None` once `size(r)` passes the cap.
fn smallest_feasible(size: impl Fn(usize) -> f64, ok: impl Fn(usize) -> bool) -> Option<usize> {
    let mut hi = 1usize;
    while !ok(hi) {
        if size(hi) > PLAN_SIZE_CAP {
            return None;
        }
        hi *= 2;
    }
    let mut lo = hi / 2; // infeasible (or 0)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (size(hi) <= PLAN_SIZE_CAP).then_some(hi)
}

/// Chooses `R` for a theorem: the smallest integer satisfying its inequality,
/// where `c` depends on the produced size and so on `R` itself.
pub fn plan_parameters(theorem: Theorem, input: PlanInput) -> Result<ReductionParams> {
    let PlanInput {
        n,
        p,
        epsilon,
        delta,
        k,
        c,
    } = input;
    if n < 1 {
        return Err(Error::param("original size must be at least 1"));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::param(format!("p = {p} must lie in (0, 1]")));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::param(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::param(format!("delta = {delta} must be positive")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param(format!("constant C = {c} must be positive")));
    }
    let nf = n as f64;
    let mut params = ReductionParams {
        r: 1,
        c,
        c_prime: None,
        epsilon,
        delta,
        p,
        achieved_c: None,
    };
    let infeasible = || {
        Error::Infeasible(format!(
            "{theorem}: no R keeps the produced size below {PLAN_SIZE_CAP:e} for N = {n}, p = {p}"
        ))
    };

    match theorem {
        Theorem::Coloring => {
            params.r = crate::reduce::coloring_blowup_factor(n, c)?;
            return Ok(params);
        }
        Theorem::CspClause => {
            if k < 1 {
                return Err(Error::param("arity k must be at least 1"));
            }
            let r = nf.powf(k as f64 / delta).ceil();
            if nf * r > PLAN_SIZE_CAP {
                return Err(infeasible());
            }
            params.r = (r as usize).max(1);
            return Ok(params);
        }
        _ => {}
    }
    if p == 1.0 {
        params.achieved_c = Some(1.0);
        return Ok(params);
    }

    let size: Box<dyn Fn(usize) -> f64> = match theorem {
        Theorem::Ham => Box::new(move |r| nf * (1.0 + r as f64)),
        Theorem::SubsetSum => Box::new(move |r| 2.0 * nf * (2.0 * r as f64 + 1.0)),
        _ => Box::new(move |r| nf * r as f64),
    };
    let sqrt = theorem == Theorem::SubsetSum;
    let base = match theorem {
        Theorem::VcVertex => nf / (epsilon * epsilon),
        _ => nf,
    };
    let power = if theorem == Theorem::VcEdge { 2.0 } else { 1.0 };
    let floor = match theorem {
        Theorem::VcVertex => c * c * nf.ln() / (epsilon * epsilon * p),
        Theorem::SubsetSum => c * nf.ln() / (p * p),
        _ => 0.0,
    };
    let strict_floor = matches!(theorem, Theorem::VcVertex | Theorem::SubsetSum);
    let ok = |r: usize| {
        let produced = size(r);
        if produced < 2.0 {
            return false;
        }
        let cc = exponent(p, produced, sqrt);
        if cc.is_nan() || cc <= 0.0 {
            return false;
        }
        if theorem == Theorem::CspVariable && cc <= delta {
            return false;
        }
        let rf = r as f64;
        let above_floor = if strict_floor { rf > floor } else { rf >= floor };
        above_floor && rf >= base.powf(power / cc)
    };
    let r = smallest_feasible(&size, ok).ok_or_else(infeasible)?;
    params.r = r;
    params.achieved_c = Some(exponent(p, size(r), sqrt));
    Ok(params)
}
