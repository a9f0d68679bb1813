//! Empirical checks of the deterministic bounds and high-probability claims.
//!
//! Every "large enough constant" is swept over a caller-supplied grid and
//! each grid point gets its own frequency summary.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use super::par_trials;
use super::stats::FrequencySummary;
use crate::error::{Error, Result};
use crate::instances::{CspInstance, Graph};
use crate::percolate::{clause_percolate, edge_percolate, trial_seed, variable_percolate, Mode, PercolationSpec};
use crate::reduce::blowup_graph;
use crate::solve::{check_cap, max_csp_value, max_independent_set};
use crate::Rational;

/// Largest graph whose vertex subsets are all enumerated by [`check_turan_bound`].
pub const TURAN_SUBSET_CAP: usize = 20;
/// Largest side of `K_{R,R}` accepted by [`check_krr_lemma`].
pub const KRR_CAP: usize = 64;

fn count(flags: impl Iterator<Item = bool>) -> u64 {
    flags.filter(|&b| b).count() as u64
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuranReport {
    pub vertices: usize,
    pub edges: usize,
    pub alpha: usize,
    /// `l^2 / (2e + l)`, zero for the empty graph.
    pub bound: Rational,
    pub slack: Rational,
    pub holds: bool,
    /// Vertex sets of size `l >= k = alpha + 1` spanning fewer than
    /// `l(l-k)/2k` edges. Always zero for a correct oracle.
    pub edge_count_violations: usize,
}

/// Independence number against the Turán bound, and the edge count of every
/// vertex subset of size at least `alpha + 1`.
pub fn check_turan_bound(g: &Graph) -> Result<TuranReport> {
    if g.is_directed() {
        return Err(Error::param("the Turán bound needs an undirected graph"));
    }
    check_cap("Turán subset enumeration vertices", g.vertex_count(), TURAN_SUBSET_CAP)?;
    let l = g.vertex_count();
    let e = g.edge_count();
    let alpha = max_independent_set(g)?.value;
    let bound = if l == 0 {
        Rational::from_integer(0.into())
    } else {
        Rational::new((l * l).into(), (2 * e + l).into())
    };
    let alpha_q = Rational::from_integer(alpha.into());
    let k = alpha + 1;
    let adj = g.adjacency_masks();
    let mut violations = 0;
    for set in 0u64..1 << l {
        let size = set.count_ones() as usize;
        if size < k {
            continue;
        }
        let twice_edges: usize = (0..l)
            .filter(|&v| set >> v & 1 == 1)
            .map(|v| (adj[v] & set).count_ones() as usize)
            .sum();
        // e(S) >= l(l-k)/2k  <=>  2k e(S) >= l(l-k), with twice_edges = 2 e(S).
        if k * twice_edges < size * (size - k) {
            violations += 1;
        }
    }
    Ok(TuranReport {
        vertices: l,
        edges: e,
        alpha,
        holds: alpha_q >= bound,
        slack: &alpha_q - &bound,
        bound,
        edge_count_violations: violations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub constant: f64,
    pub threshold: f64,
    /// How often the measured quantity exceeded `threshold`.
    pub exceedances: FrequencySummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaPercolationReport {
    pub alpha: usize,
    pub samples: Vec<usize>,
    pub points: Vec<SweepPoint>,
    /// Smallest swept `A` whose exceedance frequency is below 5%.
    pub empirical_a: Option<f64>,
}

/// Samples `alpha(G_{p,e})` and compares it with `A (alpha/p) ln(np)` for
/// each `A` in `grid`.
pub fn check_alpha_percolation(
    g: &Graph,
    p: f64,
    trials: u64,
    seed: u64,
    grid: &[f64],
) -> Result<AlphaPercolationReport> {
    let alpha = max_independent_set(g)?.value;
    let template = PercolationSpec::new(Mode::Edge, p, seed, 0)?;
    let samples = par_trials(trials, |t| {
        let (h, _) = edge_percolate(g, &template.with_trial(t))?;
        Ok(max_independent_set(&h)?.value)
    })?;
    let scale = alpha as f64 / p * (g.vertex_count() as f64 * p).ln();
    let points: Vec<SweepPoint> = grid
        .iter()
        .map(|&a| {
            let threshold = a * scale;
            let over = count(samples.iter().map(|&s| s as f64 > threshold));
            SweepPoint {
                constant: a,
                threshold,
                exceedances: FrequencySummary::new(over, trials),
            }
        })
        .collect();
    let empirical_a = points
        .iter()
        .filter(|pt| pt.exceedances.estimate < 0.05)
        .map(|pt| pt.constant)
        .reduce(f64::min);
    Ok(AlphaPercolationReport {
        alpha,
        samples,
        points,
        empirical_a,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrrPoint {
    pub constant: f64,
    /// `ceil(C ln R / p)`, at least 1.
    pub threshold: usize,
    /// Trials with an independent set meeting both sides in `threshold` vertices.
    pub bad: FrequencySummary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KrrReport {
    pub r: usize,
    pub p: f64,
    /// `R^-3`.
    pub bound: f64,
    /// Per trial, the largest `b` with an independent `b + b` set across the sides.
    pub balanced: Vec<usize>,
    pub points: Vec<KrrPoint>,
}

/// Largest `b` such that some `b` vertices of `A` have `b` common
/// non-neighbours in `B`. `non_adj[i]` is the non-neighbourhood of `A_i`.
fn max_balanced_biclique(non_adj: &[u64]) -> usize {
    fn go(non_adj: &[u64], next: usize, size: usize, common: u64, best: &mut usize) {
        let here = size.min(common.count_ones() as usize);
        *best = (*best).max(here);
        for i in next..non_adj.len() {
            let reach = (size + non_adj.len() - i).min(common.count_ones() as usize);
            if reach <= *best {
                return;
            }
            go(non_adj, i + 1, size + 1, common & non_adj[i], best);
        }
    }
    let full = if non_adj.len() == 64 {
        u64::MAX
    } else {
        (1u64 << non_adj.len()) - 1
    };
    let mut best = 0;
    go(non_adj, 0, 0, full, &mut best);
    best
}

/// Edge-percolates `K_{R,R}` and records how often an independent set
/// meets both sides in `ceil(C ln R / p)` vertices, for each `C` in `grid`.
pub fn check_krr_lemma(r: usize, p: f64, trials: u64, seed: u64, grid: &[f64]) -> Result<KrrReport> {
    check_cap("K_RR side", r, KRR_CAP)?;
    if r < 1 {
        return Err(Error::param("K_RR needs R >= 1"));
    }
    let krr = Graph::undirected(2 * r, (1..=r).flat_map(|a| (r + 1..=2 * r).map(move |b| (a, b))))?;
    let template = PercolationSpec::new(Mode::Edge, p, seed, 0)?;
    let balanced = par_trials(trials, |t| {
        let (h, _) = edge_percolate(&krr, &template.with_trial(t))?;
        let side = if r == 64 { u64::MAX } else { (1u64 << r) - 1 };
        let mut non_adj = vec![side; r];
        for &(a, b) in h.edges() {
            non_adj[a - 1] &= !(1u64 << (b - r - 1));
        }
        Ok(max_balanced_biclique(&non_adj))
    })?;
    let points = grid
        .iter()
        .map(|&c| {
            let threshold = if p > 0.0 {
                ((c * (r as f64).ln() / p).ceil() as usize).max(1)
            } else {
                usize::MAX
            };
            let bad = count(balanced.iter().map(|&b| b >= threshold));
            KrrPoint {
                constant: c,
                threshold,
                bad: FrequencySummary::new(bad, trials),
            }
        })
        .collect();
    Ok(KrrReport {
        r,
        p,
        bound: (r as f64).powi(-3),
        balanced,
        points,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VcSandwichReport {
    pub alpha: usize,
    pub r: usize,
    /// `alpha` of each percolated blowup.
    pub samples: Vec<usize>,
    /// Trials with `alpha(blowup) < alpha(G) R`. Edge deletion cannot cause this.
    pub lower_violations: u64,
    /// Upper bound `alpha(G) R + (C ln R / p) N` per swept `C`.
    pub points: Vec<SweepPoint>,
}

pub fn check_vc_sandwich(
    g: &Graph,
    r: usize,
    p: f64,
    trials: u64,
    seed: u64,
    grid: &[f64],
) -> Result<VcSandwichReport> {
    let alpha = max_independent_set(g)?.value;
    let blowup = blowup_graph(g, r)?.instance;
    let template = PercolationSpec::new(Mode::Edge, p, seed, 0)?;
    let samples = par_trials(trials, |t| {
        let (h, _) = edge_percolate(&blowup, &template.with_trial(t))?;
        Ok(max_independent_set(&h)?.value)
    })?;
    let base = alpha * r;
    let lower_violations = count(samples.iter().map(|&s| s < base));
    let points = grid
        .iter()
        .map(|&c| {
            let threshold = base as f64 + c * (r as f64).ln() / p * g.vertex_count() as f64;
            let over = count(samples.iter().map(|&s| s as f64 > threshold));
            SweepPoint {
                constant: c,
                threshold,
                exceedances: FrequencySummary::new(over, trials),
            }
        })
        .collect();
    Ok(VcSandwichReport {
        alpha,
        r,
        samples,
        lower_violations,
        points,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValConcentrationReport {
    pub val: Rational,
    pub samples: Vec<Rational>,
    /// Trials with `|val(percolated) - val| >= epsilon`.
    pub deviations: FrequencySummary,
    /// Trials where a satisfiable formula lost satisfiability; always zero.
    pub one_sided_violations: u64,
}

/// Exact value of each clause- or variable-percolated formula against the
/// value of `f`.
pub fn check_val_concentration(
    f: &CspInstance,
    mode: Mode,
    p: f64,
    epsilon: &Rational,
    trials: u64,
    seed: u64,
) -> Result<ValConcentrationReport> {
    if !matches!(mode, Mode::Clause | Mode::Variable) {
        return Err(Error::param(format!(
            "value concentration needs clause or variable percolation, got {mode}"
        )));
    }
    let val = max_csp_value(f)?.value;
    let template = PercolationSpec::new(mode, p, seed, 0)?;
    let samples = par_trials(trials, |t| {
        let spec = template.with_trial(t);
        let (h, _) = match mode {
            Mode::Clause => clause_percolate(f, &spec)?,
            _ => variable_percolate(f, &spec)?,
        };
        Ok(max_csp_value(&h)?.value)
    })?;
    let deviations = count(samples.iter().map(|s| {
        let d = if s >= &val { s - &val } else { &val - s };
        &d >= epsilon
    }));
    let one = Rational::from_integer(1.into());
    let one_sided_violations = if val == one {
        count(samples.iter().map(|s| s != &one))
    } else {
        0
    };
    Ok(ValConcentrationReport {
        val,
        samples,
        deviations: FrequencySummary::new(deviations, trials),
        one_sided_violations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChernoffReport {
    /// Largest `|X_j - pn|` over the `m` groups, per trial.
    pub max_deviation: Vec<f64>,
    /// `m^-3`.
    pub bound: f64,
    /// Threshold `sqrt(C p n ln m)` per swept `C`. A zero deviation never
    /// counts as an exceedance, so `p` in `{0, 1}` gives frequency zero.
    pub points: Vec<SweepPoint>,
}

/// Draws `m` sums of `n` Bernoulli(`p`) variables per trial.
pub fn check_chernoff(n: u64, p: f64, m: u64, trials: u64, seed: u64, grid: &[f64]) -> Result<ChernoffReport> {
    if m < 1 {
        return Err(Error::param("need at least one group"));
    }
    let binomial = Binomial::new(n, p).map_err(|e| Error::param(format!("binomial({n}, {p}): {e}")))?;
    let mean = n as f64 * p;
    let max_deviation = par_trials(trials, |t| {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t));
        Ok((0..m)
            .map(|_| (binomial.sample(&mut rng) as f64 - mean).abs())
            .fold(0.0, f64::max))
    })?;
    let points = grid
        .iter()
        .map(|&c| {
            let threshold = (c * mean * (m as f64).ln()).sqrt();
            let over = count(max_deviation.iter().map(|&d| d > 0.0 && d >= threshold));
            SweepPoint {
                constant: c,
                threshold,
                exceedances: FrequencySummary::new(over, trials),
            }
        })
        .collect();
    Ok(ChernoffReport {
        max_deviation,
        bound: (m as f64).powi(-3),
        points,
    })
}
