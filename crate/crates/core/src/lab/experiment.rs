use std::fmt;
use std::path::Path;
use std::str::FromStr;

use super::par_trials;
use super::stats::FrequencySummary;
use crate::decode::{ham_cycle_project, majority_color_decode, subset_sum_lift, DecodeContext, LiftOutcome};
use crate::error::{Error, Result};
use crate::instances::{parse_instance, CspInstance, Format, Graph, Instance, SubsetSumInstance};
use crate::percolate::{
    clause_percolate, edge_percolate, item_percolate, variable_percolate, vertex_percolate, Mode, PercolationSpec,
    SurvivorMap,
};
use crate::reduce::{
    blowup_graph, coloring_blowup, csp_cloud_blowup, ham_gadget, minimal_c_prime, subset_sum_gadget, CloudKind,
    CloudMap, GadgetCheck,
};
use crate::solve::{
    has_hamiltonian_cycle, is_k_colorable, max_csp_value, max_independent_set, max_satisfied, min_vertex_cover,
    subset_sum_decide, HamStrategy, SsStrategy,
};
use crate::Rational;
use num_bigint::BigInt;
use num_traits::Zero;

/// Construction applied to the original before percolation.
#[derive(Debug, Clone, PartialEq)]
pub enum Reduction {
    None,
    Blowup {
        r: usize,
    },
    Coloring {
        c: f64,
    },
    Ham {
        r: usize,
    },
    CspBlowup {
        r: usize,
    },
    SubsetSumGadget {
        r: usize,
        c_prime: Option<u32>,
        check: GadgetCheck,
    },
}

/// The YES event whose frequency an experiment estimates.
#[derive(Debug, Clone, PartialEq)]
pub enum Property {
    /// The percolated instance is `q`-colourable.
    Colorable(usize),
    /// `q`-colourable, and majority decoding of the oracle's colouring is a
    /// legal colouring of the original.
    ColorableDecoded(usize),
    AlphaAtLeast(usize),
    VcAtMost(usize),
    /// Hamiltonian; with the gadget reduction the oracle's cycle must also
    /// project to a cycle of the original.
    Hamiltonian,
    ValAtLeast(Rational),
    /// `|val(percolated) - val(original)| < epsilon`.
    ValWithin(Rational),
    /// More than `v * |reduced formula|` clauses simultaneously satisfiable.
    /// Deleting clauses or variables never raises this count, so a reduced
    /// formula with `val <= v` stays NO under any percolation.
    SatCountAbove(Rational),
    SsFeasible,
    /// The zero-sum lift of an original witness succeeds on the percolated gadget.
    SsLift,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Colorable(q) => write!(f, "colorable:{q}"),
            Property::ColorableDecoded(q) => write!(f, "colorable_decoded:{q}"),
            Property::AlphaAtLeast(a) => write!(f, "alpha_ge:{a}"),
            Property::VcAtMost(b) => write!(f, "vc_le:{b}"),
            Property::Hamiltonian => f.write_str("hamiltonian"),
            Property::ValAtLeast(v) => write!(f, "val_ge:{v}"),
            Property::ValWithin(e) => write!(f, "val_within:{e}"),
            Property::SatCountAbove(v) => write!(f, "sat_count_above:{v}"),
            Property::SsFeasible => f.write_str("ss_feasible"),
            Property::SsLift => f.write_str("ss_lift"),
        }
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        let need = || arg.ok_or_else(|| Error::param(format!("property {name} needs an argument")));
        let count = |a: &str| {
            a.parse::<usize>()
                .map_err(|_| Error::param(format!("invalid count {a:?}")))
        };
        let prop = match name {
            "colorable" => Property::Colorable(count(need()?)?),
            "colorable_decoded" => Property::ColorableDecoded(count(need()?)?),
            "alpha_ge" => Property::AlphaAtLeast(count(need()?)?),
            "vc_le" => Property::VcAtMost(count(need()?)?),
            "val_ge" => Property::ValAtLeast(parse_rational(need()?)?),
            "val_within" => Property::ValWithin(parse_rational(need()?)?),
            "sat_count_above" => Property::SatCountAbove(parse_rational(need()?)?),
            "hamiltonian" | "ss_feasible" | "ss_lift" if arg.is_some() => {
                return Err(Error::param(format!("property {name} takes no argument")))
            }
            "hamiltonian" => Property::Hamiltonian,
            "ss_feasible" => Property::SsFeasible,
            "ss_lift" => Property::SsLift,
            _ => return Err(Error::param(format!("unknown property {s:?}"))),
        };
        Ok(prop)
    }
}

/// Exact rational from `a/b`, an integer or a finite decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::param(format!("invalid rational {s:?}"));
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if !frac.chars().all(|c| c.is_ascii_digit()) || int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(Rational::new(digits, BigInt::from(10u32).pow(frac.len() as u32)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Yes,
    No,
    DecodeFail,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::DecodeFail => "decode-fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrialReport {
    pub trial: u64,
    pub seed: u64,
    /// Surviving elements of the percolated kind.
    pub survivors: usize,
    pub verdict: Verdict,
    /// Property-specific measurement, e.g. `alpha=7` or `val=3/4`.
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub name: String,
    pub original: Instance,
    pub reduction: Reduction,
    /// Template; each trial substitutes its own index.
    pub percolation: PercolationSpec,
    pub property: Property,
    pub trials: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Undirected,
    Directed,
    Csp,
    SubsetSum,
}

fn kind_of(inst: &Instance) -> Kind {
    match inst {
        Instance::Graph(g) if g.is_directed() => Kind::Directed,
        Instance::Graph(_) => Kind::Undirected,
        Instance::Csp(_) => Kind::Csp,
        Instance::SubsetSum(_) => Kind::SubsetSum,
    }
}

impl Experiment {
    pub fn new(
        name: impl Into<String>,
        original: Instance,
        reduction: Reduction,
        percolation: PercolationSpec,
        property: Property,
        trials: u64,
    ) -> Result<Self> {
        let e = Experiment {
            name: name.into(),
            original,
            reduction,
            percolation,
            property,
            trials,
        };
        e.validate()?;
        Ok(e)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Description(format!("{}: {msg}", self.name)));
        if self.trials < 1 {
            return bad("trials must be at least 1".into());
        }
        let input = kind_of(&self.original);
        let (needs, produced) = match self.reduction {
            Reduction::None => (input, input),
            Reduction::Blowup { .. } | Reduction::Coloring { .. } => (Kind::Undirected, Kind::Undirected),
            Reduction::Ham { .. } => (Kind::Directed, Kind::Directed),
            Reduction::CspBlowup { .. } => (Kind::Csp, Kind::Csp),
            Reduction::SubsetSumGadget { .. } => (Kind::SubsetSum, Kind::SubsetSum),
        };
        if input != needs {
            return bad(format!(
                "reduction {:?} does not apply to this original",
                self.reduction
            ));
        }
        let mode_ok = match produced {
            Kind::Undirected | Kind::Directed => matches!(self.percolation.mode, Mode::Edge | Mode::Vertex),
            Kind::Csp => matches!(self.percolation.mode, Mode::Clause | Mode::Variable),
            Kind::SubsetSum => self.percolation.mode == Mode::Item,
        };
        if !mode_ok {
            return bad(format!(
                "{} percolation does not apply to the produced instance",
                self.percolation.mode
            ));
        }
        let prop_ok = match self.property {
            Property::Colorable(_) | Property::AlphaAtLeast(_) | Property::VcAtMost(_) => produced == Kind::Undirected,
            Property::ColorableDecoded(_) => produced == Kind::Undirected,
            Property::Hamiltonian => produced == Kind::Directed,
            Property::ValAtLeast(_) | Property::ValWithin(_) | Property::SatCountAbove(_) => produced == Kind::Csp,
            Property::SsFeasible => produced == Kind::SubsetSum,
            Property::SsLift => matches!(self.reduction, Reduction::SubsetSumGadget { .. }),
        };
        if !prop_ok {
            return bad(format!(
                "property {} does not apply to the produced instance",
                self.property
            ));
        }
        Ok(())
    }

    /// Parses a `key = value` description. `original` is a path resolved
    /// against `base`; blank lines and lines starting with `#` are skipped.
    ///
    /// Keys: `name`, `original`, `format` (default: the file extension),
    /// `reduction` (`none`, `blowup`, `coloring`, `ham`, `csp_blowup`,
    /// `ss_gadget`), `R`, `C`, `C_prime`, `gadget_check` (`strict` or
    /// `completeness`), `mode`, `p`, `seed`, `property`, `trials`.
    pub fn from_description(text: &str, base: &Path) -> Result<Self> {
        let mut fields: Vec<(&str, &str, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Description(format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim(), v.trim());
            const KEYS: [&str; 13] = [
                "name",
                "original",
                "format",
                "reduction",
                "R",
                "C",
                "C_prime",
                "gadget_check",
                "mode",
                "p",
                "seed",
                "property",
                "trials",
            ];
            if !KEYS.contains(&k) {
                return Err(Error::Description(format!("line {}: unknown key {k:?}", i + 1)));
            }
            if fields.iter().any(|(seen, _, _)| *seen == k) {
                return Err(Error::Description(format!("line {}: duplicate key {k:?}", i + 1)));
            }
            fields.push((k, v, i + 1));
        }
        let get = |k: &str| fields.iter().find(|(key, _, _)| *key == k).map(|(_, v, _)| *v);
        let require = |k: &str| get(k).ok_or_else(|| Error::Description(format!("missing key {k:?}")));
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::Description(format!("invalid value {v:?} for {key}")))
        }
        let desc = |e: Error| Error::Description(e.to_string());

        let path = base.join(require("original")?);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::Description(format!("reading {}: {e}", path.display())))?;
        let format: Format = match get("format") {
            Some(f) => f.parse().map_err(desc)?,
            None => Format::infer(&path, &text)
                .ok_or_else(|| Error::Description(format!("cannot infer the format of {}", path.display())))?,
        };
        let original = parse_instance(&text, format)?;

        let r = || -> Result<usize> { num("R", require("R")?) };
        let reduction = match get("reduction").unwrap_or("none") {
            "none" => Reduction::None,
            "blowup" => Reduction::Blowup { r: r()? },
            "coloring" => Reduction::Coloring {
                c: num("C", require("C")?)?,
            },
            "ham" => Reduction::Ham { r: r()? },
            "csp_blowup" => Reduction::CspBlowup { r: r()? },
            "ss_gadget" => Reduction::SubsetSumGadget {
                r: r()?,
                c_prime: get("C_prime").map(|v| num("C_prime", v)).transpose()?,
                check: match get("gadget_check").unwrap_or("strict") {
                    "strict" => GadgetCheck::Strict,
                    "completeness" => GadgetCheck::CompletenessOnly,
                    other => return Err(Error::Description(format!("unknown gadget_check {other:?}"))),
                },
            },
            other => return Err(Error::Description(format!("unknown reduction {other:?}"))),
        };
        let mode: Mode = require("mode")?.parse().map_err(desc)?;
        let percolation =
            PercolationSpec::new(mode, num("p", require("p")?)?, num("seed", require("seed")?)?, 0).map_err(desc)?;
        Experiment::new(
            require("name")?,
            original,
            reduction,
            percolation,
            require("property")?.parse().map_err(desc)?,
            num("trials", require("trials")?)?,
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Description(format!("reading {}: {e}", path.display())))?;
        Experiment::from_description(&text, path.parent().unwrap_or(Path::new(".")))
    }
}

/// Everything computed once before the trials.
struct Prepared {
    produced: Instance,
    clouds: CloudMap,
    original_witness: Option<Vec<usize>>,
    original_val: Option<Rational>,
}

fn identity_clouds(inst: &Instance) -> CloudMap {
    let (kind, n) = match inst {
        Instance::Graph(g) => (CloudKind::Vertex, g.vertex_count()),
        Instance::Csp(f) => (CloudKind::Variable, f.n_vars()),
        Instance::SubsetSum(s) => (CloudKind::Item, s.len()),
    };
    CloudMap::contiguous(kind, n, 1, 0)
}

fn prepare(e: &Experiment) -> Result<Prepared> {
    let (produced, clouds): (Instance, CloudMap) = match (&e.reduction, &e.original) {
        (Reduction::None, inst) => (inst.clone(), identity_clouds(inst)),
        (Reduction::Blowup { r }, Instance::Graph(g)) => {
            let out = blowup_graph(g, *r)?;
            (out.instance.into(), out.clouds)
        }
        (Reduction::Coloring { c }, Instance::Graph(g)) => {
            let out = coloring_blowup(g, *c)?;
            (out.instance.into(), out.clouds)
        }
        (Reduction::Ham { r }, Instance::Graph(g)) => {
            let out = ham_gadget(g, *r)?;
            (out.instance.into(), out.clouds)
        }
        (Reduction::CspBlowup { r }, Instance::Csp(f)) => {
            let out = csp_cloud_blowup(f, *r)?;
            (out.instance.into(), out.variables)
        }
        (Reduction::SubsetSumGadget { r, c_prime, check }, Instance::SubsetSum(s)) => {
            let c = match c_prime {
                Some(c) => *c,
                None => minimal_c_prime(s, *r)?,
            };
            let out = subset_sum_gadget(s, *r, c, *check)?;
            (out.instance.into(), out.clouds)
        }
        _ => {
            return Err(Error::Description(format!(
                "{}: reduction does not fit the original",
                e.name
            )))
        }
    };
    let original_witness = match (&e.property, &e.original) {
        (Property::SsLift, Instance::SubsetSum(s)) => {
            let r = subset_sum_decide(s, SsStrategy::Pruned)?;
            Some(
                r.witness
                    .ok_or_else(|| Error::Description(format!("{}: the lift needs a YES original", e.name)))?,
            )
        }
        _ => None,
    };
    let original_val = match (&e.property, &e.original) {
        (Property::ValWithin(_), Instance::Csp(f)) => Some(max_csp_value(f)?.value),
        _ => None,
    };
    Ok(Prepared {
        produced,
        clouds,
        original_witness,
        original_val,
    })
}

enum Percolated {
    Graph(Graph),
    Csp(CspInstance),
    SubsetSum(SubsetSumInstance),
}

fn percolate(produced: &Instance, spec: &PercolationSpec) -> Result<(Percolated, SurvivorMap)> {
    Ok(match (produced, spec.mode) {
        (Instance::Graph(g), Mode::Edge) => {
            let (h, s) = edge_percolate(g, spec)?;
            (Percolated::Graph(h), s)
        }
        (Instance::Graph(g), Mode::Vertex) => {
            let (h, s) = vertex_percolate(g, spec)?;
            (Percolated::Graph(h), s)
        }
        (Instance::Csp(f), Mode::Clause) => {
            let (h, s) = clause_percolate(f, spec)?;
            (Percolated::Csp(h), s)
        }
        (Instance::Csp(f), Mode::Variable) => {
            let (h, s) = variable_percolate(f, spec)?;
            (Percolated::Csp(h), s)
        }
        (Instance::SubsetSum(x), Mode::Item) => {
            let (h, s) = item_percolate(x, spec)?;
            (Percolated::SubsetSum(h), s)
        }
        (_, mode) => {
            return Err(Error::ModeMismatch {
                expected: "a mode matching the produced instance".into(),
                got: mode.to_string(),
            })
        }
    })
}

fn yes_no(b: bool) -> Verdict {
    if b {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn evaluate(e: &Experiment, prep: &Prepared, perc: &Percolated, surv: &SurvivorMap) -> Result<(Verdict, String)> {
    let mismatch = || Error::Description(format!("{}: property does not fit the produced instance", e.name));
    match (&e.property, perc) {
        (Property::Colorable(q), Percolated::Graph(h)) => {
            let ok = is_k_colorable(h, *q)?.value;
            Ok((yes_no(ok), String::new()))
        }
        (Property::ColorableDecoded(q), Percolated::Graph(h)) => {
            let Some(c) = is_k_colorable(h, *q)?.witness else {
                return Ok((Verdict::No, "not colorable".into()));
            };
            let original = e.original.as_graph().ok_or_else(mismatch)?;
            let ctx = DecodeContext::new(&prep.clouds, original).with_survivors(surv);
            match majority_color_decode(&c, &ctx) {
                Ok(d) if d.is_legal_for(original) => Ok((Verdict::Yes, String::new())),
                Ok(_) => Ok((Verdict::DecodeFail, "decoded colouring is illegal".into())),
                Err(Error::Decode(msg)) => Ok((Verdict::DecodeFail, msg)),
                Err(err) => Err(err),
            }
        }
        (Property::AlphaAtLeast(a), Percolated::Graph(h)) => {
            let alpha = max_independent_set(h)?.value;
            Ok((yes_no(alpha >= *a), format!("alpha={alpha}")))
        }
        (Property::VcAtMost(b), Percolated::Graph(h)) => {
            let vc = min_vertex_cover(h)?.value;
            Ok((yes_no(vc <= *b), format!("vc={vc}")))
        }
        (Property::Hamiltonian, Percolated::Graph(h)) => {
            let r = has_hamiltonian_cycle(h, HamStrategy::Auto)?;
            let Some(cycle) = r.witness else {
                return Ok((Verdict::No, String::new()));
            };
            if let Reduction::Ham { .. } = e.reduction {
                let original = e.original.as_graph().ok_or_else(mismatch)?;
                let ctx = DecodeContext::new(&prep.clouds, original).with_survivors(surv);
                if let Err(err) = ham_cycle_project(&cycle, &ctx) {
                    return Ok((Verdict::DecodeFail, err.to_string()));
                }
            }
            Ok((Verdict::Yes, String::new()))
        }
        (Property::ValAtLeast(v), Percolated::Csp(f)) => {
            let val = max_csp_value(f)?.value;
            Ok((yes_no(&val >= v), format!("val={val}")))
        }
        (Property::ValWithin(eps), Percolated::Csp(f)) => {
            let val = max_csp_value(f)?.value;
            let target = prep.original_val.as_ref().ok_or_else(mismatch)?;
            let dev = if &val >= target { &val - target } else { target - &val };
            Ok((yes_no(&dev < eps), format!("val={val}")))
        }
        (Property::SatCountAbove(v), Percolated::Csp(f)) => {
            let (count, _) = max_satisfied(f)?;
            let total = prep.produced.as_csp().ok_or_else(mismatch)?.clause_count();
            let bound = v * Rational::from_integer(total.into());
            Ok((
                yes_no(Rational::from_integer(count.into()) > bound),
                format!("satisfied={count}"),
            ))
        }
        (Property::SsFeasible, Percolated::SubsetSum(s)) => {
            let ok = subset_sum_decide(s, SsStrategy::Pruned)?.value;
            Ok((yes_no(ok), String::new()))
        }
        (Property::SsLift, Percolated::SubsetSum(s)) => {
            let original = e.original.as_subset_sum().ok_or_else(mismatch)?;
            let witness = prep.original_witness.as_ref().ok_or_else(mismatch)?;
            let ctx = DecodeContext::new(&prep.clouds, original).with_survivors(surv);
            match subset_sum_lift(witness, &ctx)? {
                LiftOutcome::Success(w) if s.is_witness(&w) => Ok((Verdict::Yes, String::new())),
                LiftOutcome::Success(_) => Ok((Verdict::DecodeFail, "lifted items miss the target".into())),
                LiftOutcome::Failure { pair: (a, b) } => Ok((Verdict::No, format!("pair={a}:{b}"))),
            }
        }
        _ => Err(mismatch()),
    }
}

fn run_trial(e: &Experiment, prep: &Prepared, trial: u64) -> Result<TrialReport> {
    let spec = e.percolation.with_trial(trial);
    let (perc, surv) = percolate(&prep.produced, &spec)?;
    let (verdict, detail) = evaluate(e, prep, &perc, &surv)?;
    Ok(TrialReport {
        trial,
        seed: spec.trial_seed(),
        survivors: surv.kept_count(),
        verdict,
        detail,
    })
}

/// Runs every trial (in parallel) and summarizes how often the property held.
/// Output depends only on the experiment, not on scheduling.
pub fn run_experiment(e: &Experiment) -> Result<(FrequencySummary, Vec<TrialReport>)> {
    e.validate()?;
    let prep = prepare(e)?;
    let reports = par_trials(e.trials, |t| run_trial(e, &prep, t))?;
    Ok((summarize(&reports), reports))
}

/// Frequency of `yes` verdicts.
pub fn summarize(reports: &[TrialReport]) -> FrequencySummary {
    let yes = reports.iter().filter(|r| r.verdict == Verdict::Yes).count();
    FrequencySummary::new(yes as u64, reports.len() as u64)
}
