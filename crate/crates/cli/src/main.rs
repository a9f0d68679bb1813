use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use percolab_core::decode::{
    csp_expected_decode, ham_cycle_project, majority_color_decode, subset_sum_lift, threshold_is_decode,
    witness_from_text, witness_to_text, DecodeContext, LiftOutcome,
};
use percolab_core::instances::{parse_instance, serialize_instance, Assignment, Coloring, Format, Instance};
use percolab_core::lab::{generate, report_csv, run_experiment, Experiment};
use percolab_core::percolate::{
    clause_percolate, edge_percolate, item_percolate, variable_percolate, vertex_percolate, Mode, PercolationSpec,
};
use percolab_core::reduce::{
    blowup_graph, coloring_blowup, csp_cloud_blowup, ham_gadget, minimal_c_prime, plan_parameters, subset_sum_gadget,
    CloudMap, GadgetCheck, PlanInput, Theorem,
};
use percolab_core::solve::{
    chromatic_number, has_hamiltonian_cycle, is_k_colorable, max_csp_value, max_independent_set, min_vertex_cover,
    subset_sum_decide, HamStrategy, SsStrategy,
};
use percolab_core::SurvivorMap;

#[derive(Parser)]
#[command(name = "percolab", version, about = "Robust reductions under random deletion")]
struct Cli {
    /// Worker threads for experiments (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random or planted instance.
    Gen(GenArgs),
    /// Apply a construction and write the instance plus its cloud map.
    Reduce(ReduceArgs),
    /// Randomly delete elements and write the survivors.
    Percolate(PercolateArgs),
    /// Run an exact oracle.
    Solve(SolveArgs),
    /// Map a witness of a reduced instance back to the original.
    Decode(DecodeArgs),
    /// Run an experiment description and write the CSV report.
    Experiment(ExperimentArgs),
    /// Choose the blowup factor for a theorem.
    Plan(PlanArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Graph,
    Digraph,
    Planted3col,
    Kcnf,
    Kcsp,
    PlantedSs,
}

#[derive(Args)]
struct GenArgs {
    #[arg(value_enum)]
    kind: GenKind,
    /// Vertices, variables or items.
    #[arg(long)]
    n: usize,
    /// Edge probability.
    #[arg(long, default_value_t = 0.5)]
    q: f64,
    /// Clause count.
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// Clause arity.
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 100)]
    max_item: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write the planted colouring or subset.
    #[arg(long)]
    witness_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Blowup,
    Coloring,
    Ham,
    Csp,
    Ss,
}

#[derive(Args)]
struct ReduceArgs {
    #[arg(value_enum)]
    construction: Construction,
    input: PathBuf,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long = "R")]
    r: Option<usize>,
    #[arg(long = "C")]
    c: Option<f64>,
    #[arg(long = "C-prime")]
    c_prime: Option<u32>,
    /// Skip the `R < N^2` check of the subset-sum gadget.
    #[arg(long)]
    completeness_only: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    cloudmap: Option<PathBuf>,
}

#[derive(Args)]
struct PercolateArgs {
    input: PathBuf,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    mode: Mode,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0)]
    trial: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    survivors: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Problem {
    Colorable,
    Chromatic,
    Mis,
    Vc,
    Ham,
    Maxcsp,
    Ss,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(value_enum)]
    problem: Problem,
    input: PathBuf,
    #[arg(long)]
    format: Option<Format>,
    /// Colour count for `colorable`.
    #[arg(long, default_value_t = 3)]
    q: usize,
    /// Witness file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Majority,
    Threshold,
    CspExpected,
    HamProject,
    SsLift,
}

#[derive(Args)]
struct DecodeArgs {
    #[arg(value_enum)]
    rule: Rule,
    /// Witness of the (percolated) reduced instance, or of the original for `ss-lift`.
    #[arg(long)]
    witness: PathBuf,
    #[arg(long)]
    cloudmap: PathBuf,
    #[arg(long)]
    original: PathBuf,
    #[arg(long)]
    format: Option<Format>,
    #[arg(long)]
    survivors: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    threshold: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    description: PathBuf,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    theorem: Theorem,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: f64,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.5)]
    delta: f64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long = "C", default_value_t = 1.0)]
    c: f64,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn infer_format(path: &Path, text: &str, given: Option<Format>) -> Result<Format> {
    given
        .or_else(|| Format::infer(path, text))
        .ok_or_else(|| anyhow!("cannot infer the format of {}; pass --format", path.display()))
}

fn load(path: &Path, format: Option<Format>) -> Result<Instance> {
    let text = read(path)?;
    let format = infer_format(path, &text, format)?;
    parse_instance(&text, format).with_context(|| format!("parsing {}", path.display()))
}

fn write_instance(path: Option<&Path>, inst: &Instance) -> Result<()> {
    emit(path, &serialize_instance(inst, inst.natural_format())?)
}

fn gen(a: GenArgs) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let (inst, witness): (Instance, Option<String>) = match a.kind {
        GenKind::Graph => (generate::random_graph(a.n, a.q, false, &mut rng)?.into(), None),
        GenKind::Digraph => (generate::random_graph(a.n, a.q, true, &mut rng)?.into(), None),
        GenKind::Planted3col => {
            let (g, c) = generate::planted_3colorable(a.n, a.q, &mut rng)?;
            (g.into(), Some(witness_to_text("planted-coloring", c.colors())))
        }
        GenKind::Kcnf | GenKind::Kcsp => {
            let or = matches!(a.kind, GenKind::Kcnf);
            (generate::random_kcsp(a.n, a.m, a.k, or, &mut rng)?.into(), None)
        }
        GenKind::PlantedSs => {
            let (s, w) = generate::planted_subset_sum(a.n, a.max_item, &mut rng)?;
            (s.into(), Some(witness_to_text("planted-subset", &w)))
        }
    };
    write_instance(a.out.as_deref(), &inst)?;
    if let (Some(path), Some(text)) = (a.witness_out.as_deref(), witness) {
        emit(Some(path), &text)?;
    }
    Ok(())
}

fn reduce(a: ReduceArgs) -> Result<()> {
    let inst = load(&a.input, a.format)?;
    let need_r = || a.r.ok_or_else(|| anyhow!("--R is required"));
    let (out, clouds): (Instance, CloudMap) = match (a.construction, &inst) {
        (Construction::Blowup, Instance::Graph(g)) => {
            let o = blowup_graph(g, need_r()?)?;
            (o.instance.into(), o.clouds)
        }
        (Construction::Coloring, Instance::Graph(g)) => {
            let o = coloring_blowup(g, a.c.ok_or_else(|| anyhow!("--C is required"))?)?;
            eprintln!("R = {}", o.r);
            (o.instance.into(), o.clouds)
        }
        (Construction::Ham, Instance::Graph(g)) => {
            let o = ham_gadget(g, need_r()?)?;
            (o.instance.into(), o.clouds)
        }
        (Construction::Csp, Instance::Csp(f)) => {
            let o = csp_cloud_blowup(f, need_r()?)?;
            (o.instance.into(), o.variables)
        }
        (Construction::Ss, Instance::SubsetSum(s)) => {
            let r = need_r()?;
            let c = match a.c_prime {
                Some(c) => c,
                None => minimal_c_prime(s, r)?,
            };
            let check = if a.completeness_only {
                GadgetCheck::CompletenessOnly
            } else {
                GadgetCheck::Strict
            };
            let o = subset_sum_gadget(s, r, c, check)?;
            eprintln!("C' = {c}, N' = {}, items = {}", o.n_prime, o.instance.len());
            (o.instance.into(), o.clouds)
        }
        _ => bail!("this construction does not apply to the input instance"),
    };
    write_instance(a.out.as_deref(), &out)?;
    if let Some(path) = a.cloudmap.as_deref() {
        emit(Some(path), &clouds.to_text())?;
    }
    Ok(())
}

fn percolate(a: PercolateArgs) -> Result<()> {
    let inst = load(&a.input, a.format)?;
    let spec = PercolationSpec::new(a.mode, a.p, a.seed, a.trial)?;
    let (out, surv): (Instance, SurvivorMap) = match (&inst, a.mode) {
        (Instance::Graph(g), Mode::Edge) => {
            let (h, s) = edge_percolate(g, &spec)?;
            (h.into(), s)
        }
        (Instance::Graph(g), Mode::Vertex) => {
            let (h, s) = vertex_percolate(g, &spec)?;
            (h.into(), s)
        }
        (Instance::Csp(f), Mode::Clause) => {
            let (h, s) = clause_percolate(f, &spec)?;
            (h.into(), s)
        }
        (Instance::Csp(f), Mode::Variable) => {
            let (h, s) = variable_percolate(f, &spec)?;
            (h.into(), s)
        }
        (Instance::SubsetSum(x), Mode::Item) => {
            let (h, s) = item_percolate(x, &spec)?;
            (h.into(), s)
        }
        (_, mode) => bail!("{mode} percolation does not apply to this instance"),
    };
    write_instance(a.out.as_deref(), &out)?;
    if let Some(path) = a.survivors.as_deref() {
        emit(Some(path), &surv.to_text())?;
    }
    Ok(())
}

fn solve(a: SolveArgs) -> Result<()> {
    let inst = load(&a.input, a.format)?;
    let graph = || inst.as_graph().ok_or_else(|| anyhow!("expected a graph"));
    let (value, witness) = match a.problem {
        Problem::Colorable => {
            let r = is_k_colorable(graph()?, a.q)?;
            (
                r.value.to_string(),
                r.witness.map(|c| witness_to_text("coloring", c.colors())),
            )
        }
        Problem::Chromatic => {
            let r = chromatic_number(graph()?)?;
            (
                r.value.to_string(),
                r.witness.map(|c| witness_to_text("coloring", c.colors())),
            )
        }
        Problem::Mis => {
            let r = max_independent_set(graph()?)?;
            (
                r.value.to_string(),
                r.witness.map(|w| witness_to_text("independent-set", &w)),
            )
        }
        Problem::Vc => {
            let r = min_vertex_cover(graph()?)?;
            (
                r.value.to_string(),
                r.witness.map(|w| witness_to_text("vertex-cover", &w)),
            )
        }
        Problem::Ham => {
            let r = has_hamiltonian_cycle(graph()?, HamStrategy::Auto)?;
            (
                r.value.to_string(),
                r.witness.map(|w| witness_to_text("hamiltonian-cycle", &w)),
            )
        }
        Problem::Maxcsp => {
            let f = inst.as_csp().ok_or_else(|| anyhow!("expected a formula"))?;
            let r = max_csp_value(f)?;
            let ones: Vec<usize> = r.witness.iter().flat_map(ones).collect();
            (r.value.to_string(), Some(witness_to_text("true-variables", &ones)))
        }
        Problem::Ss => {
            let s = inst
                .as_subset_sum()
                .ok_or_else(|| anyhow!("expected a subset-sum instance"))?;
            let r = subset_sum_decide(s, SsStrategy::Pruned)?;
            (r.value.to_string(), r.witness.map(|w| witness_to_text("subset", &w)))
        }
    };
    println!("{value}");
    if let (Some(path), Some(text)) = (a.out.as_deref(), witness) {
        emit(Some(path), &text)?;
    }
    Ok(())
}

fn ones(a: &Assignment) -> Vec<usize> {
    (1..=a.len()).filter(|&v| a.get(v)).collect()
}

fn decode(a: DecodeArgs) -> Result<()> {
    let original = load(&a.original, a.format)?;
    let clouds = CloudMap::from_text(&read(&a.cloudmap)?)?;
    let survivors = match &a.survivors {
        Some(p) => Some(SurvivorMap::from_text(&read(p)?)?),
        None => None,
    };
    let (_, witness) = witness_from_text(&read(&a.witness)?)?;
    let text = match (a.rule, &original) {
        (Rule::Majority, Instance::Graph(g)) => {
            let ctx = with(DecodeContext::new(&clouds, g), survivors.as_ref());
            let d = majority_color_decode(&Coloring::new(witness)?, &ctx)?;
            eprintln!("legal: {}", d.is_legal_for(g));
            witness_to_text("majority", d.colors())
        }
        (Rule::Threshold, Instance::Graph(g)) => {
            let ctx = with(DecodeContext::new(&clouds, g), survivors.as_ref());
            witness_to_text("threshold", &threshold_is_decode(&witness, a.threshold, &ctx)?)
        }
        (Rule::CspExpected, Instance::Csp(f)) => {
            let ctx = with(DecodeContext::new(&clouds, f), survivors.as_ref());
            let n = match &survivors {
                Some(s) => s.kept_count(),
                None => clouds.produced_count(),
            };
            let mut values = vec![false; n];
            for v in witness {
                *values
                    .get_mut(v.wrapping_sub(1))
                    .ok_or_else(|| anyhow!("variable {v} out of range"))? = true;
            }
            let d = csp_expected_decode(&Assignment::new(values), &ctx)?;
            eprintln!("expectation: {}", d.expectation);
            witness_to_text("csp-expected", &ones(&d.assignment))
        }
        (Rule::HamProject, Instance::Graph(g)) => {
            let ctx = with(DecodeContext::new(&clouds, g), survivors.as_ref());
            witness_to_text("ham-project", &ham_cycle_project(&witness, &ctx)?)
        }
        (Rule::SsLift, Instance::SubsetSum(s)) => {
            let ctx = with(DecodeContext::new(&clouds, s), survivors.as_ref());
            match subset_sum_lift(&witness, &ctx)? {
                LiftOutcome::Success(w) => witness_to_text("ss-lift", &w),
                LiftOutcome::Failure { pair: (i, j) } => bail!("lift failed: no matching offsets for pair ({i}, {j})"),
            }
        }
        _ => bail!("this decode rule does not apply to the original instance"),
    };
    emit(a.out.as_deref(), &text)
}

fn with<'a, T>(ctx: DecodeContext<'a, T>, survivors: Option<&'a SurvivorMap>) -> DecodeContext<'a, T> {
    match survivors {
        Some(s) => ctx.with_survivors(s),
        None => ctx,
    }
}

fn experiment(a: ExperimentArgs) -> Result<()> {
    let mut e = Experiment::load(&a.description)?;
    if let Some(t) = a.trials {
        e.trials = t;
    }
    if let Some(s) = a.seed {
        e.percolation.master_seed = s;
    }
    if let Some(p) = a.p {
        e.percolation = PercolationSpec::new(e.percolation.mode, p, e.percolation.master_seed, 0)?;
    }
    let (summary, reports) = run_experiment(&e)?;
    eprintln!(
        "{}: {}/{} yes, 95% interval [{:.6}, {:.6}]",
        e.name, summary.successes, summary.trials, summary.lower, summary.upper
    );
    emit(a.out.as_deref(), &report_csv(&reports)?)
}

fn plan(a: PlanArgs) -> Result<()> {
    let input = PlanInput {
        n: a.n,
        p: a.p,
        epsilon: a.epsilon,
        delta: a.delta,
        k: a.k,
        c: a.c,
    };
    let params = plan_parameters(a.theorem, input)?;
    println!("R = {}", params.r);
    if let Some(c) = params.achieved_c {
        println!("c = {c:.6}");
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    match cli.command {
        Command::Gen(a) => gen(a),
        Command::Reduce(a) => reduce(a),
        Command::Percolate(a) => percolate(a),
        Command::Solve(a) => solve(a),
        Command::Decode(a) => decode(a),
        Command::Experiment(a) => experiment(a),
        Command::Plan(a) => plan(a),
    }
}
