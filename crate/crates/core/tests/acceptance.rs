//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero unless the failures are exactly the known-red set.
//!
//! Set `PERCOLAB_BLESS=1` to rewrite `fixtures/golden_hashes.txt`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use percolab_core::decode::{csp_expected_decode, ham_cycle_project, DecodeContext};
use percolab_core::lab::{
    check_turan_bound, check_val_concentration, generate, report_csv, run_experiment, Experiment,
};
use percolab_core::reduce::{
    blowup_graph, csp_cloud_blowup, ham_gadget, minimal_c_prime, subset_sum_gadget, GadgetCheck,
};
use percolab_core::solve::{
    chromatic_number, has_hamiltonian_cycle, max_independent_set, subset_sum_decide, HamStrategy, SsStrategy,
};
use percolab_core::{Assignment, Clause, CspInstance, Graph, Mode, Rational, SubsetSumInstance};

/// Criteria expected to fail; see the README.
const KNOWN_RED: &[u32] = &[7];

type Outcome = Result<String, String>;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn ratio(a: i64, b: i64) -> Rational {
    Rational::new(a.into(), b.into())
}

// ---- independent oracles ----

fn brute_alpha(g: &Graph) -> usize {
    let n = g.vertex_count();
    (0u32..1 << n)
        .filter(|&m| {
            g.edges()
                .iter()
                .all(|&(u, v)| m >> (u - 1) & 1 == 0 || m >> (v - 1) & 1 == 0)
        })
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn brute_chi(g: &Graph) -> usize {
    let n = g.vertex_count();
    (1..=n.max(1))
        .find(|&q| {
            let total = q.pow(n as u32);
            (0..total).any(|mut code| {
                let mut colors = vec![0; n];
                for c in colors.iter_mut() {
                    *c = code % q;
                    code /= q;
                }
                g.edges().iter().all(|&(u, v)| colors[u - 1] != colors[v - 1])
            })
        })
        .unwrap_or(0)
}

fn permutations(items: &mut Vec<usize>, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if k == items.len() {
        return visit(items);
    }
    for i in k..items.len() {
        items.swap(k, i);
        if permutations(items, k + 1, visit) {
            return true;
        }
        items.swap(k, i);
    }
    false
}

fn is_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let n = g.vertex_count();
    let distinct: HashSet<_> = cycle.iter().collect();
    cycle.len() == n
        && distinct.len() == n
        && cycle.iter().all(|&v| (1..=n).contains(&v))
        && (0..n).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % n]))
}

fn brute_ham(g: &Graph) -> bool {
    let n = g.vertex_count();
    let mut rest: Vec<usize> = (2..=n).collect();
    permutations(&mut rest, 0, &mut |tail| {
        let cycle: Vec<usize> = std::iter::once(1).chain(tail.iter().copied()).collect();
        is_cycle(g, &cycle)
    })
}

fn brute_val(f: &CspInstance) -> Rational {
    let n = f.n_vars();
    let best = (0u32..1 << n)
        .map(|m| {
            let values: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
            f.clauses().iter().filter(|c| c.satisfied_by(&values)).count()
        })
        .max()
        .unwrap_or(0);
    ratio(best as i64, f.clause_count() as i64)
}

/// Expected satisfied fraction when variable `i` is true with probability `probs[i]`.
fn brute_expectation(f: &CspInstance, probs: &[Rational]) -> Rational {
    let n = f.n_vars();
    let mut total = Rational::zero();
    for m in 0u32..1 << n {
        let values: Vec<bool> = (0..n).map(|i| m >> i & 1 == 1).collect();
        let weight = (0..n).fold(Rational::one(), |w, i| {
            if values[i] {
                w * &probs[i]
            } else {
                w * (Rational::one() - &probs[i])
            }
        });
        let sat = f.clauses().iter().filter(|c| c.satisfied_by(&values)).count();
        total += weight * ratio(sat as i64, 1);
    }
    total / ratio(f.clause_count() as i64, 1)
}

fn brute_subset_sum(items: &[u64], target: u64) -> bool {
    (0u32..1 << items.len()).any(|m| {
        items
            .iter()
            .enumerate()
            .filter(|(i, _)| m >> i & 1 == 1)
            .map(|(_, a)| a)
            .sum::<u64>()
            == target
    })
}

/// Non-isomorphic simple graphs on `n` vertices, by canonical adjacency code.
fn graphs_up_to_iso(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut perms = Vec::new();
    let mut base: Vec<usize> = (0..n).collect();
    permutations(&mut base, 0, &mut |p| {
        perms.push(p.to_vec());
        false
    });
    let index = |u: usize, v: usize| {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        pairs.iter().position(|&e| e == (a, b)).unwrap()
    };
    let relabelled: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect())
        .collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..1 << pairs.len() {
        let canon = relabelled
            .iter()
            .map(|map| {
                map.iter()
                    .enumerate()
                    .filter(|&(e, _)| mask >> e & 1 == 1)
                    .fold(0u32, |acc, (_, &t)| acc | 1 << t)
            })
            .min()
            .unwrap();
        if seen.insert(canon) {
            let edges = pairs
                .iter()
                .enumerate()
                .filter(|&(e, _)| canon >> e & 1 == 1)
                .map(|(_, &(u, v))| (u + 1, v + 1));
            out.push(Graph::undirected(n, edges).unwrap());
        }
    }
    out
}

fn random_uniform_csp(rng: &mut ChaCha8Rng) -> CspInstance {
    let n = rng.random_range(1..=3);
    let k = rng.random_range(1..=n.min(2));
    let m = rng.random_range(1..=4);
    // Instances reject repeated clauses; even n = k = 1 has four distinct ones.
    let mut clauses: Vec<Clause> = Vec::with_capacity(m);
    while clauses.len() < m {
        let vars: Vec<usize> = sample(rng, n, k).iter().map(|v| v + 1).collect();
        let table = (0..1 << k).map(|_| rng.random_bool(0.5)).collect();
        let c = Clause::new(vars, table).unwrap();
        if !clauses.contains(&c) {
            clauses.push(c);
        }
    }
    CspInstance::from_clauses(n, clauses).unwrap()
}

// ---- criteria ----

fn c1_blowup_graphs() -> Outcome {
    let counts: Vec<usize> = (1..=6).map(|n| graphs_up_to_iso(n).len()).collect();
    if counts != [1, 2, 4, 11, 34, 156] {
        return Err(format!("isomorphism classes {counts:?}"));
    }
    let mut checked = 0;
    for n in 1..=6 {
        for g in graphs_up_to_iso(n) {
            let (alpha, chi) = (brute_alpha(&g), brute_chi(&g));
            for r in 1..=3 {
                let b = blowup_graph(&g, r).map_err(|e| e.to_string())?.instance;
                let ba = max_independent_set(&b).map_err(|e| e.to_string())?.value;
                let bc = chromatic_number(&b).map_err(|e| e.to_string())?.value;
                if ba != r * alpha || bc != chi {
                    return Err(format!(
                        "n={n} R={r} {:?}: alpha {ba} vs {}, chi {bc} vs {chi}",
                        g.edges(),
                        r * alpha
                    ));
                }
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} (graph, R) pairs over 208 classes"))
}

fn c2_csp_blowup() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for t in 0..1000 {
        let f = random_uniform_csp(&mut rng);
        let r = rng.random_range(1..=3);
        let b = csp_cloud_blowup(&f, r).map_err(|e| e.to_string())?;
        let (v, bv) = (brute_val(&f), brute_val(&b.instance));
        if v != bv {
            return Err(format!("instance {t}: val {v} but blowup (R={r}) has {bv}"));
        }
    }
    Ok("1000 instances".into())
}

fn c3_ham_gadget() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut yes = 0;
    for t in 0..1000 {
        let n = rng.random_range(2..=5);
        let q = rng.random_range(0.3..0.9);
        let g = generate::random_graph(n, q, true, &mut rng).map_err(|e| e.to_string())?;
        let r = rng.random_range(1..=3);
        let out = ham_gadget(&g, r).map_err(|e| e.to_string())?;
        let res = has_hamiltonian_cycle(&out.instance, HamStrategy::Auto).map_err(|e| e.to_string())?;
        let expected = brute_ham(&g);
        if res.value != expected {
            return Err(format!(
                "digraph {t} {:?} R={r}: gadget {} original {expected}",
                g.edges(),
                res.value
            ));
        }
        if let Some(cycle) = res.witness {
            if !is_cycle(&out.instance, &cycle) {
                return Err(format!("digraph {t}: oracle returned a non-cycle"));
            }
            let ctx = DecodeContext::new(&out.clouds, &g);
            let projected = ham_cycle_project(&cycle, &ctx).map_err(|e| e.to_string())?;
            if !is_cycle(&g, &projected) {
                return Err(format!("digraph {t}: projection {projected:?} is not a cycle"));
            }
            yes += 1;
        }
    }
    Ok(format!("1000 digraphs, {yes} Hamiltonian"))
}

fn nondecreasing(n: usize, max: u64) -> Vec<Vec<u64>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for prefix in nondecreasing(n - 1, max) {
        let lo = prefix.last().copied().unwrap_or(0);
        for a in lo..=max {
            let mut t = prefix.clone();
            t.push(a);
            out.push(t);
        }
    }
    out
}

fn c4_subset_sum_gadget() -> Outcome {
    let start = Instant::now();
    let mut cases = Vec::new();
    for n in 1..=4 {
        for items in nondecreasing(n, 10) {
            let total: u64 = items.iter().sum();
            for s in 0..=total + 1 {
                for r in 1..=2 {
                    cases.push((items.clone(), s, r));
                }
            }
        }
    }
    let failures: Vec<String> = cases
        .par_iter()
        .filter_map(|(items, s, r)| {
            let check = || -> Result<(), String> {
                let inst = SubsetSumInstance::from_u64(items, *s);
                let c = minimal_c_prime(&inst, *r).map_err(|e| e.to_string())?;
                let g = subset_sum_gadget(&inst, *r, c, GadgetCheck::Strict).map_err(|e| e.to_string())?;
                let res = subset_sum_decide(&g.instance, SsStrategy::Pruned).map_err(|e| e.to_string())?;
                let expected = brute_subset_sum(items, *s);
                if res.value != expected {
                    return Err(format!("gadget says {}, brute force {expected}", res.value));
                }
                if let Some(w) = &res.witness {
                    if !g.instance.is_witness(w) {
                        return Err("bad gadget witness".into());
                    }
                }
                if g.instance.len() <= 24 {
                    let mitm =
                        subset_sum_decide(&g.instance, SsStrategy::MeetInTheMiddle).map_err(|e| e.to_string())?;
                    if mitm.value != expected {
                        return Err("meet-in-the-middle disagrees".into());
                    }
                }
                Ok(())
            };
            check().err().map(|e| format!("{items:?} S={s} R={r}: {e}"))
        })
        .collect();
    let elapsed = start.elapsed();
    if let Some(first) = failures.first() {
        return Err(format!("{} failures, first: {first}", failures.len()));
    }
    if elapsed > Duration::from_secs(300) {
        return Err(format!("took {elapsed:.1?}, budget 300s"));
    }
    Ok(format!("{} instances in {elapsed:.1?}", cases.len()))
}

fn load(name: &str) -> Result<Experiment, String> {
    Experiment::load(&fixtures().join(name)).map_err(|e| format!("{name}: {e}"))
}

fn c5_coloring_yes() -> Outcome {
    let e = load("c5_coloring.exp")?;
    let (s, _) = run_experiment(&e).map_err(|e| e.to_string())?;
    let line = format!("{}/{} decoded to a legal 3-colouring", s.successes, s.trials);
    if s.estimate >= 0.95 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn c6_no_instances() -> Outcome {
    let mut parts = Vec::new();
    for name in ["c6_ham.exp", "c6_csp.exp", "c6_ss.exp"] {
        let e = load(name)?;
        let (s, _) = run_experiment(&e).map_err(|e| e.to_string())?;
        parts.push(format!("{} {}/{}", e.name, s.successes, s.trials));
        if s.successes != 0 {
            return Err(parts.join(", "));
        }
    }
    Ok(parts.join(", "))
}

fn c7_val_concentration() -> Outcome {
    let f = CspInstance::from_cnf(1, &[vec![1], vec![-1]]).map_err(|e| e.to_string())?;
    let b = csp_cloud_blowup(&f, 4).map_err(|e| e.to_string())?;
    let rep =
        check_val_concentration(&b.instance, Mode::Clause, 0.5, &ratio(1, 5), 500, 7).map_err(|e| e.to_string())?;
    let line = format!(
        "deviation >= 1/5 in {}/{} trials ({:.3}); exact probability {}",
        rep.deviations.successes,
        rep.deviations.trials,
        rep.deviations.estimate,
        exact_deviation_probability()
    );
    if rep.deviations.estimate <= 0.05 {
        Ok(line)
    } else {
        Err(line)
    }
}

/// Enumerates every survival pattern of the 8 clauses of the R = 4 blowup of
/// `(x), (not x)`: four independent copies, each with one positive and one
/// negative unit clause.
fn exact_deviation_probability() -> Rational {
    let mut bad = 0;
    for mask in 0u32..256 {
        let (mut sat, mut kept) = (0, 0);
        for copy in 0..4 {
            let pos = mask >> (2 * copy) & 1;
            let neg = mask >> (2 * copy + 1) & 1;
            kept += pos + neg;
            sat += pos.max(neg);
        }
        let val = if kept == 0 {
            ratio(1, 1)
        } else {
            ratio(sat as i64, kept as i64)
        };
        let d = val - ratio(1, 2);
        if d >= ratio(1, 5) || d <= ratio(-1, 5) {
            bad += 1;
        }
    }
    ratio(bad, 256)
}

fn c8_lift() -> Outcome {
    let e = load("c8_lift.exp")?;
    let (s, _) = run_experiment(&e).map_err(|e| e.to_string())?;
    let bound = 1.0 - 0.51f64.powi(16) - 0.01;
    let line = format!("{}/{} lifted, bound {bound:.5}", s.successes, s.trials);
    if s.estimate >= bound {
        Ok(line)
    } else {
        Err(line)
    }
}

fn c9_turan() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for t in 0..10_000 {
        let n = rng.random_range(1..=7);
        let q = rng.random_range(0.0..1.0);
        let g = generate::random_graph(n, q, false, &mut rng).map_err(|e| e.to_string())?;
        let rep = check_turan_bound(&g).map_err(|e| e.to_string())?;
        if !rep.holds || rep.edge_count_violations != 0 {
            return Err(format!("graph {t} {:?}: {rep:?}", g.edges()));
        }
    }
    Ok("10000 graphs".into())
}

fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

const DETERMINISM_FIXTURES: &[&str] = &[
    "c5_coloring.exp",
    "c6_ham.exp",
    "c6_csp.exp",
    "c6_ss.exp",
    "c7_val.exp",
    "c8_lift.exp",
];

fn c10_determinism() -> Outcome {
    let mut hashes = String::new();
    for name in DETERMINISM_FIXTURES {
        let e = load(name)?;
        let csv = |threads| -> Result<String, String> {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| e.to_string())?;
            let (_, reports) = pool.install(|| run_experiment(&e)).map_err(|e| e.to_string())?;
            report_csv(&reports).map_err(|e| e.to_string())
        };
        let (one, four) = (csv(1)?, csv(4)?);
        if one != four {
            return Err(format!("{name}: reports differ between 1 and 4 threads"));
        }
        let _ = writeln!(hashes, "{name} {:016x}", fnv1a(one.as_bytes()));
    }
    let golden_path = fixtures().join("golden_hashes.txt");
    if std::env::var_os("PERCOLAB_BLESS").is_some() {
        std::fs::write(&golden_path, &hashes).map_err(|e| e.to_string())?;
    }
    let golden = std::fs::read_to_string(&golden_path).map_err(|e| format!("{}: {e}", golden_path.display()))?;
    if golden != hashes {
        return Err(format!("hashes drifted from golden file:\n{hashes}"));
    }
    Ok(format!(
        "{} experiments identical across pools and match golden hashes",
        DETERMINISM_FIXTURES.len()
    ))
}

fn c11_expected_decode() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for t in 0..1000 {
        let f = random_uniform_csp(&mut rng);
        let r = rng.random_range(1..=3);
        let b = csp_cloud_blowup(&f, r).map_err(|e| e.to_string())?;
        let tau = Assignment::new((0..b.instance.n_vars()).map(|_| rng.random_bool(0.5)).collect());
        let ctx = DecodeContext::new(&b.variables, &f);
        let d = csp_expected_decode(&tau, &ctx).map_err(|e| e.to_string())?;
        let direct = b.instance.eval_assignment(&tau).map_err(|e| e.to_string())?;
        let probs: Vec<Rational> = (1..=f.n_vars())
            .map(|i| {
                let ones = b.variables.cloud(i).iter().filter(|&&v| tau.get(v)).count();
                ratio(ones as i64, r as i64)
            })
            .collect();
        let brute = brute_expectation(&f, &probs);
        let decoded = f.eval_assignment(&d.assignment).map_err(|e| e.to_string())?;
        if d.expectation != direct || direct != brute || decoded < direct {
            return Err(format!(
                "triple {t}: expectation {}, val_tau {direct}, brute {brute}, decoded {decoded}",
                d.expectation
            ));
        }
    }
    Ok("1000 triples".into())
}

fn main() {
    type Criterion = (u32, &'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        (1, "graph blowup preserves alpha and chi", c1_blowup_graphs),
        (2, "CSP cloud blowup preserves val", c2_csp_blowup),
        (3, "Hamiltonicity gadget equivalence and projection", c3_ham_gadget),
        (4, "subset-sum gadget equivalence", c4_subset_sum_gadget),
        (5, "percolated coloring blowup decodes", c5_coloring_yes),
        (6, "NO instances stay NO under percolation", c6_no_instances),
        (7, "val concentration under clause percolation", c7_val_concentration),
        (8, "subset-sum lift success rate", c8_lift),
        (9, "Turan bound on small graphs", c9_turan),
        (10, "reports are thread-count independent", c10_determinism),
        (11, "expected decode matches val_tau", c11_expected_decode),
    ];
    let mut failed = Vec::new();
    for (id, what, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {what}: {detail} [{secs:.1}s]"),
            Err(detail) => {
                let tag = if KNOWN_RED.contains(&id) { " (known red)" } else { "" };
                println!("criterion {id:>2} FAIL{tag}  {what}: {detail} [{secs:.1}s]");
                failed.push(id);
            }
        }
    }
    if failed != KNOWN_RED {
        println!("unexpected outcome: failed {failed:?}, expected exactly {KNOWN_RED:?}");
        std::process::exit(1);
    }
    println!("failures match the known-red set {KNOWN_RED:?}");
}
