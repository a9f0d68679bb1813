//! Maps solutions of (percolated) reduced instances back to the original.
//!
//! Labels handed to a decoder are those of the instance the solver saw. When
//! a [`SurvivorMap`] from vertex, variable or item percolation is present,
//! they are first translated back to produced labels; edge and clause
//! percolation keep labels unchanged.

use std::fmt::Write as _;

use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::instances::{fraction, Assignment, Coloring, CspInstance, Graph, SubsetSumInstance};
use crate::percolate::{Mode, SurvivorMap};
use crate::reduce::{CloudKind, CloudMap};
use crate::solve::is_hamiltonian_cycle;
use crate::Rational;

/// Everything a decoder needs besides the solution itself.
#[derive(Debug, Clone, Copy)]
pub struct DecodeContext<'a, T> {
    pub clouds: &'a CloudMap,
    pub survivors: Option<&'a SurvivorMap>,
    pub original: &'a T,
}

impl<'a, T> DecodeContext<'a, T> {
    pub fn new(clouds: &'a CloudMap, original: &'a T) -> Self {
        DecodeContext {
            clouds,
            survivors: None,
            original,
        }
    }

    pub fn with_survivors(self, survivors: &'a SurvivorMap) -> Self {
        DecodeContext {
            survivors: Some(survivors),
            ..self
        }
    }

    fn relabelling(&self) -> Option<&'a SurvivorMap> {
        self.survivors
            .filter(|s| matches!(s.mode, Mode::Vertex | Mode::Variable | Mode::Item))
    }

    /// Produced label of a solver-side label.
    fn produced(&self, label: usize) -> Result<usize> {
        match self.relabelling() {
            Some(s) => s
                .original_of(label)
                .ok_or_else(|| Error::Decode(format!("label {label} is not a survivor"))),
            None if label >= 1 && label <= self.clouds.produced_count() => Ok(label),
            None => Err(Error::Decode(format!("label {label} outside the produced instance"))),
        }
    }

    /// Solver-side labels of the surviving members of cloud `i`.
    fn surviving_cloud(&self, i: usize) -> Vec<usize> {
        let cloud = self.clouds.cloud(i);
        match self.relabelling() {
            Some(s) => cloud.iter().filter_map(|&x| s.relabel(x)).collect(),
            None => cloud.to_vec(),
        }
    }
}

/// Gives each original vertex the most frequent colour of its surviving
/// cloud, ties to the smallest colour.
pub fn majority_color_decode(c: &Coloring, ctx: &DecodeContext<'_, Graph>) -> Result<Coloring> {
    let n = ctx.original.vertex_count();
    if ctx.clouds.original_count() != n {
        return Err(Error::Decode(format!(
            "cloud map covers {} vertices, original has {n}",
            ctx.clouds.original_count()
        )));
    }
    let mut colors = Vec::with_capacity(n);
    let mut counts = vec![0usize; c.max_color() + 1];
    for v in 1..=n {
        counts.iter_mut().for_each(|x| *x = 0);
        let members = ctx.surviving_cloud(v);
        if members.is_empty() {
            return Err(Error::Decode(format!("cloud of vertex {v} has no surviving vertex")));
        }
        for u in members {
            if u > c.len() {
                return Err(Error::Decode(format!("colouring does not cover vertex {u}")));
            }
            counts[c.color(u)] += 1;
        }
        // max_by_key keeps the last maximum, so scan colours in reverse.
        let best = (1..counts.len()).rev().max_by_key(|&col| counts[col]).unwrap();
        colors.push(best);
    }
    Coloring::new(colors)
}

/// Originals whose cloud meets `set` in at least `threshold` vertices.
pub fn threshold_is_decode(set: &[usize], threshold: usize, ctx: &DecodeContext<'_, Graph>) -> Result<Vec<usize>> {
    if threshold < 1 {
        return Err(Error::param("threshold must be at least 1"));
    }
    let owners = ctx.clouds.owners();
    let mut hits = vec![0usize; ctx.clouds.original_count() + 1];
    for &label in set {
        let x = ctx.produced(label)?;
        hits[owners[x]] += 1;
    }
    Ok((1..hits.len()).filter(|&i| hits[i] >= threshold).collect())
}

/// Result of [`csp_expected_decode`].
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectedDecode {
    /// `Pr[sigma(x_i) = 1]`: the fraction of surviving copies of `x_i` set to 1.
    pub probabilities: Vec<Rational>,
    /// `E[val_sigma(original)]` under the product distribution.
    pub expectation: Rational,
    /// Derandomized assignment with value at least `expectation`.
    pub assignment: Assignment,
}

fn copy_probabilities(t: &Assignment, ctx: &DecodeContext<'_, CspInstance>) -> Result<Vec<Rational>> {
    let n = ctx.original.n_vars();
    if ctx.clouds.kind() != CloudKind::Variable || ctx.clouds.original_count() != n {
        return Err(Error::Decode(
            "expected a variable cloud map matching the original".into(),
        ));
    }
    (1..=n)
        .map(|i| {
            let copies = ctx.surviving_cloud(i);
            if copies.is_empty() {
                return Err(Error::Decode(format!("no copy of variable {i} survived")));
            }
            let mut ones = 0;
            for &x in &copies {
                if x > t.len() {
                    return Err(Error::Decode(format!("assignment does not cover variable {x}")));
                }
                ones += t.get(x) as usize;
            }
            Ok(fraction(ones, copies.len()))
        })
        .collect()
}

/// `E[val]` of `f` when variable `i` is 1 with probability `probs[i-1]`,
/// independently.
pub fn expected_value(f: &CspInstance, probs: &[Rational]) -> Rational {
    if f.clause_count() == 0 {
        return Rational::one();
    }
    let one = Rational::one();
    let mut total = Rational::zero();
    for clause in f.clauses() {
        for bits in 0..1usize << clause.arity() {
            if !clause.accepts(bits) {
                continue;
            }
            let mut weight = Rational::one();
            for (pos, &v) in clause.vars().iter().enumerate() {
                let p = &probs[v - 1];
                weight *= if bits >> pos & 1 == 1 { p.clone() } else { &one - p };
                if weight.is_zero() {
                    break;
                }
            }
            total += weight;
        }
    }
    total / Rational::from_integer(f.clause_count().into())
}

/// Decodes an assignment `t` of a (possibly variable-percolated) cloud
/// blowup. Each original variable copies a uniformly random surviving copy;
/// the expectation of that experiment is computed exactly and then
/// derandomized by conditional expectations in variable order. Ties go to
/// the value held by a strict majority of the copies, else to 0.
pub fn csp_expected_decode(t: &Assignment, ctx: &DecodeContext<'_, CspInstance>) -> Result<ExpectedDecode> {
    let probabilities = copy_probabilities(t, ctx)?;
    let f = ctx.original;
    let expectation = expected_value(f, &probabilities);
    let mut probs = probabilities.clone();
    let half = Rational::new(1.into(), 2.into());
    for i in 0..probs.len() {
        let leans_true = probs[i] > half;
        probs[i] = Rational::one();
        let high = expected_value(f, &probs);
        probs[i] = Rational::zero();
        let low = expected_value(f, &probs);
        if high > low || high == low && leans_true {
            probs[i] = Rational::one();
        }
    }
    let assignment = Assignment::new(probs.iter().map(|p| p.is_one()).collect());
    debug_assert!(f.eval_assignment(&assignment).unwrap() >= expectation);
    Ok(ExpectedDecode {
        probabilities,
        expectation,
        assignment,
    })
}

/// One draw of the randomized decoder: each original variable takes the value
/// of a uniformly chosen surviving copy.
pub fn csp_sampled_decode<G: Rng + ?Sized>(
    t: &Assignment,
    ctx: &DecodeContext<'_, CspInstance>,
    rng: &mut G,
) -> Result<Assignment> {
    let n = ctx.original.n_vars();
    let mut values = Vec::with_capacity(n);
    for i in 1..=n {
        let copies = ctx.surviving_cloud(i);
        if copies.is_empty() {
            return Err(Error::Decode(format!("no copy of variable {i} survived")));
        }
        let x = copies[rng.random_range(0..copies.len())];
        if x > t.len() {
            return Err(Error::Decode(format!("assignment does not cover variable {x}")));
        }
        values.push(t.get(x));
    }
    Ok(Assignment::new(values))
}

/// Restricts a Hamiltonian cycle of the gadget to the original vertices,
/// rotated to start at the smallest one.
pub fn ham_cycle_project(cycle: &[usize], ctx: &DecodeContext<'_, Graph>) -> Result<Vec<usize>> {
    let n = ctx.original.vertex_count();
    let mut projected = Vec::with_capacity(n);
    for &label in cycle {
        let x = ctx.produced(label)?;
        if x <= n {
            projected.push(x);
        }
    }
    if let Some(start) = projected.iter().enumerate().min_by_key(|(_, &v)| v).map(|(i, _)| i) {
        projected.rotate_left(start);
    }
    if !is_hamiltonian_cycle(ctx.original, &projected) {
        return Err(Error::Decode(format!(
            "projection {projected:?} is not a Hamiltonian cycle of the original"
        )));
    }
    Ok(projected)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LiftOutcome {
    /// Sorted solver-side labels of one item per index, summing to the target.
    Success(Vec<usize>),
    /// No `k` with `k` surviving in the first cloud and `-k` in the second.
    Failure { pair: (usize, usize) },
}

impl LiftOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, LiftOutcome::Success(_))
    }
}

/// Lifts a witness `T` of the original subset-sum instance to the
/// (percolated) gadget by zero-sum pairing.
///
/// Indices are paired `(1,2), (3,4), ...`. For each pair, `A_i` holds the
/// surviving offsets of `J_i` when `i` is in `T` and of `J'_i` otherwise, and
/// the lift picks `k` in `A_i` with `-k` in `A_{i+1}`, smallest `|k|` first
/// and positive `k` before negative.
pub fn subset_sum_lift(witness: &[usize], ctx: &DecodeContext<'_, SubsetSumInstance>) -> Result<LiftOutcome> {
    if !ctx.original.is_witness(witness) {
        return Err(Error::Decode(
            "the given indices are not a witness of the original".into(),
        ));
    }
    let n = ctx.clouds.original_count();
    let width2 = ctx.clouds.cloud(1).len();
    if ctx.clouds.kind() != CloudKind::Item || n % 2 != 0 || n < ctx.original.len() || width2 % 2 != 0 {
        return Err(Error::Decode(
            "expected the item cloud map of a subset-sum gadget".into(),
        ));
    }
    let width = width2 / 2;
    let r = (width - 1) / 2;
    let mut taken = vec![false; n + 1];
    for &i in witness {
        taken[i] = true;
    }
    // Solver-side label of offset k in the family used for index i, if it survived.
    let label = |i: usize, k: i64| -> Option<usize> {
        let family = if taken[i] { 0 } else { width };
        let x = ctx.clouds.cloud(i)[family + (k + r as i64) as usize];
        match ctx.relabelling() {
            Some(s) => s.relabel(x),
            None => Some(x),
        }
    };
    let mut chosen = Vec::with_capacity(n);
    for i in (1..n).step_by(2) {
        let candidates = std::iter::once(0).chain((1..=r as i64).flat_map(|k| [k, -k]));
        let found = candidates
            .filter_map(|k| Some((label(i, k)?, label(i + 1, -k)?)))
            .next();
        match found {
            Some((a, b)) => chosen.extend([a, b]),
            None => return Ok(LiftOutcome::Failure { pair: (i, i + 1) }),
        }
    }
    chosen.sort_unstable();
    Ok(LiftOutcome::Success(chosen))
}

/// `p witness <rule> <count>` followed by the indices on one line.
pub fn witness_to_text(rule: &str, indices: &[usize]) -> String {
    let mut out = format!("p witness {rule} {}\n", indices.len());
    for (pos, i) in indices.iter().enumerate() {
        if pos > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{i}");
    }
    out.push('\n');
    out
}

pub fn witness_from_text(text: &str) -> Result<(String, Vec<usize>)> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| Error::parse(1, "empty witness file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 4 || toks[0] != "p" || toks[1] != "witness" {
        return Err(Error::parse(1, "expected `p witness <rule> <count>`"));
    }
    let count: usize = toks[3].parse().map_err(|_| Error::parse(1, "invalid count"))?;
    let mut indices = Vec::with_capacity(count);
    for (ln, line) in lines {
        for tok in line.split_whitespace() {
            indices.push(
                tok.parse()
                    .map_err(|_| Error::parse(ln + 1, format!("invalid index {tok:?}")))?,
            );
        }
    }
    if indices.len() != count {
        return Err(Error::parse(
            1,
            format!("header declares {count} indices, found {}", indices.len()),
        ));
    }
    Ok((toks[2].to_string(), indices))
}
