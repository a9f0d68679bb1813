//! Independent random deletion of edges, vertices, clauses, variables or items.
//!
//! Every element draws a uniform value from [`derive_stream`], keyed by the
//! master seed, the trial index and the element's identity, and survives iff
//! that value is below `p`. Survival therefore does not depend on iteration
//! order, is monotone in `p` for a fixed seed, and is identical on every
//! platform.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::instances::{CspInstance, Graph, SubsetSumInstance};

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finaliser.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: `mix64(master ^ mix64(trial + GOLDEN))`.
#[inline]
pub fn trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    mix64(master_seed ^ mix64(trial_index.wrapping_add(GOLDEN)))
}

/// Uniform value in `[0, 1)` for one element of one trial.
///
/// `mix64(trial_seed(master, trial) ^ mix64(element * GOLDEN + GOLDEN))`,
/// top 53 bits scaled by `2^-53`.
#[inline]
pub fn derive_stream(master_seed: u64, trial_index: u64, element: u64) -> f64 {
    unit(stream_bits(trial_seed(master_seed, trial_index), element))
}

#[inline]
fn stream_bits(trial_seed: u64, element: u64) -> u64 {
    mix64(trial_seed ^ mix64(element.wrapping_mul(GOLDEN).wrapping_add(GOLDEN)))
}

#[inline]
fn unit(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Element key for a (directed) edge.
#[inline]
pub fn edge_key(u: usize, v: usize) -> u64 {
    ((u as u64) << 32) | v as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Edge,
    Vertex,
    Clause,
    Variable,
    Item,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Edge => "edge",
            Mode::Vertex => "vertex",
            Mode::Clause => "clause",
            Mode::Variable => "variable",
            Mode::Item => "item",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" => Ok(Mode::Edge),
            "vertex" => Ok(Mode::Vertex),
            "clause" => Ok(Mode::Clause),
            "variable" => Ok(Mode::Variable),
            "item" => Ok(Mode::Item),
            other => Err(Error::param(format!("unknown percolation mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercolationSpec {
    pub mode: Mode,
    pub p: f64,
    pub master_seed: u64,
    pub trial_index: u64,
}

impl PercolationSpec {
    pub fn new(mode: Mode, p: f64, master_seed: u64, trial_index: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::param(format!("survival probability {p} outside [0, 1]")));
        }
        Ok(PercolationSpec {
            mode,
            p,
            master_seed,
            trial_index,
        })
    }

    pub fn with_trial(self, trial_index: u64) -> Self {
        PercolationSpec { trial_index, ..self }
    }

    pub fn trial_seed(&self) -> u64 {
        trial_seed(self.master_seed, self.trial_index)
    }

    /// Whether the element keyed `element` survives.
    #[inline]
    pub fn survives(&self, element: u64) -> bool {
        self.survives_with_seed(self.trial_seed(), element)
    }

    #[inline]
    fn survives_with_seed(&self, seed: u64, element: u64) -> bool {
        // p = 1 keeps everything even though the stream never reaches 1.
        self.p >= 1.0 || unit(stream_bits(seed, element)) < self.p
    }

    fn expect(&self, mode: Mode) -> Result<()> {
        if self.mode != mode {
            return Err(Error::ModeMismatch {
                expected: mode.to_string(),
                got: self.mode.to_string(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Edge(usize, usize),
    Index(usize),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Edge(u, v) => write!(f, "{u} {v}"),
            Element::Index(i) => write!(f, "{i}"),
        }
    }
}

/// Which elements survived. For vertex and variable percolation the
/// survivors are relabelled `1..=kept.len()` in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurvivorMap {
    pub mode: Mode,
    pub original_count: usize,
    pub kept: Vec<Element>,
}

impl SurvivorMap {
    pub fn kept_count(&self) -> usize {
        self.kept.len()
    }

    /// Kept 1-based indices (empty for edge percolation).
    pub fn kept_indices(&self) -> Vec<usize> {
        self.kept
            .iter()
            .filter_map(|e| match *e {
                Element::Index(i) => Some(i),
                Element::Edge(..) => None,
            })
            .collect()
    }

    /// New label of an original index, or `None` if it was deleted.
    pub fn relabel(&self, old: usize) -> Option<usize> {
        self.kept.binary_search(&Element::Index(old)).ok().map(|pos| pos + 1)
    }

    /// Original index of a new label.
    pub fn original_of(&self, new: usize) -> Option<usize> {
        match self.kept.get(new.checked_sub(1)?) {
            Some(Element::Index(i)) => Some(*i),
            _ => None,
        }
    }

    /// `p survivors <mode> <original-count> <kept-count>` followed by one
    /// `k <element>` line per survivor.
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = format!(
            "p survivors {} {} {}\n",
            self.mode,
            self.original_count,
            self.kept.len()
        );
        for e in &self.kept {
            let _ = writeln!(out, "k {e}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with("c "));
        let (hl, header) = lines.next().ok_or_else(|| Error::parse(0, "empty survivor file"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 5 || toks[0] != "p" || toks[1] != "survivors" {
            return Err(Error::parse(hl, "expected `p survivors <mode> <n> <kept>`"));
        }
        let mode: Mode = toks[2].parse().map_err(|_| Error::parse(hl, "unknown mode"))?;
        let original_count: usize = toks[3].parse().map_err(|_| Error::parse(hl, "invalid count"))?;
        let declared: usize = toks[4].parse().map_err(|_| Error::parse(hl, "invalid count"))?;
        let mut kept = Vec::with_capacity(declared);
        for (ln, line) in lines {
            let nums: Vec<usize> = line
                .split_whitespace()
                .skip(1)
                .map(|t| {
                    t.parse()
                        .map_err(|_| Error::parse(ln, format!("invalid element {t:?}")))
                })
                .collect::<Result<_>>()?;
            if !line.starts_with("k ") {
                return Err(Error::parse(ln, "expected `k <element>`"));
            }
            let e = match (mode, nums.as_slice()) {
                (Mode::Edge, [u, v]) => Element::Edge(*u, *v),
                (Mode::Edge, _) => return Err(Error::parse(ln, "edge survivors need two endpoints")),
                (_, [i]) if *i >= 1 && *i <= original_count => Element::Index(*i),
                _ => return Err(Error::parse(ln, "expected one index in range")),
            };
            if kept.last().is_some_and(|last| *last >= e) {
                return Err(Error::parse(ln, "survivors must be strictly increasing"));
            }
            kept.push(e);
        }
        if kept.len() != declared {
            return Err(Error::parse(
                hl,
                format!("header declares {declared} survivors, found {}", kept.len()),
            ));
        }
        Ok(SurvivorMap {
            mode,
            original_count,
            kept,
        })
    }
}

fn kept_indices(count: usize, spec: &PercolationSpec) -> Vec<usize> {
    let seed = spec.trial_seed();
    (1..=count)
        .filter(|&i| spec.survives_with_seed(seed, i as u64))
        .collect()
}

fn index_map(mode: Mode, count: usize, kept: &[usize]) -> SurvivorMap {
    SurvivorMap {
        mode,
        original_count: count,
        kept: kept.iter().map(|&i| Element::Index(i)).collect(),
    }
}

pub fn edge_percolate(g: &Graph, spec: &PercolationSpec) -> Result<(Graph, SurvivorMap)> {
    spec.expect(Mode::Edge)?;
    let seed = spec.trial_seed();
    let edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v)| spec.survives_with_seed(seed, edge_key(u, v)))
        .collect();
    let map = SurvivorMap {
        mode: Mode::Edge,
        original_count: g.edge_count(),
        kept: edges.iter().map(|&(u, v)| Element::Edge(u, v)).collect(),
    };
    Ok((
        Graph::from_sorted_unchecked(g.vertex_count(), g.is_directed(), edges),
        map,
    ))
}

pub fn vertex_percolate(g: &Graph, spec: &PercolationSpec) -> Result<(Graph, SurvivorMap)> {
    spec.expect(Mode::Vertex)?;
    let kept = kept_indices(g.vertex_count(), spec);
    Ok((g.induced(&kept), index_map(Mode::Vertex, g.vertex_count(), &kept)))
}

/// Vertex-percolated graph for an explicitly given survivor set.
pub fn vertex_restrict(g: &Graph, kept: &[usize]) -> (Graph, SurvivorMap) {
    (g.induced(kept), index_map(Mode::Vertex, g.vertex_count(), kept))
}

pub fn clause_percolate(f: &CspInstance, spec: &PercolationSpec) -> Result<(CspInstance, SurvivorMap)> {
    spec.expect(Mode::Clause)?;
    let kept = kept_indices(f.clause_count(), spec);
    let clauses = kept.iter().map(|&i| f.clauses()[i - 1].clone()).collect();
    Ok((
        CspInstance::from_parts_unchecked(f.n_vars(), f.k_max(), clauses),
        index_map(Mode::Clause, f.clause_count(), &kept),
    ))
}

pub fn variable_percolate(f: &CspInstance, spec: &PercolationSpec) -> Result<(CspInstance, SurvivorMap)> {
    spec.expect(Mode::Variable)?;
    let kept = kept_indices(f.n_vars(), spec);
    Ok(variable_restrict(f, &kept))
}

/// Variable-percolated formula for an explicitly given survivor set.
pub fn variable_restrict(f: &CspInstance, kept: &[usize]) -> (CspInstance, SurvivorMap) {
    let mut relabel = vec![0usize; f.n_vars() + 1];
    for (new, &old) in kept.iter().enumerate() {
        relabel[old] = new + 1;
    }
    let clauses = f
        .clauses()
        .iter()
        .filter(|c| c.vars().iter().all(|&v| relabel[v] != 0))
        .map(|c| c.with_vars(c.vars().iter().map(|&v| relabel[v]).collect()))
        .collect();
    (
        CspInstance::from_parts_unchecked(kept.len(), f.k_max(), clauses),
        index_map(Mode::Variable, f.n_vars(), kept),
    )
}

pub fn item_percolate(s: &SubsetSumInstance, spec: &PercolationSpec) -> Result<(SubsetSumInstance, SurvivorMap)> {
    spec.expect(Mode::Item)?;
    let kept = kept_indices(s.len(), spec);
    let items = kept.iter().map(|&i| s.items()[i - 1].clone()).collect();
    Ok((
        SubsetSumInstance::new(items, s.target().clone()),
        index_map(Mode::Item, s.len(), &kept),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(mode: Mode, p: f64) -> PercolationSpec {
        PercolationSpec::new(mode, p, 42, 0).unwrap()
    }

    #[test]
    fn stream_is_deterministic_and_in_range() {
        for e in 0..1000 {
            let a = derive_stream(7, 3, e);
            assert_eq!(a, derive_stream(7, 3, e));
            assert!((0.0..1.0).contains(&a));
        }
        assert_ne!(derive_stream(7, 3, 0), derive_stream(7, 4, 0));
        assert_ne!(derive_stream(7, 3, 0), derive_stream(8, 3, 0));
    }

    #[test]
    fn stream_mean_is_one_half() {
        let mean = (0..100_000u64).map(|e| derive_stream(1, 0, e)).sum::<f64>() / 100_000.0;
        assert!((mean - 0.5).abs() < 0.01, "mean {mean}");
    }

    #[test]
    fn invalid_probability_rejected() {
        assert!(PercolationSpec::new(Mode::Edge, 1.5, 0, 0).is_err());
        assert!(PercolationSpec::new(Mode::Edge, -0.1, 0, 0).is_err());
        assert!(PercolationSpec::new(Mode::Edge, f64::NAN, 0, 0).is_err());
    }

    #[test]
    fn extremes() {
        let g = Graph::complete(5);
        assert_eq!(edge_percolate(&g, &spec(Mode::Edge, 1.0)).unwrap().0, g);
        let (e, map) = edge_percolate(&g, &spec(Mode::Edge, 0.0)).unwrap();
        assert_eq!(e, Graph::empty(5, false));
        assert_eq!(map.kept_count(), 0);
        let (v, map) = vertex_percolate(&g, &spec(Mode::Vertex, 1.0)).unwrap();
        assert_eq!(v, g);
        assert_eq!(map.relabel(3), Some(3));
        let (v, _) = vertex_percolate(&g, &spec(Mode::Vertex, 0.0)).unwrap();
        assert_eq!(v.vertex_count(), 0);
    }

    #[test]
    fn mode_mismatch_is_an_error() {
        let g = Graph::complete(3);
        assert!(matches!(
            edge_percolate(&g, &spec(Mode::Vertex, 0.5)),
            Err(Error::ModeMismatch { .. })
        ));
        let f = CspInstance::from_cnf(1, &[vec![1]]).unwrap();
        assert!(clause_percolate(&f, &spec(Mode::Variable, 0.5)).is_err());
        assert!(variable_percolate(&f, &spec(Mode::Clause, 0.5)).is_err());
        let s = SubsetSumInstance::from_u64(&[1], 1);
        assert!(item_percolate(&s, &spec(Mode::Edge, 0.5)).is_err());
    }

    #[test]
    fn triangle_restricted_to_two_vertices() {
        let (g, map) = vertex_restrict(&Graph::complete(3), &[1, 3]);
        assert_eq!(g, Graph::undirected(2, [(1, 2)]).unwrap());
        assert_eq!(map.relabel(3), Some(2));
        assert_eq!(map.relabel(2), None);
        assert_eq!(map.original_of(2), Some(3));
    }

    #[test]
    fn variable_restriction_drops_touching_clauses() {
        let f = CspInstance::from_cnf(2, &[vec![1, 2], vec![1]]).unwrap();
        let (h, _) = variable_restrict(&f, &[1]);
        assert_eq!(h.clause_count(), 1);
        assert_eq!(h.clauses()[0].vars(), &[1]);
        assert_eq!(variable_percolate(&f, &spec(Mode::Variable, 1.0)).unwrap().0, f);
    }

    #[test]
    fn clause_and_item_extremes() {
        let f = CspInstance::from_cnf(2, &[vec![1, 2], vec![-1]]).unwrap();
        assert_eq!(clause_percolate(&f, &spec(Mode::Clause, 1.0)).unwrap().0, f);
        assert_eq!(
            clause_percolate(&f, &spec(Mode::Clause, 0.0)).unwrap().0.clause_count(),
            0
        );
        let s = SubsetSumInstance::from_u64(&[1, 2, 3], 4);
        assert_eq!(item_percolate(&s, &spec(Mode::Item, 1.0)).unwrap().0, s);
        let (e, _) = item_percolate(&s, &spec(Mode::Item, 0.0)).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.target(), s.target());
    }

    #[test]
    fn survival_is_monotone_in_p() {
        let g = Graph::complete(12);
        let mut prev = 0;
        for k in 0..=10 {
            let (h, _) = edge_percolate(&g, &spec(Mode::Edge, k as f64 / 10.0)).unwrap();
            let low = edge_percolate(&g, &spec(Mode::Edge, (k as f64 / 10.0 - 0.1).max(0.0)))
                .unwrap()
                .0;
            assert!(low.edges().iter().all(|&(u, v)| h.has_edge(u, v)));
            assert!(h.edge_count() >= prev);
            prev = h.edge_count();
        }
    }

    #[test]
    fn survivor_text_round_trip() {
        let g = Graph::complete(6);
        let (_, map) = edge_percolate(&g, &spec(Mode::Edge, 0.5)).unwrap();
        assert_eq!(SurvivorMap::from_text(&map.to_text()).unwrap(), map);
        let (_, map) = vertex_percolate(&g, &spec(Mode::Vertex, 0.5)).unwrap();
        assert_eq!(SurvivorMap::from_text(&map.to_text()).unwrap(), map);
        assert!(SurvivorMap::from_text("p survivors vertex 3 1\nk 4\n").is_err());
    }
}
