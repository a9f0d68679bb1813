//! Random and planted instance generators.

use num_bigint::BigUint;
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::instances::{Clause, Coloring, CspInstance, Graph, SubsetSumInstance};

/// `G(n, q)`: every pair (ordered pair when `directed`) is an edge with
/// probability `q`.
pub fn random_graph<G: Rng + ?Sized>(n: usize, q: f64, directed: bool, rng: &mut G) -> Result<Graph> {
    check_prob(q)?;
    let mut edges = Vec::new();
    for u in 1..=n {
        let first = if directed { 1 } else { u + 1 };
        for v in first..=n {
            if u != v && rng.random_bool(q) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, directed, edges)
}

/// `m` distinct clauses over `k` distinct variables each, with random signs.
/// With `as_or` the clauses are disjunctions, otherwise random predicates.
pub fn random_kcsp<G: Rng + ?Sized>(n: usize, m: usize, k: usize, as_or: bool, rng: &mut G) -> Result<CspInstance> {
    if k == 0 || k > n {
        return Err(Error::param(format!("arity {k} needs 1..={n} variables")));
    }
    let vars: Vec<usize> = (1..=n).collect();
    let mut clauses: Vec<Clause> = Vec::with_capacity(m);
    let mut attempts = 0;
    while clauses.len() < m {
        attempts += 1;
        if attempts > 1000 * (m + 1) {
            return Err(Error::param(format!("could not draw {m} distinct clauses")));
        }
        let mut chosen: Vec<usize> = vars.choose_multiple(rng, k).copied().collect();
        chosen.shuffle(rng);
        let clause = if as_or {
            let lits: Vec<i64> = chosen
                .iter()
                .map(|&v| if rng.random_bool(0.5) { v as i64 } else { -(v as i64) })
                .collect();
            Clause::disjunction(&lits)?
        } else {
            let table = (0..1usize << k).map(|_| rng.random_bool(0.5)).collect();
            Clause::new(chosen, table)?
        };
        if !clauses.contains(&clause) {
            clauses.push(clause);
        }
    }
    CspInstance::new(n, k, clauses)
}

/// A graph with a hidden proper 3-colouring: vertices get random colours
/// (each class non-empty when `n >= 3`) and every bichromatic pair is an
/// edge with probability `q`.
pub fn planted_3colorable<G: Rng + ?Sized>(n: usize, q: f64, rng: &mut G) -> Result<(Graph, Coloring)> {
    check_prob(q)?;
    let mut colors: Vec<usize> = (0..n).map(|i| i % 3 + 1).collect();
    colors.shuffle(rng);
    let mut edges = Vec::new();
    for u in 1..=n {
        for v in u + 1..=n {
            if colors[u - 1] != colors[v - 1] && rng.random_bool(q) {
                edges.push((u, v));
            }
        }
    }
    Ok((Graph::undirected(n, edges)?, Coloring::new(colors)?))
}

/// Items uniform in `0..=max_item` and a target equal to the sum of a random
/// non-empty subset, which is returned as the planted witness.
pub fn planted_subset_sum<G: Rng + ?Sized>(
    n: usize,
    max_item: u64,
    rng: &mut G,
) -> Result<(SubsetSumInstance, Vec<usize>)> {
    if n == 0 {
        return Err(Error::param("need at least one item"));
    }
    let items: Vec<u64> = (0..n).map(|_| rng.random_range(0..=max_item)).collect();
    let mut witness: Vec<usize> = (1..=n).filter(|_| rng.random_bool(0.5)).collect();
    if witness.is_empty() {
        witness.push(rng.random_range(1..=n));
    }
    let target: BigUint = witness.iter().map(|&i| BigUint::from(items[i - 1])).sum();
    let items = items.into_iter().map(BigUint::from).collect();
    Ok((SubsetSumInstance::new(items, target), witness))
}

fn check_prob(q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::param(format!("probability {q} outside [0, 1]")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn planted_colouring_is_legal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let (g, c) = planted_3colorable(12, 0.6, &mut rng).unwrap();
            assert!(c.is_legal_for(&g));
            assert_eq!(c.max_color(), 3);
        }
    }

    #[test]
    fn planted_witness_hits_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let (s, w) = planted_subset_sum(5, 10, &mut rng).unwrap();
            assert!(s.is_witness(&w));
        }
    }

    #[test]
    fn random_formulas_are_simple() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let f = random_kcsp(5, 20, 3, true, &mut rng).unwrap();
        assert_eq!(f.clause_count(), 20);
        assert_eq!(f.uniform_arity(), Some(3));
        assert!(random_kcsp(1, 3, 1, true, &mut rng).is_err());
        let g = random_kcsp(3, 4, 2, false, &mut rng).unwrap();
        assert!(g.clauses().iter().all(|c| c.arity() == 2));
    }

    #[test]
    fn graph_density_extremes() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        assert_eq!(random_graph(6, 1.0, false, &mut rng).unwrap(), Graph::complete(6));
        assert_eq!(random_graph(6, 0.0, true, &mut rng).unwrap().edge_count(), 0);
        assert_eq!(random_graph(4, 1.0, true, &mut rng).unwrap().edge_count(), 12);
    }
}
