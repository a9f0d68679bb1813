use super::{check_cap, SolveResult};
use crate::error::{Error, Result};
use crate::instances::Graph;

pub const MIS_CAP: usize = 64;

#[inline]
fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Greedy clique cover size of `cand`; an upper bound on its independence number.
fn clique_cover(adj: &[u64], mut cand: u64) -> u32 {
    let mut cliques = 0;
    while cand != 0 {
        let mut clique = 0u64;
        let mut common = cand;
        while common != 0 {
            let v = common.trailing_zeros() as usize;
            clique |= bit(v);
            common &= adj[v] & !bit(v);
        }
        cand &= !clique;
        cliques += 1;
    }
    cliques
}

struct Bnb<'a> {
    adj: &'a [u64],
    best_size: u32,
    best: u64,
}

impl Bnb<'_> {
    fn search(&mut self, mut cand: u64, mut chosen: u64) {
        // Vertices with no neighbour left in `cand` belong to some optimum.
        loop {
            let mut isolated = 0u64;
            let mut rest = cand;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if self.adj[v] & cand == 0 {
                    isolated |= bit(v);
                }
            }
            if isolated == 0 {
                break;
            }
            chosen |= isolated;
            cand &= !isolated;
        }
        let size = chosen.count_ones();
        if cand == 0 {
            if size > self.best_size {
                self.best_size = size;
                self.best = chosen;
            }
            return;
        }
        if size + clique_cover(self.adj, cand) <= self.best_size {
            return;
        }
        // Branch on the maximum-degree candidate, ties by lowest index.
        let mut pick = 0;
        let mut pick_deg = 0;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.adj[v] & cand).count_ones();
            if d > pick_deg {
                pick = v;
                pick_deg = d;
            }
        }
        self.search(cand & !self.adj[pick] & !bit(pick), chosen | bit(pick));
        self.search(cand & !bit(pick), chosen);
    }
}

/// Independence number with a maximum independent set (1-based, ascending).
pub fn max_independent_set(g: &Graph) -> Result<SolveResult<usize, Vec<usize>>> {
    if g.is_directed() {
        return Err(Error::param("independent sets need an undirected graph"));
    }
    check_cap("independent-set oracle vertices", g.vertex_count(), MIS_CAP)?;
    let n = g.vertex_count();
    let adj = g.adjacency_masks();
    let all = if n == 64 { u64::MAX } else { bit(n) - 1 };
    let mut bnb = Bnb {
        adj: &adj,
        best_size: 0,
        best: 0,
    };
    bnb.search(all, 0);
    let set: Vec<usize> = (0..n).filter(|&v| bnb.best & bit(v) != 0).map(|v| v + 1).collect();
    debug_assert!(g.is_independent(&set));
    Ok(SolveResult::new(set.len(), Some(set)))
}

/// Minimum vertex cover as the complement of a maximum independent set.
pub fn min_vertex_cover(g: &Graph) -> Result<SolveResult<usize, Vec<usize>>> {
    let mis = max_independent_set(g)?;
    let set = mis.witness.unwrap_or_default();
    let mut in_set = vec![false; g.vertex_count() + 1];
    for &v in &set {
        in_set[v] = true;
    }
    let cover: Vec<usize> = (1..=g.vertex_count()).filter(|&v| !in_set[v]).collect();
    debug_assert!(g.edges().iter().all(|&(u, v)| !in_set[u] || !in_set[v]));
    Ok(SolveResult::new(cover.len(), Some(cover)))
}
