use super::{check_cap, SolveResult};
use crate::error::{Error, Result};
use crate::instances::Graph;

pub const HAM_DP_CAP: usize = 22;
pub const HAM_BACKTRACK_CAP: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HamStrategy {
    /// Held–Karp style reachability over vertex subsets.
    SubsetDp,
    /// Depth-first search with degree pruning.
    Backtrack,
    /// Subset DP up to 12 vertices, backtracking above.
    #[default]
    Auto,
}

/// Whether `cycle` visits every vertex of `g` exactly once along edges of
/// `g`, returning to its start.
pub fn is_hamiltonian_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let n = g.vertex_count();
    if cycle.len() != n || n < 2 || (!g.is_directed() && n < 3) {
        return false;
    }
    let mut seen = vec![false; n + 1];
    for &v in cycle {
        if v == 0 || v > n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..n).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % n]))
}

/// Decides Hamiltonicity; the witness starts at vertex 1.
pub fn has_hamiltonian_cycle(g: &Graph, strategy: HamStrategy) -> Result<SolveResult<bool, Vec<usize>>> {
    let n = g.vertex_count();
    let strategy = match strategy {
        HamStrategy::Auto if n <= 12 => HamStrategy::SubsetDp,
        HamStrategy::Auto => HamStrategy::Backtrack,
        s => s,
    };
    match strategy {
        HamStrategy::SubsetDp => check_cap("Hamiltonicity subset DP vertices", n, HAM_DP_CAP)?,
        _ => check_cap("Hamiltonicity backtracking vertices", n, HAM_BACKTRACK_CAP)?,
    }
    if n < 2 || (!g.is_directed() && n < 3) {
        return Ok(SolveResult::new(false, None));
    }
    let out = g.adjacency_masks();
    let cycle = match strategy {
        HamStrategy::SubsetDp => subset_dp(&out, n),
        _ => backtrack(&out, n),
    };
    if let Some(c) = &cycle {
        if !is_hamiltonian_cycle(g, c) {
            return Err(Error::invalid("internal: Hamiltonicity witness failed verification"));
        }
    }
    Ok(SolveResult::new(cycle.is_some(), cycle))
}

fn subset_dp(out: &[u64], n: usize) -> Option<Vec<usize>> {
    // reach[mask]: bitset of end vertices of paths from vertex 0 covering
    // exactly `mask` (which always contains vertex 0). Indexed by mask >> 1.
    let size = 1usize << (n - 1);
    let mut reach = vec![0u32; size];
    reach[0] = 1;
    for idx in 0..size {
        let ends = reach[idx];
        if ends == 0 {
            continue;
        }
        let mask = ((idx as u64) << 1) | 1;
        let mut e = ends;
        while e != 0 {
            let v = e.trailing_zeros() as usize;
            e &= e - 1;
            let mut next = out[v] & !mask;
            while next != 0 {
                let w = next.trailing_zeros() as usize;
                next &= next - 1;
                let nidx = ((mask | (1 << w)) >> 1) as usize;
                reach[nidx] |= 1 << w;
            }
        }
    }
    let full = size - 1;
    let mut last = (0..n).find(|&v| reach[full] >> v & 1 == 1 && out[v] & 1 == 1 && v != 0)?;
    // Walk predecessors back to vertex 0.
    let mut path = vec![last];
    let mut mask = (full << 1) | 1;
    while path.len() < n {
        let prev_mask = mask & !(1 << last);
        let pidx = prev_mask >> 1;
        let prev = (0..n)
            .find(|&u| reach[pidx] >> u & 1 == 1 && out[u] >> last & 1 == 1)
            .expect("predecessor exists by construction");
        path.push(prev);
        mask = prev_mask;
        last = prev;
    }
    path.reverse();
    Some(path.into_iter().map(|v| v + 1).collect())
}

struct Backtracker {
    out: Vec<u64>,
    inn: Vec<u64>,
    n: usize,
    path: Vec<usize>,
}

impl Backtracker {
    fn feasible(&self, unvisited: u64, last: usize) -> bool {
        // Every unvisited vertex needs a possible predecessor and successor,
        // and the start needs a way back in.
        let preds = unvisited | (1 << last);
        let succs = unvisited | 1;
        let mut rest = unvisited;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if self.inn[x] & preds & !(1 << x) == 0 || self.out[x] & succs & !(1 << x) == 0 {
                return false;
            }
        }
        self.inn[0] & preds != 0
    }

    fn extend(&mut self, unvisited: u64) -> bool {
        let last = *self.path.last().unwrap();
        if unvisited == 0 {
            return self.out[last] & 1 == 1;
        }
        if !self.feasible(unvisited, last) {
            return false;
        }
        let mut next = self.out[last] & unvisited;
        while next != 0 {
            let w = next.trailing_zeros() as usize;
            next &= next - 1;
            self.path.push(w);
            if self.extend(unvisited & !(1 << w)) {
                return true;
            }
            self.path.pop();
        }
        false
    }
}

fn backtrack(out: &[u64], n: usize) -> Option<Vec<usize>> {
    let mut inn = vec![0u64; n];
    for (u, &m) in out.iter().enumerate() {
        let mut rest = m;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            inn[v] |= 1 << u;
        }
    }
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut bt = Backtracker {
        out: out.to_vec(),
        inn,
        n,
        path: vec![0],
    };
    if bt.extend(all & !1) {
        debug_assert_eq!(bt.path.len(), bt.n);
        Some(bt.path.into_iter().map(|v| v + 1).collect())
    } else {
        None
    }
}
