use super::{check_cap, SolveResult};
use crate::error::{Error, Result};
use crate::instances::{Coloring, Graph};

pub const COLORING_CAP: usize = 128;
pub const CHROMATIC_CAP: usize = 20;
const MAX_COLORS: usize = 32;

struct Search<'a> {
    adj: &'a [Vec<usize>],
    degree: Vec<usize>,
    q: usize,
    color: Vec<usize>,
    // forbid[v] bit c-1 set when some neighbour has colour c; counts kept
    // per colour so assignments can be undone.
    forbid_count: Vec<[u16; MAX_COLORS]>,
    forbid: Vec<u32>,
}

impl Search<'_> {
    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c;
        let adj = self.adj;
        for &w in &adj[v] {
            self.forbid_count[w][c - 1] += 1;
            self.forbid[w] |= 1 << (c - 1);
        }
    }

    fn unassign(&mut self, v: usize, c: usize) {
        self.color[v] = 0;
        let adj = self.adj;
        for &w in &adj[v] {
            self.forbid_count[w][c - 1] -= 1;
            if self.forbid_count[w][c - 1] == 0 {
                self.forbid[w] &= !(1 << (c - 1));
            }
        }
    }

    /// Uncoloured vertex of maximum saturation, then degree, then lowest index.
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(u32, usize, usize)> = None;
        for v in 1..self.color.len() {
            if self.color[v] != 0 {
                continue;
            }
            let key = (self.forbid[v].count_ones(), self.degree[v], v);
            match best {
                Some((s, d, _)) if (s, d) >= (key.0, key.1) => {}
                _ => best = Some(key),
            }
        }
        best.map(|(_, _, v)| v)
    }

    fn solve(&mut self, used: usize) -> bool {
        let Some(v) = self.pick() else { return true };
        let full = if self.q == 32 { u32::MAX } else { (1u32 << self.q) - 1 };
        // A fresh colour is interchangeable with any other unused one.
        let limit = (used + 1).min(self.q);
        for c in 1..=limit {
            if self.forbid[v] & (1 << (c - 1)) != 0 {
                continue;
            }
            self.assign(v, c);
            let dead = self.adj[v]
                .iter()
                .any(|&w| self.color[w] == 0 && self.forbid[w] & full == full);
            if !dead && self.solve(used.max(c)) {
                return true;
            }
            self.unassign(v, c);
        }
        false
    }
}

/// Decides whether `g` has a legal colouring with at most `q` colours.
pub fn is_k_colorable(g: &Graph, q: usize) -> Result<SolveResult<bool, Coloring>> {
    if g.is_directed() {
        return Err(Error::param("colouring needs an undirected graph"));
    }
    check_cap("colouring oracle vertices", g.vertex_count(), COLORING_CAP)?;
    if q == 0 || q > MAX_COLORS {
        return Err(Error::param(format!("colour count {q} outside 1..={MAX_COLORS}")));
    }
    let n = g.vertex_count();
    if n == 0 {
        return Ok(SolveResult::new(true, Some(Coloring::new(vec![]).unwrap())));
    }
    let adj = g.out_adjacency();
    let mut search = Search {
        degree: adj.iter().map(Vec::len).collect(),
        adj: &adj,
        q,
        color: vec![0; n + 1],
        forbid_count: vec![[0; MAX_COLORS]; n + 1],
        forbid: vec![0; n + 1],
    };
    if search.solve(0) {
        let coloring = Coloring::new(search.color[1..].to_vec())?;
        debug_assert!(coloring.is_legal_for(g));
        Ok(SolveResult::new(true, Some(coloring)))
    } else {
        Ok(SolveResult::new(false, None))
    }
}

/// Minimum number of colours, with a witness colouring.
pub fn chromatic_number(g: &Graph) -> Result<SolveResult<usize, Coloring>> {
    if g.is_directed() {
        return Err(Error::param("colouring needs an undirected graph"));
    }
    check_cap("chromatic number vertices", g.vertex_count(), CHROMATIC_CAP)?;
    if g.vertex_count() == 0 {
        return Ok(SolveResult::new(0, Some(Coloring::new(vec![]).unwrap())));
    }
    for q in 1..=g.vertex_count() {
        let r = is_k_colorable(g, q)?;
        if r.value {
            return Ok(SolveResult::new(q, r.witness));
        }
    }
    unreachable!("n colours always suffice")
}
