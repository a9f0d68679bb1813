use super::cloud::{CloudKind, CloudMap, ReductionOutput};
use crate::error::{Error, Result};
use crate::instances::Graph;

/// Routes every vertex's outgoing arcs through a private complete digraph.
///
/// Originals keep labels `1..=N`; the clique `U_i` of vertex `i` occupies
/// `N + (i-1)R + 1 ..= N + iR`. Arcs: all ordered pairs inside each `U_i`,
/// `i -> u` for every `u` in `U_i`, and `u -> j` for every `u` in `U_i` and
/// every original arc `i -> j`. A Hamiltonian cycle of the result enters
/// `U_i` only from `i` and must sweep all of it before leaving.
pub fn ham_gadget(g: &Graph, r: usize) -> Result<ReductionOutput<Graph>> {
    if !g.is_directed() {
        return Err(Error::param("the Hamiltonicity gadget needs a directed graph"));
    }
    if r < 1 {
        return Err(Error::param("clique size must be at least 1"));
    }
    let n = g.vertex_count();
    let clouds = CloudMap::contiguous(CloudKind::Vertex, n, r, n);
    let out = g.out_adjacency();
    let mut edges = Vec::with_capacity(n * r * (r + 1) + g.edge_count() * r);
    for (i, succ) in out.iter().enumerate().skip(1) {
        let cloud = clouds.cloud(i);
        edges.extend(cloud.iter().map(|&u| (i, u)));
        for &u in cloud {
            edges.extend(cloud.iter().filter(|&&w| w != u).map(|&w| (u, w)));
            edges.extend(succ.iter().map(|&j| (u, j)));
        }
    }
    edges.sort_unstable();
    Ok(ReductionOutput {
        instance: Graph::from_sorted_unchecked(n * (1 + r), true, edges),
        clouds,
        r,
    })
}
