use super::cloud::{CloudKind, CloudMap, ReductionOutput};
use crate::error::{Error, Result};
use crate::instances::Graph;

/// R-blowup: each vertex becomes an independent cloud of `r` vertices and
/// each edge a complete `r x r` bipartite graph between the two clouds.
/// Vertex `v`'s cloud is `(v-1)r+1 ..= vr`.
pub fn blowup_graph(g: &Graph, r: usize) -> Result<ReductionOutput<Graph>> {
    if r < 1 {
        return Err(Error::param("blowup factor must be at least 1"));
    }
    if g.is_directed() {
        return Err(Error::param("blowup needs an undirected graph"));
    }
    let n = g.vertex_count();
    let mut edges = Vec::with_capacity(g.edge_count() * r * r);
    for &(u, v) in g.edges() {
        for a in (u - 1) * r + 1..=u * r {
            for b in (v - 1) * r + 1..=v * r {
                edges.push((a, b));
            }
        }
    }
    edges.sort_unstable();
    Ok(ReductionOutput {
        instance: Graph::from_sorted_unchecked(n * r, false, edges),
        clouds: CloudMap::contiguous(CloudKind::Vertex, n, r, 0),
        r,
    })
}

/// Cloud size used by the colouring reduction: `max(1, ceil(c * sqrt(ln n)))`.
pub fn coloring_blowup_factor(n: usize, c: f64) -> Result<usize> {
    if n < 2 {
        return Err(Error::param("the colouring blowup needs at least 2 vertices"));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param(format!("constant C = {c} must be positive")));
    }
    Ok(((c * (n as f64).ln().sqrt()).ceil() as usize).max(1))
}

/// The 3-colouring reduction: an R-blowup with `R = ceil(C sqrt(ln n))`.
pub fn coloring_blowup(g: &Graph, c: f64) -> Result<ReductionOutput<Graph>> {
    let r = coloring_blowup_factor(g.vertex_count(), c)?;
    blowup_graph(g, r)
}
