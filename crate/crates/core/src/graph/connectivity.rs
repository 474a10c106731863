use super::flow::{SplitNetwork, INF};
use super::{Graph, GraphError, Vertex, VertexSet};

/// A cutset together with the two anticomplete sides it leaves behind.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexCut {
    pub cut: VertexSet,
    pub side_a: VertexSet,
    pub side_b: VertexSet,
}

/// Number of internally disjoint `u`-`v` paths for non-adjacent `u != v`,
/// stopping early once `limit` paths are found.
pub fn local_connectivity(g: &Graph, u: Vertex, v: Vertex, limit: usize) -> usize {
    local_network(g, u, v, limit).0
}

fn local_network(g: &Graph, u: Vertex, v: Vertex, limit: usize) -> (usize, SplitNetwork) {
    debug_assert!(u != v && !g.has_edge(u, v));
    let mut net = SplitNetwork::new(g, |x| if x == u || x == v { INF } else { 1 });
    net.attach_source(u, INF);
    net.attach_sink(v, INF);
    let flow = net.run(limit as i64);
    (flow as usize, net)
}

/// Minimum cutset, or `None` when the graph has no cutset (complete graphs
/// and graphs on at most one vertex).
pub fn min_vertex_cut(g: &Graph) -> Option<VertexCut> {
    let n = g.n();
    let mut best: Option<(usize, Vertex, Vertex)> = None;
    let mut bound = n.saturating_sub(1);
    let mut i = 0;
    while i < n && i <= bound {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                continue;
            }
            let k = local_connectivity(g, i, j, bound);
            if best.is_none() || k < bound {
                bound = k;
                best = Some((k, i, j));
            }
        }
        i += 1;
    }
    let (_, u, v) = best?;
    let (_, net) = local_network(g, u, v, n);
    let (inner, cut) = net.cut();
    let side_b = g
        .vertices()
        .filter(|x| !inner.contains(x) && !cut.contains(x))
        .collect();
    Some(VertexCut {
        cut,
        side_a: inner,
        side_b,
    })
}

/// Vertex connectivity: `n - 1` for complete graphs, otherwise the least
/// size of a cutset.
pub fn vertex_connectivity(g: &Graph) -> Result<usize, GraphError> {
    if g.n() < 2 {
        return Err(GraphError::OrderTooSmall { needed: 2, n: g.n() });
    }
    Ok(match min_vertex_cut(g) {
        Some(cut) => cut.cut.len(),
        None => g.n() - 1,
    })
}
