use std::collections::BTreeSet;

use super::ExtractError;
use crate::graph::{
    average_degree, induced_subgraph, min_vertex_cut, vertex_connectivity, Graph, Rational, Vertex, VertexSet,
};

fn lift(map: &[Vertex], s: &VertexSet) -> VertexSet {
    s.iter().map(|&v| map[v]).collect()
}

/// `e(H) - (2k - 3)(|H| - k + 1)`; a subgraph with at least `2k - 1`
/// vertices on which this is positive contains a `k`-connected subgraph.
fn surplus(h: &Graph, k: usize) -> i64 {
    h.m() as i64 - (2 * k as i64 - 3) * (h.n() as i64 - k as i64 + 1)
}

fn is_k_connected(g: &Graph, s: &VertexSet, k: usize) -> Result<bool, ExtractError> {
    if s.len() <= k {
        return Ok(false);
    }
    let (h, _) = induced_subgraph(g, s)?;
    Ok(vertex_connectivity(&h)? >= k)
}

/// Vertices of `s` surviving repeated deletion of vertices with fewer
/// than `k` neighbours in the current set.
fn k_core(g: &Graph, s: &VertexSet, k: usize) -> VertexSet {
    let mut inside = s.clone();
    let mut deg: Vec<usize> = vec![0; g.n()];
    for &v in s {
        deg[v] = g.neighbors(v).iter().filter(|u| s.contains(u)).count();
    }
    let mut pending: BTreeSet<Vertex> = s.iter().copied().filter(|&v| deg[v] < k).collect();
    while let Some(v) = pending.pop_first() {
        inside.remove(&v);
        for &u in g.neighbors(v) {
            if inside.contains(&u) {
                deg[u] -= 1;
                if deg[u] < k {
                    pending.insert(u);
                }
            }
        }
    }
    inside
}

/// A `k`-connected subgraph of a host with average degree at least `4k`.
///
/// Keeps a vertex set of positive [`surplus`]: deletes vertices of degree
/// at most `2k - 3`, and at a separation of order below `k` moves to the
/// side (with the separator) of larger surplus. The result is certified
/// with an exact connectivity computation.
pub fn k_connected_subgraph(g: &Graph, k: usize) -> Result<VertexSet, ExtractError> {
    if k == 0 {
        return Err(ExtractError::Precondition("k must be at least 1".into()));
    }
    let avg = average_degree(g);
    if avg < Rational::from_integer(4 * k as i64) {
        return Err(ExtractError::Precondition(format!(
            "average degree {avg} is below 4k = {}",
            4 * k
        )));
    }
    let found = if k == 1 {
        g.components().into_iter().find(|c| c.len() >= 2).unwrap_or_default()
    } else {
        descend(g, k)?
    };
    if !is_k_connected(g, &found, k)? {
        return Err(ExtractError::ExtractionFailed(format!(
            "descent ended on a set that is not {k}-connected"
        )));
    }
    Ok(found)
}

fn descend(g: &Graph, k: usize) -> Result<VertexSet, ExtractError> {
    let floor = 2 * k - 1;
    let mut current: VertexSet = g.vertices().collect();
    loop {
        // drop low-degree vertices while the set stays above 2k - 1
        let mut deg: Vec<usize> = vec![0; g.n()];
        for &v in &current {
            deg[v] = g.neighbors(v).iter().filter(|u| current.contains(u)).count();
        }
        let mut pending: BTreeSet<Vertex> = current.iter().copied().filter(|&v| deg[v] + 3 <= 2 * k).collect();
        while current.len() > floor {
            let Some(v) = pending.pop_first() else {
                break;
            };
            current.remove(&v);
            for &u in g.neighbors(v) {
                if current.contains(&u) {
                    deg[u] -= 1;
                    if deg[u] + 3 <= 2 * k {
                        pending.insert(u);
                    }
                }
            }
        }
        let (h, map) = induced_subgraph(g, &current)?;
        let cut = match min_vertex_cut(&h) {
            Some(cut) if cut.cut.len() < k => cut,
            _ => return Ok(current),
        };
        let first: VertexSet = cut.side_a.union(&cut.cut).copied().collect();
        let second: VertexSet = cut.side_b.union(&cut.cut).copied().collect();
        let (h1, _) = induced_subgraph(&h, &first)?;
        let (h2, _) = induced_subgraph(&h, &second)?;
        let side = if surplus(&h1, k) >= surplus(&h2, k) {
            first
        } else {
            second
        };
        current = lift(&map, &side);
    }
}

/// Some `k`-connected subgraph of `g[allowed]` with at most `max_size`
/// vertices. Separations of order below `k` split the search exactly;
/// pieces that are `k`-connected but too large are retried on truncated
/// breadth-first balls.
fn find_small(
    g: &Graph,
    allowed: &VertexSet,
    k: usize,
    max_size: usize,
    use_balls: bool,
) -> Result<Option<VertexSet>, ExtractError> {
    let mut stack = vec![allowed.clone()];
    let mut too_big = Vec::new();
    while let Some(piece) = stack.pop() {
        let core = k_core(g, &piece, k);
        let comps = g.components_within(&core);
        for comp in comps.into_iter().rev() {
            if comp.len() <= k {
                continue;
            }
            let (h, map) = induced_subgraph(g, &comp)?;
            match min_vertex_cut(&h) {
                Some(cut) if cut.cut.len() < k => {
                    stack.push(lift(&map, &cut.side_b.union(&cut.cut).copied().collect()));
                    stack.push(lift(&map, &cut.side_a.union(&cut.cut).copied().collect()));
                }
                _ if comp.len() <= max_size => return Ok(Some(comp)),
                _ => too_big.push(comp),
            }
        }
    }
    if !use_balls {
        return Ok(None);
    }
    for piece in too_big {
        for &v in &piece {
            let ball = ball_order(g, &piece, v, max_size);
            if let Some(found) = find_small(g, &ball, k, max_size, false)? {
                return Ok(Some(found));
            }
        }
    }
    Ok(None)
}

fn ball_order(g: &Graph, within: &VertexSet, root: Vertex, size: usize) -> VertexSet {
    let mut seen = VertexSet::from([root]);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if seen.len() >= size {
                return seen;
            }
            if within.contains(&u) && seen.insert(u) {
                queue.push_back(u);
            }
        }
    }
    seen
}

/// Greedily removes `k`-connected subgraphs of at most `max_size`
/// vertices until `want` are found. Fewer than `want` is reported as
/// [`ExtractError::Insufficient`] carrying what was found.
pub fn disjoint_k_connected_collection(
    g: &Graph,
    k: usize,
    max_size: usize,
    want: usize,
) -> Result<Vec<VertexSet>, ExtractError> {
    if k == 0 {
        return Err(ExtractError::Precondition("k must be at least 1".into()));
    }
    let mut remaining: VertexSet = g.vertices().collect();
    let mut found = Vec::new();
    while found.len() < want {
        let Some(part) = find_small(g, &remaining, k, max_size, true)? else {
            break;
        };
        if part.len() > max_size || !is_k_connected(g, &part, k)? {
            return Err(ExtractError::ExtractionFailed(
                "collection member failed its certificate".into(),
            ));
        }
        for v in &part {
            remaining.remove(v);
        }
        found.push(part);
    }
    if found.len() < want {
        return Err(ExtractError::Insufficient { found, want });
    }
    Ok(found)
}
