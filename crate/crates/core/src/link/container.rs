use super::LinkError;
use crate::graph::{two_coloring, Graph, VertexSet};

/// A connected induced subgraph `h ⊇ s' ⊇ s` with `|s'| <= 3|s|` whose
/// part outside `s'` is bipartite. Returns `(s', h)`.
///
/// Grows `h` from the least vertex of `s` by shortest paths to each
/// remaining vertex of `s`. The first new vertex of every path goes into
/// `s'`; the rest of the path then has no neighbour in the old `h`, so
/// `h - s'` is a disjoint union of induced paths. This uses at most
/// `2|s| - 1` vertices in `s'`.
pub fn container(g: &Graph, s: &VertexSet) -> Result<(VertexSet, VertexSet), LinkError> {
    g.check_vertices(s)?;
    if !g.is_connected() {
        return Err(LinkError::Precondition("graph is not connected".into()));
    }
    let Some(&first) = s.first() else {
        return Err(LinkError::Precondition("s is empty".into()));
    };
    let mut h = VertexSet::from([first]);
    let mut s_prime = VertexSet::from([first]);
    for &v in s.iter().skip(1) {
        if h.contains(&v) {
            s_prime.insert(v);
            continue;
        }
        let path = g
            .shortest_path(&h, |x| !h.contains(&x), |x| x == v)
            .ok_or_else(|| LinkError::ConstructionFailed(format!("{v} is unreachable")))?;
        s_prime.insert(path[1]);
        s_prime.insert(v);
        h.extend(path);
    }
    if s_prime.len() > 3 * s.len() || !s.is_subset(&s_prime) || !g.is_connected_set(&h) {
        return Err(LinkError::ConstructionFailed("container bounds not met".into()));
    }
    let rest: VertexSet = h.difference(&s_prime).copied().collect();
    if two_coloring(g, &rest).is_none() {
        return Err(LinkError::ConstructionFailed("remainder is not bipartite".into()));
    }
    Ok((s_prime, h))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_vertex() {
        let (sp, h) = container(&Graph::cycle(5), &VertexSet::from([3])).unwrap();
        assert_eq!(sp, VertexSet::from([3]));
        assert_eq!(h, VertexSet::from([3]));
    }

    #[test]
    fn tree_gives_the_spanning_subtree() {
        // spider with legs 1-2, 3-4, 5-6 around centre 0
        let g = Graph::from_edges(7, [(0, 1), (1, 2), (0, 3), (3, 4), (0, 5), (5, 6)]).unwrap();
        let s = VertexSet::from([2, 4]);
        let (sp, h) = container(&g, &s).unwrap();
        assert_eq!(h, VertexSet::from([0, 1, 2, 3, 4]));
        assert!(sp.is_superset(&s) && sp.len() <= 6);
    }

    #[test]
    fn disconnected_input_is_rejected() {
        assert!(container(&Graph::empty(2), &VertexSet::from([0])).is_err());
    }
}
