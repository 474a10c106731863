use super::DenseError;
use crate::graph::{Graph, VertexSet};

/// Longest stitching path (in edges) allowed by default.
pub const DEFAULT_MAX_PATH_LEN: usize = 14;

/// Smallest-effort connected superset of `s`: while `g[B]` has several
/// components, joins the component of the least vertex to the rest of
/// `B` by a shortest path. Every such path is induced, so in a host of
/// large minimum degree it is short; a longer one is an error.
pub fn connect_within(g: &Graph, s: &VertexSet, max_path_len: usize) -> Result<VertexSet, DenseError> {
    g.check_vertices(s)?;
    if s.is_empty() {
        return Err(DenseError::Precondition("cannot connect an empty set".into()));
    }
    let mut b = s.clone();
    loop {
        let comps = g.components_within(&b);
        if comps.len() == 1 {
            break;
        }
        let first = &comps[0];
        let path = g
            .shortest_path(first, |v| !b.contains(&v), |v| b.contains(&v) && !first.contains(&v))
            .ok_or(DenseError::DisconnectedHost)?;
        let len = path.len() - 1;
        if len > max_path_len {
            return Err(DenseError::PathTooLong { len, max: max_path_len });
        }
        b.extend(path);
    }
    assert!(
        b.len() <= s.len() * max_path_len.max(1),
        "stitching exceeded its size bound"
    );
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_input_is_returned() {
        let s = VertexSet::from([0, 1, 2]);
        assert_eq!(connect_within(&Graph::path(5), &s, 14).unwrap(), s);
    }

    #[test]
    fn antipodal_pair_on_a_cycle() {
        let b = connect_within(&Graph::cycle(10), &VertexSet::from([0, 5]), 14).unwrap();
        assert_eq!(b.len(), 6);
        assert!(Graph::cycle(10).is_connected_set(&b));
    }

    #[test]
    fn failures_are_typed() {
        let g = Graph::path(20);
        assert_eq!(
            connect_within(&g, &VertexSet::from([0, 19]), 14),
            Err(DenseError::PathTooLong { len: 19, max: 14 })
        );
        let g = Graph::empty(3);
        assert_eq!(
            connect_within(&g, &VertexSet::from([0, 2]), 14),
            Err(DenseError::DisconnectedHost)
        );
    }
}
