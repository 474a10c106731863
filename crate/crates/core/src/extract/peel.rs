use std::collections::BTreeSet;

use super::ExtractError;
use crate::graph::{Graph, Rational, Vertex, VertexSet};

fn check(r: usize, delta: Rational) -> Result<(), ExtractError> {
    if r < 3 {
        return Err(ExtractError::Precondition(format!("r = {r} is below 3")));
    }
    if delta <= Rational::from_integer(0) {
        return Err(ExtractError::Precondition("delta must be positive".into()));
    }
    Ok(())
}

/// Whether `(r - 2) e(S) > (r - 1) delta |S| + boundary(S)`, the condition
/// under which peeling is guaranteed to leave something.
pub fn peel_hypothesis_holds(g: &Graph, s: &VertexSet, r: usize, delta: Rational) -> bool {
    let lhs = Rational::from_integer((r as i64 - 2) * g.edges_within(s) as i64);
    let rhs = Rational::from_integer(r as i64 - 1) * delta * Rational::from_integer(s.len() as i64)
        + Rational::from_integer(g.boundary_edges(s) as i64);
    lhs > rhs
}

/// Largest subset `S'` of `s` in which every vertex `v` has at least
/// `max(delta, d_g(v) / r)` neighbours, found by deleting violators (the
/// least first) until none remain. May be empty.
pub fn peel_dense_subset(g: &Graph, s: &VertexSet, r: usize, delta: Rational) -> Result<VertexSet, ExtractError> {
    check(r, delta)?;
    g.check_vertices(s)?;
    let mut inside = vec![false; g.n()];
    for &v in s {
        inside[v] = true;
    }
    let mut deg_in: Vec<usize> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().filter(|&&u| inside[u]).count())
        .collect();
    let violates = |v: Vertex, d: usize| {
        let d = d as i64;
        Rational::from_integer(d) < delta || r as i64 * d < g.degree(v) as i64
    };
    let mut pending: BTreeSet<Vertex> = s.iter().copied().filter(|&v| violates(v, deg_in[v])).collect();
    while let Some(v) = pending.pop_first() {
        inside[v] = false;
        for &u in g.neighbors(v) {
            if inside[u] {
                deg_in[u] -= 1;
                if violates(u, deg_in[u]) {
                    pending.insert(u);
                }
            }
        }
    }
    let out: VertexSet = s.iter().copied().filter(|&v| inside[v]).collect();
    assert!(
        !out.is_empty() || !peel_hypothesis_holds(g, s, r, delta),
        "peeling emptied a set satisfying the surplus condition"
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn peel_examples() {
        let k10 = Graph::complete(10);
        let all: VertexSet = k10.vertices().collect();
        assert_eq!(
            peel_dense_subset(&k10, &all, 3, Rational::from_integer(4)).unwrap(),
            all
        );

        let star = Graph::star(10);
        let all: VertexSet = star.vertices().collect();
        assert!(peel_dense_subset(&star, &all, 3, Rational::from_integer(2))
            .unwrap()
            .is_empty());

        assert!(peel_dense_subset(&k10, &all, 2, Rational::from_integer(1)).is_err());
        assert!(peel_dense_subset(&k10, &all, 3, Rational::from_integer(0)).is_err());
    }
}
