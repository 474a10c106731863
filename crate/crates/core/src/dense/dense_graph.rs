use num_bigint::BigUint;

use super::build::certify_dense;
use super::hitting::sample_hitting_set;
use super::{DenseError, DEFAULT_ATTEMPTS};
use crate::graph::{induced_subgraph, nonedge_count, pairs, Graph, Rational, Rng, Vertex, VertexSet};
use crate::model::MinorModel;

/// Exact test of `24^r (12 q)^(r^2) <= eps` with `q` the nonedge density
/// of `g` and `r = floor(n / 12t)`. Returns `r` when it holds.
pub fn dense_graph_hypothesis(g: &Graph, eps: Rational, t: usize) -> Result<usize, DenseError> {
    let n = g.n();
    if t < 2 || n < 12 * t {
        return Err(DenseError::HypothesisViolated(format!(
            "need n >= 12t, have n = {n}, t = {t}"
        )));
    }
    let r = n / (12 * t);
    let exp = (r * r) as u32;
    let lhs = BigUint::from(24u32).pow(r as u32)
        * BigUint::from(12 * nonedge_count(g)).pow(exp)
        * BigUint::from(*eps.denom() as u64);
    let rhs = BigUint::from(*eps.numer() as u64) * BigUint::from(pairs(n) as u64).pow(exp);
    if lhs > rhs {
        return Err(DenseError::HypothesisViolated(format!(
            "24^r (12q)^(r^2) exceeds eps for r = {r}"
        )));
    }
    Ok(r)
}

/// The `floor(n/3)` vertices with fewest nonneighbours (least label on
/// ties). Each has at most `2qn` nonneighbours, since fewer than half of
/// the vertices can exceed twice the average.
pub fn low_nonneighbour_set(g: &Graph) -> VertexSet {
    let n = g.n();
    let mut order: Vec<Vertex> = g.vertices().collect();
    order.sort_by_key(|&v| (n - 1 - g.degree(v), v));
    order.truncate(n / 3);
    order.into_iter().collect()
}

/// An `(eps, t)`-dense minor of a dense graph satisfying
/// [`dense_graph_hypothesis`].
///
/// Samples `t` small sets inside the low-nonneighbour set `S` so that
/// each meets all but an `eps` fraction of its predecessors, then makes
/// each connected through common neighbours outside `S`.
pub fn build_dense_minor_in_dense_graph(
    g: &Graph,
    eps: Rational,
    t: usize,
    rng: &mut Rng,
) -> Result<MinorModel, DenseError> {
    build_in_dense_graph(g, eps, t, rng, DEFAULT_ATTEMPTS)
}

pub(crate) fn build_in_dense_graph(
    g: &Graph,
    eps: Rational,
    t: usize,
    rng: &mut Rng,
    attempts: usize,
) -> Result<MinorModel, DenseError> {
    let r = dense_graph_hypothesis(g, eps, t)?;
    let n = g.n();
    let s = low_nonneighbour_set(g);
    let (gs, map) = induced_subgraph(g, &s)?;
    let mut placed: Vec<VertexSet> = Vec::new();
    let mut used = VertexSet::new();
    for k in 0..t {
        let rest: VertexSet = gs.vertices().filter(|v| !used.contains(v)).collect();
        if rest.is_empty() {
            return Err(DenseError::OutOfRoom { placed: k });
        }
        let (f, fmap) = induced_subgraph(&gs, &rest)?;
        let a_list: Vec<VertexSet> = placed
            .iter()
            .map(|p| {
                f.vertices()
                    .filter(|&x| !gs.neighbors(fmap[x]).iter().any(|u| p.contains(u)))
                    .collect()
            })
            .collect();
        let hit = sample_hitting_set(&f, &a_list, r, eps, n, rng, attempts)?;
        let part: VertexSet = hit.s.iter().map(|&x| fmap[x]).collect();
        used.extend(part.iter().copied());
        placed.push(part);
    }
    // lift to host labels and connect through unused common neighbours
    let mut taken: VertexSet = s.clone();
    let mut fragments = Vec::with_capacity(t);
    for part in placed {
        let part: VertexSet = part.iter().map(|&x| map[x]).collect();
        let root = *part.first().unwrap();
        let mut branch = part.clone();
        for &y in part.iter().skip(1) {
            if g.has_edge(root, y) {
                continue;
            }
            let w = g
                .neighbors(root)
                .iter()
                .copied()
                .find(|&w| !taken.contains(&w) && g.has_edge(w, y))
                .ok_or_else(|| DenseError::HypothesisViolated("no free common neighbour".into()))?;
            taken.insert(w);
            branch.insert(w);
        }
        fragments.push(branch);
    }
    let model = MinorModel::new(fragments);
    certify_dense(g, &model, eps, t)?;
    Ok(model)
}
