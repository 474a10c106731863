use super::build::{certify_dense, dense_host_shortcut};
use super::dense_graph::build_in_dense_graph;
use super::{DenseError, DEFAULT_ATTEMPTS};
use crate::graph::{log_inverse, to_f64, Graph, Rational, Rng, Vertex, VertexSet};
use crate::model::{pattern_graph, MinorModel};

/// Maximum number of low-degree root candidates tried.
const MAX_ROOTS: usize = 8;

fn check_bipartition(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<(), DenseError> {
    g.check_vertices(a)?;
    g.check_vertices(b)?;
    if !a.is_disjoint(b) || a.len() + b.len() != g.n() {
        return Err(DenseError::InvalidBipartition(
            "sides must partition the vertex set".into(),
        ));
    }
    if let Some((u, v)) = g.edges().find(|(u, v)| a.contains(u) == a.contains(v)) {
        return Err(DenseError::InvalidBipartition(format!(
            "edge {u}-{v} lies inside a side"
        )));
    }
    Ok(())
}

/// One random contraction: every `u` in `side_a - u0` with a neighbour in
/// `s` picks one uniformly and is merged into it. Returns the pattern on
/// `s` (vertex `i` is the `i`-th least element of `s`) and the model whose
/// fragment for `x` is `x` plus its choosers.
pub fn bipartite_random_contraction(
    g: &Graph,
    side_a: &VertexSet,
    side_b: &VertexSet,
    u0: Vertex,
    s: &VertexSet,
    rng: &mut Rng,
) -> Result<(Graph, MinorModel), DenseError> {
    check_bipartition(g, side_a, side_b)?;
    if !side_a.contains(&u0) {
        return Err(DenseError::InvalidBipartition(format!("{u0} is not on the first side")));
    }
    if s.iter().any(|&x| !g.has_edge(u0, x)) {
        return Err(DenseError::Precondition("s must lie in the neighbourhood of u0".into()));
    }
    let roots: Vec<Vertex> = s.iter().copied().collect();
    let mut fragments: Vec<VertexSet> = roots.iter().map(|&x| VertexSet::from([x])).collect();
    for &u in side_a {
        if u == u0 {
            continue;
        }
        let options: Vec<usize> = roots
            .iter()
            .enumerate()
            .filter(|(_, x)| g.has_edge(u, **x))
            .map(|(i, _)| i)
            .collect();
        if !options.is_empty() {
            fragments[options[rng.below(options.len())]].insert(u);
        }
    }
    let model = MinorModel::new(fragments);
    let pattern = pattern_graph(g, &model)?;
    Ok((pattern, model))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteOutcome {
    pub model: MinorModel,
    pub root: Vertex,
    pub sample: usize,
    pub attempts: usize,
}

/// [`build_dense_minor_bipartite_with`] with the default attempt budget.
#[allow(clippy::too_many_arguments)]
pub fn build_dense_minor_bipartite(
    g: &Graph,
    side_a: &VertexSet,
    side_b: &VertexSet,
    eps: Rational,
    t: usize,
    c_scale: Rational,
    rng: &mut Rng,
) -> Result<MinorModel, DenseError> {
    build_dense_minor_bipartite_with(g, side_a, side_b, eps, t, c_scale, DEFAULT_ATTEMPTS, rng).map(|o| o.model)
}

/// Follows the random-contraction argument: take a low-degree vertex
/// `u0` on the larger side, contract the larger side onto
/// `n = ceil(c_scale d / 2p + t)` neighbours of `u0`, and finish on the
/// contracted pattern either by averaging (pattern already
/// `(eps, n)`-dense) or by the dense-graph construction (which needs
/// `n >= 12t`). Up to `attempts` contractions are tried per root, over at
/// most eight roots in increasing order of degree.
#[allow(clippy::too_many_arguments)]
pub fn build_dense_minor_bipartite_with(
    g: &Graph,
    side_a: &VertexSet,
    side_b: &VertexSet,
    eps: Rational,
    t: usize,
    c_scale: Rational,
    attempts: usize,
    rng: &mut Rng,
) -> Result<BipartiteOutcome, DenseError> {
    check_bipartition(g, side_a, side_b)?;
    if t < 2 {
        return Err(DenseError::Precondition(format!("t = {t} is below 2")));
    }
    if eps <= Rational::from_integer(0) || eps >= Rational::new(1, 3) {
        return Err(DenseError::Precondition(format!("eps = {eps} is outside (0, 1/3)")));
    }
    let (a, b) = if side_a.len() >= side_b.len() {
        (side_a, side_b)
    } else {
        (side_b, side_a)
    };
    if b.is_empty() {
        return Err(DenseError::Precondition("a side is empty".into()));
    }
    let d = t as f64 * log_inverse(eps).sqrt();
    let needed = to_f64(c_scale) * d * ((a.len() * b.len()) as f64).sqrt() + (t * g.n()) as f64;
    if (g.m() as f64) < needed {
        return Err(DenseError::Precondition(format!("{} edges, need {needed:.1}", g.m())));
    }
    let p = (a.len() as f64 / b.len() as f64).sqrt();
    let size = (to_f64(c_scale) * d / (2.0 * p) + t as f64).ceil() as usize;
    let mut roots: Vec<Vertex> = a.iter().copied().filter(|&u| g.degree(u) >= size).collect();
    roots.sort_by_key(|&u| (g.degree(u), u));
    roots.truncate(MAX_ROOTS);
    if roots.is_empty() {
        return Err(DenseError::AttemptsExhausted {
            attempts: 0,
            hypotheses_hold: false,
        });
    }
    let mut tried = 0;
    for &u0 in &roots {
        let s: VertexSet = g.neighbors(u0).iter().copied().take(size).collect();
        for _ in 0..attempts {
            tried += 1;
            let (h, contraction) = bipartite_random_contraction(g, a, b, u0, &s, rng)?;
            let finish = match dense_host_shortcut(&h, eps, t)? {
                Some(m) => Ok(m),
                None => build_in_dense_graph(&h, eps, t, rng, attempts),
            };
            let inner = match finish {
                Ok(m) => m,
                Err(DenseError::HypothesisViolated(_))
                | Err(DenseError::AttemptsExhausted { .. })
                | Err(DenseError::OutOfRoom { .. }) => continue,
                Err(e) => return Err(e),
            };
            let model = contraction.compose(&inner);
            certify_dense(g, &model, eps, t)?;
            return Ok(BipartiteOutcome {
                model,
                root: u0,
                sample: size,
                attempts: tried,
            });
        }
    }
    Err(DenseError::AttemptsExhausted {
        attempts: tried,
        hypotheses_hold: true,
    })
}
