use super::connect::{connect_within, DEFAULT_MAX_PATH_LEN};
use super::hitting::sample_hitting_set;
use super::params::{smallest_sample_size, DensityParams, SampleSize};
use super::{DenseError, DEFAULT_ATTEMPTS};
use crate::extract::dense_connected_minor;
use crate::graph::{
    average_degree, greedy_dense_subgraph, induced_subgraph, is_eps_t_dense, nonedge_count, Graph, Rational, Rng,
    VertexSet,
};
use crate::model::{pattern_graph, validate_model, MinorModel};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildOptions {
    pub c_scale: Rational,
    pub sample_size: SampleSize,
    pub attempts: usize,
    pub max_path_len: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            c_scale: Rational::from_integer(8),
            sample_size: SampleSize::Auto,
            attempts: DEFAULT_ATTEMPTS,
            max_path_len: DEFAULT_MAX_PATH_LEN,
        }
    }
}

/// What one placement round did.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoundRecord {
    pub r: usize,
    pub attempts: usize,
    pub covered_failures: usize,
    pub undominated: usize,
    pub branch_size: usize,
    pub hypotheses_hold: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BuildOutcome {
    pub model: MinorModel,
    pub params: DensityParams,
    /// Order of the intermediate dense connected minor (0 when the host
    /// was already dense enough to skip it).
    pub minor_order: usize,
    pub rounds: Vec<RoundRecord>,
}

impl BuildOutcome {
    pub fn attempts(&self) -> usize {
        self.rounds.iter().map(|r| r.attempts).sum()
    }
}

/// Checks that the model's pattern is `(eps, t)`-dense on exactly `t`
/// vertices.
pub(crate) fn certify_dense(g: &Graph, model: &MinorModel, eps: Rational, t: usize) -> Result<(), DenseError> {
    let report = validate_model(g, model);
    if let Some(v) = report.violations.into_iter().next() {
        return Err(crate::model::ModelError::Invalid(v).into());
    }
    let pattern = report.pattern.expect("valid model has a pattern");
    if pattern.n() != t || !is_eps_t_dense(&pattern, eps)? {
        return Err(DenseError::DensityNotMet {
            nonedges: nonedge_count(&pattern),
        });
    }
    Ok(())
}

/// Averaging shortcut: if `g` itself is `(eps, |g|)`-dense, its
/// min-degree survivors on `t` vertices are `(eps, t)`-dense.
pub(crate) fn dense_host_shortcut(g: &Graph, eps: Rational, t: usize) -> Result<Option<MinorModel>, DenseError> {
    if g.n() < t || !is_eps_t_dense(g, eps)? {
        return Ok(None);
    }
    Ok(Some(MinorModel::singletons(greedy_dense_subgraph(g, t)?)))
}

/// An `(eps, t)`-dense minor of a graph with average degree at least
/// `d = ceil(c_scale t sqrt(ln(1/eps)))`, with default options otherwise.
pub fn build_dense_minor(
    g: &Graph,
    eps: Rational,
    t: usize,
    c_scale: Rational,
    rng: &mut Rng,
) -> Result<MinorModel, DenseError> {
    let options = BuildOptions {
        c_scale,
        ..BuildOptions::default()
    };
    build_dense_minor_with(g, eps, t, &options, rng).map(|o| o.model)
}

/// The full construction. First a minor `H` with at most `d` vertices,
/// minimum degree at least `d/3` and connectivity at least `d/6`; then
/// `t` rounds, each sampling a set that meets most earlier branch sets
/// and dominates most of what remains, stitched into a connected branch
/// set inside `H` minus the earlier ones.
pub fn build_dense_minor_with(
    g: &Graph,
    eps: Rational,
    t: usize,
    options: &BuildOptions,
    rng: &mut Rng,
) -> Result<BuildOutcome, DenseError> {
    let mut params = DensityParams::new(eps, t, options.c_scale)?;
    if let SampleSize::Fixed(r) = options.sample_size {
        params = params.with_r(r);
    }
    if let Some(model) = dense_host_shortcut(g, eps, t)? {
        certify_dense(g, &model, eps, t)?;
        return Ok(BuildOutcome {
            model,
            params,
            minor_order: 0,
            rounds: Vec::new(),
        });
    }
    let avg = average_degree(g);
    if avg < Rational::from_integer(params.d as i64) {
        return Err(DenseError::Precondition(format!(
            "average degree {avg} is below d = {}",
            params.d
        )));
    }
    let outer = dense_connected_minor(g, params.d)?;
    let h = pattern_graph(g, &outer)?;
    let mut placed: Vec<VertexSet> = Vec::new();
    let mut used = VertexSet::new();
    let mut rounds = Vec::new();
    let mut r = match options.sample_size {
        SampleSize::Auto => 1,
        _ => params.r,
    };
    for k in 0..t {
        let rest: VertexSet = h.vertices().filter(|v| !used.contains(v)).collect();
        if rest.is_empty() {
            return Err(DenseError::OutOfRoom { placed: k });
        }
        let (f, map) = induced_subgraph(&h, &rest)?;
        let mut local = vec![usize::MAX; h.n()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        // a_list[i]: vertices of F with no neighbour in branch set i
        let a_list: Vec<VertexSet> = placed
            .iter()
            .map(|b| {
                f.vertices()
                    .filter(|&x| !h.neighbors(map[x]).iter().any(|u| b.contains(u)))
                    .collect()
            })
            .collect();
        if options.sample_size == SampleSize::Auto {
            r = r.max(smallest_sample_size(&f, eps).unwrap_or(params.r));
        }
        let hit = sample_hitting_set(&f, &a_list, r, eps, params.d, rng, options.attempts)?;
        let joined = connect_within(&f, &hit.s, options.max_path_len)?;
        let branch: VertexSet = joined.iter().map(|&x| map[x]).collect();
        rounds.push(RoundRecord {
            r,
            attempts: hit.attempts,
            covered_failures: hit.covered_failures,
            undominated: hit.undominated,
            branch_size: branch.len(),
            hypotheses_hold: hit.hypotheses_hold,
        });
        used.extend(branch.iter().copied());
        placed.push(branch);
    }
    let model = outer.compose(&MinorModel::new(placed));
    certify_dense(g, &model, eps, t)?;
    Ok(BuildOutcome {
        model,
        params: if options.sample_size == SampleSize::Auto {
            params.with_r(r)
        } else {
            params
        },
        minor_order: h.n(),
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::random_graph;

    #[test]
    fn clique_inputs_take_the_shortcut() {
        let eps = Rational::new(1, 10);
        let c = Rational::from_integer(8);
        let m = build_dense_minor(&Graph::complete(5), eps, 5, c, &mut Rng::new(1)).unwrap();
        assert_eq!(m, MinorModel::identity(&Graph::complete(5)));
        let m = build_dense_minor(&Graph::complete(15), eps, 5, c, &mut Rng::new(1)).unwrap();
        assert_eq!(m.len(), 5);
    }

    #[test]
    fn random_host_gives_certified_minor_or_typed_error() {
        let eps = Rational::new(1, 10);
        let mut ok = 0;
        for seed in 0..5 {
            let mut rng = Rng::new(seed);
            let g = random_graph(200, Rational::new(1, 2), &mut rng).unwrap();
            match build_dense_minor(&g, eps, 5, Rational::from_integer(8), &mut rng) {
                Ok(m) => {
                    let p = pattern_graph(&g, &m).unwrap();
                    assert!(is_eps_t_dense(&p, eps).unwrap());
                    ok += 1;
                }
                Err(e) => assert!(!matches!(e, DenseError::Graph(_) | DenseError::Model(_)), "{e}"),
            }
        }
        assert!(ok > 0);
    }

    #[test]
    fn sparse_host_is_rejected() {
        let err = build_dense_minor(
            &Graph::cycle(30),
            Rational::new(1, 10),
            3,
            Rational::from_integer(1),
            &mut Rng::new(0),
        )
        .unwrap_err();
        assert!(matches!(err, DenseError::Precondition(_)));
    }
}
