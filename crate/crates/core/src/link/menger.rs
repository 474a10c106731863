use super::paths::{PathContract, PathFamily, Separation};
use super::LinkError;
use crate::graph::flow::{SplitNetwork, INF};
use crate::graph::{Graph, Vertex, VertexSet};

/// The two certificates Menger's theorem offers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MengerOutcome {
    Paths(PathFamily),
    Separation(Separation),
}

/// Either `k` vertex-disjoint paths between `s` and `t`, or a separation
/// `(A, B)` of order less than `k` with `s ⊆ A` and `t ⊆ B`.
///
/// A vertex of `s ∩ t` is a path on its own.
pub fn menger(g: &Graph, s: &VertexSet, t: &VertexSet, k: usize) -> Result<MengerOutcome, LinkError> {
    g.check_vertices(s)?;
    g.check_vertices(t)?;
    let mut net = SplitNetwork::new(g, |_| 1);
    for &v in s {
        net.attach_source(v, INF);
    }
    for &v in t {
        net.attach_sink(v, INF);
    }
    let flow = net.run(k as i64) as usize;
    if flow == k {
        let paths = net.paths().into_iter().map(|p| trim(&p, s, t)).collect();
        let fam = PathFamily {
            paths,
            contract: PathContract::Between {
                s: s.clone(),
                t: t.clone(),
            },
        };
        fam.audit(g)?;
        return Ok(MengerOutcome::Paths(fam));
    }
    let (inner, cut) = net.cut();
    let sep = Separation {
        a: inner.union(&cut).copied().collect(),
        b: g.vertices().filter(|v| !inner.contains(v)).collect(),
    };
    debug_assert!(sep.order() < k && s.is_subset(&sep.a) && t.is_subset(&sep.b));
    sep.audit(g)?;
    Ok(MengerOutcome::Separation(sep))
}

/// The segment of a source-to-sink flow path from its last `s` vertex
/// before the first `t` vertex, to that `t` vertex.
fn trim(p: &[Vertex], s: &VertexSet, t: &VertexSet) -> Vec<Vertex> {
    let end = p.iter().position(|v| t.contains(v)).expect("flow path ends in t");
    let start = p[..=end]
        .iter()
        .rposition(|v| s.contains(v))
        .expect("flow path starts in s");
    p[start..=end].to_vec()
}

/// `2|z|` paths from `z` to `t`, two per vertex of `z`, sharing no vertex
/// outside `z`. Each vertex of `z` gets a twin with the same neighbours
/// and an ordinary flow runs from `z` and the twins; when it falls short
/// the projected separation is returned inside the error.
pub fn doubled_menger(g: &Graph, z: &VertexSet, t: &VertexSet, budget: usize) -> Result<PathFamily, LinkError> {
    g.check_vertices(z)?;
    g.check_vertices(t)?;
    if budget != 2 * z.len() {
        return Err(LinkError::Precondition(format!(
            "budget {budget} is not 2|z| = {}",
            2 * z.len()
        )));
    }
    if !z.is_disjoint(t) {
        return Err(LinkError::Precondition("z and t must be disjoint".into()));
    }
    let n = g.n();
    let zs: Vec<Vertex> = z.iter().copied().collect();
    let mut edges: Vec<(Vertex, Vertex)> = g.edges().collect();
    for (i, &v) in zs.iter().enumerate() {
        edges.extend(g.neighbors(v).iter().map(|&w| (n + i, w)));
    }
    let doubled = Graph::from_edges(n + zs.len(), edges)?;
    let back = |x: Vertex| if x < n { x } else { zs[x - n] };
    let sources: VertexSet = z.iter().copied().chain(n..n + zs.len()).collect();
    match menger(&doubled, &sources, t, budget)? {
        MengerOutcome::Paths(fam) => {
            let fam = PathFamily {
                paths: fam.paths.iter().map(|p| p.iter().map(|&x| back(x)).collect()).collect(),
                contract: PathContract::Doubled {
                    z: z.clone(),
                    t: t.clone(),
                },
            };
            fam.audit(g)?;
            Ok(fam)
        }
        MengerOutcome::Separation(sep) => {
            let separation = Separation {
                a: sep.a.iter().map(|&x| back(x)).collect(),
                b: sep.b.iter().map(|&x| back(x)).collect(),
            };
            separation.audit(g)?;
            Err(LinkError::Infeasible { separation })
        }
    }
}

fn doubled_parts(fam: &PathFamily) -> Result<(&VertexSet, &VertexSet), LinkError> {
    match &fam.contract {
        PathContract::Doubled { z, t } => Ok((z, t)),
        _ => Err(LinkError::HypothesisViolated {
            reason: "family is not a doubled family".into(),
            separation: None,
        }),
    }
}

/// `|S1| + |S2|` disjoint paths between `S1 ∪ S2` and `T`, from two
/// doubled families towards the same `T` where family `i` avoids
/// `S_(3-i)`. The paths are found by a flow inside the union of the two
/// families.
pub fn combine_redundant(g: &Graph, fam1: &PathFamily, fam2: &PathFamily) -> Result<PathFamily, LinkError> {
    let (s1, t1) = doubled_parts(fam1)?;
    let (s2, t2) = doubled_parts(fam2)?;
    let violated = |reason: String| LinkError::HypothesisViolated {
        reason,
        separation: None,
    };
    if t1 != t2 {
        return Err(violated("families end in different sets".into()));
    }
    for fam in [fam1, fam2] {
        fam.audit(g).map_err(|e| violated(e.to_string()))?;
    }
    if !s1.is_disjoint(s2) || !s1.is_disjoint(t1) || !s2.is_disjoint(t1) {
        return Err(violated("S1, S2 and T must be pairwise disjoint".into()));
    }
    if !fam1.vertices().is_disjoint(s2) || !fam2.vertices().is_disjoint(s1) {
        return Err(violated("a family meets the other family's sources".into()));
    }
    let edges: Vec<(Vertex, Vertex)> = fam1
        .paths
        .iter()
        .chain(&fam2.paths)
        .flat_map(|p| p.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))))
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    let union = Graph::from_edges(g.n(), edges)?;
    let sources: VertexSet = s1.union(s2).copied().collect();
    match menger(&union, &sources, t1, s1.len() + s2.len())? {
        MengerOutcome::Paths(fam) => {
            fam.audit(g)?;
            Ok(fam)
        }
        MengerOutcome::Separation(separation) => Err(LinkError::InternalInfeasible { separation }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set<const N: usize>(vs: [Vertex; N]) -> VertexSet {
        VertexSet::from(vs)
    }

    #[test]
    fn path_graph_single_route() {
        let out = menger(&Graph::path(5), &set([0]), &set([4]), 1).unwrap();
        let MengerOutcome::Paths(fam) = out else { panic!() };
        assert_eq!(fam.paths, vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn bipartite_sides_match_by_edges() {
        let g = Graph::complete_bipartite(3, 3);
        let MengerOutcome::Paths(fam) = menger(&g, &set([0, 1, 2]), &set([3, 4, 5]), 3).unwrap() else {
            panic!()
        };
        assert_eq!(fam.len(), 3);
        assert!(fam.paths.iter().all(|p| p.len() == 2));
    }

    #[test]
    fn star_leaves_separated_by_centre() {
        let out = menger(&Graph::star(5), &set([1, 2]), &set([3, 4]), 2).unwrap();
        let MengerOutcome::Separation(sep) = out else { panic!() };
        assert_eq!(sep.cut(), set([0]));
    }

    #[test]
    fn zero_paths_requested() {
        let out = menger(&Graph::empty(3), &set([0]), &set([2]), 0).unwrap();
        assert!(matches!(out, MengerOutcome::Paths(f) if f.is_empty()));
    }

    #[test]
    fn shared_terminal_is_a_trivial_path() {
        let MengerOutcome::Paths(fam) = menger(&Graph::path(3), &set([1]), &set([1, 2]), 1).unwrap() else {
            panic!()
        };
        assert_eq!(fam.paths, vec![vec![1]]);
    }

    #[test]
    fn doubled_examples() {
        let fam = doubled_menger(&Graph::complete(8), &set([0, 1]), &set([4, 5, 6, 7]), 4).unwrap();
        assert_eq!(fam.len(), 4);
        let err = doubled_menger(&Graph::path(5), &set([0]), &set([4]), 2).unwrap_err();
        let LinkError::Infeasible { separation } = err else {
            panic!()
        };
        assert!(separation.order() <= 1);
    }

    #[test]
    fn single_sources_in_a_clique() {
        let g = Graph::complete(7);
        let t = set([3, 4, 5, 6]);
        let (g1, _) = crate::graph::delete_vertices(&g, &set([1]));
        // families in g minus the other source, lifted back by hand
        let lift = |p: &Vec<Vertex>| p.iter().map(|&x| if x >= 1 { x + 1 } else { x }).collect::<Vec<_>>();
        let f1 = doubled_menger(&g1, &set([0]), &set([2, 3, 4, 5]), 2).unwrap();
        let fam1 = PathFamily {
            paths: f1.paths.iter().map(lift).collect(),
            contract: PathContract::Doubled {
                z: set([0]),
                t: t.clone(),
            },
        };
        let (g0, _) = crate::graph::delete_vertices(&g, &set([0]));
        let f2 = doubled_menger(&g0, &set([0]), &set([2, 3, 4, 5]), 2).unwrap();
        let fam2 = PathFamily {
            paths: f2.paths.iter().map(|p| p.iter().map(|&x| x + 1).collect()).collect(),
            contract: PathContract::Doubled { z: set([1]), t },
        };
        let out = combine_redundant(&g, &fam1, &fam2).unwrap();
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn combine_rejects_families_that_touch_the_other_sources() {
        let g = Graph::complete(5);
        let fam1 = PathFamily {
            paths: vec![vec![0, 1, 3], vec![0, 4]],
            contract: PathContract::Doubled {
                z: set([0]),
                t: set([3, 4]),
            },
        };
        let fam2 = PathFamily {
            paths: vec![vec![1, 3], vec![1, 4]],
            contract: PathContract::Doubled {
                z: set([1]),
                t: set([3, 4]),
            },
        };
        assert!(matches!(
            combine_redundant(&g, &fam1, &fam2),
            Err(LinkError::HypothesisViolated { .. })
        ));
    }
}
