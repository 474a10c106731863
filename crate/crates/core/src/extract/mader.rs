//! Minimum-degree minors by contraction descent.
//!
//! The descent keeps `phi = 2e(H) - (d - 1)|H|` nonnegative. A vertex of
//! degree at most `(d-1)/2` is deleted, an edge in at most `(d-3)/2`
//! triangles is contracted, and otherwise an edge is deleted while
//! `phi >= 2`. None of these lowers `phi`. When all three are blocked,
//! every degree is at least `d/2`, every edge lies in at least
//! `(d-2)/2` triangles and the average degree is below `d`, so the closed
//! neighbourhood of a minimum-degree vertex has at most `d` vertices and
//! minimum degree at least `d/2`.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use super::trace::{ExtractionTrace, TraceOp, TraceStep};
use super::ExtractError;
use crate::graph::{
    average_degree, induced_subgraph, min_vertex_cut, vertex_connectivity, Graph, Rational, Vertex, VertexSet,
};
use crate::model::{pattern_graph, MinorModel};

struct Descent {
    alive: Vec<bool>,
    adj: Vec<FixedBitSet>,
    frag: Vec<Vec<Vertex>>,
    common: HashMap<(Vertex, Vertex), usize>,
    by_degree: BTreeSet<(usize, Vertex)>,
    by_common: BTreeSet<(usize, Vertex, Vertex)>,
    order: usize,
    m: usize,
    steps: Vec<TraceStep>,
}

fn key(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

impl Descent {
    fn new(g: &Graph) -> Self {
        let n = g.n();
        let adj: Vec<FixedBitSet> = g
            .vertices()
            .map(|v| {
                let mut bits = FixedBitSet::with_capacity(n);
                bits.extend(g.neighbors(v).iter().copied());
                bits
            })
            .collect();
        let mut common = HashMap::with_capacity(g.m());
        let mut by_common = BTreeSet::new();
        for (u, v) in g.edges() {
            let c = adj[u].intersection_count(&adj[v]);
            common.insert((u, v), c);
            by_common.insert((c, u, v));
        }
        Descent {
            alive: vec![true; n],
            frag: g.vertices().map(|v| vec![v]).collect(),
            by_degree: g.vertices().map(|v| (g.degree(v), v)).collect(),
            adj,
            common,
            by_common,
            order: n,
            m: g.m(),
            steps: Vec::new(),
        }
    }

    fn degree(&self, v: Vertex) -> usize {
        self.adj[v].count_ones(..)
    }

    fn shift_common(&mut self, a: Vertex, b: Vertex, up: bool) {
        let k = key(a, b);
        let c = self.common.get_mut(&k).expect("tracked edge");
        self.by_common.remove(&(*c, k.0, k.1));
        if up {
            *c += 1;
        } else {
            *c -= 1;
        }
        self.by_common.insert((*c, k.0, k.1));
    }

    fn shift_degree(&mut self, v: Vertex, up: bool) {
        let d = self.degree(v);
        self.by_degree.remove(&(d, v));
        let d = if up { d + 1 } else { d - 1 };
        self.by_degree.insert((d, v));
    }

    fn shared(&self, a: Vertex, b: Vertex) -> Vec<Vertex> {
        self.adj[a].intersection(&self.adj[b]).collect()
    }

    fn remove_edge(&mut self, a: Vertex, b: Vertex) {
        let k = key(a, b);
        let c = self.common.remove(&k).expect("tracked edge");
        self.by_common.remove(&(c, k.0, k.1));
        for y in self.shared(a, b) {
            self.shift_common(a, y, false);
            self.shift_common(b, y, false);
        }
        self.shift_degree(a, false);
        self.shift_degree(b, false);
        self.adj[a].set(b, false);
        self.adj[b].set(a, false);
        self.m -= 1;
    }

    fn add_edge(&mut self, a: Vertex, b: Vertex) {
        let shared = self.shared(a, b);
        for &y in &shared {
            self.shift_common(a, y, true);
            self.shift_common(b, y, true);
        }
        self.shift_degree(a, true);
        self.shift_degree(b, true);
        self.adj[a].insert(b);
        self.adj[b].insert(a);
        let k = key(a, b);
        self.common.insert(k, shared.len());
        self.by_common.insert((shared.len(), k.0, k.1));
        self.m += 1;
    }

    fn delete_vertex(&mut self, v: Vertex) {
        let nbrs: Vec<Vertex> = self.adj[v].ones().collect();
        for u in nbrs {
            self.remove_edge(v, u);
        }
        self.by_degree.remove(&(0, v));
        self.alive[v] = false;
        self.order -= 1;
    }

    fn contract(&mut self, keep: Vertex, merge: Vertex) {
        let fresh: Vec<Vertex> = self.adj[merge]
            .ones()
            .filter(|&w| w != keep && !self.adj[keep].contains(w))
            .collect();
        for w in fresh {
            self.add_edge(keep, w);
        }
        self.delete_vertex(merge);
        let moved = std::mem::take(&mut self.frag[merge]);
        self.frag[keep].extend(moved);
    }

    fn record(&mut self, op: TraceOp) {
        self.steps.push(TraceStep {
            op,
            edges_after: self.m,
        });
    }

    fn run(&mut self, d: usize) {
        let d = d as i64;
        loop {
            if let Some(&(deg, v)) = self.by_degree.first() {
                if (2 * deg as i64) < d {
                    self.delete_vertex(v);
                    self.record(TraceOp::DeleteVertex(v));
                    continue;
                }
            }
            let Some(&(c, u, v)) = self.by_common.first() else {
                break;
            };
            if 2 * (1 + c as i64) < d {
                self.contract(u, v);
                self.record(TraceOp::Contract { keep: u, merge: v });
            } else if 2 * self.m as i64 - (d - 1) * self.order as i64 >= 2 {
                self.remove_edge(u, v);
                self.record(TraceOp::DeleteEdge(u, v));
            } else {
                break;
            }
        }
    }

    /// Keeps only the listed labels and returns the model they carry.
    fn restrict(&mut self, keep: &[Vertex]) -> MinorModel {
        let inside: BTreeSet<Vertex> = keep.iter().copied().collect();
        let m = keep
            .iter()
            .map(|&v| self.adj[v].ones().filter(|u| inside.contains(u)).count())
            .sum::<usize>()
            / 2;
        self.steps.push(TraceStep {
            op: TraceOp::Restrict(keep.to_vec()),
            edges_after: m,
        });
        MinorModel::new(keep.iter().map(|&v| self.frag[v].iter().copied().collect()).collect())
    }
}

fn check_average(g: &Graph, d: usize, needed: i64) -> Result<(), ExtractError> {
    if d < 2 {
        return Err(ExtractError::Precondition(format!("d = {d} is below 2")));
    }
    let avg = average_degree(g);
    if avg < Rational::from_integer(needed) {
        return Err(ExtractError::Precondition(format!(
            "average degree {avg} is below {needed}"
        )));
    }
    Ok(())
}

fn certify(g: &Graph, model: &MinorModel, d: usize, degree_factor: i64) -> Result<Graph, ExtractError> {
    let pattern = pattern_graph(g, model)?;
    let delta = pattern.min_degree().unwrap_or(0) as i64;
    if pattern.n() > d || degree_factor * delta < d as i64 {
        return Err(ExtractError::ExtractionFailed(format!(
            "pattern has {} vertices and minimum degree {delta} for d = {d}",
            pattern.n()
        )));
    }
    Ok(pattern)
}

/// Descent with its trace. See [`mader_min_degree_minor`].
pub fn mader_trace(g: &Graph, d: usize) -> Result<ExtractionTrace, ExtractError> {
    check_average(g, d, d as i64 - 1)?;
    let mut state = Descent::new(g);
    state.run(d);
    let Some(&(_, x)) = state.by_degree.first() else {
        return Err(ExtractError::ExtractionFailed("descent emptied the graph".into()));
    };
    let mut keep: Vec<Vertex> = state.adj[x].ones().collect();
    keep.push(x);
    keep.sort_unstable();
    let model = state.restrict(&keep);
    certify(g, &model, d, 2)?;
    Ok(ExtractionTrace {
        steps: state.steps,
        model,
    })
}

/// A minor with at most `d` vertices and minimum degree at least `d/2`,
/// for a host of average degree at least `d - 1`.
pub fn mader_min_degree_minor(g: &Graph, d: usize) -> Result<MinorModel, ExtractError> {
    mader_trace(g, d).map(|t| t.model)
}

/// Descent with its trace. See [`dense_connected_minor`].
pub fn dense_connected_trace(g: &Graph, d: usize) -> Result<ExtractionTrace, ExtractError> {
    check_average(g, d, d as i64)?;
    let mut trace = mader_trace(g, d)?;
    loop {
        let pattern = pattern_graph(g, &trace.model)?;
        let kappa = vertex_connectivity(&pattern)?;
        if 6 * kappa >= d {
            break;
        }
        let Some(cut) = min_vertex_cut(&pattern) else {
            break;
        };
        let rest: VertexSet = pattern.vertices().filter(|v| !cut.cut.contains(v)).collect();
        let side = pattern
            .components_within(&rest)
            .into_iter()
            .min_by_key(|c| c.len())
            .unwrap();
        let (sub, map) = induced_subgraph(&pattern, &side)?;
        if sub.n() < 2 {
            break;
        }
        let fragments: Vec<VertexSet> = map.iter().map(|&i| trace.model.fragments[i].clone()).collect();
        let keep: Vec<Vertex> = map
            .iter()
            .map(|&i| *trace.model.fragments[i].first().unwrap())
            .collect();
        let edges_after = sub.m();
        trace.steps.push(TraceStep {
            op: TraceOp::Restrict(keep),
            edges_after,
        });
        trace.model = MinorModel::new(fragments);
    }
    let pattern = certify(g, &trace.model, d, 3)?;
    let kappa = if pattern.n() >= 2 {
        vertex_connectivity(&pattern)?
    } else {
        0
    };
    if 6 * kappa < d {
        return Err(ExtractError::ExtractionFailed(format!(
            "pattern connectivity {kappa} is below d/6 for d = {d}"
        )));
    }
    Ok(trace)
}

/// A minor with at most `d` vertices, minimum degree at least `d/3` and
/// connectivity at least `d/6`, for a host of average degree at least `d`.
///
/// Runs [`mader_min_degree_minor`], and while the pattern has a cutset
/// smaller than `d/6`, keeps only the smallest component left by a
/// minimum cutset.
pub fn dense_connected_minor(g: &Graph, d: usize) -> Result<MinorModel, ExtractError> {
    dense_connected_trace(g, d).map(|t| t.model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{random_graph, Rng};

    #[test]
    fn complete_graph_is_its_own_minor() {
        let k6 = Graph::complete(6);
        let m = mader_min_degree_minor(&k6, 6).unwrap();
        assert_eq!(m, MinorModel::identity(&k6));
        // K_7 is the least clique with average degree 6
        let m = dense_connected_minor(&Graph::complete(7), 6).unwrap();
        assert!(m.fragments.iter().all(|f| f.len() == 1));
        assert!((4..=6).contains(&m.len()));
    }

    #[test]
    fn picks_one_clique_of_two() {
        let g = Graph::complete(4).disjoint_union(&Graph::complete(4));
        let m = mader_min_degree_minor(&g, 4).unwrap();
        assert_eq!(m, MinorModel::singletons(0..4));

        let g = Graph::complete(7).disjoint_union(&Graph::complete(7));
        let m = dense_connected_minor(&g, 6).unwrap();
        assert!(m.vertices().iter().all(|&v| v < 7));
    }

    #[test]
    fn rejects_sparse_hosts() {
        assert!(matches!(
            mader_min_degree_minor(&Graph::cycle(8), 4),
            Err(ExtractError::Precondition(_))
        ));
        assert!(matches!(
            dense_connected_minor(&Graph::complete(5), 5),
            Err(ExtractError::Precondition(_))
        ));
    }

    #[test]
    fn trace_replays_on_random_hosts() {
        let mut rng = Rng::new(5);
        for _ in 0..10 {
            let g = random_graph(40, Rational::new(1, 2), &mut rng).unwrap();
            let d = (average_degree(&g).to_integer() + 1) as usize;
            let trace = mader_trace(&g, d).unwrap();
            assert_eq!(trace.replay(&g).unwrap(), trace.model);
            let trace = dense_connected_trace(&g, d - 1).unwrap();
            assert_eq!(trace.replay(&g).unwrap(), trace.model);
        }
    }
}
