use std::collections::{BTreeMap, BTreeSet};

use super::ExtractError;
use crate::graph::{Graph, Vertex, VertexSet};
use crate::model::MinorModel;

/// One step of a descent. Vertices are named by stable labels: a label is
/// the least host vertex of the branch set it stands for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceOp {
    /// Contract the edge `keep merge`; the result keeps the label `keep`.
    Contract {
        keep: Vertex,
        merge: Vertex,
    },
    DeleteVertex(Vertex),
    DeleteEdge(Vertex, Vertex),
    /// Delete every vertex not listed.
    Restrict(Vec<Vertex>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub op: TraceOp,
    pub edges_after: usize,
}

/// Steps of a descent together with the model it produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtractionTrace {
    pub steps: Vec<TraceStep>,
    pub model: MinorModel,
}

impl ExtractionTrace {
    /// Re-runs the steps on `g` with a plain set-based simulation and
    /// returns the resulting model, checking the recorded edge counts on
    /// the way.
    pub fn replay(&self, g: &Graph) -> Result<MinorModel, ExtractError> {
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = g
            .vertices()
            .map(|v| (v, g.neighbors(v).iter().copied().collect()))
            .collect();
        let mut frag: BTreeMap<Vertex, VertexSet> = g.vertices().map(|v| (v, VertexSet::from([v]))).collect();
        let mut m = g.m();
        for (step, s) in self.steps.iter().enumerate() {
            let bad = || ExtractError::ReplayMismatch { step };
            match &s.op {
                TraceOp::Contract { keep, merge } => {
                    if !adj.get(keep).is_some_and(|n| n.contains(merge)) {
                        return Err(bad());
                    }
                    let gone = adj.remove(merge).unwrap();
                    let common = gone.intersection(&adj[keep]).count();
                    for &w in &gone {
                        adj.get_mut(&w).unwrap().remove(merge);
                        if w != *keep {
                            adj.get_mut(&w).unwrap().insert(*keep);
                            adj.get_mut(keep).unwrap().insert(w);
                        }
                    }
                    m -= 1 + common;
                    let moved = frag.remove(merge).unwrap();
                    frag.get_mut(keep).unwrap().extend(moved);
                }
                TraceOp::DeleteVertex(v) => {
                    let gone = adj.remove(v).ok_or_else(bad)?;
                    for w in &gone {
                        adj.get_mut(w).unwrap().remove(v);
                    }
                    m -= gone.len();
                    frag.remove(v);
                }
                TraceOp::DeleteEdge(u, v) => {
                    if !adj.get(u).is_some_and(|n| n.contains(v)) {
                        return Err(bad());
                    }
                    adj.get_mut(u).unwrap().remove(v);
                    adj.get_mut(v).unwrap().remove(u);
                    m -= 1;
                }
                TraceOp::Restrict(keep) => {
                    let keep: BTreeSet<Vertex> = keep.iter().copied().collect();
                    if !keep.iter().all(|v| adj.contains_key(v)) {
                        return Err(bad());
                    }
                    adj.retain(|v, _| keep.contains(v));
                    for n in adj.values_mut() {
                        n.retain(|w| keep.contains(w));
                    }
                    m = adj.values().map(|n| n.len()).sum::<usize>() / 2;
                    frag.retain(|v, _| keep.contains(v));
                }
            }
            if m != s.edges_after {
                return Err(bad());
            }
        }
        Ok(MinorModel::new(frag.into_values().collect()))
    }
}
