use super::LinkError;
use crate::graph::{Graph, Vertex, VertexSet};

/// A separation `(A, B)`: the sides cover the vertex set and no edge
/// joins `A - B` to `B - A`. Both sides are stored, since whether a set is
/// avoided depends on which side it lies strictly inside.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Separation {
    pub a: VertexSet,
    pub b: VertexSet,
}

impl Separation {
    /// `A ∩ B`.
    pub fn cut(&self) -> VertexSet {
        self.a.intersection(&self.b).copied().collect()
    }

    pub fn order(&self) -> usize {
        self.a.intersection(&self.b).count()
    }

    /// `d ⊆ B - A`.
    pub fn avoids(&self, d: &VertexSet) -> bool {
        d.iter().all(|v| self.b.contains(v) && !self.a.contains(v))
    }

    pub fn audit(&self, g: &Graph) -> Result<(), LinkError> {
        g.check_vertices(&self.a)?;
        g.check_vertices(&self.b)?;
        if let Some(v) = g.vertices().find(|v| !self.a.contains(v) && !self.b.contains(v)) {
            return Err(LinkError::AuditFailed(format!("vertex {v} is on neither side")));
        }
        let a_only = |x: Vertex| !self.b.contains(&x);
        let b_only = |x: Vertex| !self.a.contains(&x);
        for (u, v) in g.edges() {
            if (a_only(u) && b_only(v)) || (a_only(v) && b_only(u)) {
                return Err(LinkError::AuditFailed(format!("edge {u}{v} crosses the separation")));
            }
        }
        Ok(())
    }
}

/// What a [`PathFamily`] promises about its paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PathContract {
    /// Vertex-disjoint paths, each from `s` to `t` with no inner vertex in
    /// `s ∪ t`.
    Between { s: VertexSet, t: VertexSet },
    /// `2|z|` paths from `z` to `t`, inner vertices outside `z ∪ t`, every
    /// vertex of `z` the first vertex of exactly two of them, and no two
    /// sharing a vertex outside `z`.
    Doubled { z: VertexSet, t: VertexSet },
    /// Path `i` runs from `pairs[i].0` to `pairs[i].1`; all disjoint.
    Linkage { pairs: Vec<(Vertex, Vertex)> },
    /// A single path meeting `sequence` in the listed order.
    Ordered { sequence: Vec<Vertex> },
}

/// Paths as vertex sequences together with the contract they satisfy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFamily {
    pub paths: Vec<Vec<Vertex>>,
    pub contract: PathContract,
}

impl PathFamily {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn vertices(&self) -> VertexSet {
        self.paths.iter().flatten().copied().collect()
    }

    /// Re-checks every path and the declared contract.
    pub fn audit(&self, g: &Graph) -> Result<(), LinkError> {
        for (i, p) in self.paths.iter().enumerate() {
            check_path(g, p).map_err(|e| LinkError::AuditFailed(format!("path {i}: {e}")))?;
        }
        let fail = |msg: String| Err(LinkError::AuditFailed(msg));
        match &self.contract {
            PathContract::Between { s, t } => {
                disjoint(&self.paths, &VertexSet::new())?;
                for (i, p) in self.paths.iter().enumerate() {
                    if !s.contains(&p[0]) || !t.contains(p.last().unwrap()) {
                        return fail(format!("path {i} does not run from S to T"));
                    }
                    if inner(p).any(|v| s.contains(v) || t.contains(v)) {
                        return fail(format!("path {i} has an inner vertex in S or T"));
                    }
                }
            }
            PathContract::Doubled { z, t } => {
                if self.paths.len() != 2 * z.len() {
                    return fail(format!("{} paths for |z| = {}", self.paths.len(), z.len()));
                }
                disjoint(&self.paths, z)?;
                for (i, p) in self.paths.iter().enumerate() {
                    if !z.contains(&p[0]) || !t.contains(p.last().unwrap()) || p.len() < 2 {
                        return fail(format!("path {i} does not run from z to t"));
                    }
                    if inner(p).any(|v| z.contains(v) || t.contains(v)) {
                        return fail(format!("path {i} has an inner vertex in z or t"));
                    }
                }
                for &v in z {
                    let starts = self.paths.iter().filter(|p| p[0] == v).count();
                    if starts != 2 {
                        return fail(format!("{v} starts {starts} paths"));
                    }
                }
            }
            PathContract::Linkage { pairs } => {
                if pairs.len() != self.paths.len() {
                    return fail(format!("{} paths for {} pairs", self.paths.len(), pairs.len()));
                }
                disjoint(&self.paths, &VertexSet::new())?;
                for (i, (p, &(s, t))) in self.paths.iter().zip(pairs).enumerate() {
                    if p[0] != s || *p.last().unwrap() != t {
                        return fail(format!("path {i} does not link {s} and {t}"));
                    }
                }
            }
            PathContract::Ordered { sequence } => {
                if self.paths.len() != 1 {
                    return fail(format!("{} paths, expected one", self.paths.len()));
                }
                let p = &self.paths[0];
                let mut last = None;
                for &v in sequence {
                    let Some(pos) = p.iter().position(|&x| x == v) else {
                        return fail(format!("{v} is not on the path"));
                    };
                    if last.is_some_and(|l| pos <= l) {
                        return fail(format!("{v} is out of order"));
                    }
                    last = Some(pos);
                }
            }
        }
        Ok(())
    }
}

fn inner(p: &[Vertex]) -> impl Iterator<Item = &Vertex> {
    let end = p.len().saturating_sub(1);
    p.iter().take(end).skip(1)
}

fn check_path(g: &Graph, p: &[Vertex]) -> Result<(), String> {
    if p.is_empty() {
        return Err("empty".into());
    }
    g.check_vertices(p).map_err(|e| e.to_string())?;
    let distinct: VertexSet = p.iter().copied().collect();
    if distinct.len() != p.len() {
        return Err("repeats a vertex".into());
    }
    if let Some(w) = p.windows(2).find(|w| !g.has_edge(w[0], w[1])) {
        return Err(format!("{}{} is not an edge", w[0], w[1]));
    }
    Ok(())
}

/// No vertex outside `shared` lies on two paths.
fn disjoint(paths: &[Vec<Vertex>], shared: &VertexSet) -> Result<(), LinkError> {
    let mut seen = VertexSet::new();
    for p in paths {
        for &v in p {
            if !shared.contains(&v) && !seen.insert(v) {
                return Err(LinkError::AuditFailed(format!("vertex {v} is on two paths")));
            }
        }
    }
    Ok(())
}
