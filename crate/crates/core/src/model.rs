//! Minor models: ordered families of disjoint connected branch sets.
//!
//! A model stores only vertex sets of its host; edges inside a fragment
//! and between fragments are read from the host on demand. Fragment order
//! matters: attachment looks at the first `|S|` fragments.

use std::fmt;

use thiserror::Error;

use crate::graph::{contract_edge_with_map, induced_subgraph, Graph, GraphError, Vertex, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct MinorModel {
    pub fragments: Vec<VertexSet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    EmptyFragment {
        fragment: usize,
    },
    UnknownVertex {
        fragment: usize,
        vertex: Vertex,
    },
    Overlap {
        first: usize,
        second: usize,
        vertex: Vertex,
    },
    Disconnected {
        fragment: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyFragment { fragment } => write!(f, "fragment {fragment} is empty"),
            Violation::UnknownVertex { fragment, vertex } => {
                write!(f, "fragment {fragment} names unknown vertex {vertex}")
            }
            Violation::Overlap { first, second, vertex } => {
                write!(f, "fragments {first} and {second} share vertex {vertex}")
            }
            Violation::Disconnected { fragment } => {
                write!(f, "fragment {fragment} does not induce a connected subgraph")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("invalid model: {0}")]
    Invalid(Violation),
    #[error("model is not rooted at the given set")]
    NotRooted,
    #[error("vertex sets are not disjoint")]
    NotDisjoint,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Outcome of [`validate_model`]. `valid` holds exactly when `violations`
/// is empty, and then `pattern` carries the realized pattern graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
    pub pattern: Option<Graph>,
}

impl MinorModel {
    pub fn new(fragments: Vec<VertexSet>) -> Self {
        MinorModel { fragments }
    }

    /// One singleton fragment per vertex of `g`.
    pub fn identity(g: &Graph) -> Self {
        Self::singletons(g.vertices())
    }

    pub fn singletons<I: IntoIterator<Item = Vertex>>(vs: I) -> Self {
        MinorModel {
            fragments: vs.into_iter().map(|v| VertexSet::from([v])).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.fragments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    /// `V(M)`, the union of all fragments.
    pub fn vertices(&self) -> VertexSet {
        self.fragments.iter().flatten().copied().collect()
    }

    pub fn fragment_of(&self, v: Vertex) -> Option<usize> {
        self.fragments.iter().position(|f| f.contains(&v))
    }

    /// Lifts a model of the pattern graph (fragments are sets of fragment
    /// indices of `self`) to a model of the same host.
    pub fn compose(&self, inner: &MinorModel) -> MinorModel {
        MinorModel {
            fragments: inner
                .fragments
                .iter()
                .map(|f| f.iter().flat_map(|&i| self.fragments[i].iter().copied()).collect())
                .collect(),
        }
    }

    /// Maps every vertex through `map` (e.g. from an induced subgraph back
    /// to its host).
    pub fn relabel(&self, map: &[Vertex]) -> MinorModel {
        MinorModel {
            fragments: self
                .fragments
                .iter()
                .map(|f| f.iter().map(|&v| map[v]).collect())
                .collect(),
        }
    }

    fn owners(&self, n: usize) -> Vec<Option<usize>> {
        let mut owner = vec![None; n];
        for (i, f) in self.fragments.iter().enumerate() {
            for &v in f {
                if v < n {
                    owner[v].get_or_insert(i);
                }
            }
        }
        owner
    }
}

/// Checks nonemptiness, range, disjointness and connectivity of every
/// fragment.
pub fn validate_model(g: &Graph, m: &MinorModel) -> ModelReport {
    let mut violations = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; g.n()];
    for (i, f) in m.fragments.iter().enumerate() {
        if f.is_empty() {
            violations.push(Violation::EmptyFragment { fragment: i });
            continue;
        }
        let mut in_range = true;
        for &v in f {
            if v >= g.n() {
                violations.push(Violation::UnknownVertex { fragment: i, vertex: v });
                in_range = false;
                continue;
            }
            match owner[v] {
                Some(j) => violations.push(Violation::Overlap {
                    first: j,
                    second: i,
                    vertex: v,
                }),
                None => owner[v] = Some(i),
            }
        }
        if in_range && !g.is_connected_set(f) {
            violations.push(Violation::Disconnected { fragment: i });
        }
    }
    let valid = violations.is_empty();
    let pattern = valid.then(|| pattern_unchecked(g, m));
    ModelReport {
        valid,
        violations,
        pattern,
    }
}

fn require_valid(g: &Graph, m: &MinorModel) -> Result<(), ModelError> {
    match validate_model(g, m).violations.into_iter().next() {
        Some(v) => Err(ModelError::Invalid(v)),
        None => Ok(()),
    }
}

fn pattern_unchecked(g: &Graph, m: &MinorModel) -> Graph {
    let owner = m.owners(g.n());
    let edges = g.edges().filter_map(|(u, v)| match (owner[u], owner[v]) {
        (Some(a), Some(b)) if a != b => Some((a, b)),
        _ => None,
    });
    Graph::from_edges(m.len(), edges.collect::<Vec<_>>()).expect("fragment indices are in range")
}

/// Graph on fragment indices with `ij` an edge iff the host has an edge
/// between fragments `i` and `j`.
pub fn pattern_graph(g: &Graph, m: &MinorModel) -> Result<Graph, ModelError> {
    require_valid(g, m)?;
    Ok(pattern_unchecked(g, m))
}

/// The same graph as [`pattern_graph`], obtained the slow way: delete
/// every vertex outside the model, then contract a spanning tree of each
/// fragment one edge at a time.
pub fn contract_model(g: &Graph, m: &MinorModel) -> Result<Graph, ModelError> {
    require_valid(g, m)?;
    let keep = m.vertices();
    let (mut h, map) = induced_subgraph(g, &keep)?;
    // label[x] = current label of the host vertex map[x]
    let mut label: Vec<Vertex> = (0..map.len()).collect();
    let index_of = |v: Vertex| map.binary_search(&v).expect("vertex of the model");
    for f in &m.fragments {
        let root = *f.iter().next().unwrap();
        let tree = spanning_tree_edges(g, f, root);
        for (a, b) in tree {
            let (la, lb) = (label[index_of(a)], label[index_of(b)]);
            let (next, relabel) = contract_edge_with_map(&h, la, lb)?;
            for l in label.iter_mut() {
                *l = relabel[*l];
            }
            h = next;
        }
    }
    // every fragment is now a single vertex; rename it to its index
    let mut to_fragment = vec![usize::MAX; h.n()];
    for (i, f) in m.fragments.iter().enumerate() {
        let v = *f.iter().next().unwrap();
        to_fragment[label[index_of(v)]] = i;
    }
    let edges: Vec<_> = h.edges().map(|(a, b)| (to_fragment[a], to_fragment[b])).collect();
    Ok(Graph::from_edges(m.len(), edges)?)
}

fn spanning_tree_edges(g: &Graph, f: &VertexSet, root: Vertex) -> Vec<(Vertex, Vertex)> {
    let mut seen = VertexSet::from([root]);
    let mut queue = std::collections::VecDeque::from([root]);
    let mut edges = Vec::new();
    while let Some(v) = queue.pop_front() {
        for &u in g.neighbors(v) {
            if f.contains(&u) && seen.insert(u) {
                edges.push((v, u));
                queue.push_back(u);
            }
        }
    }
    edges
}

/// Every fragment meets `s` in exactly one vertex and `|s|` equals the
/// number of fragments.
pub fn is_rooted_at(g: &Graph, m: &MinorModel, s: &VertexSet) -> Result<bool, ModelError> {
    require_valid(g, m)?;
    Ok(s.len() == m.len() && m.fragments.iter().all(|f| f.intersection(s).count() == 1))
}

/// The first `|s|` fragments each meet `s` in exactly one vertex (so
/// together they contain all of `s`).
pub fn is_attached_to(g: &Graph, m: &MinorModel, s: &VertexSet) -> Result<bool, ModelError> {
    require_valid(g, m)?;
    if s.len() > m.len() {
        return Ok(false);
    }
    Ok(m.fragments[..s.len()].iter().all(|f| f.intersection(s).count() == 1))
}

/// `s` is a core when, for every pattern edge `ij`, the parts of `s`
/// inside fragments `i` and `j` are joined by a host edge.
pub fn is_core(g: &Graph, m: &MinorModel, s: &VertexSet) -> Result<bool, ModelError> {
    let pattern = pattern_graph(g, m)?;
    is_core_for(g, m, s, &pattern)
}

/// Core test against a caller-supplied pattern `h` on the fragment
/// indices, which may be sparser than the realized one.
pub fn is_core_for(g: &Graph, m: &MinorModel, s: &VertexSet, h: &Graph) -> Result<bool, ModelError> {
    require_valid(g, m)?;
    if h.n() != m.len() {
        return Err(ModelError::Graph(GraphError::UnknownVertex {
            vertex: h.n(),
            n: m.len(),
        }));
    }
    let parts: Vec<VertexSet> = m.fragments.iter().map(|f| f & s).collect();
    for (i, j) in h.edges() {
        if anticomplete_unchecked(g, &parts[i], &parts[j]) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `f` meets each fragment exactly in that fragment's vertex of `u`.
pub fn is_tangent(g: &Graph, f: &VertexSet, m: &MinorModel, u: &VertexSet) -> Result<bool, ModelError> {
    if !is_rooted_at(g, m, u)? {
        return Err(ModelError::NotRooted);
    }
    Ok(m.fragments
        .iter()
        .all(|frag| f.intersection(frag).eq(u.intersection(frag))))
}

fn anticomplete_unchecked(g: &Graph, a: &VertexSet, b: &VertexSet) -> bool {
    a.iter().all(|&v| g.neighbors(v).iter().all(|u| !b.contains(u)))
}

/// No host edge joins the disjoint sets `a` and `b`.
pub fn anticomplete(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<bool, ModelError> {
    g.check_vertices(a)?;
    g.check_vertices(b)?;
    if !a.is_disjoint(b) {
        return Err(ModelError::NotDisjoint);
    }
    Ok(anticomplete_unchecked(g, a, b))
}
