//! Simple undirected graphs on the dense vertex range `0..n`.
//!
//! A [`Graph`] is immutable once built. Every derived graph (induced
//! subgraph, contraction, pattern of a model) is a fresh value, so graphs
//! can be shared freely across threads.

mod color;
mod connectivity;
pub(crate) mod flow;
mod random;

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use num_rational::Ratio;
use thiserror::Error;

pub use color::{chromatic_number_exact, is_chromatic_separable, two_coloring};
pub use connectivity::{local_connectivity, min_vertex_cut, vertex_connectivity, VertexCut};
pub use random::{random_bipartite, random_graph, splitmix64, Rng};

/// Vertex label. Vertices of a graph on `n` vertices are `0..n`.
pub type Vertex = usize;

/// Ordered vertex set; iteration order is ascending, which keeps every
/// construction in this crate reproducible.
pub type VertexSet = BTreeSet<Vertex>;

/// Exact rational used for every density comparison.
pub type Rational = Ratio<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} is out of range for a graph on {n} vertices")]
    UnknownVertex { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("{u}{v} is not an edge")]
    NotAnEdge { u: Vertex, v: Vertex },
    #[error("operation needs at least {needed} vertices, graph has {n}")]
    OrderTooSmall { needed: usize, n: usize },
    #[error("graph on {n} vertices exceeds the configured cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("adjacency is not symmetric at {u}{v}")]
    Asymmetric { u: Vertex, v: Vertex },
    #[error("edge count {cached} disagrees with degree sum {degree_sum}")]
    Handshake { cached: usize, degree_sum: usize },
    #[error("probability {0} is outside [0, 1]")]
    BadProbability(Rational),
}

/// Caps for the exponential solvers. All of them are configuration, not
/// constants; `MINORFORGE_CAPS` raises them for tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Caps {
    pub coloring: usize,
    pub separable: usize,
    pub linkage_pairs: usize,
    pub linkage_vertices: usize,
    pub wovenness: usize,
    pub attached_fallback: usize,
    pub avoid_budget: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            coloring: 20,
            separable: 14,
            linkage_pairs: 6,
            linkage_vertices: 24,
            wovenness: 9,
            attached_fallback: 14,
            avoid_budget: 20_000,
        }
    }
}

impl Caps {
    /// Defaults, overridden by `MINORFORGE_CAPS`, e.g.
    /// `MINORFORGE_CAPS="coloring=24,linkage_vertices=40"`.
    /// Unknown keys and unparsable values are ignored.
    pub fn from_env() -> Self {
        let mut caps = Caps::default();
        if let Ok(text) = std::env::var("MINORFORGE_CAPS") {
            caps.apply(&text);
        }
        caps
    }

    pub fn apply(&mut self, text: &str) {
        for item in text.split(',') {
            let Some((key, value)) = item.split_once('=') else {
                continue;
            };
            let Ok(value) = value.trim().parse::<usize>() else {
                continue;
            };
            match key.trim() {
                "coloring" => self.coloring = value,
                "separable" => self.separable = value,
                "linkage_pairs" => self.linkage_pairs = value,
                "linkage_vertices" => self.linkage_vertices = value,
                "wovenness" => self.wovenness = value,
                "attached_fallback" => self.attached_fallback = value,
                "avoid_budget" => self.avoid_budget = value,
                _ => {}
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    m: usize,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            m: 0,
        }
    }

    /// Builds a simple graph. Duplicate edges collapse; loops and
    /// out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(GraphError::UnknownVertex { vertex: x, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m2 = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m2 += list.len();
        }
        Ok(Graph { adj, m: m2 / 2 })
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|v| (0..n).filter(|&u| u != v).collect()).collect();
        Graph {
            adj,
            m: n * n.saturating_sub(1) / 2,
        }
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    /// Star with center 0 and leaves `1..n`.
    pub fn star(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (0, i))).unwrap()
    }

    /// Complete bipartite graph with sides `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        Graph::from_edges(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v)))).unwrap()
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
    }

    /// Disjoint union; vertices of `other` are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n();
        let edges = self.edges().chain(other.edges().map(|(u, v)| (u + off, v + off)));
        Graph::from_edges(off + other.n(), edges).unwrap()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n()
    }

    /// Sorted neighbor list.
    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v)))
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).max()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        self.m == n * n.saturating_sub(1) / 2
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if v < self.n() {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex { vertex: v, n: self.n() })
        }
    }

    pub fn check_vertices<'a, I>(&self, vs: I) -> Result<(), GraphError>
    where
        I: IntoIterator<Item = &'a Vertex>,
    {
        vs.into_iter().try_for_each(|&v| self.check_vertex(v))
    }

    /// Structural audit: no loops, symmetric adjacency, handshake lemma.
    pub fn audit(&self) -> Result<(), GraphError> {
        let mut degree_sum = 0;
        for (u, list) in self.adj.iter().enumerate() {
            degree_sum += list.len();
            for &v in list {
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
                self.check_vertex(v)?;
                if !self.has_edge(v, u) {
                    return Err(GraphError::Asymmetric { u, v });
                }
            }
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(GraphError::Asymmetric { u, v: u });
            }
        }
        if degree_sum != 2 * self.m {
            return Err(GraphError::Handshake {
                cached: self.m,
                degree_sum,
            });
        }
        Ok(())
    }

    /// Number of edges with both ends in `s`.
    pub fn edges_within(&self, s: &VertexSet) -> usize {
        s.iter()
            .map(|&v| self.adj[v].iter().filter(|u| s.contains(u)).count())
            .sum::<usize>()
            / 2
    }

    /// Number of edges with exactly one end in `s`.
    pub fn boundary_edges(&self, s: &VertexSet) -> usize {
        s.iter()
            .map(|&v| self.adj[v].iter().filter(|u| !s.contains(u)).count())
            .sum()
    }

    /// True when `g[s]` is connected. The empty set is not connected.
    pub fn is_connected_set(&self, s: &VertexSet) -> bool {
        let Some(&start) = s.iter().next() else {
            return false;
        };
        let reached = self.bfs_within(&[start], |v| s.contains(&v));
        reached.len() == s.len()
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.bfs_within(&[0], |_| true).len() == self.n()
    }

    /// Vertices reachable from `sources` while staying inside `allowed`.
    pub(crate) fn bfs_within<F>(&self, sources: &[Vertex], allowed: F) -> VertexSet
    where
        F: Fn(Vertex) -> bool,
    {
        let mut seen = VertexSet::new();
        let mut queue = VecDeque::new();
        for &s in sources {
            if allowed(s) && seen.insert(s) {
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if allowed(u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Connected components of `g[s]`, each sorted, ordered by least vertex.
    pub fn components_within(&self, s: &VertexSet) -> Vec<VertexSet> {
        let mut left = s.clone();
        let mut out = Vec::new();
        while let Some(&v) = left.iter().next() {
            let comp = self.bfs_within(&[v], |u| s.contains(&u));
            for u in &comp {
                left.remove(u);
            }
            out.push(comp);
        }
        out
    }

    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(&self.vertices().collect())
    }

    /// Shortest path from any vertex of `sources` to any vertex satisfying
    /// `is_target`, using only vertices satisfying `allowed` in between.
    /// Targets need not be allowed; sources must be.
    pub(crate) fn shortest_path<A, T>(&self, sources: &VertexSet, allowed: A, is_target: T) -> Option<Vec<Vertex>>
    where
        A: Fn(Vertex) -> bool,
        T: Fn(Vertex) -> bool,
    {
        let mut parent = vec![usize::MAX; self.n()];
        let mut queue = VecDeque::new();
        for &s in sources {
            parent[s] = s;
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if parent[u] != usize::MAX {
                    continue;
                }
                if is_target(u) {
                    parent[u] = v;
                    let mut path = vec![u];
                    let mut x = u;
                    while parent[x] != x {
                        x = parent[x];
                        path.push(x);
                    }
                    path.reverse();
                    return Some(path);
                }
                if allowed(u) {
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
        None
    }

    /// Complement graph.
    pub fn complement(&self) -> Graph {
        let n = self.n();
        let edges = (0..n).flat_map(|u| (u + 1..n).filter(move |&v| !self.has_edge(u, v)).map(move |v| (u, v)));
        Graph::from_edges(n, edges.collect::<Vec<_>>()).unwrap()
    }

    /// Removes the listed edges (missing ones are ignored).
    pub fn without_edges<I>(&self, drop: I) -> Graph
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let drop: BTreeSet<(Vertex, Vertex)> = drop.into_iter().map(|(u, v)| (u.min(v), u.max(v))).collect();
        Graph::from_edges(self.n(), self.edges().filter(|e| !drop.contains(e))).unwrap()
    }
}

/// `2m / n`, and 0 for the graph with no vertices.
pub fn average_degree(g: &Graph) -> Rational {
    if g.n() == 0 {
        Rational::from_integer(0)
    } else {
        Rational::new(2 * g.m() as i64, g.n() as i64)
    }
}

pub fn pairs(n: usize) -> i64 {
    (n as i64) * (n as i64 - 1) / 2
}

pub fn edge_density(g: &Graph) -> Result<Rational, GraphError> {
    if g.n() < 2 {
        return Err(GraphError::OrderTooSmall { needed: 2, n: g.n() });
    }
    Ok(Rational::new(g.m() as i64, pairs(g.n())))
}

/// `m >= (1 - eps) * C(n, 2)`, evaluated exactly.
pub fn is_eps_t_dense(g: &Graph, eps: Rational) -> Result<bool, GraphError> {
    if g.n() < 2 {
        return Err(GraphError::OrderTooSmall { needed: 2, n: g.n() });
    }
    Ok(meets_density(g, eps))
}

/// Same test as [`is_eps_t_dense`], but graphs on fewer than two vertices
/// count as dense (they have no pairs to miss).
pub fn meets_density(g: &Graph, eps: Rational) -> bool {
    let one = Rational::from_integer(1);
    Rational::from_integer(g.m() as i64) >= (one - eps) * Rational::from_integer(pairs(g.n()))
}

/// Number of non-adjacent pairs.
pub fn nonedge_count(g: &Graph) -> usize {
    pairs(g.n()) as usize - g.m()
}

/// `Δ(complement) = n - 1 - δ(g)`.
pub fn complement_max_degree(g: &Graph) -> usize {
    match g.min_degree() {
        Some(delta) => g.n() - 1 - delta,
        None => 0,
    }
}

/// Induced subgraph on `s`. Returns the graph and the map from new labels
/// to host labels (ascending, so new label `i` is the `i`-th least vertex
/// of `s`).
pub fn induced_subgraph(g: &Graph, s: &VertexSet) -> Result<(Graph, Vec<Vertex>), GraphError> {
    g.check_vertices(s)?;
    let map: Vec<Vertex> = s.iter().copied().collect();
    let mut index = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        index[v] = i;
    }
    let mut adj = Vec::with_capacity(map.len());
    let mut m2 = 0;
    for &v in &map {
        let list: Vec<Vertex> = g.adj[v]
            .iter()
            .filter_map(|&u| (index[u] != usize::MAX).then_some(index[u]))
            .collect();
        m2 += list.len();
        adj.push(list);
    }
    Ok((Graph { adj, m: m2 / 2 }, map))
}

/// Graph minus the vertices of `s`, with the map back to host labels.
pub fn delete_vertices(g: &Graph, s: &VertexSet) -> (Graph, Vec<Vertex>) {
    let keep: VertexSet = g.vertices().filter(|v| !s.contains(v)).collect();
    induced_subgraph(g, &keep).expect("kept vertices are in range")
}

/// Contracts the edge `uv`. The merged vertex takes label `min(u, v)`;
/// `max(u, v)` disappears and every higher label shifts down by one.
/// The second component maps each host vertex to its new label.
pub fn contract_edge_with_map(g: &Graph, u: Vertex, v: Vertex) -> Result<(Graph, Vec<Vertex>), GraphError> {
    g.check_vertex(u)?;
    g.check_vertex(v)?;
    if !g.has_edge(u, v) {
        return Err(GraphError::NotAnEdge { u, v });
    }
    let (keep, gone) = (u.min(v), u.max(v));
    let relabel: Vec<Vertex> = g
        .vertices()
        .map(|x| match x.cmp(&gone) {
            std::cmp::Ordering::Less => x,
            std::cmp::Ordering::Equal => keep,
            std::cmp::Ordering::Greater => x - 1,
        })
        .collect();
    let edges = g.edges().map(|(a, b)| (relabel[a], relabel[b])).filter(|(a, b)| a != b);
    let h = Graph::from_edges(g.n() - 1, edges.collect::<Vec<_>>())?;
    Ok((h, relabel))
}

pub fn contract_edge(g: &Graph, u: Vertex, v: Vertex) -> Result<Graph, GraphError> {
    contract_edge_with_map(g, u, v).map(|(h, _)| h)
}

/// Order in which repeated minimum-degree deletion removes the vertices
/// (ties broken by lowest label). The last entry is the survivor.
pub fn min_degree_peeling_order(g: &Graph) -> Vec<Vertex> {
    let n = g.n();
    let mut deg: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: BTreeSet<(usize, Vertex)> = g.vertices().map(|v| (deg[v], v)).collect();
    let mut order = Vec::with_capacity(n);
    while let Some((_, v)) = queue.pop_first() {
        alive[v] = false;
        order.push(v);
        for &u in g.neighbors(v) {
            if alive[u] {
                queue.remove(&(deg[u], u));
                deg[u] -= 1;
                queue.insert((deg[u], u));
            }
        }
    }
    order
}

/// Keeps the `t` vertices that survive minimum-degree peeling. Each
/// deletion removes a vertex of degree at most the current average, so
/// the edge density never drops along the way.
pub fn greedy_dense_subgraph(g: &Graph, t: usize) -> Result<VertexSet, GraphError> {
    if t < 2 || t > g.n() {
        return Err(GraphError::OrderTooSmall {
            needed: t.max(2),
            n: g.n(),
        });
    }
    let order = min_degree_peeling_order(g);
    Ok(order[g.n() - t..].iter().copied().collect())
}

/// Renders a rational as `p/q` (or `p` when integral).
pub fn fmt_rational(r: Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.15`, exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        return (q != 0).then(|| Rational::new(p, q));
    }
    if let Some((int, frac)) = text.split_once('.') {
        if frac.is_empty() || frac.len() > 15 || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int.starts_with('-');
        let int_part: i64 = if int.is_empty() || int == "-" {
            0
        } else {
            int.parse().ok()?
        };
        let scale = 10i64.checked_pow(frac.len() as u32)?;
        let frac_part: i64 = frac.parse().ok()?;
        let magnitude = int_part.abs().checked_mul(scale)?.checked_add(frac_part)?;
        let numer = if negative { -magnitude } else { magnitude };
        return Some(Rational::new(numer, scale));
    }
    text.parse::<i64>().ok().map(Rational::from_integer)
}

/// `ln(1/eps)` in double precision; only used to size integer parameters.
pub fn log_inverse(eps: Rational) -> f64 {
    let x = *eps.numer() as f64 / *eps.denom() as f64;
    (1.0 / x).ln()
}

pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
