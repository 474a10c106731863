use super::menger::{menger, MengerOutcome};
use super::paths::Separation;
use super::LinkError;
use crate::graph::flow::{SplitNetwork, INF};
use crate::graph::{
    complement_max_degree, contract_edge_with_map, induced_subgraph, min_vertex_cut, vertex_connectivity, Caps, Graph,
    Vertex, VertexSet,
};
use crate::model::{pattern_graph, validate_model, MinorModel, ModelError};

/// Node budget of the exhaustive fallback search.
const FALLBACK_NODES: usize = 5_000_000;

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    acc
}

/// Lexicographic `k`-subsets of `0..n`.
fn for_each_subset<F>(n: usize, k: usize, mut f: F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return true;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return false;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A separation `(A, B)` with `s ⊆ A`, order below `t_order`, and more
/// than `n_avoid` of the sets in `d_list` inside `B - A`, if one exists.
///
/// Exact: for every family of `n_avoid + 1` sets disjoint from `s`, a
/// flow runs from `s` to the family's union with the union's vertices
/// uncuttable, so a cut below `t_order` is exactly a separation avoiding
/// the whole family.
pub fn find_separation_avoiding(
    g: &Graph,
    s: &VertexSet,
    t_order: usize,
    d_list: &[VertexSet],
    n_avoid: usize,
    caps: &Caps,
) -> Result<Option<Separation>, LinkError> {
    g.check_vertices(s)?;
    check_disjoint(g, d_list)?;
    let free: Vec<&VertexSet> = d_list.iter().filter(|d| d.is_disjoint(s)).collect();
    let k = n_avoid + 1;
    if t_order == 0 || free.len() < k {
        return Ok(None);
    }
    let combos = binomial(free.len(), k);
    if combos > caps.avoid_budget as u128 {
        return Err(LinkError::TooLarge(format!(
            "{combos} families to test, cap is {}",
            caps.avoid_budget
        )));
    }
    let mut found = None;
    for_each_subset(free.len(), k, |idx| {
        let union: VertexSet = idx.iter().flat_map(|&i| free[i].iter().copied()).collect();
        let mut net = SplitNetwork::new(g, |v| if union.contains(&v) { INF } else { 1 });
        for &v in s {
            net.attach_source(v, INF);
        }
        for &v in &union {
            net.attach_sink(v, INF);
        }
        if net.run(t_order as i64) < t_order as i64 {
            let (inner, cut) = net.cut();
            found = Some(Separation {
                a: inner.union(&cut).copied().collect(),
                b: g.vertices().filter(|v| !inner.contains(v)).collect(),
            });
            return true;
        }
        false
    });
    if let Some(sep) = &found {
        sep.audit(g)?;
    }
    Ok(found)
}

fn check_disjoint(g: &Graph, d_list: &[VertexSet]) -> Result<(), LinkError> {
    let mut seen = VertexSet::new();
    for d in d_list {
        g.check_vertices(d)?;
        if d.is_empty() {
            return Err(LinkError::Precondition("empty set in d_list".into()));
        }
        if d.iter().any(|v| !seen.insert(*v)) {
            return Err(LinkError::Precondition("sets in d_list overlap".into()));
        }
    }
    Ok(())
}

fn anticomplete(g: &Graph, a: &VertexSet, b: &VertexSet) -> bool {
    a.iter().all(|&v| g.neighbors(v).iter().all(|u| !b.contains(u)))
}

fn violated(reason: String) -> LinkError {
    LinkError::HypothesisViolated {
        reason,
        separation: None,
    }
}

/// Checks the four conditions under which an attached model exists, plus
/// `|d_list| >= n_avoid + 2|s|`. Sets disjoint from `s` must be connected;
/// every component of the others must meet `s`; each set may be
/// anticomplete to at most `n_avoid` of the sets disjoint from `s`; and no
/// separation of order below `|s|` with `s` on the first side avoids more
/// than `n_avoid` of them (the separation found is returned as evidence).
pub fn attached_hypotheses(
    g: &Graph,
    s: &[Vertex],
    d_list: &[VertexSet],
    n_avoid: usize,
    caps: &Caps,
) -> Result<(), LinkError> {
    g.check_vertices(s)?;
    let s_set: VertexSet = s.iter().copied().collect();
    let t = s.len();
    if s_set.len() != t || t == 0 {
        return Err(LinkError::Precondition("s must be nonempty without repeats".into()));
    }
    check_disjoint(g, d_list)?;
    let m = d_list.len();
    if m < n_avoid + 2 * t {
        return Err(LinkError::Precondition(format!(
            "{m} sets, need at least n + 2t = {}",
            n_avoid + 2 * t
        )));
    }
    let free: Vec<usize> = (0..m).filter(|&i| d_list[i].is_disjoint(&s_set)).collect();
    for &i in &free {
        if !g.is_connected_set(&d_list[i]) {
            return Err(violated(format!("set {i} is disconnected")));
        }
    }
    for (j, d) in d_list.iter().enumerate() {
        if !d.is_disjoint(&s_set) && g.components_within(d).iter().any(|c| c.is_disjoint(&s_set)) {
            return Err(violated(format!("a component of set {j} misses s")));
        }
    }
    for (j, d) in d_list.iter().enumerate() {
        let count = free
            .iter()
            .filter(|&&i| i != j && anticomplete(g, d, &d_list[i]))
            .count();
        if count > n_avoid {
            return Err(violated(format!("set {j} is anticomplete to {count} sets")));
        }
    }
    if let Some(sep) = find_separation_avoiding(g, &s_set, t, d_list, n_avoid, caps)? {
        return Err(LinkError::HypothesisViolated {
            reason: format!("separation of order {} avoids more than {n_avoid} sets", sep.order()),
            separation: Some(sep),
        });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchRoute {
    /// The contraction and splitting loop of the existence proof.
    Proof,
    /// Backtracking over connected vertex sets.
    Exhaustive,
}

/// A model attached to `roots`: fragment `i < |roots|` contains
/// `roots[i]` and no other root, and `pattern` is its realized pattern.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttachedModel {
    pub model: MinorModel,
    pub roots: Vec<Vertex>,
    pub pattern: Graph,
    pub route: SearchRoute,
}

/// Working instance of the proof loop. Vertices are contracted host
/// vertex sets, listed in `origin`.
#[derive(Debug, Clone)]
struct Instance {
    g: Graph,
    origin: Vec<VertexSet>,
    s: Vec<Vertex>,
    d: Vec<VertexSet>,
}

impl Instance {
    fn s_set(&self) -> VertexSet {
        self.s.iter().copied().collect()
    }

    fn owner(&self) -> Vec<Option<usize>> {
        let mut owner = vec![None; self.g.n()];
        for (i, d) in self.d.iter().enumerate() {
            for &v in d {
                owner[v] = Some(i);
            }
        }
        owner
    }

    fn host(&self, vs: &[Vertex]) -> VertexSet {
        vs.iter().flat_map(|&v| self.origin[v].iter().copied()).collect()
    }

    /// Induced on `keep` with the given roots; sets are intersected.
    fn restrict(&self, keep: &VertexSet, s: &[Vertex]) -> Instance {
        let (g, map) = induced_subgraph(&self.g, keep).expect("kept vertices are in range");
        let mut local = vec![usize::MAX; self.g.n()];
        for (i, &v) in map.iter().enumerate() {
            local[v] = i;
        }
        Instance {
            g,
            origin: map.iter().map(|&v| self.origin[v].clone()).collect(),
            s: s.iter().map(|&v| local[v]).collect(),
            d: self
                .d
                .iter()
                .map(|d| d.iter().filter(|v| keep.contains(v)).map(|&v| local[v]).collect())
                .collect(),
        }
    }

    fn contract(&self, u: Vertex, v: Vertex) -> (Instance, Vec<Vertex>) {
        let (g, relabel) = contract_edge_with_map(&self.g, u, v).expect("edge exists");
        let mut origin = vec![VertexSet::new(); g.n()];
        for (x, o) in self.origin.iter().enumerate() {
            origin[relabel[x]].extend(o.iter().copied());
        }
        let next = Instance {
            g,
            origin,
            s: self.s.iter().map(|&x| relabel[x]).collect(),
            d: self.d.iter().map(|d| d.iter().map(|&x| relabel[x]).collect()).collect(),
        };
        (next, relabel)
    }

    /// Drops edges inside `s` and isolated vertices that are neither in
    /// `s` nor in any set.
    fn normalize(self) -> Instance {
        let s = self.s_set();
        let g = self.g.without_edges(
            self.g
                .edges()
                .filter(|(u, v)| s.contains(u) && s.contains(v))
                .collect::<Vec<_>>(),
        );
        let owner = self.owner();
        let keep: VertexSet = g
            .vertices()
            .filter(|&v| g.degree(v) > 0 || s.contains(&v) || owner[v].is_some())
            .collect();
        let inst = Instance { g, ..self };
        let roots = inst.s.clone();
        inst.restrict(&keep, &roots)
    }
}

fn stuck(reason: &str) -> LinkError {
    LinkError::ConstructionFailed(reason.into())
}

struct ProofLoop<'a> {
    n_avoid: usize,
    m: usize,
    caps: &'a Caps,
}

impl ProofLoop<'_> {
    /// Host fragments of an attached model for `inst`.
    fn solve(&self, inst: Instance) -> Result<Vec<VertexSet>, LinkError> {
        let inst = inst.normalize();
        let t = inst.s.len();
        let owner = inst.owner();
        let edge = inst
            .g
            .edges()
            .find(|&(u, v)| owner[u].is_none() || owner[v].is_none() || owner[u] == owner[v]);
        let Some((u, v)) = edge else {
            return self.finish(&inst);
        };
        let (next, relabel) = inst.contract(u, v);
        match find_separation_avoiding(&next.g, &next.s_set(), t, &next.d, self.n_avoid, self.caps)? {
            None => self.solve(next),
            Some(sep) => self.split(&inst, &sep, &relabel, (u, v)),
        }
    }

    /// Contracting `e` created a small avoiding separation; its preimage
    /// has order exactly `t` with both ends of `e` in the middle. Route
    /// `s` to the middle inside `A` and recurse into `B`.
    fn split(
        &self,
        inst: &Instance,
        sep: &Separation,
        relabel: &[Vertex],
        (u, v): (Vertex, Vertex),
    ) -> Result<Vec<VertexSet>, LinkError> {
        let t = inst.s.len();
        let a: VertexSet = inst.g.vertices().filter(|x| sep.a.contains(&relabel[*x])).collect();
        let b: VertexSet = inst.g.vertices().filter(|x| sep.b.contains(&relabel[*x])).collect();
        let middle: VertexSet = a.intersection(&b).copied().collect();
        if middle.len() != t || !middle.contains(&u) || !middle.contains(&v) || b.len() == inst.g.n() {
            return Err(stuck("lifted separation has the wrong shape"));
        }
        let (ga, amap) = induced_subgraph(&inst.g, &a)?;
        let mut local = vec![usize::MAX; inst.g.n()];
        for (i, &x) in amap.iter().enumerate() {
            local[x] = i;
        }
        let s_local: VertexSet = inst.s.iter().map(|&x| local[x]).collect();
        let mid_local: VertexSet = middle.iter().map(|&x| local[x]).collect();
        let MengerOutcome::Paths(fam) = menger(&ga, &s_local, &mid_local, t)? else {
            return Err(stuck("too few paths from s to the separator"));
        };
        let mut routes = Vec::with_capacity(t);
        for &root in &inst.s {
            let path = fam
                .paths
                .iter()
                .find(|p| p[0] == local[root])
                .ok_or_else(|| stuck("root without a path"))?;
            routes.push(path.iter().map(|&x| amap[x]).collect::<Vec<_>>());
        }
        let roots: Vec<Vertex> = routes.iter().map(|p| *p.last().unwrap()).collect();
        let sub = inst.restrict(&b, &roots);
        if sub.d.iter().any(|d| d.is_empty()) {
            return Err(stuck("a set misses the far side"));
        }
        let mut frags = self.solve(sub)?;
        for (frag, route) in frags.iter_mut().zip(&routes) {
            frag.extend(inst.host(route));
        }
        Ok(frags)
    }

    /// Every edge joins two different sets: match `s` to the rest by `t`
    /// disjoint edges and keep `m - 2t` further singletons.
    fn finish(&self, inst: &Instance) -> Result<Vec<VertexSet>, LinkError> {
        let t = inst.s.len();
        let s = inst.s_set();
        let rest: VertexSet = inst.g.vertices().filter(|v| !s.contains(v)).collect();
        let MengerOutcome::Paths(fam) = menger(&inst.g, &s, &rest, t)? else {
            return Err(stuck("no matching from s"));
        };
        let mut frags = Vec::with_capacity(self.m - t);
        let mut partners = VertexSet::new();
        for &root in &inst.s {
            let p = fam
                .paths
                .iter()
                .find(|p| p[0] == root)
                .ok_or_else(|| stuck("unmatched root"))?;
            if p.len() != 2 {
                return Err(stuck("matching path is not an edge"));
            }
            partners.insert(p[1]);
            frags.push(inst.host(p));
        }
        let spare: Vec<Vertex> = rest.iter().copied().filter(|x| !partners.contains(x)).collect();
        let want = self.m - 2 * t;
        if spare.len() < want {
            return Err(stuck("too few vertices left after matching"));
        }
        frags.extend(spare[..want].iter().map(|&x| inst.host(&[x])));
        Ok(frags)
    }
}

/// Exhaustive search for `k` fragments attached to `s` with pattern
/// complement degree at most `n_avoid`, over bitmasks of connected sets.
/// Unrooted fragments are chosen with increasing least vertex.
fn exhaustive_attached(g: &Graph, s: &[Vertex], k: usize, n_avoid: usize) -> Result<Option<Vec<VertexSet>>, LinkError> {
    let n = g.n();
    let nb: Vec<u64> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |acc, &u| acc | 1 << u))
        .collect();
    let reach = |mask: u64| {
        let mut out = 0u64;
        let mut rest = mask;
        while rest != 0 {
            out |= nb[rest.trailing_zeros() as usize];
            rest &= rest - 1;
        }
        out
    };
    let connected = |mask: u64| {
        let mut seen = mask & mask.wrapping_neg();
        let mut frontier = seen;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = nb[v] & mask & !seen;
            seen |= new;
            frontier |= new;
        }
        seen == mask
    };
    let s_mask = s.iter().fold(0u64, |acc, &v| acc | 1 << v);
    let mut lists: Vec<Vec<(u64, u64)>> = vec![Vec::new(); s.len() + 1];
    for mask in 1u64..(1u64 << n) {
        let hit = mask & s_mask;
        if hit.count_ones() > 1 || !connected(mask) {
            continue;
        }
        let slot = if hit == 0 {
            s.len()
        } else {
            s.iter().position(|&v| hit == 1 << v).expect("hit is a root")
        };
        lists[slot].push((mask, reach(mask)));
    }
    for list in &mut lists {
        list.sort_by_key(|&(m, _)| (m.count_ones(), m));
    }

    struct Dfs<'a> {
        lists: &'a [Vec<(u64, u64)>],
        roots: usize,
        k: usize,
        n_avoid: usize,
        nodes: usize,
        chosen: Vec<(u64, u64)>,
        missing: Vec<usize>,
    }

    impl Dfs<'_> {
        fn run(&mut self, used: u64) -> Option<bool> {
            self.nodes += 1;
            if self.nodes > FALLBACK_NODES {
                return None;
            }
            let i = self.chosen.len();
            if i == self.k {
                return Some(true);
            }
            let lists = self.lists;
            let list = &lists[i.min(self.roots)];
            let floor = if i > self.roots {
                Some(self.chosen[i - 1].0.trailing_zeros())
            } else {
                None
            };
            for &(mask, near) in list {
                if mask & used != 0 || floor.is_some_and(|f| mask.trailing_zeros() <= f) {
                    continue;
                }
                let apart: Vec<usize> = (0..i).filter(|&j| near & self.chosen[j].0 == 0).collect();
                if apart.len() > self.n_avoid || apart.iter().any(|&j| self.missing[j] >= self.n_avoid) {
                    continue;
                }
                for &j in &apart {
                    self.missing[j] += 1;
                }
                self.chosen.push((mask, near));
                self.missing.push(apart.len());
                match self.run(used | mask) {
                    Some(false) => {}
                    done => return done,
                }
                self.chosen.pop();
                self.missing.pop();
                for &j in &apart {
                    self.missing[j] -= 1;
                }
            }
            Some(false)
        }
    }

    let mut dfs = Dfs {
        lists: &lists,
        roots: s.len(),
        k,
        n_avoid,
        nodes: 0,
        chosen: Vec::new(),
        missing: Vec::new(),
    };
    match dfs.run(0) {
        None => Err(LinkError::TooLarge(format!(
            "exhaustive search exceeded {FALLBACK_NODES} nodes"
        ))),
        Some(false) => Ok(None),
        Some(true) => Ok(Some(
            dfs.chosen
                .iter()
                .map(|&(mask, _)| (0..n).filter(|&v| mask >> v & 1 == 1).collect())
                .collect(),
        )),
    }
}

fn certify_attached(
    g: &Graph,
    s: &[Vertex],
    frags: Vec<VertexSet>,
    k: usize,
    n_avoid: usize,
    route: SearchRoute,
) -> Result<AttachedModel, LinkError> {
    let model = MinorModel::new(frags);
    let report = validate_model(g, &model);
    if let Some(v) = report.violations.into_iter().next() {
        return Err(ModelError::Invalid(v).into());
    }
    let pattern = report.pattern.expect("valid model has a pattern");
    let s_set: VertexSet = s.iter().copied().collect();
    let attached = model.fragments.iter().enumerate().all(|(i, f)| {
        let hits: Vec<&Vertex> = f.intersection(&s_set).collect();
        if i < s.len() {
            hits == [&s[i]]
        } else {
            hits.is_empty()
        }
    });
    if model.len() != k || !attached {
        return Err(LinkError::AuditFailed("model is not attached to s in order".into()));
    }
    if complement_max_degree(&pattern) > n_avoid {
        return Err(LinkError::AuditFailed(format!(
            "pattern complement has degree {} > {n_avoid}",
            complement_max_degree(&pattern)
        )));
    }
    Ok(AttachedModel {
        model,
        roots: s.to_vec(),
        pattern,
        route,
    })
}

/// A model with `|d_list| - |s|` fragments attached to `s` (fragment `i`
/// holds `s[i]`) whose pattern misses at most `n_avoid` edges at each
/// vertex. Runs the proof loop and, if it gets stuck, the exhaustive
/// search on hosts of at most `caps.attached_fallback` vertices.
pub fn attached_model_search(
    g: &Graph,
    s: &[Vertex],
    d_list: &[VertexSet],
    n_avoid: usize,
    caps: &Caps,
) -> Result<AttachedModel, LinkError> {
    match attached_model_search_with(g, s, d_list, n_avoid, caps, SearchRoute::Proof) {
        Err(LinkError::ConstructionFailed(_) | LinkError::AuditFailed(_)) if g.n() <= caps.attached_fallback => {
            attached_model_search_with(g, s, d_list, n_avoid, caps, SearchRoute::Exhaustive)
        }
        other => other,
    }
}

/// [`attached_model_search`] along one route only.
///
/// The proof loop keeps an instance of contracted host vertex sets. It
/// first drops edges inside `s` and isolated vertices outside every set.
/// An edge that does not join two different sets is contracted when the
/// contracted instance still has no small avoiding separation. Otherwise
/// the separation lifts to one of order `|s|` through both ends of the
/// edge: `s` is routed to its middle by disjoint paths on the near side
/// and the loop continues on the far side with the middle as the new
/// roots. When every edge joins two sets, `|s|` disjoint edges from `s`
/// and `m - 2|s|` further vertices give the model.
pub fn attached_model_search_with(
    g: &Graph,
    s: &[Vertex],
    d_list: &[VertexSet],
    n_avoid: usize,
    caps: &Caps,
    route: SearchRoute,
) -> Result<AttachedModel, LinkError> {
    attached_hypotheses(g, s, d_list, n_avoid, caps)?;
    let m = d_list.len();
    let k = m - s.len();
    let frags = match route {
        SearchRoute::Proof => {
            let inst = Instance {
                g: g.clone(),
                origin: g.vertices().map(|v| VertexSet::from([v])).collect(),
                s: s.to_vec(),
                d: d_list.to_vec(),
            };
            ProofLoop { n_avoid, m, caps }.solve(inst)?
        }
        SearchRoute::Exhaustive => {
            let cap = caps.attached_fallback.min(24);
            if g.n() > cap {
                return Err(LinkError::TooLarge(format!("{} vertices, cap is {cap}", g.n())));
            }
            exhaustive_attached(g, s, k, n_avoid)?.ok_or_else(|| stuck("exhaustive search found no model"))?
        }
    };
    certify_attached(g, s, frags, k, n_avoid, route)
}

/// An attached model from a dense minor: with `g` at least
/// `|s|`-connected and `j_model` a model whose pattern misses at most
/// `n_avoid` edges per vertex, the fragments serve as the sets.
pub fn rooted_from_minor(
    g: &Graph,
    s: &[Vertex],
    j_model: &MinorModel,
    n_avoid: usize,
    caps: &Caps,
) -> Result<AttachedModel, LinkError> {
    let t = s.len();
    if g.n() < 2 || vertex_connectivity(g)? < t {
        return Err(match min_vertex_cut(g) {
            Some(cut) => LinkError::NotConnected { needed: t, cut },
            None => LinkError::Precondition(format!("graph on {} vertices is not {t}-connected", g.n())),
        });
    }
    let pattern = pattern_graph(g, j_model)?;
    if complement_max_degree(&pattern) > n_avoid {
        return Err(LinkError::Precondition(format!(
            "pattern complement has degree {} > {n_avoid}",
            complement_max_degree(&pattern)
        )));
    }
    if j_model.len() < n_avoid + 2 * t {
        return Err(LinkError::Precondition(format!(
            "minor has {} vertices, need {}",
            j_model.len(),
            n_avoid + 2 * t
        )));
    }
    attached_model_search(g, s, &j_model.fragments, n_avoid, caps)
}
