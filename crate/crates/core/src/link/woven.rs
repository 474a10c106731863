use super::linkage::{find_linkage, match_slots};
use super::paths::{PathContract, PathFamily};
use super::rooted::rooted_from_minor;
use super::LinkError;
use crate::graph::{
    complement_max_degree, delete_vertices, greedy_dense_subgraph, induced_subgraph, meets_density, min_vertex_cut,
    nonedge_count, vertex_connectivity, Caps, Graph, Rational, Rng, Vertex, VertexSet,
};
use crate::model::{pattern_graph, validate_model, MinorModel, ModelError};

/// Roots `r` and terminal pairs `(s[i], t[i])`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WovenRequest {
    pub r: Vec<Vertex>,
    pub s: Vec<Vertex>,
    pub t: Vec<Vertex>,
}

impl WovenRequest {
    pub fn pairs(&self) -> Vec<(Vertex, Vertex)> {
        self.s.iter().copied().zip(self.t.iter().copied()).collect()
    }

    fn terminals(&self) -> VertexSet {
        self.s.iter().chain(&self.t).copied().collect()
    }

    fn check(&self, g: &Graph) -> Result<(), LinkError> {
        g.check_vertices(&self.r)?;
        g.check_vertices(&self.s)?;
        g.check_vertices(&self.t)?;
        let r: VertexSet = self.r.iter().copied().collect();
        if r.len() != self.r.len() || self.r.is_empty() {
            return Err(LinkError::Precondition("roots must be nonempty without repeats".into()));
        }
        if self.s.len() != self.t.len() {
            return Err(LinkError::Precondition("s and t differ in length".into()));
        }
        let pairs = self.pairs();
        for (i, &(s1, t1)) in pairs.iter().enumerate() {
            for &(s2, t2) in &pairs[i + 1..] {
                if s1 == s2 || t1 == t2 || s1 == t2 || t1 == s2 {
                    return Err(LinkError::Precondition("terminal pairs must be disjoint".into()));
                }
            }
        }
        Ok(())
    }
}

/// A model rooted at the request's roots with dense pattern, and a
/// linkage of its pairs meeting the model only in roots that are also
/// terminals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WovenWitness {
    pub model: MinorModel,
    pub pattern: Graph,
    pub linkage: PathFamily,
}

impl WovenWitness {
    /// Re-checks rooting, density, the linkage contract and
    /// `V(M) ∩ V(P) = R ∩ (S ∪ T)`.
    pub fn audit(&self, g: &Graph, eps: Rational, request: &WovenRequest) -> Result<(), LinkError> {
        let report = validate_model(g, &self.model);
        if let Some(v) = report.violations.into_iter().next() {
            return Err(ModelError::Invalid(v).into());
        }
        let pattern = report.pattern.expect("valid model has a pattern");
        if pattern != self.pattern {
            return Err(LinkError::AuditFailed(
                "stored pattern differs from the realized one".into(),
            ));
        }
        let rooted = self.model.len() == request.r.len()
            && self
                .model
                .fragments
                .iter()
                .zip(&request.r)
                .all(|(f, r)| f.contains(r) && request.r.iter().filter(|x| f.contains(x)).count() == 1);
        if !rooted {
            return Err(LinkError::AuditFailed("model is not rooted at r".into()));
        }
        if !meets_density(&pattern, eps) {
            return Err(LinkError::DensityNotMet {
                nonedges: nonedge_count(&pattern),
            });
        }
        if self.linkage.contract != (PathContract::Linkage { pairs: request.pairs() }) {
            return Err(LinkError::AuditFailed("linkage links other pairs".into()));
        }
        self.linkage.audit(g)?;
        let meet: VertexSet = self
            .model
            .vertices()
            .intersection(&self.linkage.vertices())
            .copied()
            .collect();
        let allowed: VertexSet = request
            .r
            .iter()
            .copied()
            .filter(|v| request.terminals().contains(v))
            .collect();
        if meet != allowed {
            return Err(LinkError::AuditFailed(
                "model and linkage meet outside R ∩ (S ∪ T)".into(),
            ));
        }
        Ok(())
    }
}

/// Linkage of `request`'s pairs in `g` minus the model vertices that are
/// not terminals.
fn link_around(
    g: &Graph,
    request: &WovenRequest,
    model_vertices: &VertexSet,
    caps: &Caps,
) -> Result<Option<PathFamily>, LinkError> {
    let terminals = request.terminals();
    let blocked: VertexSet = model_vertices.difference(&terminals).copied().collect();
    let (rest, map) = delete_vertices(g, &blocked);
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        local[v] = i;
    }
    let pairs: Vec<(Vertex, Vertex)> = request.pairs().iter().map(|&(s, t)| (local[s], local[t])).collect();
    Ok(find_linkage(&rest, &pairs, caps)?.map(|fam| PathFamily {
        paths: fam.paths.iter().map(|p| p.iter().map(|&x| map[x]).collect()).collect(),
        contract: PathContract::Linkage { pairs: request.pairs() },
    }))
}

fn witness_from(g: &Graph, fragments: Vec<VertexSet>, linkage: PathFamily) -> Result<WovenWitness, LinkError> {
    let model = MinorModel::new(fragments);
    let pattern = pattern_graph(g, &model)?;
    Ok(WovenWitness {
        model,
        pattern,
        linkage,
    })
}

/// Singleton roots, then each nonadjacent pair of fragments is joined by
/// adding a free common neighbour to the first of them.
fn greedy_model(g: &Graph, request: &WovenRequest) -> Vec<VertexSet> {
    let terminals = request.terminals();
    let mut frags: Vec<VertexSet> = request.r.iter().map(|&r| VertexSet::from([r])).collect();
    let mut used: VertexSet = request.r.iter().copied().collect();
    let touches = |f: &VertexSet, v: Vertex| f.iter().any(|&x| g.has_edge(x, v));
    for i in 0..frags.len() {
        for j in i + 1..frags.len() {
            if frags[j].iter().any(|&v| touches(&frags[i], v)) {
                continue;
            }
            let w = g.vertices().find(|&w| {
                !used.contains(&w) && !terminals.contains(&w) && touches(&frags[i], w) && touches(&frags[j], w)
            });
            if let Some(w) = w {
                used.insert(w);
                frags[i].insert(w);
            }
        }
    }
    frags
}

/// Inclusion-minimal vertex sets of rooted models with dense pattern,
/// each with one model realizing it, smallest first.
fn minimal_dense_models(g: &Graph, roots: &[Vertex], eps: Rational) -> Vec<(VertexSet, Vec<VertexSet>)> {
    let a = roots.len();
    let free: Vec<Vertex> = g.vertices().filter(|v| !roots.contains(v)).collect();
    let mut found: Vec<(VertexSet, Vec<VertexSet>)> = Vec::new();
    let mut digits = vec![0usize; free.len()];
    loop {
        let mut frags: Vec<VertexSet> = roots.iter().map(|&r| VertexSet::from([r])).collect();
        for (&v, &d) in free.iter().zip(&digits) {
            if d > 0 {
                frags[d - 1].insert(v);
            }
        }
        if frags.iter().all(|f| g.is_connected_set(f)) {
            let model = MinorModel::new(frags);
            let pattern = pattern_graph(g, &model).expect("fragments are disjoint and connected");
            if meets_density(&pattern, eps) {
                found.push((model.vertices(), model.fragments));
            }
        }
        let Some(i) = digits.iter().position(|&d| d < a) else {
            break;
        };
        digits[i] += 1;
        digits[..i].iter_mut().for_each(|d| *d = 0);
    }
    found.sort_by(|x, y| (x.0.len(), &x.0).cmp(&(y.0.len(), &y.0)));
    let mut minimal: Vec<(VertexSet, Vec<VertexSet>)> = Vec::new();
    for (set, frags) in found {
        if !minimal.iter().any(|(m, _)| m.is_subset(&set)) {
            minimal.push((set, frags));
        }
    }
    minimal
}

fn exhaustive_witness(
    g: &Graph,
    request: &WovenRequest,
    models: &[(VertexSet, Vec<VertexSet>)],
    caps: &Caps,
) -> Result<Option<WovenWitness>, LinkError> {
    let terminals = request.terminals();
    let roots: VertexSet = request.r.iter().copied().collect();
    for (set, frags) in models {
        if set.iter().any(|v| terminals.contains(v) && !roots.contains(v)) {
            continue;
        }
        if let Some(linkage) = link_around(g, request, set, caps)? {
            return Ok(Some(witness_from(g, frags.clone(), linkage)?));
        }
    }
    Ok(None)
}

/// A witness for one request: the greedy model first, then, on hosts
/// within `caps.wovenness`, every minimal dense rooted model. `None` means
/// no witness exists; a larger host whose greedy attempt fails gives
/// `TooLarge`.
pub fn find_woven_witness(
    g: &Graph,
    eps: Rational,
    request: &WovenRequest,
    caps: &Caps,
) -> Result<Option<WovenWitness>, LinkError> {
    request.check(g)?;
    let frags = greedy_model(g, request);
    let quick = MinorModel::new(frags.clone());
    if meets_density(&pattern_graph(g, &quick)?, eps) {
        let terminals = request.terminals();
        let clean = quick
            .vertices()
            .iter()
            .all(|v| !terminals.contains(v) || request.r.contains(v));
        if clean {
            match link_around(g, request, &quick.vertices(), caps) {
                Ok(Some(linkage)) => return witness_from(g, frags, linkage).map(Some),
                Ok(None) | Err(LinkError::TooLarge(_)) => {}
                Err(e) => return Err(e),
            }
        }
    }
    if g.n() > caps.wovenness {
        return Err(LinkError::TooLarge(format!(
            "{} vertices, cap is {}",
            g.n(),
            caps.wovenness
        )));
    }
    let models = minimal_dense_models(g, &request.r, eps);
    exhaustive_witness(g, request, &models, caps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WovenMode {
    /// Every root set and every family of disjoint terminal pairs.
    Exhaustive,
    /// `trials` random requests.
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleRecord {
    pub request: WovenRequest,
    pub witness: Option<WovenWitness>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WovenVerdict {
    Proven,
    Refuted {
        counterexample: WovenRequest,
    },
    NoCounterexampleFound,
    /// Sampled requests whose witness search hit a size cap.
    Inconclusive {
        unresolved: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WovenReport {
    pub eps: Rational,
    pub a: usize,
    pub b: usize,
    pub mode: WovenMode,
    pub records: Vec<TripleRecord>,
    pub verdict: WovenVerdict,
}

/// All families of `b` pairwise disjoint unordered pairs `{x, y}` (with
/// `x = y` allowed), as `(s, t)` lists in lexicographic order.
fn pair_families(n: usize, b: usize) -> Vec<(Vec<Vertex>, Vec<Vertex>)> {
    fn go(
        n: usize,
        b: usize,
        from: (Vertex, Vertex),
        used: &mut Vec<bool>,
        acc: &mut Vec<(Vertex, Vertex)>,
        out: &mut Vec<(Vec<Vertex>, Vec<Vertex>)>,
    ) {
        if acc.len() == b {
            out.push(acc.iter().copied().unzip());
            return;
        }
        for x in from.0..n {
            let start = if x == from.0 { from.1 } else { x };
            for y in start..n {
                if used[x] || used[y] {
                    continue;
                }
                used[x] = true;
                used[y] = true;
                acc.push((x, y));
                let next = if y + 1 < n { (x, y + 1) } else { (x + 1, x + 1) };
                go(n, b, next, used, acc, out);
                acc.pop();
                used[x] = false;
                used[y] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, b, (0, 0), &mut vec![false; n], &mut Vec::new(), &mut out);
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Tests `(eps, a, b)`-wovenness: for roots `R` (`|R| = a`) and `b`
/// disjoint terminal pairs, a model rooted at `R` with `(eps, a)`-dense
/// pattern plus a linkage of the pairs, meeting only in `R ∩ (S ∪ T)`.
///
/// Exhaustive mode needs at most `caps.wovenness` vertices and stops at
/// the first request without a witness. Sampled mode draws `trials`
/// requests from `rng`: `a` distinct roots and `2b` distinct terminals.
#[allow(clippy::too_many_arguments)]
pub fn check_wovenness(
    g: &Graph,
    eps: Rational,
    a: usize,
    b: usize,
    mode: WovenMode,
    trials: usize,
    rng: &mut Rng,
    caps: &Caps,
) -> Result<WovenReport, LinkError> {
    let n = g.n();
    if a == 0 || a > n || 2 * b > n {
        return Err(LinkError::Precondition(format!(
            "a = {a}, b = {b} do not fit {n} vertices"
        )));
    }
    let mut records = Vec::new();
    let verdict = match mode {
        WovenMode::Exhaustive => {
            if n > caps.wovenness {
                return Err(LinkError::TooLarge(format!("{n} vertices, cap is {}", caps.wovenness)));
            }
            let families = pair_families(n, b);
            let mut verdict = WovenVerdict::Proven;
            'roots: for r in subsets(n, a) {
                let models = minimal_dense_models(g, &r, eps);
                for (s, t) in &families {
                    let request = WovenRequest {
                        r: r.clone(),
                        s: s.clone(),
                        t: t.clone(),
                    };
                    let witness = exhaustive_witness(g, &request, &models, caps)?;
                    let failed = witness.is_none();
                    records.push(TripleRecord {
                        request: request.clone(),
                        witness,
                    });
                    if failed {
                        verdict = WovenVerdict::Refuted {
                            counterexample: request,
                        };
                        break 'roots;
                    }
                }
            }
            verdict
        }
        WovenMode::Sampled => {
            let mut unresolved = 0;
            let mut refuted = None;
            for _ in 0..trials {
                let mut order: Vec<Vertex> = g.vertices().collect();
                for i in 0..order.len() {
                    let j = i + rng.below(order.len() - i);
                    order.swap(i, j);
                }
                let mut r = order[..a].to_vec();
                r.sort_unstable();
                for i in 0..2 * b {
                    let j = i + rng.below(order.len() - i);
                    order.swap(i, j);
                }
                let request = WovenRequest {
                    r,
                    s: (0..b).map(|i| order[2 * i]).collect(),
                    t: (0..b).map(|i| order[2 * i + 1]).collect(),
                };
                let witness = match find_woven_witness(g, eps, &request, caps) {
                    Ok(w) => w,
                    Err(LinkError::TooLarge(_)) => {
                        unresolved += 1;
                        None
                    }
                    Err(e) => return Err(e),
                };
                if witness.is_none() && refuted.is_none() && n <= caps.wovenness {
                    refuted = Some(request.clone());
                }
                records.push(TripleRecord { request, witness });
            }
            match (refuted, unresolved) {
                (Some(counterexample), _) => WovenVerdict::Refuted { counterexample },
                (None, 0) => WovenVerdict::NoCounterexampleFound,
                (None, unresolved) => WovenVerdict::Inconclusive { unresolved },
            }
        }
    };
    for rec in &records {
        if let Some(w) = &rec.witness {
            w.audit(g, eps, &rec.request)?;
        }
    }
    Ok(WovenReport {
        eps,
        a,
        b,
        mode,
        records,
        verdict,
    })
}

/// Reroutes a linkage through `F` while placing a dense model rooted at
/// `roots` inside `F`. Each prior path that meets `F` is cut at its first
/// and last vertex in `F`, the resulting boundary pairs are handed to
/// `realize` as a request on `g[F]` (in the labels of the induced
/// subgraph), and the returned linkage is spliced in.
///
/// The outcome is audited: the new linkage uses only vertices of `F` and
/// of the prior paths, and meets the model only in roots that are
/// terminals. When a root is the entry point of a prior path without
/// being one of its ends, the splice necessarily passes through the model
/// and the audit fails.
pub fn weave<W>(
    g: &Graph,
    f_vertices: &VertexSet,
    roots: &[Vertex],
    prior: &PathFamily,
    eps: Rational,
    mut realize: W,
) -> Result<(MinorModel, PathFamily), LinkError>
where
    W: FnMut(&Graph, &WovenRequest) -> Result<Option<WovenWitness>, LinkError>,
{
    let PathContract::Linkage { pairs } = &prior.contract else {
        return Err(LinkError::Precondition("prior family is not a linkage".into()));
    };
    prior.audit(g)?;
    if roots.iter().any(|r| !f_vertices.contains(r)) {
        return Err(LinkError::Precondition("roots must lie in F".into()));
    }
    let (gf, map) = induced_subgraph(g, f_vertices)?;
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        local[v] = i;
    }
    // (path index, first and last position inside F)
    let crossing: Vec<(usize, usize, usize)> = prior
        .paths
        .iter()
        .enumerate()
        .filter_map(|(i, p)| {
            let first = p.iter().position(|v| f_vertices.contains(v))?;
            let last = p.iter().rposition(|v| f_vertices.contains(v))?;
            Some((i, first, last))
        })
        .collect();
    let request = WovenRequest {
        r: roots.iter().map(|&r| local[r]).collect(),
        s: crossing.iter().map(|&(i, f, _)| local[prior.paths[i][f]]).collect(),
        t: crossing.iter().map(|&(i, _, l)| local[prior.paths[i][l]]).collect(),
    };
    let witness = realize(&gf, &request)?
        .ok_or_else(|| LinkError::WovennessFailed("no witness for the boundary pairs inside F".into()))?;
    witness.audit(&gf, eps, &request)?;
    let model = witness.model.relabel(&map);
    let mut paths = prior.paths.clone();
    for (&(i, first, last), q) in crossing.iter().zip(&witness.linkage.paths) {
        let p = &prior.paths[i];
        let mut spliced = p[..first].to_vec();
        spliced.extend(q.iter().map(|&x| map[x]));
        spliced.extend_from_slice(&p[last + 1..]);
        paths[i] = spliced;
    }
    let linkage = PathFamily {
        paths,
        contract: PathContract::Linkage { pairs: pairs.clone() },
    };
    linkage.audit(g)?;
    let allowed: VertexSet = f_vertices.union(&prior.vertices()).copied().collect();
    if !linkage.vertices().is_subset(&allowed) {
        return Err(LinkError::AuditFailed(
            "rerouted linkage leaves F and the prior paths".into(),
        ));
    }
    let terminals: VertexSet = pairs.iter().flat_map(|&(s, t)| [s, t]).collect();
    let bad = model
        .vertices()
        .intersection(&linkage.vertices())
        .any(|v| !(roots.contains(v) && terminals.contains(v)));
    if bad {
        return Err(LinkError::WovennessFailed(
            "model meets the linkage outside R ∩ (S ∪ T)".into(),
        ));
    }
    Ok((model, linkage))
}

/// Greedy removal of the fragment with most missing pattern edges until
/// every fragment misses at most `limit` (as `2 * missing * den <= num`).
fn trim_to_degree(g: &Graph, model: &MinorModel, half_eps_a: Rational) -> Result<MinorModel, LinkError> {
    let mut frags = model.fragments.clone();
    loop {
        let pattern = pattern_graph(g, &MinorModel::new(frags.clone()))?;
        let k = pattern.n();
        let worst = (0..k).max_by_key(|&i| (k - 1 - pattern.degree(i), std::cmp::Reverse(i)));
        match worst {
            Some(i) if Rational::from_integer((k - 1 - pattern.degree(i)) as i64) > half_eps_a => {
                frags.remove(i);
            }
            _ => return Ok(MinorModel::new(frags)),
        }
    }
}

/// Realizes the request by the argument for highly connected graphs with
/// a very dense minor: fresh neighbours `R'` of the roots, then on
/// `g - R` a trimmed minor `J'` with few missing edges per vertex, a
/// model attached to `R'`, `S`, `T` (in that order), pair `i` routed
/// through a fragment adjacent to the fragments of `s[i]` and `t[i]`,
/// and the first `a` fragments extended by the roots as the dense model.
///
/// Needs `8a`-connectivity, `|S| <= 3a`, roots disjoint from the
/// terminals, and a dense model `j_model` of `g`; when none is given the
/// `32a` survivors of min-degree peeling are used as singletons.
pub fn realize_woven_from_dense_minor(
    g: &Graph,
    eps: Rational,
    request: &WovenRequest,
    j_model: Option<&MinorModel>,
    caps: &Caps,
) -> Result<WovenWitness, LinkError> {
    request.check(g)?;
    let a = request.r.len();
    let b = request.s.len();
    if b > 3 * a {
        return Err(LinkError::Precondition(format!(
            "{b} pairs, at most 3a = {} supported",
            3 * a
        )));
    }
    let terminals = request.terminals();
    if request.r.iter().any(|r| terminals.contains(r)) {
        return Err(LinkError::Precondition("roots must not be terminals".into()));
    }
    if g.n() < 2 || vertex_connectivity(g)? < 8 * a {
        return Err(match min_vertex_cut(g) {
            Some(cut) => LinkError::NotConnected { needed: 8 * a, cut },
            None => LinkError::Precondition(format!("graph on {} vertices is not {}-connected", g.n(), 8 * a)),
        });
    }
    let j = match j_model {
        Some(m) => m.clone(),
        None => MinorModel::singletons(greedy_dense_subgraph(g, (32 * a).min(g.n()))?),
    };
    let j_pattern = pattern_graph(g, &j)?;
    if !meets_density(&j_pattern, eps / 256) {
        return Err(LinkError::DensityNotMet {
            nonedges: nonedge_count(&j_pattern),
        });
    }
    let half_eps_a = eps * Rational::from_integer(a as i64) / 2;
    let j = trim_to_degree(g, &j, half_eps_a)?;

    // fresh neighbours of the roots
    let r_set: VertexSet = request.r.iter().copied().collect();
    let options: Vec<Vec<Vertex>> = request
        .r
        .iter()
        .map(|&r| {
            g.neighbors(r)
                .iter()
                .copied()
                .filter(|v| !r_set.contains(v) && !terminals.contains(v))
                .collect()
        })
        .collect();
    let r_prime = match_slots(&options).ok_or(LinkError::NeighborsUnavailable)?;

    let (gp, map) = delete_vertices(g, &r_set);
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        local[v] = i;
    }
    let jp = MinorModel::new(
        j.fragments
            .iter()
            .filter(|f| f.is_disjoint(&r_set))
            .map(|f| f.iter().map(|&v| local[v]).collect())
            .collect(),
    );
    let n_avoid = complement_max_degree(&pattern_graph(&gp, &jp)?);
    // roots of the attached model: R', then S, then the T vertices
    let mut att_roots: Vec<Vertex> = r_prime.iter().map(|&v| local[v]).collect();
    att_roots.extend(request.s.iter().map(|&v| local[v]));
    let t_index: Vec<usize> = request
        .s
        .iter()
        .zip(&request.t)
        .map(|(&s, &t)| {
            if s == t {
                a + request.s.iter().position(|&x| x == s).unwrap()
            } else {
                att_roots.push(local[t]);
                att_roots.len() - 1
            }
        })
        .collect();
    let attached = rooted_from_minor(&gp, &att_roots, &jp, n_avoid, caps)?;
    let f = &attached.pattern;
    let t_count = att_roots.len();
    let frags = &attached.model.fragments;

    // a connector fragment for every pair
    let slots: Vec<Vec<Vertex>> = (0..b)
        .map(|i| {
            let (x, y) = (a + i, t_index[i]);
            (t_count..frags.len())
                .filter(|&c| f.has_edge(c, x) && f.has_edge(c, y))
                .collect()
        })
        .collect();
    let connectors = match_slots(&slots)
        .ok_or_else(|| LinkError::ConstructionFailed("no distinct connector fragments for the pairs".into()))?;
    let mut paths = Vec::with_capacity(b);
    for i in 0..b {
        let (s, t) = (local[request.s[i]], local[request.t[i]]);
        let path = if s == t {
            vec![s]
        } else {
            let zone: VertexSet = frags[a + i]
                .iter()
                .chain(&frags[connectors[i]])
                .chain(&frags[t_index[i]])
                .copied()
                .collect();
            gp.shortest_path(&VertexSet::from([s]), |v| zone.contains(&v), |v| v == t)
                .ok_or_else(|| LinkError::ConstructionFailed("pair zone is disconnected".into()))?
        };
        paths.push(path.iter().map(|&x| map[x]).collect());
    }
    let fragments: Vec<VertexSet> = (0..a)
        .map(|i| {
            let mut frag: VertexSet = frags[i].iter().map(|&x| map[x]).collect();
            frag.insert(request.r[i]);
            frag
        })
        .collect();
    let linkage = PathFamily {
        paths,
        contract: PathContract::Linkage { pairs: request.pairs() },
    };
    let witness = witness_from(g, fragments, linkage)?;
    witness.audit(g, eps, request)?;
    Ok(witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_families_are_disjoint_pairs() {
        let fams = pair_families(3, 1);
        assert_eq!(fams.len(), 6);
        let fams = pair_families(4, 2);
        // two singletons-or-edges covering disjoint vertices of K4
        for (s, t) in &fams {
            let all: VertexSet = s.iter().chain(t).copied().collect();
            assert_eq!(
                all.len(),
                s.iter().zip(t).map(|(x, y)| if x == y { 1 } else { 2 }).sum::<usize>()
            );
        }
        assert_eq!(fams.len(), 21);
    }

    #[test]
    fn clique_is_woven_without_pairs() {
        let g = Graph::complete(5);
        let rep = check_wovenness(
            &g,
            Rational::new(1, 2),
            1,
            0,
            WovenMode::Exhaustive,
            0,
            &mut Rng::new(0),
            &Caps::default(),
        )
        .unwrap();
        assert_eq!(rep.verdict, WovenVerdict::Proven);
        assert_eq!(rep.records.len(), 5);
    }

    #[test]
    fn path_is_not_woven() {
        // a root in the middle of a path blocks the pair around it
        let g = Graph::path(3);
        let rep = check_wovenness(
            &g,
            Rational::new(1, 2),
            1,
            1,
            WovenMode::Exhaustive,
            0,
            &mut Rng::new(0),
            &Caps::default(),
        )
        .unwrap();
        let WovenVerdict::Refuted { counterexample } = rep.verdict else {
            panic!()
        };
        assert_eq!(counterexample.r, vec![1]);
    }

    #[test]
    fn weave_splices_through_f() {
        let g = Graph::complete(8);
        let prior = PathFamily {
            paths: vec![vec![0, 5, 6, 1]],
            contract: PathContract::Linkage { pairs: vec![(0, 1)] },
        };
        let f: VertexSet = (2..8).collect();
        let caps = Caps::default();
        let eps = Rational::new(1, 2);
        let (model, linkage) = weave(&g, &f, &[2, 3], &prior, eps, |h, req| {
            find_woven_witness(h, eps, req, &caps)
        })
        .unwrap();
        assert_eq!(model.len(), 2);
        let p = &linkage.paths[0];
        assert_eq!((p[0], *p.last().unwrap()), (0, 1));
        assert!(model.vertices().is_disjoint(&linkage.vertices()));
    }

    #[test]
    fn weave_keeps_paths_outside_f() {
        let g = Graph::complete(6);
        let prior = PathFamily {
            paths: vec![vec![0, 1]],
            contract: PathContract::Linkage { pairs: vec![(0, 1)] },
        };
        let f: VertexSet = (2..6).collect();
        let caps = Caps::default();
        let eps = Rational::new(1, 2);
        let (_, linkage) = weave(&g, &f, &[2], &prior, eps, |h, req| {
            find_woven_witness(h, eps, req, &caps)
        })
        .unwrap();
        assert_eq!(linkage, prior);
    }

    #[test]
    fn clique_realizes_woven_requests() {
        let g = Graph::complete(40);
        let request = WovenRequest {
            r: vec![0],
            s: vec![1, 2, 3],
            t: vec![4, 5, 6],
        };
        let w = realize_woven_from_dense_minor(&g, Rational::new(1, 2), &request, None, &Caps::default()).unwrap();
        assert_eq!(w.model.len(), 1);
        assert_eq!(w.linkage.len(), 3);
    }

    #[test]
    fn low_connectivity_is_reported() {
        let g = Graph::cycle(40);
        let request = WovenRequest {
            r: vec![0],
            s: vec![],
            t: vec![],
        };
        let err =
            realize_woven_from_dense_minor(&g, Rational::new(1, 2), &request, None, &Caps::default()).unwrap_err();
        assert!(matches!(err, LinkError::NotConnected { needed: 8, .. }));
    }
}
