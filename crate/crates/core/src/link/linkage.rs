use std::collections::HashSet;

use fixedbitset::FixedBitSet;

use super::paths::{PathContract, PathFamily};
use super::LinkError;
use crate::graph::{delete_vertices, Caps, Graph, Vertex, VertexSet};

fn check_pairs(g: &Graph, pairs: &[(Vertex, Vertex)]) -> Result<(), LinkError> {
    for &(s, t) in pairs {
        g.check_vertex(s)?;
        g.check_vertex(t)?;
    }
    for (i, &(s1, t1)) in pairs.iter().enumerate() {
        for &(s2, t2) in &pairs[i + 1..] {
            if s1 == s2 || t1 == t2 || s1 == t2 || t1 == s2 {
                return Err(LinkError::Precondition(format!(
                    "pairs ({s1},{t1}) and ({s2},{t2}) share a terminal"
                )));
            }
        }
    }
    Ok(())
}

/// Vertex-disjoint paths linking each `(s_i, t_i)`, or `None` when no
/// such linkage exists. A quick greedy routing is tried first; if it
/// fails the answer comes from an exact search, which needs at most
/// `caps.linkage_vertices` vertices.
pub fn find_linkage(g: &Graph, pairs: &[(Vertex, Vertex)], caps: &Caps) -> Result<Option<PathFamily>, LinkError> {
    check_pairs(g, pairs)?;
    if pairs.len() > caps.linkage_pairs {
        return Err(LinkError::TooLarge(format!(
            "{} pairs, cap is {}",
            pairs.len(),
            caps.linkage_pairs
        )));
    }
    let paths = match greedy_linkage(g, pairs) {
        Some(p) => Some(p),
        None => {
            if g.n() > caps.linkage_vertices {
                return Err(LinkError::TooLarge(format!(
                    "{} vertices, cap is {}",
                    g.n(),
                    caps.linkage_vertices
                )));
            }
            exact_linkage(g, pairs)
        }
    };
    let Some(paths) = paths else {
        return Ok(None);
    };
    let fam = PathFamily {
        paths,
        contract: PathContract::Linkage { pairs: pairs.to_vec() },
    };
    fam.audit(g)?;
    Ok(Some(fam))
}

/// Routes the pairs one at a time along shortest paths that avoid every
/// other terminal, trying each rotation of the pair order.
fn greedy_linkage(g: &Graph, pairs: &[(Vertex, Vertex)]) -> Option<Vec<Vec<Vertex>>> {
    let k = pairs.len();
    if k == 0 {
        return Some(Vec::new());
    }
    let terminals: VertexSet = pairs.iter().flat_map(|&(s, t)| [s, t]).collect();
    'rotation: for shift in 0..k {
        let mut used = terminals.clone();
        let mut paths = vec![Vec::new(); k];
        for step in 0..k {
            let i = (step + shift) % k;
            let (s, t) = pairs[i];
            let path = if s == t {
                vec![s]
            } else {
                match g.shortest_path(&VertexSet::from([s]), |v| !used.contains(&v), |v| v == t) {
                    Some(p) => p,
                    None => continue 'rotation,
                }
            };
            used.extend(path.iter().copied());
            paths[i] = path;
        }
        return Some(paths);
    }
    None
}

/// Depth-first search over partial linkages. A state is the pair being
/// routed, the current end of its path and the set of used vertices;
/// states known to fail are remembered.
struct LinkSearch<'a> {
    g: &'a Graph,
    pairs: &'a [(Vertex, Vertex)],
    failed: HashSet<(usize, Vertex, FixedBitSet)>,
}

impl LinkSearch<'_> {
    /// Whether `from` reaches `to` through unused vertices.
    fn reaches(&self, from: Vertex, to: Vertex, used: &FixedBitSet) -> bool {
        if from == to {
            return true;
        }
        self.g
            .shortest_path(&VertexSet::from([from]), |v| !used.contains(v), |v| v == to)
            .is_some()
    }

    fn feasible(&self, idx: usize, head: Vertex, used: &FixedBitSet) -> bool {
        self.reaches(head, self.pairs[idx].1, used)
            && self.pairs[idx + 1..].iter().all(|&(s, t)| self.reaches(s, t, used))
    }

    fn run(&mut self, idx: usize, head: Vertex, used: &mut FixedBitSet, paths: &mut Vec<Vec<Vertex>>) -> bool {
        let (_, target) = self.pairs[idx];
        if head == target {
            if idx + 1 == self.pairs.len() {
                return true;
            }
            let next = self.pairs[idx + 1].0;
            paths.push(vec![next]);
            if self.run(idx + 1, next, used, paths) {
                return true;
            }
            paths.pop();
            return false;
        }
        let key = (idx, head, used.clone());
        if self.failed.contains(&key) || !self.feasible(idx, head, used) {
            self.failed.insert(key);
            return false;
        }
        let mut options: Vec<Vertex> = self
            .g
            .neighbors(head)
            .iter()
            .copied()
            .filter(|&w| w == target || !used.contains(w))
            .collect();
        options.sort_by_key(|&w| (w != target, w));
        for w in options {
            let fresh = w != target;
            if fresh {
                used.insert(w);
            }
            paths.last_mut().unwrap().push(w);
            if self.run(idx, w, used, paths) {
                return true;
            }
            paths.last_mut().unwrap().pop();
            if fresh {
                used.set(w, false);
            }
        }
        self.failed.insert(key);
        false
    }
}

fn exact_linkage(g: &Graph, pairs: &[(Vertex, Vertex)]) -> Option<Vec<Vec<Vertex>>> {
    if pairs.is_empty() {
        return Some(Vec::new());
    }
    let mut used = FixedBitSet::with_capacity(g.n());
    for &(s, t) in pairs {
        used.insert(s);
        used.insert(t);
    }
    let mut search = LinkSearch {
        g,
        pairs,
        failed: HashSet::new(),
    };
    let mut paths = vec![vec![pairs[0].0]];
    search.run(0, pairs[0].0, &mut used, &mut paths).then_some(paths)
}

/// Maximum bipartite matching of demand slots to vertices by augmenting
/// paths; `options[i]` lists the vertices slot `i` may take.
pub(crate) fn match_slots(options: &[Vec<Vertex>]) -> Option<Vec<Vertex>> {
    fn augment(
        i: usize,
        options: &[Vec<Vertex>],
        owner: &mut std::collections::HashMap<Vertex, usize>,
        seen: &mut VertexSet,
    ) -> bool {
        for &v in &options[i] {
            if !seen.insert(v) {
                continue;
            }
            let free = match owner.get(&v) {
                None => true,
                Some(&j) => augment(j, options, owner, seen),
            };
            if free {
                owner.insert(v, i);
                return true;
            }
        }
        false
    }
    let mut owner = std::collections::HashMap::new();
    for i in 0..options.len() {
        if !augment(i, options, &mut owner, &mut VertexSet::new()) {
            return None;
        }
    }
    let mut chosen = vec![0; options.len()];
    for (v, i) in owner {
        chosen[i] = v;
    }
    Some(chosen)
}

/// For each part (in the given order), the linkage between consecutive
/// vertices `u, u'` that are not adjacent: a fresh neighbour of `u` is
/// linked to a fresh neighbour of `u'` inside `g - s`. Returns, per part
/// and per consecutive pair, the joining vertex sequence (empty when the
/// pair is adjacent).
fn knit_links(
    g: &Graph,
    s: &VertexSet,
    parts: &[Vec<Vertex>],
    caps: &Caps,
) -> Result<Vec<Vec<Vec<Vertex>>>, LinkError> {
    // demand slots: (part, gap) needs a right neighbour of the gap's
    // left end and a left neighbour of its right end
    let mut gaps: Vec<(usize, usize)> = Vec::new();
    let mut options: Vec<Vec<Vertex>> = Vec::new();
    for (pi, part) in parts.iter().enumerate() {
        for j in 0..part.len().saturating_sub(1) {
            let (u, w) = (part[j], part[j + 1]);
            if g.has_edge(u, w) {
                continue;
            }
            gaps.push((pi, j));
            for end in [u, w] {
                options.push(g.neighbors(end).iter().copied().filter(|x| !s.contains(x)).collect());
            }
        }
    }
    let chosen = match_slots(&options).ok_or(LinkError::NeighborsUnavailable)?;
    let (rest, map) = delete_vertices(g, s);
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in map.iter().enumerate() {
        local[v] = i;
    }
    let pairs: Vec<(Vertex, Vertex)> = chosen.chunks(2).map(|c| (local[c[0]], local[c[1]])).collect();
    let fam = find_linkage(&rest, &pairs, caps)?.ok_or(LinkError::LinkageFailed)?;
    let mut links: Vec<Vec<Vec<Vertex>>> = parts
        .iter()
        .map(|p| vec![Vec::new(); p.len().saturating_sub(1)])
        .collect();
    for (&(pi, j), path) in gaps.iter().zip(&fam.paths) {
        links[pi][j] = path.iter().map(|&x| map[x]).collect();
    }
    Ok(links)
}

fn ordered_parts(s: &VertexSet, parts: &[VertexSet]) -> Result<Vec<Vec<Vertex>>, LinkError> {
    let mut seen = VertexSet::new();
    for p in parts {
        if p.is_empty() {
            return Err(LinkError::Precondition("empty part".into()));
        }
        for &v in p {
            if !seen.insert(v) {
                return Err(LinkError::Precondition(format!("{v} is in two parts")));
            }
        }
    }
    if &seen != s {
        return Err(LinkError::Precondition("parts do not partition s".into()));
    }
    Ok(parts.iter().map(|p| p.iter().copied().collect()).collect())
}

/// Disjoint connected vertex sets, one per part of the partition of `s`,
/// each containing its part and no other vertex of `s`.
///
/// Consecutive vertices of a part (in increasing order) that are not
/// adjacent get distinct fresh neighbours outside `s`, and a linkage in
/// `g - s` joins the neighbour of each to the neighbour of the next.
pub fn knit_connect(g: &Graph, s: &VertexSet, parts: &[VertexSet], caps: &Caps) -> Result<Vec<VertexSet>, LinkError> {
    g.check_vertices(s)?;
    let ordered = ordered_parts(s, parts)?;
    let links = knit_links(g, s, &ordered, caps)?;
    let sets: Vec<VertexSet> = ordered
        .iter()
        .zip(&links)
        .map(|(part, gaps)| part.iter().chain(gaps.iter().flatten()).copied().collect())
        .collect();
    let mut seen = VertexSet::new();
    for (set, part) in sets.iter().zip(parts) {
        if !g.is_connected_set(set) || !set.is_superset(part) || !set.is_disjoint(&seen) {
            return Err(LinkError::AuditFailed(
                "knit sets are not disjoint connected covers".into(),
            ));
        }
        if set.iter().any(|v| s.contains(v) && !part.contains(v)) {
            return Err(LinkError::AuditFailed("knit set meets another part".into()));
        }
        seen.extend(set.iter().copied());
    }
    Ok(sets)
}

/// One path meeting `sequence` in the given order: the knit construction
/// with a single part, so consecutive vertices are joined through fresh
/// neighbours. When that fails and the graph is small, an exact search
/// over segment routings answers instead.
pub fn ordered_path_through(g: &Graph, sequence: &[Vertex], caps: &Caps) -> Result<PathFamily, LinkError> {
    g.check_vertices(sequence)?;
    let s: VertexSet = sequence.iter().copied().collect();
    if s.len() != sequence.len() || s.is_empty() {
        return Err(LinkError::Precondition(
            "sequence must be nonempty without repeats".into(),
        ));
    }
    let path = match knit_links(g, &s, &[sequence.to_vec()], caps) {
        Ok(links) => {
            let mut path = vec![sequence[0]];
            for (j, link) in links[0].iter().enumerate() {
                path.extend(link.iter().copied());
                path.push(sequence[j + 1]);
            }
            path
        }
        Err(LinkError::NeighborsUnavailable | LinkError::LinkageFailed | LinkError::TooLarge(_))
            if g.n() <= caps.linkage_vertices =>
        {
            segment_search(g, sequence).ok_or(LinkError::LinkageFailed)?
        }
        Err(e) => return Err(e),
    };
    let fam = PathFamily {
        paths: vec![path],
        contract: PathContract::Ordered {
            sequence: sequence.to_vec(),
        },
    };
    fam.audit(g)?;
    Ok(fam)
}

/// Exhaustive search for a path through `sequence` in order.
fn segment_search(g: &Graph, sequence: &[Vertex]) -> Option<Vec<Vertex>> {
    fn go(
        g: &Graph,
        sequence: &[Vertex],
        next: usize,
        path: &mut Vec<Vertex>,
        used: &mut FixedBitSet,
        failed: &mut HashSet<(usize, Vertex, FixedBitSet)>,
    ) -> bool {
        if next == sequence.len() {
            return true;
        }
        let head = *path.last().unwrap();
        let key = (next, head, used.clone());
        if failed.contains(&key) {
            return false;
        }
        let target = sequence[next];
        let mut options: Vec<Vertex> = g
            .neighbors(head)
            .iter()
            .copied()
            .filter(|&w| w == target || !used.contains(w))
            .collect();
        options.sort_by_key(|&w| (w != target, w));
        for w in options {
            let fresh = w != target;
            if fresh {
                used.insert(w);
            }
            path.push(w);
            if go(g, sequence, if fresh { next } else { next + 1 }, path, used, failed) {
                return true;
            }
            path.pop();
            if fresh {
                used.set(w, false);
            }
        }
        failed.insert(key);
        false
    }
    let mut used = FixedBitSet::with_capacity(g.n());
    for &v in sequence {
        used.insert(v);
    }
    let mut path = vec![sequence[0]];
    let mut failed = HashSet::new();
    go(g, sequence, 1, &mut path, &mut used, &mut failed).then_some(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clique_pairs_use_direct_edges() {
        let g = Graph::complete(10);
        let pairs = [(0, 1), (2, 3), (4, 5), (6, 7)];
        let fam = find_linkage(&g, &pairs, &Caps::default()).unwrap().unwrap();
        assert!(fam.paths.iter().all(|p| p.len() == 2));
    }

    #[test]
    fn square_diagonals_do_not_link() {
        let g = Graph::cycle(4);
        assert_eq!(find_linkage(&g, &[(0, 2), (1, 3)], &Caps::default()).unwrap(), None);
    }

    #[test]
    fn rotation_and_exact_search_agree() {
        // routing 0-5 first through 6 blocks 1-4
        let g = Graph::from_edges(
            8,
            [(0, 6), (6, 5), (0, 2), (2, 3), (3, 5), (1, 6), (6, 4), (1, 7), (7, 4)],
        )
        .unwrap();
        let g = Graph::from_edges(8, g.edges().filter(|&e| e != (1, 7))).unwrap();
        let fam = find_linkage(&g, &[(0, 5), (1, 4)], &Caps::default()).unwrap().unwrap();
        assert_eq!(fam.paths[0], vec![0, 2, 3, 5]);
        let exact = exact_linkage(&g, &[(0, 5), (1, 4)]).unwrap();
        assert_eq!(exact, fam.paths);
    }

    #[test]
    fn shared_terminals_are_rejected() {
        let g = Graph::complete(4);
        assert!(matches!(
            find_linkage(&g, &[(0, 1), (1, 2)], &Caps::default()),
            Err(LinkError::Precondition(_))
        ));
    }

    #[test]
    fn knit_on_a_clique() {
        let g = Graph::complete(12);
        let s = VertexSet::from([0, 1, 2, 3, 4]);
        let parts = [VertexSet::from([0, 3]), VertexSet::from([1]), VertexSet::from([2, 4])];
        let sets = knit_connect(&g, &s, &parts, &Caps::default()).unwrap();
        assert_eq!(sets[1], VertexSet::from([1]));
        assert_eq!(sets[0], VertexSet::from([0, 3]));
    }

    #[test]
    fn knit_links_nonadjacent_vertices() {
        let g = Graph::cycle(8);
        let s = VertexSet::from([0, 4]);
        let sets = knit_connect(&g, &s, std::slice::from_ref(&s), &Caps::default()).unwrap();
        assert_eq!(sets[0].len(), 5);
    }

    #[test]
    fn singleton_parts_come_back_unchanged() {
        let g = Graph::path(4);
        let s = VertexSet::from([0, 3]);
        let parts = [VertexSet::from([0]), VertexSet::from([3])];
        let sets = knit_connect(&g, &s, &parts, &Caps::default()).unwrap();
        assert_eq!(sets, parts.to_vec());
    }

    #[test]
    fn ordered_paths() {
        let fam = ordered_path_through(&Graph::complete(6), &[4, 1], &Caps::default()).unwrap();
        assert_eq!(fam.paths, vec![vec![4, 1]]);
        let fam = ordered_path_through(&Graph::path(5), &[0, 2, 4], &Caps::default()).unwrap();
        assert_eq!(fam.paths, vec![vec![0, 1, 2, 3, 4]]);
        assert!(ordered_path_through(&Graph::path(5), &[0, 4, 2], &Caps::default()).is_err());
    }
}
