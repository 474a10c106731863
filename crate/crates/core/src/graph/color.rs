//! Exact colouring for desk-scale graphs (at most 64 vertices, and at most
//! the configured cap).

use std::collections::{HashMap, VecDeque};

use super::{Caps, Graph, GraphError, Vertex, VertexSet};

const WORD: usize = 64;

fn masks(g: &Graph) -> Vec<u64> {
    g.vertices()
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &u| m | (1 << u)))
        .collect()
}

fn check_size(g: &Graph, cap: usize) -> Result<(), GraphError> {
    let cap = cap.min(WORD);
    if g.n() > cap {
        Err(GraphError::TooLarge { n: g.n(), cap })
    } else {
        Ok(())
    }
}

/// Exact chromatic number by branch and bound: a greedy clique gives the
/// lower bound, DSATUR gives the upper bound, and backtracking closes the
/// gap one colour count at a time.
pub fn chromatic_number_exact(g: &Graph, caps: &Caps) -> Result<usize, GraphError> {
    check_size(g, caps.coloring)?;
    let all = if g.n() == WORD { u64::MAX } else { (1u64 << g.n()) - 1 };
    Ok(chromatic_of_mask(&masks(g), all))
}

fn bits(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

pub(crate) fn chromatic_of_mask(adj: &[u64], mask: u64) -> usize {
    if mask == 0 {
        return 0;
    }
    if bits(mask).all(|v| adj[v] & mask == 0) {
        return 1;
    }
    let lower = greedy_clique(adj, mask);
    let upper = dsatur_greedy(adj, mask);
    for k in lower..upper {
        let mut colour = [u8::MAX; WORD];
        if colourable(adj, mask, k, &mut colour, 0) {
            return k;
        }
    }
    upper
}

fn greedy_clique(adj: &[u64], mask: u64) -> usize {
    let mut best = 1;
    for v in bits(mask) {
        let mut clique = 1;
        let mut cand = adj[v] & mask;
        while cand != 0 {
            let u = bits(cand)
                .max_by_key(|&u| ((adj[u] & cand).count_ones(), std::cmp::Reverse(u)))
                .unwrap();
            clique += 1;
            cand &= adj[u];
        }
        best = best.max(clique);
    }
    best
}

fn pick_vertex(adj: &[u64], mask: u64, colour: &[u8; WORD]) -> Option<usize> {
    bits(mask).filter(|&v| colour[v] == u8::MAX).max_by_key(|&v| {
        let seen = bits(adj[v] & mask)
            .filter(|&u| colour[u] != u8::MAX)
            .fold(0u64, |m, u| m | (1 << colour[u]));
        (seen.count_ones(), (adj[v] & mask).count_ones(), std::cmp::Reverse(v))
    })
}

fn dsatur_greedy(adj: &[u64], mask: u64) -> usize {
    let mut colour = [u8::MAX; WORD];
    let mut used = 0;
    while let Some(v) = pick_vertex(adj, mask, &colour) {
        let taken = bits(adj[v] & mask)
            .filter(|&u| colour[u] != u8::MAX)
            .fold(0u64, |m, u| m | (1 << colour[u]));
        let c = (!taken).trailing_zeros() as u8;
        colour[v] = c;
        used = used.max(c as usize + 1);
    }
    used
}

fn colourable(adj: &[u64], mask: u64, k: usize, colour: &mut [u8; WORD], used: usize) -> bool {
    let Some(v) = pick_vertex(adj, mask, colour) else {
        return true;
    };
    let taken = bits(adj[v] & mask)
        .filter(|&u| colour[u] != u8::MAX)
        .fold(0u64, |m, u| m | (1 << colour[u]));
    // a fresh colour is interchangeable with any other fresh colour
    let limit = k.min(used + 1);
    for c in 0..limit {
        if taken & (1 << c) != 0 {
            continue;
        }
        colour[v] = c as u8;
        if colourable(adj, mask, k, colour, used.max(c + 1)) {
            return true;
        }
    }
    colour[v] = u8::MAX;
    false
}

/// Proper 2-colouring of `g[s]` by breadth-first search, or `None` when
/// `g[s]` has an odd cycle.
pub fn two_coloring(g: &Graph, s: &VertexSet) -> Option<Vec<(Vertex, u8)>> {
    let mut colour: HashMap<Vertex, u8> = HashMap::new();
    for &root in s {
        if colour.contains_key(&root) {
            continue;
        }
        colour.insert(root, 0);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let c = colour[&v];
            for &u in g.neighbors(v) {
                if !s.contains(&u) {
                    continue;
                }
                match colour.get(&u) {
                    Some(&cu) if cu == c => return None,
                    Some(_) => {}
                    None => {
                        colour.insert(u, 1 - c);
                        queue.push_back(u);
                    }
                }
            }
        }
    }
    let mut out: Vec<(Vertex, u8)> = colour.into_iter().collect();
    out.sort_unstable();
    Some(out)
}

/// Decides whether `g` has two vertex-disjoint subgraphs, each of
/// chromatic number at least `χ(g) - m`, and returns such a pair.
///
/// Chromatic number only grows when vertices are added, so it suffices to
/// look at the bipartitions of `V(g)`; the search walks all of them.
pub fn is_chromatic_separable(g: &Graph, m: usize, caps: &Caps) -> Result<Option<(VertexSet, VertexSet)>, GraphError> {
    check_size(g, caps.separable.min(32))?;
    let n = g.n();
    let adj = masks(g);
    let all: u64 = (1u64 << n) - 1;
    let chi = chromatic_of_mask(&adj, all);
    let target = chi as i64 - m as i64;
    if target <= 0 {
        return Ok(Some((g.vertices().collect(), VertexSet::new())));
    }
    let target = target as usize;
    let mut memo: HashMap<u64, usize> = HashMap::new();
    let mut chi_of = |mask: u64| *memo.entry(mask).or_insert_with(|| chromatic_of_mask(&adj, mask));
    // vertex 0 always goes to the first side
    for rest in 0u64..(1u64 << (n - 1)) {
        let first = (rest << 1) | 1;
        let second = all & !first;
        let (a, b) = (first.count_ones() as usize, second.count_ones() as usize);
        if a < target || b < target {
            continue;
        }
        if chi_of(first) >= target && chi_of(second) >= target {
            let side = |mask: u64| bits(mask).collect::<VertexSet>();
            return Ok(Some((side(first), side(second))));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(g: &Graph) -> usize {
        chromatic_number_exact(g, &Caps::default()).unwrap()
    }

    #[test]
    fn chromatic_examples() {
        assert_eq!(chi(&Graph::complete(5)), 5);
        assert_eq!(chi(&Graph::cycle(5)), 3);
        assert_eq!(chi(&Graph::cycle(6)), 2);
        assert_eq!(chi(&Graph::petersen()), 3);
        assert_eq!(chi(&Graph::empty(3)), 1);
        assert_eq!(chi(&Graph::empty(0)), 0);
        assert!(matches!(
            chromatic_number_exact(&Graph::empty(21), &Caps::default()),
            Err(GraphError::TooLarge { n: 21, cap: 20 })
        ));
    }

    #[test]
    fn petersen_is_not_bipartite() {
        let all: VertexSet = (0..10).collect();
        assert!(two_coloring(&Graph::petersen(), &all).is_none());
        let c6: VertexSet = (0..6).collect();
        let colouring = two_coloring(&Graph::cycle(6), &c6).unwrap();
        assert_eq!(colouring.len(), 6);
    }

    #[test]
    fn separable_examples() {
        let caps = Caps::default();
        let two_k4 = Graph::complete(4).disjoint_union(&Graph::complete(4));
        let (a, b) = is_chromatic_separable(&two_k4, 0, &caps).unwrap().unwrap();
        assert!(a.is_disjoint(&b));
        assert!(is_chromatic_separable(&Graph::complete(4), 0, &caps).unwrap().is_none());
        let two_c5 = Graph::cycle(5).disjoint_union(&Graph::cycle(5));
        assert!(is_chromatic_separable(&two_c5, 0, &caps).unwrap().is_some());
        // K_4 splits into two edges once one colour of slack is allowed
        assert!(is_chromatic_separable(&Graph::complete(4), 2, &caps).unwrap().is_some());
    }
}
