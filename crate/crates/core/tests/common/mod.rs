#![allow(dead_code)]

use minorforge::graph::random_graph;
use minorforge::{Graph, Rational, Rng, Vertex, VertexSet};
use proptest::prelude::*;

/// Graph on `n` vertices from an edge bitmask over the pairs `(u, v)`,
/// `u < v`, in lexicographic order.
pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut edges = Vec::new();
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k] {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Graph::from_edges(n, edges).unwrap()
}

pub fn arb_graph(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n.saturating_sub(1) / 2)
            .prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

pub fn seeded_graph(n: usize, p: Rational, seed: u64) -> Graph {
    random_graph(n, p, &mut Rng::new(seed)).unwrap()
}

pub fn mask_set(mask: u64) -> VertexSet {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

/// Largest number of vertex-disjoint `s`-`t` paths without inner vertices
/// in `s ∪ t`, by trying every set of candidate paths.
pub fn max_disjoint_paths(g: &Graph, s: &VertexSet, t: &VertexSet) -> usize {
    let mut paths: Vec<u64> = Vec::new();
    for &a in s {
        let mut stack = vec![(a, 1u64 << a)];
        while let Some((v, used)) = stack.pop() {
            if t.contains(&v) {
                paths.push(used);
                continue;
            }
            if v != a && s.contains(&v) {
                continue;
            }
            for &w in g.neighbors(v) {
                if used >> w & 1 == 0 && !(s.contains(&w) && !t.contains(&w)) {
                    stack.push((w, used | 1 << w));
                }
            }
        }
    }
    paths.sort_unstable();
    paths.dedup();
    // keep only inclusion-minimal vertex sets
    let minimal: Vec<u64> = paths
        .iter()
        .copied()
        .filter(|&p| !paths.iter().any(|&q| q != p && q & p == q))
        .collect();
    fn best(paths: &[u64], used: u64, from: usize) -> usize {
        let mut top = 0;
        for i in from..paths.len() {
            if paths[i] & used == 0 {
                top = top.max(1 + best(paths, used | paths[i], i + 1));
            }
        }
        top
    }
    best(&minimal, 0, 0)
}

/// Every simple path from `a` to `b` as a vertex mask.
pub fn all_path_masks(g: &Graph, a: Vertex, b: Vertex) -> Vec<u64> {
    let mut out = Vec::new();
    let mut stack = vec![(a, 1u64 << a)];
    while let Some((v, used)) = stack.pop() {
        if v == b {
            out.push(used);
            continue;
        }
        for &w in g.neighbors(v) {
            if used >> w & 1 == 0 {
                stack.push((w, used | 1 << w));
            }
        }
    }
    out
}

/// Whether some separation `(A, B)` of order below `t_order` with
/// `s ⊆ A` has at least `n_avoid + 1` sets of `d_list` inside `B - A`,
/// by walking all `3^n` placements of the vertices.
pub fn brute_avoiding(g: &Graph, s: &VertexSet, t_order: usize, d_list: &[VertexSet], n_avoid: usize) -> bool {
    let n = g.n();
    // 0: A - B, 1: A ∩ B, 2: B - A
    let mut side = vec![0u8; n];
    loop {
        let ok = s.iter().all(|&v| side[v] != 2)
            && side.iter().filter(|&&x| x == 1).count() < t_order
            && g.edges().all(|(u, v)| side[u].abs_diff(side[v]) != 2)
            && d_list.iter().filter(|d| d.iter().all(|&v| side[v] == 2)).count() > n_avoid;
        if ok {
            return true;
        }
        let Some(i) = side.iter().position(|&x| x < 2) else {
            return false;
        };
        side[i] += 1;
        side[..i].iter_mut().for_each(|x| *x = 0);
    }
}

pub fn linkable_brute(g: &Graph, pairs: &[(Vertex, Vertex)]) -> bool {
    let options: Vec<Vec<u64>> = pairs.iter().map(|&(s, t)| all_path_masks(g, s, t)).collect();
    let terminals: u64 = pairs.iter().fold(0, |acc, &(s, t)| acc | 1 << s | 1 << t);
    fn go(options: &[Vec<u64>], pairs: &[(Vertex, Vertex)], i: usize, used: u64, terminals: u64) -> bool {
        if i == options.len() {
            return true;
        }
        let own = 1u64 << pairs[i].0 | 1 << pairs[i].1;
        options[i]
            .iter()
            .any(|&p| p & used == 0 && p & terminals & !own == 0 && go(options, pairs, i + 1, used | p, terminals))
    }
    go(&options, pairs, 0, 0, terminals)
}

pub fn colourable(g: &Graph, k: usize) -> bool {
    let n = g.n();
    let mut colour = vec![0usize; n];
    fn go(g: &Graph, k: usize, v: usize, colour: &mut [usize]) -> bool {
        if v == g.n() {
            return true;
        }
        for c in 0..k {
            if g.neighbors(v).iter().all(|&u| u >= v || colour[u] != c) {
                colour[v] = c;
                if go(g, k, v + 1, colour) {
                    return true;
                }
            }
        }
        false
    }
    go(g, k, 0, &mut colour)
}

pub fn chromatic_brute(g: &Graph) -> usize {
    (0..=g.n()).find(|&k| colourable(g, k)).unwrap()
}
