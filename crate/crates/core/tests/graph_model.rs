mod common;

use common::{arb_graph, chromatic_brute, mask_set};
use minorforge::graph::{
    chromatic_number_exact, contract_edge, edge_density, greedy_dense_subgraph, induced_subgraph,
    is_chromatic_separable, min_degree_peeling_order, vertex_connectivity,
};
use minorforge::model::{contract_model, is_attached_to, is_core, is_rooted_at, pattern_graph, validate_model};
use minorforge::{Caps, Graph, MinorModel, VertexSet};
use proptest::prelude::*;

fn connectivity_brute(g: &Graph) -> usize {
    let n = g.n();
    let mut best = n - 1;
    for mask in 0u64..1 << n {
        let x = mask_set(mask);
        if x.len() >= best || x.len() + 2 > n {
            continue;
        }
        let rest: VertexSet = g.vertices().filter(|v| !x.contains(v)).collect();
        if !g.is_connected_set(&rest) {
            best = x.len();
        }
    }
    best
}

/// Some ordered partition of the vertices into connected fragments, driven
/// by a label per vertex; labels that give a disconnected class are
/// split into components.
fn model_from_labels(g: &Graph, labels: &[usize]) -> MinorModel {
    let mut classes: std::collections::BTreeMap<usize, VertexSet> = Default::default();
    for (v, &l) in labels.iter().enumerate().take(g.n()) {
        classes.entry(l).or_default().insert(v);
    }
    let frags = classes.values().flat_map(|c| g.components_within(c)).collect();
    MinorModel::new(frags)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adjacency_is_symmetric_and_handshake_holds(g in arb_graph(0, 12)) {
        g.audit().unwrap();
        let total: usize = g.vertices().map(|v| g.degree(v)).sum();
        prop_assert_eq!(total, 2 * g.m());
        for v in g.vertices() {
            for &u in g.neighbors(v) {
                prop_assert!(g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn contraction_stays_simple(g in arb_graph(2, 10), pick in any::<prop::sample::Index>()) {
        let edges: Vec<_> = g.edges().collect();
        prop_assume!(!edges.is_empty());
        let (u, v) = edges[pick.index(edges.len())];
        let h = contract_edge(&g, u, v).unwrap();
        h.audit().unwrap();
        prop_assert_eq!(h.n(), g.n() - 1);
        prop_assert!(h.m() < g.m());
        let total: usize = h.vertices().map(|x| h.degree(x)).sum();
        prop_assert_eq!(total, 2 * h.m());
    }

    #[test]
    fn peeling_never_lowers_density(g in arb_graph(2, 14)) {
        let order = min_degree_peeling_order(&g);
        let mut alive: VertexSet = g.vertices().collect();
        let mut last = edge_density(&induced_subgraph(&g, &alive).unwrap().0).unwrap();
        for &v in &order[..g.n() - 2] {
            alive.remove(&v);
            let d = edge_density(&induced_subgraph(&g, &alive).unwrap().0).unwrap();
            prop_assert!(d >= last, "density fell from {} to {}", last, d);
            last = d;
        }
        let t = 2 + order.len() % (g.n() - 1);
        prop_assert_eq!(greedy_dense_subgraph(&g, t).unwrap().len(), t);
    }

    #[test]
    fn chromatic_number_matches_brute_force(g in arb_graph(0, 8)) {
        prop_assert_eq!(chromatic_number_exact(&g, &Caps::default()).unwrap(), chromatic_brute(&g));
    }

    #[test]
    fn connectivity_matches_cutset_enumeration(g in arb_graph(2, 9)) {
        prop_assert_eq!(vertex_connectivity(&g).unwrap(), connectivity_brute(&g));
    }

    #[test]
    fn separable_split_is_genuine(g in arb_graph(1, 9), m in 0usize..3) {
        let chi = chromatic_brute(&g);
        let target = chi.saturating_sub(m);
        let found = is_chromatic_separable(&g, m, &Caps::default()).unwrap();
        // brute force over all bipartitions
        let n = g.n();
        let mut exists = target == 0;
        for mask in 0u64..1 << n {
            let a = mask_set(mask);
            let b: VertexSet = g.vertices().filter(|v| !a.contains(v)).collect();
            let ca = chromatic_brute(&induced_subgraph(&g, &a).unwrap().0);
            let cb = chromatic_brute(&induced_subgraph(&g, &b).unwrap().0);
            if ca >= target && cb >= target {
                exists = true;
                break;
            }
        }
        prop_assert_eq!(found.is_some(), exists);
        if let Some((a, b)) = found {
            prop_assert!(a.is_disjoint(&b));
            prop_assert!(chromatic_brute(&induced_subgraph(&g, &a).unwrap().0) >= target);
            prop_assert!(chromatic_brute(&induced_subgraph(&g, &b).unwrap().0) >= target);
        }
    }

    #[test]
    fn pattern_and_contraction_agree(g in arb_graph(1, 10), labels in proptest::collection::vec(0usize..4, 10)) {
        let m = model_from_labels(&g, &labels);
        prop_assert!(validate_model(&g, &m).violations.is_empty());
        prop_assert_eq!(pattern_graph(&g, &m).unwrap(), contract_model(&g, &m).unwrap());
    }

    #[test]
    fn rooted_implies_attached(g in arb_graph(1, 10), labels in proptest::collection::vec(0usize..4, 10), pick in any::<u64>()) {
        let m = model_from_labels(&g, &labels);
        // one vertex from each of a prefix of fragments
        let k = (pick % (m.len() as u64 + 1)) as usize;
        let s: VertexSet = m.fragments[..k].iter().map(|f| *f.iter().nth(pick as usize % f.len()).unwrap()).collect();
        if is_rooted_at(&g, &m, &s).unwrap() {
            prop_assert!(is_attached_to(&g, &m, &s).unwrap());
        }
        prop_assert!(is_attached_to(&g, &m, &s).unwrap());
    }

    #[test]
    fn core_is_monotone(g in arb_graph(1, 10), labels in proptest::collection::vec(0usize..3, 10), a in any::<u16>(), b in any::<u16>()) {
        let m = model_from_labels(&g, &labels);
        let big = mask_set((a | b) as u64 & ((1 << g.n()) - 1));
        let small = mask_set((a & b) as u64 & ((1 << g.n()) - 1));
        if is_core(&g, &m, &small).unwrap() {
            prop_assert!(is_core(&g, &m, &big).unwrap());
        }
    }
}
