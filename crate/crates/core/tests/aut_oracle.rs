mod common;

use common::{brute_automorphisms, closure, free_on_edges, free_on_vertices};
use forge_core::aut::{self, AutConfig};
use forge_core::graph::Graph;
use forge_core::synth::frucht_graph;
use proptest::prelude::*;

fn graph_from_mask(n: usize, mask: u32) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn small_graph() -> impl Strategy<Value = Graph> {
    (1usize..=7, any::<u32>()).prop_map(|(n, mask)| graph_from_mask(n, mask))
}

fn petersen() -> Graph {
    let mut e = Vec::new();
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, &e).unwrap()
}

fn cube() -> Graph {
    let mut e = Vec::new();
    for x in 0..8usize {
        for b in 0..3 {
            let y = x ^ (1 << b);
            if x < y {
                e.push((x, y));
            }
        }
    }
    Graph::from_edges(8, &e).unwrap()
}

fn k33() -> Graph {
    let e: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
    Graph::from_edges(6, &e).unwrap()
}

fn order(g: &Graph) -> u64 {
    aut::automorphism_group(g, &AutConfig::default()).unwrap().order_u64().unwrap()
}

#[test]
fn closed_form_orders() {
    assert_eq!(order(&petersen()), 120);
    assert_eq!(order(&cube()), 48);
    assert_eq!(order(&frucht_graph()), 1);
    assert_eq!(order(&k33()), 72);
}

#[test]
fn generators_are_automorphisms() {
    for g in [petersen(), cube(), k33()] {
        let grp = aut::automorphism_group(&g, &AutConfig::default()).unwrap();
        assert!(grp.generators.iter().all(|p| g.is_automorphism(p)));
    }
}

#[test]
fn cap_is_enforced() {
    let err = aut::automorphism_group(&petersen(), &AutConfig::with_cap(5));
    assert!(err.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn order_matches_brute_force(g in small_graph()) {
        let grp = aut::automorphism_group(&g, &AutConfig::default()).unwrap();
        let brute = brute_automorphisms(&g);
        prop_assert_eq!(grp.order_u64(), Some(brute.len() as u64));
        // the generators generate the whole group
        prop_assert_eq!(closure(g.n(), &grp.generators).len(), brute.len());
    }

    #[test]
    fn freeness_matches_brute_force(g in small_graph()) {
        let grp = aut::automorphism_group(&g, &AutConfig::default()).unwrap();
        let brute = brute_automorphisms(&g);
        prop_assert_eq!(grp.acts_freely_on_vertices(), free_on_vertices(&brute));
        prop_assert_eq!(grp.acts_freely_on_edges(&g), free_on_edges(&g, &brute));
    }

    #[test]
    fn relabelled_copies_are_isomorphic(g in small_graph(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let h = g.permuted(&perm);
        let iso = aut::graphs_isomorphic(&g, &h, &AutConfig::default()).unwrap();
        let iso = iso.expect("relabelled copy must be isomorphic");
        for (u, v) in g.edges() {
            prop_assert!(h.has_edge(iso[u], iso[v]));
        }
        prop_assert_eq!(g.m(), h.m());
    }

    #[test]
    fn different_edge_counts_are_not_isomorphic(n in 2usize..=7, mask in any::<u32>()) {
        let g = graph_from_mask(n, mask);
        let h = graph_from_mask(n, mask & !(mask & mask.wrapping_neg()));
        if g.m() != h.m() {
            prop_assert!(aut::graphs_isomorphic(&g, &h, &AutConfig::default()).unwrap().is_none());
        }
    }
}
