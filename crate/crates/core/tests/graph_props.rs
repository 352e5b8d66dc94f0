mod common;

use common::{bfs_connected, brute_cliques};
use forge_core::graph::{block_decomposition, clique_graph, cliques_of_size, validate_edges, Graph};
use proptest::prelude::*;

fn graph(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bit < 64 && mask >> bit & 1 == 1 {
                edges.push((u, v));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

fn small() -> impl Strategy<Value = Graph> {
    (1usize..=9, any::<u64>()).prop_map(|(n, m)| graph(n, m))
}

fn connected_small() -> impl Strategy<Value = Graph> {
    small().prop_filter("connected", bfs_connected)
}

/// Articulation points by deletion.
fn brute_cut_vertices(g: &Graph) -> Vec<usize> {
    (0..g.n())
        .filter(|&v| {
            let rest: Vec<usize> = (0..g.n()).filter(|&w| w != v).collect();
            !rest.is_empty() && !bfs_connected(&g.induced_subgraph(&rest))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cliques_match_brute_force(g in small(), k in 2usize..=5) {
        let mut ours = cliques_of_size(&g, k).unwrap();
        let mut brute = brute_cliques(&g, k);
        ours.sort();
        brute.sort();
        prop_assert_eq!(ours, brute);
    }

    #[test]
    fn clique_graph_edges_have_witnesses(g in small(), k in 2usize..=4) {
        let cliques = brute_cliques(&g, k);
        let cg = clique_graph(&g, k).unwrap();
        let ordered = cliques_of_size(&g, k).unwrap();
        prop_assert_eq!(cg.n(), cliques.len());
        for i in 0..ordered.len() {
            for j in i + 1..ordered.len() {
                let (a, b) = (&ordered[i], &ordered[j]);
                let witness = a.iter().any(|x| b.contains(x))
                    || a.iter().any(|&x| b.iter().any(|&y| g.has_edge(x, y)));
                prop_assert_eq!(cg.has_edge(i, j), witness, "cliques {:?} {:?}", a, b);
            }
        }
    }

    #[test]
    fn cut_vertices_match_deletion(g in connected_small()) {
        let bd = block_decomposition(&g).unwrap();
        prop_assert_eq!(bd.cut_vertices.clone(), brute_cut_vertices(&g));
        // every edge lies in exactly one block
        for (u, v) in g.edges() {
            let holders = bd.blocks.iter().filter(|b| b.contains(&u) && b.contains(&v)).count();
            prop_assert_eq!(holders, 1);
        }
        // blocks with ≥ 3 vertices are 2-connected
        for b in bd.blocks.iter().filter(|b| b.len() >= 3) {
            let h = g.induced_subgraph(b);
            prop_assert!(brute_cut_vertices(&h).is_empty());
        }
        // block–cut tree: blocks + cut vertices − 1 incidences
        if g.n() > 1 {
            prop_assert_eq!(bd.tree_edges.len(), bd.blocks.len() + bd.cut_vertices.len() - 1);
        }
    }

    #[test]
    fn json_round_trip(g in small()) {
        let s = serde_json::to_string(&g).unwrap();
        let back: Graph = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
        prop_assert_eq!(back.n(), g.n());
        let edges: Vec<[usize; 2]> = g.edges().into_iter().map(|(u, v)| [u, v]).collect();
        prop_assert!(validate_edges(g.n(), &edges).simplicial);
    }
}

#[test]
fn validation_flags_loops_and_duplicates() {
    assert!(!validate_edges(3, &[[0, 0], [0, 1], [1, 2]]).is_valid());
    assert!(!validate_edges(3, &[[0, 1], [1, 0], [1, 2]]).is_valid());
    assert!(!validate_edges(3, &[[0, 5], [0, 1], [1, 2]]).is_valid());
    assert!(!validate_edges(3, &[[0, 1]]).connected);
    assert!(validate_edges(3, &[[0, 1], [1, 2]]).is_valid());
}

#[test]
fn disconnected_graph_has_no_block_decomposition() {
    assert!(block_decomposition(&Graph::new(2)).is_err());
}
