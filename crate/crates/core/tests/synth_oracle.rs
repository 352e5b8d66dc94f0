mod common;

use common::{bfs_connected, brute_automorphisms, brute_cliques, closure, free_on_edges};
use forge_core::aut::{self, AutConfig};
use forge_core::graph::{clique_graph, Graph};
use forge_core::groups::FiniteGroup;
use forge_core::synth::{
    asymmetric_pendant, build_rigid_graph, d_regularize, frucht_graph, p_gadget, tag_graph,
    verify_tag_family, BlockDesign, PipelineOptions, SynthError, TagSpec,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn pendant_is_rigid_and_clique_free_by_brute_force() {
    let cfg = AutConfig::default();
    for seed in 0..3 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = asymmetric_pendant(5, 9, &mut rng, 1000, &cfg).unwrap();
        let g = &p.graph;
        assert_eq!(g.n(), 9);
        assert_eq!(g.degree(p.root), 4);
        assert!((0..9).filter(|&v| v != p.root).all(|v| g.degree(v) == 5));
        assert!(bfs_connected(g));
        assert_eq!(brute_automorphisms(g).len(), 1, "seed {seed}");
        assert!(brute_cliques(g, 5).is_empty());
    }
}

#[test]
fn pendant_preconditions() {
    let cfg = AutConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    assert!(matches!(asymmetric_pendant(5, 10, &mut rng, 10, &cfg), Err(SynthError::EvenOrder(10))));
    assert!(matches!(asymmetric_pendant(4, 9, &mut rng, 10, &cfg), Err(SynthError::Precondition(_))));
    assert!(matches!(asymmetric_pendant(5, 5, &mut rng, 10, &cfg), Err(SynthError::Precondition(_))));
}

#[test]
fn order_d_plus_two_pendants_are_never_rigid() {
    // The complement of such a graph has maximum degree 1 outside one path
    // of length two, so a swap of two matched vertices is always available.
    let cfg = AutConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    assert!(matches!(asymmetric_pendant(5, 7, &mut rng, 200, &cfg), Err(SynthError::PendantExhausted { .. })));
}

#[test]
fn p_gadget_for_degree_five() {
    let cfg = AutConfig::default();
    let p = p_gadget(5, &[9, 11], 0, &cfg).unwrap();
    let g = &p.graph;
    assert_eq!(g.n(), 5 + 9 + 11);
    let low: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) != 5).collect();
    assert_eq!(low, vec![0, 1, 2]);
    assert!(low.iter().all(|&v| g.degree(v) == 4));
    assert_eq!(brute_cliques(g, 5), vec![vec![0, 1, 2, 3, 4]]);
    // every permutation of u1, u2, u3 is a symmetry, and nothing else is
    let grp = aut::automorphism_group(g, &cfg).unwrap();
    assert_eq!(grp.order_u64(), Some(6));
    for p3 in common::permutations(3) {
        let mut perm: Vec<usize> = (0..g.n()).collect();
        perm[..3].copy_from_slice(&p3);
        assert!(g.is_automorphism(&perm));
    }
    assert!(p.certificate.moves_only_u && p.certificate.unique_d_clique);
    assert!(matches!(p_gadget(4, &[9], 0, &cfg), Err(SynthError::EvenDegree)));
    assert!(p_gadget(5, &[9, 9], 0, &cfg).is_err());
}

#[test]
fn frucht_graph_d_regularized() {
    let cfg = AutConfig::default();
    let f = frucht_graph();
    let built = d_regularize(&f, 5, 0, &cfg).unwrap();
    let g = &built.graph;
    assert_eq!(g.n(), 12 * 25);
    assert!(g.is_regular(5));
    assert!(bfs_connected(g));
    let cg = clique_graph(g, 5).unwrap();
    assert_eq!(cg.n(), 12);
    assert!(aut::graphs_isomorphic(&cg, &f, &cfg).unwrap().is_some());
    assert!(aut::automorphism_group(g, &AutConfig::with_cap(g.n())).unwrap().is_trivial());
    assert!(matches!(d_regularize(&f, 6, 0, &cfg), Err(SynthError::EvenDegree)));
    // a symmetric cubic input is refused
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    assert!(matches!(d_regularize(&k4, 5, 0, &cfg), Err(SynthError::Precondition(_))));
}

#[test]
fn pipeline_certificate_is_reproducible_and_witnessed() {
    let group = FiniteGroup::named("C4").unwrap();
    let opts = PipelineOptions::default();
    let (g1, c1) = build_rigid_graph(&group, "C4", 3, 2, &opts).unwrap();
    let (g2, c2) = build_rigid_graph(&group, "C4", 3, 2, &opts).unwrap();
    assert_eq!(g1.edges(), g2.edges());
    assert_eq!(serde_json::to_string(&c1).unwrap(), serde_json::to_string(&c2).unwrap());
    assert!(g1.is_regular(3));
    // witnesses are automorphisms generating a free group of order 4
    let perms: Vec<Vec<usize>> = c1.witness.iter().map(|w| w.permutation.clone()).collect();
    assert!(perms.iter().all(|p| g1.is_automorphism(p)));
    let elems = closure(g1.n(), &perms);
    assert_eq!(elems.len(), 4);
    assert!(free_on_edges(&g1, &elems));
    // the witness respects element orders
    for w in &c1.witness {
        let mut p = w.permutation.clone();
        let mut k = 1;
        while p.iter().enumerate().any(|(x, &y)| x != y) {
            p = p.iter().map(|&y| w.permutation[y]).collect();
            k += 1;
        }
        assert_eq!(k, group.element_order(w.element));
    }
}

#[test]
fn pipeline_rejects_even_degree() {
    let group = FiniteGroup::named("C4").unwrap();
    let err = build_rigid_graph(&group, "C4", 4, 0, &PipelineOptions::default()).unwrap_err();
    assert!(matches!(err, SynthError::EvenDegree));
    assert_eq!(err.to_string(), "even degree unsupported (parity obstruction)");
}

#[test]
fn symmetric_control_design_fails_the_gate() {
    let cfg = AutConfig::default();
    let words: Vec<String> = ["01", "10"].iter().map(|s| s.to_string()).collect();
    assert!(verify_tag_family(&words, BlockDesign::Reference, &cfg).is_ok());
    assert!(matches!(verify_tag_family(&words, BlockDesign::SymmetricControl, &cfg), Err(SynthError::Gate { .. })));
    let dup = vec!["01".to_string(), "01".to_string()];
    assert!(verify_tag_family(&dup, BlockDesign::Reference, &cfg).is_err());
}

#[test]
fn short_tags_have_one_leaf_and_no_symmetry() {
    let cfg = AutConfig::default();
    for w in ["0", "1", "01", "110"] {
        let t = tag_graph(&TagSpec::parse(w, BlockDesign::Reference).unwrap()).unwrap();
        let leaves: Vec<usize> = (0..t.graph.n()).filter(|&v| t.graph.degree(v) == 1).collect();
        assert_eq!(leaves, vec![t.leaf]);
        assert!(aut::automorphism_group(&t.graph, &cfg).unwrap().is_trivial(), "{w}");
    }
    assert!(TagSpec::parse("012", BlockDesign::Reference).is_err());
    assert!(TagSpec::parse("", BlockDesign::Reference).is_err());
}
