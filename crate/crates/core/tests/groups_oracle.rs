mod common;

use common::closure;
use forge_core::aut::{label_preserving_automorphisms, AutConfig};
use forge_core::groups::{
    cayley_graph, groups_isomorphic, normalize_generating_set, FiniteGroup, GeneratingSet,
    GroupError, DEFAULT_ISO_CAP,
};
use forge_core::synth::default_generating_set;
use std::collections::BTreeMap;

/// (name, order, {element order: count}) from the classification of small groups.
fn expected() -> Vec<(&'static str, usize, Vec<(usize, usize)>)> {
    vec![
        ("trivial", 1, vec![(1, 1)]),
        ("C2", 2, vec![(1, 1), (2, 1)]),
        ("C3", 3, vec![(1, 1), (3, 2)]),
        ("C4", 4, vec![(1, 1), (2, 1), (4, 2)]),
        ("C5", 5, vec![(1, 1), (5, 4)]),
        ("C6", 6, vec![(1, 1), (2, 1), (3, 2), (6, 2)]),
        ("C2xC2", 4, vec![(1, 1), (2, 3)]),
        ("S3", 6, vec![(1, 1), (2, 3), (3, 2)]),
        ("D3", 6, vec![(1, 1), (2, 3), (3, 2)]),
        ("D4", 8, vec![(1, 1), (2, 5), (4, 2)]),
        ("Q8", 8, vec![(1, 1), (2, 1), (4, 6)]),
        ("D5", 10, vec![(1, 1), (2, 5), (5, 4)]),
        ("D6", 12, vec![(1, 1), (2, 7), (3, 2), (6, 2)]),
    ]
}

/// Element order by brute powering through the table.
fn brute_order(t: &[Vec<usize>], a: usize) -> usize {
    let (mut x, mut k) = (a, 1);
    while x != 0 {
        x = t[x][a];
        k += 1;
    }
    k
}

fn is_homomorphism(g: &FiniteGroup, h: &FiniteGroup, phi: &[usize]) -> bool {
    let mut img = phi.to_vec();
    img.sort_unstable();
    img.dedup();
    img.len() == g.order()
        && (0..g.order()).all(|a| (0..g.order()).all(|b| phi[g.mul(a, b)] == h.mul(phi[a], phi[b])))
}

#[test]
fn named_groups_have_the_right_orders_and_profiles() {
    for (name, order, profile) in expected() {
        let g = FiniteGroup::named(name).unwrap();
        assert_eq!(g.order(), order, "{name}");
        let t = g.table();
        // group axioms straight from the table
        for a in 0..order {
            assert_eq!(t[0][a], a);
            assert_eq!(t[a][0], a);
            assert!((0..order).any(|b| t[a][b] == 0));
            for b in 0..order {
                for c in 0..order {
                    assert_eq!(t[t[a][b]][c], t[a][t[b][c]], "{name} associativity");
                }
            }
        }
        let mut hist: BTreeMap<usize, usize> = BTreeMap::new();
        for a in 0..order {
            *hist.entry(brute_order(&t, a)).or_default() += 1;
        }
        assert_eq!(hist.into_iter().collect::<Vec<_>>(), profile, "{name}");
    }
}

#[test]
fn cayley_graphs_recover_the_group() {
    let cfg = AutConfig::default();
    for (name, order, _) in expected() {
        if order < 4 {
            continue;
        }
        let g = FiniteGroup::named(name).unwrap();
        let s = default_generating_set(&g).unwrap();
        let lg = cayley_graph(&g, &s).unwrap();
        assert_eq!(lg.base.n(), order);
        assert!(lg.base.is_regular(s.cayley_degree(&g)), "{name}");
        assert!(s.cayley_degree(&g) >= 3, "{name}");
        assert!(lg.base.is_connected());
        let grp = label_preserving_automorphisms(&lg, &cfg).unwrap();
        assert_eq!(grp.order_u64(), Some(order as u64), "{name}");
        assert!(grp.acts_freely_on_vertices());
        // left multiplications are exactly the label-preserving symmetries
        let elems = closure(order, &grp.generators);
        assert_eq!(elems.len(), order);
        for p in &elems {
            let a = p[0];
            assert!((0..order).all(|x| p[x] == g.mul(a, x)), "{name}: not a left translation");
        }
    }
}

#[test]
fn generating_set_invariants() {
    let g = FiniteGroup::cyclic(6);
    assert_eq!(GeneratingSet::new(&g, vec![1, 5]), Err(GroupError::InversePair));
    assert_eq!(GeneratingSet::new(&g, vec![2]), Err(GroupError::NotGenerating));
    assert!(GeneratingSet::new(&g, vec![1, 3]).is_ok());
    let s = normalize_generating_set(&g, &[1, 5]).unwrap();
    assert!(!s.gens.contains(&5));
    assert!(s.cayley_degree(&g) >= 3);
    assert_eq!(normalize_generating_set(&FiniteGroup::cyclic(3), &[1]), Err(GroupError::SmallGroup(3)));
    // C4 and C5 admit no inverse-pair-free set of size three, but degree 3 is reachable
    for n in [4, 5] {
        let g = FiniteGroup::cyclic(n);
        let s = normalize_generating_set(&g, &[1]).unwrap();
        assert!(s.cayley_degree(&g) >= 3);
        assert!(s.gens.len() < 3);
    }
}

#[test]
fn isomorphism_search() {
    let iso = |a: &FiniteGroup, b: &FiniteGroup| groups_isomorphic(a, b, DEFAULT_ISO_CAP).unwrap();
    let named = |n: &str| FiniteGroup::named(n).unwrap();
    for (a, b) in [("S3", "D3"), ("C2xC2", "V4")] {
        let (g, h) = (named(a), named(b));
        let phi = iso(&g, &h).expect(a);
        assert!(is_homomorphism(&g, &h, &phi));
    }
    let c2c3 = FiniteGroup::direct_product(&named("C2"), &named("C3"));
    let phi = iso(&c2c3, &named("C6")).unwrap();
    assert!(is_homomorphism(&c2c3, &named("C6"), &phi));
    assert!(iso(&named("C4"), &named("C2xC2")).is_none());
    assert!(iso(&named("D4"), &named("Q8")).is_none());
    assert!(iso(&named("C6"), &named("S3")).is_none());
    // abelian vs non-abelian of order 8
    let c4c2 = FiniteGroup::direct_product(&named("C4"), &named("C2"));
    assert!(iso(&c4c2, &named("D4")).is_none());
    assert!(groups_isomorphic(&named("D6"), &named("D6"), 4).is_err());
}

#[test]
fn permutation_closure_orders() {
    let s4 = FiniteGroup::from_permutations(4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]], 100).unwrap();
    assert_eq!(s4.order(), 24);
    assert!(FiniteGroup::from_permutations(5, &[vec![1, 0, 2, 3, 4], vec![1, 2, 3, 4, 0]], 100).is_err());
    assert!(FiniteGroup::from_permutations(3, &[vec![0, 0, 1]], 100).is_err());
}
