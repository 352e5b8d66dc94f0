//! Finite groups as multiplication tables, Cayley graphs, and group
//! isomorphism testing.

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, GraphError, LabelledGraph};

pub const DEFAULT_CLOSURE_CAP: usize = 5000;
pub const DEFAULT_ISO_CAP: usize = 2000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("not a group: {0}")]
    NotAGroup(String),
    #[error("group too large (closure exceeds {0} elements)")]
    TooLarge(usize),
    #[error("invalid permutation: {0}")]
    BadPermutation(String),
    #[error("generating set does not generate the group")]
    NotGenerating,
    #[error("group of order {0} is below 4: use small-group path")]
    SmallGroup(usize),
    #[error("generating set contains an inverse pair of non-involutions")]
    InversePair,
    #[error("element {0} is not a valid non-identity element")]
    BadElement(usize),
    #[error("Cayley graph not simplicial")]
    NotSimplicial,
    #[error("unknown group name {0:?}")]
    UnknownGroup(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Finite group given by its multiplication table; element 0 is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl FiniteGroup {
    /// Builds a group from a table, relabelling so the identity is element 0.
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self, GroupError> {
        let n = mul.len();
        if n == 0 {
            return Err(GroupError::NotAGroup("empty table".into()));
        }
        for row in &mul {
            if row.len() != n || row.iter().any(|&x| x >= n) {
                return Err(GroupError::NotAGroup("table is not square over 0..order".into()));
            }
        }
        let e = (0..n)
            .find(|&e| (0..n).all(|x| mul[e][x] == x && mul[x][e] == x))
            .ok_or_else(|| GroupError::NotAGroup("no identity".into()))?;
        // swap labels 0 and e
        let sw = |x: usize| if x == e { 0 } else if x == 0 { e } else { x };
        let mut flat = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                flat[sw(a) * n + sw(b)] = sw(mul[a][b]) as u32;
            }
        }
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            for b in 0..n {
                if flat[a * n + b] == 0 {
                    if flat[b * n + a] != 0 {
                        return Err(GroupError::NotAGroup(format!("element {a} has no two-sided inverse")));
                    }
                    inv[a] = b as u32;
                    break;
                }
            }
            if inv[a] == u32::MAX {
                return Err(GroupError::NotAGroup(format!("element {a} has no inverse")));
            }
        }
        for a in 0..n {
            let mut row_seen = vec![false; n];
            for b in 0..n {
                let x = flat[a * n + b] as usize;
                if row_seen[x] {
                    return Err(GroupError::NotAGroup("table is not a Latin square".into()));
                }
                row_seen[x] = true;
            }
        }
        let g = FiniteGroup { order: n, mul: flat, inv };
        g.check_associative()?;
        Ok(g)
    }

    /// Light's test: associativity need only be checked with the middle
    /// element ranging over a generating set.
    fn check_associative(&self) -> Result<(), GroupError> {
        let gens = self.greedy_generators();
        for &s in &gens {
            for x in 0..self.order {
                let xs = self.mul(x, s);
                for y in 0..self.order {
                    if self.mul(xs, y) != self.mul(x, self.mul(s, y)) {
                        return Err(GroupError::NotAGroup("multiplication is not associative".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Closure of permutation generators, composed as `(a∘b)(x) = a(b(x))`.
    pub fn from_permutations(
        degree: usize,
        gens: &[Vec<usize>],
        cap: usize,
    ) -> Result<Self, GroupError> {
        Ok(Self::perm_closure(degree, gens, cap)?.0)
    }

    /// Like [`FiniteGroup::from_permutations`], also returning the permutation
    /// realising each element.
    pub fn perm_closure(
        degree: usize,
        gens: &[Vec<usize>],
        cap: usize,
    ) -> Result<(Self, Vec<Vec<usize>>), GroupError> {
        for p in gens {
            if p.len() != degree {
                return Err(GroupError::BadPermutation(format!("length {} != degree {degree}", p.len())));
            }
            let mut seen = vec![false; degree];
            for &x in p {
                if x >= degree || seen[x] {
                    return Err(GroupError::BadPermutation(format!("{p:?} is not a bijection")));
                }
                seen[x] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        while i < elems.len() {
            for s in gens {
                let p: Vec<usize> = (0..degree).map(|x| elems[i][s[x]]).collect();
                if !index.contains_key(&p) {
                    if elems.len() >= cap {
                        return Err(GroupError::TooLarge(cap));
                    }
                    index.insert(p.clone(), elems.len());
                    elems.push(p);
                }
            }
            i += 1;
        }
        let n = elems.len();
        let mut mul = vec![0u32; n * n];
        let mut buf = vec![0usize; degree];
        for a in 0..n {
            for b in 0..n {
                for (x, slot) in buf.iter_mut().enumerate() {
                    *slot = elems[a][elems[b][x]];
                }
                mul[a * n + b] = index[&buf] as u32;
            }
        }
        let inv = (0..n)
            .map(|a| (0..n).find(|&b| mul[a * n + b] == 0).expect("finite closure has inverses") as u32)
            .collect();
        Ok((FiniteGroup { order: n, mul, inv }, elems))
    }

    pub fn trivial() -> Self {
        FiniteGroup { order: 1, mul: vec![0], inv: vec![0] }
    }

    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let mul = (0..n * n).map(|i| ((i / n + i % n) % n) as u32).collect();
        let inv = (0..n).map(|a| ((n - a) % n) as u32).collect();
        FiniteGroup { order: n, mul, inv }
    }

    /// Dihedral group of order `2n` acting on an `n`-gon.
    pub fn dihedral(n: usize) -> Self {
        assert!(n >= 3);
        let rot: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let refl: Vec<usize> = (0..n).map(|i| (n - i) % n).collect();
        Self::from_permutations(n, &[rot, refl], DEFAULT_CLOSURE_CAP).expect("dihedral closure")
    }

    pub fn symmetric3() -> Self {
        Self::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]], DEFAULT_CLOSURE_CAP)
            .expect("S3 closure")
    }

    pub fn quaternion() -> Self {
        // regular representation of Q8 on {±1, ±i, ±j, ±k} indexed 1,-1,i,-i,j,-j,k,-k
        let i = vec![2, 3, 1, 0, 6, 7, 5, 4];
        let j = vec![4, 5, 7, 6, 1, 0, 2, 3];
        Self::from_permutations(8, &[i, j], DEFAULT_CLOSURE_CAP).expect("Q8 closure")
    }

    pub fn direct_product(a: &FiniteGroup, b: &FiniteGroup) -> Self {
        let (na, nb) = (a.order, b.order);
        let n = na * nb;
        let mut mul = vec![0u32; n * n];
        for x in 0..n {
            for y in 0..n {
                let p = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
                mul[x * n + y] = p as u32;
            }
        }
        let inv = (0..n).map(|x| (a.inv(x / nb) * nb + b.inv(x % nb)) as u32).collect();
        FiniteGroup { order: n, mul, inv }
    }

    /// Named built-ins: `trivial`, `C1`..`C12`, `S3`, `D3`..`D6`, `Q8`, `C2xC2`.
    pub fn named(name: &str) -> Result<Self, GroupError> {
        let unknown = || GroupError::UnknownGroup(name.to_string());
        match name {
            "trivial" | "C1" => Ok(Self::trivial()),
            "S3" => Ok(Self::symmetric3()),
            "Q8" => Ok(Self::quaternion()),
            "C2xC2" | "V4" => Ok(Self::direct_product(&Self::cyclic(2), &Self::cyclic(2))),
            _ => {
                if let Some(k) = name.strip_prefix('C') {
                    let k: usize = k.parse().map_err(|_| unknown())?;
                    if (1..=12).contains(&k) {
                        return Ok(Self::cyclic(k));
                    }
                } else if let Some(k) = name.strip_prefix('D') {
                    let k: usize = k.parse().map_err(|_| unknown())?;
                    if (3..=6).contains(&k) {
                        return Ok(Self::dihedral(k));
                    }
                }
                Err(unknown())
            }
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_involution(&self, a: usize) -> bool {
        a != 0 && self.mul(a, a) == 0
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn generated_by(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            for &s in gens {
                let y = self.mul(out[i], s);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    pub fn generates(&self, gens: &[usize]) -> bool {
        self.generated_by(gens).len() == self.order
    }

    /// Deterministic generating set: scan elements in index order, keeping
    /// each one that enlarges the generated subgroup.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![0usize];
        for x in 1..self.order {
            if span.binary_search(&x).is_err() {
                gens.push(x);
                span = self.generated_by(&gens);
                if span.len() == self.order {
                    break;
                }
            }
        }
        gens
    }

    /// Element-order histogram; index k counts elements of order k.
    pub fn order_profile(&self) -> Vec<usize> {
        let mut prof = vec![0; self.order + 1];
        for a in 0..self.order {
            prof[self.element_order(a)] += 1;
        }
        prof
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.order).map(|a| (0..self.order).map(|b| self.mul(a, b)).collect()).collect()
    }

    pub fn to_spec(&self) -> GroupSpec {
        GroupSpec::Table { order: self.order, mul: self.table() }
    }
}

/// Wire form of a group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GroupSpec {
    Table { order: usize, mul: Vec<Vec<usize>> },
    Perm { degree: usize, gens: Vec<Vec<usize>> },
}

impl GroupSpec {
    pub fn build(&self) -> Result<FiniteGroup, GroupError> {
        match self {
            GroupSpec::Table { order, mul } => {
                if mul.len() != *order {
                    return Err(GroupError::NotAGroup(format!("table has {} rows, order {order}", mul.len())));
                }
                FiniteGroup::from_table(mul.clone())
            }
            GroupSpec::Perm { degree, gens } => {
                FiniteGroup::from_permutations(*degree, gens, DEFAULT_CLOSURE_CAP)
            }
        }
    }
}

/// Generating set with no inverse pair other than involutions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratingSet {
    pub gens: Vec<usize>,
}

impl GeneratingSet {
    /// Checks the invariants against `g`.
    pub fn new(g: &FiniteGroup, gens: Vec<usize>) -> Result<Self, GroupError> {
        for (i, &s) in gens.iter().enumerate() {
            if s == 0 || s >= g.order() || gens[..i].contains(&s) {
                return Err(GroupError::BadElement(s));
            }
            if !g.is_involution(s) && gens.contains(&g.inv(s)) {
                return Err(GroupError::InversePair);
            }
        }
        if !g.generates(&gens) {
            return Err(GroupError::NotGenerating);
        }
        Ok(GeneratingSet { gens })
    }

    pub fn involutions(&self, g: &FiniteGroup) -> Vec<usize> {
        self.gens.iter().copied().filter(|&s| g.is_involution(s)).collect()
    }

    /// Degree of the Cayley graph: `|I| + 2|T|`.
    pub fn cayley_degree(&self, g: &FiniteGroup) -> usize {
        self.gens.iter().map(|&s| if g.is_involution(s) { 1 } else { 2 }).sum()
    }

    pub fn label(i: usize) -> String {
        format!("s{i}")
    }
}

/// Drops inverse partners, then pads with the smallest admissible elements
/// until the Cayley graph has degree at least 3.
///
/// Padding targets degree rather than set size: in `C4` and `C5` no
/// inverse-pair-free set has three elements, yet degree 3 is always reachable
/// once `|G| ≥ 4`.
pub fn normalize_generating_set(g: &FiniteGroup, s0: &[usize]) -> Result<GeneratingSet, GroupError> {
    if g.order() < 4 {
        return Err(GroupError::SmallGroup(g.order()));
    }
    if s0.iter().any(|&s| s >= g.order()) {
        return Err(GroupError::BadElement(*s0.iter().find(|&&s| s >= g.order()).unwrap()));
    }
    if !g.generates(s0) {
        return Err(GroupError::NotGenerating);
    }
    let mut gens: Vec<usize> = Vec::new();
    for &s in s0 {
        if s == 0 || gens.contains(&s) || gens.contains(&g.inv(s)) {
            continue;
        }
        gens.push(s);
    }
    let mut set = GeneratingSet { gens };
    let mut x = 1;
    while set.cayley_degree(g) < 3 && x < g.order() {
        if !set.gens.contains(&x) && !set.gens.contains(&g.inv(x)) {
            set.gens.push(x);
        }
        x += 1;
    }
    debug_assert!(set.cayley_degree(g) >= 3);
    Ok(set)
}

/// Cayley graph with labels `s{i}` for the i-th generator; directed `g → gs`
/// for non-involutions, undirected for involutions.
pub fn cayley_graph(g: &FiniteGroup, s: &GeneratingSet) -> Result<LabelledGraph, GroupError> {
    let n = g.order();
    let mut base = Graph::new(n);
    let mut pending = Vec::new();
    for x in 0..n {
        for (i, &t) in s.gens.iter().enumerate() {
            let y = g.mul(x, t);
            let involution = g.is_involution(t);
            if involution && y < x {
                continue;
            }
            match base.add_edge(x, y) {
                Ok(()) => {}
                Err(GraphError::DuplicateEdge(..)) | Err(GraphError::Loop(_)) => {
                    return Err(GroupError::NotSimplicial)
                }
                Err(e) => return Err(e.into()),
            }
            pending.push((x, y, i, !involution));
        }
    }
    let mut lg = LabelledGraph::new(base);
    for (x, y, i, directed) in pending {
        lg.set_label(x, y, GeneratingSet::label(i), directed.then_some((x, y)))?;
    }
    Ok(lg)
}

/// Returns an isomorphism `G → H` (as an image table) when one exists.
pub fn groups_isomorphic(
    g: &FiniteGroup,
    h: &FiniteGroup,
    cap: usize,
) -> Result<Option<Vec<usize>>, GroupError> {
    if g.order() > cap || h.order() > cap {
        return Err(GroupError::TooLarge(cap));
    }
    if g.order() != h.order() || g.order_profile() != h.order_profile() {
        return Ok(None);
    }
    let gens = g.greedy_generators();
    let h_orders: Vec<usize> = (0..h.order()).map(|x| h.element_order(x)).collect();
    let cands: Vec<Vec<usize>> = gens
        .iter()
        .map(|&s| {
            let o = g.element_order(s);
            (0..h.order()).filter(|&y| h_orders[y] == o).collect()
        })
        .collect();
    // BFS spanning tree of G over right multiplication by generators
    let mut parent = vec![(usize::MAX, 0usize); g.order()];
    let mut order = vec![0usize];
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut q = VecDeque::from([0usize]);
    while let Some(x) = q.pop_front() {
        for (k, &s) in gens.iter().enumerate() {
            let y = g.mul(x, s);
            if !seen[y] {
                seen[y] = true;
                parent[y] = (x, k);
                order.push(y);
                q.push_back(y);
            }
        }
    }
    let mut images = vec![0usize; gens.len()];
    Ok(iso_search(g, h, &gens, &cands, &parent, &order, &mut images, 0))
}

#[allow(clippy::too_many_arguments)]
fn iso_search(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    cands: &[Vec<usize>],
    parent: &[(usize, usize)],
    order: &[usize],
    images: &mut Vec<usize>,
    depth: usize,
) -> Option<Vec<usize>> {
    if depth == gens.len() {
        let mut phi = vec![usize::MAX; g.order()];
        phi[0] = 0;
        for &y in &order[1..] {
            let (x, k) = parent[y];
            phi[y] = h.mul(phi[x], images[k]);
        }
        let mut hit = vec![false; h.order()];
        for &p in &phi {
            if hit[p] {
                return None;
            }
            hit[p] = true;
        }
        for x in 0..g.order() {
            for (k, &s) in gens.iter().enumerate() {
                if phi[g.mul(x, s)] != h.mul(phi[x], images[k]) {
                    return None;
                }
            }
        }
        return Some(phi);
    }
    for &c in &cands[depth] {
        if images[..depth].contains(&c) {
            continue;
        }
        images[depth] = c;
        if let Some(phi) = iso_search(g, h, gens, cands, parent, order, images, depth + 1) {
            return Some(phi);
        }
    }
    None
}
