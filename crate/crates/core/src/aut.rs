//! Automorphism groups and isomorphism of finite graphs by
//! individualization–refinement.
//!
//! The search follows the usual scheme: an equitable partition is refined
//! from a vertex-invariant colouring, the first path of the search tree is
//! built by individualizing the smallest vertex of the smallest non-singleton
//! cell, and generators of each pointwise stabilizer are found deepest level
//! first. Refinement traces (sequences of equivariant split data) prune
//! branches that cannot be isomorphic to the first path, and a branch is
//! abandoned at the first event that differs. Every candidate permutation is
//! checked against the edge set before it is accepted.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, LabelledGraph};

pub const DEFAULT_VERTEX_CAP: usize = 20_000;
pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(300);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("graph has {n} vertices, above the cap of {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error(
        "search aborted after {elapsed_ms} ms and {nodes} nodes \
         (root partition had {root_cells} cells, stopped at level {level})"
    )]
    Timeout { elapsed_ms: u128, nodes: u64, root_cells: usize, level: usize },
    #[error("colour vector has length {0}, expected {1}")]
    ColourLength(usize, usize),
}

#[derive(Clone, Debug)]
pub struct AutConfig {
    pub vertex_cap: usize,
    pub timeout: Duration,
    pub node_budget: u64,
}

impl Default for AutConfig {
    fn default() -> Self {
        AutConfig { vertex_cap: DEFAULT_VERTEX_CAP, timeout: DEFAULT_TIMEOUT, node_budget: u64::MAX }
    }
}

impl AutConfig {
    pub fn with_cap(vertex_cap: usize) -> Self {
        AutConfig { vertex_cap, ..Self::default() }
    }
}

/// Permutation group given by generators, with its exact order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Vec<usize>>,
    pub order: BigUint,
    /// Base points of the stabilizer chain, outermost first.
    pub base: Vec<usize>,
}

impl PermGroup {
    pub fn is_trivial(&self) -> bool {
        self.order == BigUint::from(1u32)
    }

    pub fn order_u64(&self) -> Option<u64> {
        u64::try_from(&self.order).ok()
    }

    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.degree);
        for p in &self.generators {
            for (x, &y) in p.iter().enumerate() {
                uf.union(x, y);
            }
        }
        uf.classes()
    }

    /// Free on vertices: every orbit has size `|Aut|`.
    pub fn acts_freely_on_vertices(&self) -> bool {
        self.is_trivial()
            || self.vertex_orbits().iter().all(|o| BigUint::from(o.len()) == self.order)
    }

    /// Orbits of the induced action on the unordered edges of `g`, as edge
    /// index lists into `g.edges()`.
    pub fn edge_orbits(&self, g: &Graph) -> Vec<Vec<usize>> {
        let edges = g.edges();
        let index: HashMap<(usize, usize), usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut uf = UnionFind::new(edges.len());
        for p in &self.generators {
            for (i, &(u, v)) in edges.iter().enumerate() {
                let (a, b) = (p[u], p[v]);
                uf.union(i, index[&(a.min(b), a.max(b))]);
            }
        }
        uf.classes()
    }

    /// Free on unordered edges: no non-trivial element fixes or swaps an edge.
    pub fn acts_freely_on_edges(&self, g: &Graph) -> bool {
        self.is_trivial()
            || self.edge_orbits(g).iter().all(|o| BigUint::from(o.len()) == self.order)
    }
}

/// Exact count serialized as a JSON number when it fits in `u64`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Count {
    Small(u64),
    Big(String),
}

impl From<&BigUint> for Count {
    fn from(x: &BigUint) -> Self {
        match u64::try_from(x) {
            Ok(v) => Count::Small(v),
            Err(_) => Count::Big(x.to_string()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AutCertificate {
    pub order: Count,
    pub generators: Vec<Vec<usize>>,
    pub vertex_free: bool,
    pub edge_free: bool,
    pub elapsed_ms: u128,
}

/// Computes `Aut(g)` and packages it with the freeness checks.
pub fn certify(g: &Graph, cfg: &AutConfig) -> Result<(PermGroup, AutCertificate), AutError> {
    let t0 = Instant::now();
    let grp = automorphism_group(g, cfg)?;
    let cert = AutCertificate {
        order: Count::from(&grp.order),
        generators: grp.generators.clone(),
        vertex_free: grp.acts_freely_on_vertices(),
        edge_free: grp.acts_freely_on_edges(g),
        elapsed_ms: t0.elapsed().as_millis(),
    };
    Ok((grp, cert))
}

pub fn automorphism_group(g: &Graph, cfg: &AutConfig) -> Result<PermGroup, AutError> {
    automorphism_group_coloured(g, &vec![0; g.n()], cfg)
}

/// Automorphisms preserving a vertex colouring.
pub fn automorphism_group_coloured(
    g: &Graph,
    colours: &[u64],
    cfg: &AutConfig,
) -> Result<PermGroup, AutError> {
    if g.n() > cfg.vertex_cap {
        return Err(AutError::TooLarge { n: g.n(), cap: cfg.vertex_cap });
    }
    if colours.len() != g.n() {
        return Err(AutError::ColourLength(colours.len(), g.n()));
    }
    let mut search = Search::new(g, colours, cfg);
    search.run()
}

/// Automorphisms preserving edge labels and orientations.
pub fn label_preserving_automorphisms(
    lg: &LabelledGraph,
    cfg: &AutConfig,
) -> Result<PermGroup, AutError> {
    if lg.base.n() > cfg.vertex_cap {
        return Err(AutError::TooLarge { n: lg.base.n(), cap: cfg.vertex_cap });
    }
    let (sub, colours) = subdivide_labels(lg);
    let wide = AutConfig { vertex_cap: usize::MAX, ..cfg.clone() };
    let full = automorphism_group_coloured(&sub, &colours, &wide)?;
    let n = lg.base.n();
    Ok(PermGroup {
        degree: n,
        generators: full.generators.iter().map(|p| p[..n].to_vec()).collect(),
        order: full.order,
        base: full.base.into_iter().filter(|&b| b < n).collect(),
    })
}

/// Encodes labels as coloured subdivision vertices: an undirected labelled
/// edge gets one middle vertex, a directed one gets a tail-side and a
/// head-side vertex.
fn subdivide_labels(lg: &LabelledGraph) -> (Graph, Vec<u64>) {
    let tokens: BTreeMap<&str, u64> = lg
        .labels()
        .map(|(_, l)| l.label.as_str())
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .enumerate()
        .map(|(i, t)| (t, i as u64))
        .collect();
    let n = lg.base.n();
    let mut g = Graph::new(n);
    let mut colours = vec![0u64; n];
    for (u, v) in lg.base.edges() {
        match lg.label(u, v) {
            None => g.add_edge(u, v).expect("copy of simplicial edge"),
            Some(l) => {
                let t = tokens[l.label.as_str()];
                match l.dir {
                    None => {
                        let x = g.add_vertex();
                        colours.push(1 + 3 * t);
                        g.add_edge(u, x).unwrap();
                        g.add_edge(x, v).unwrap();
                    }
                    Some((tail, head)) => {
                        let x = g.add_vertex();
                        colours.push(2 + 3 * t);
                        let y = g.add_vertex();
                        colours.push(3 + 3 * t);
                        g.add_edge(tail, x).unwrap();
                        g.add_edge(x, y).unwrap();
                        g.add_edge(y, head).unwrap();
                    }
                }
            }
        }
    }
    (g, colours)
}

pub fn is_vertex_free(g: &Graph, cfg: &AutConfig) -> Result<bool, AutError> {
    Ok(automorphism_group(g, cfg)?.acts_freely_on_vertices())
}

pub fn is_edge_free(g: &Graph, cfg: &AutConfig) -> Result<bool, AutError> {
    Ok(automorphism_group(g, cfg)?.acts_freely_on_edges(g))
}

/// Returns a witness `phi` with `{u,v} ∈ E(g) ⇔ {phi[u],phi[v]} ∈ E(h)`.
pub fn graphs_isomorphic(g: &Graph, h: &Graph, cfg: &AutConfig) -> Result<Option<Vec<usize>>, AutError> {
    graphs_isomorphic_coloured(g, &vec![0; g.n()], h, &vec![0; h.n()], cfg)
}

pub fn graphs_isomorphic_coloured(
    g: &Graph,
    gc: &[u64],
    h: &Graph,
    hc: &[u64],
    cfg: &AutConfig,
) -> Result<Option<Vec<usize>>, AutError> {
    for x in [g, h] {
        if x.n() > cfg.vertex_cap {
            return Err(AutError::TooLarge { n: x.n(), cap: cfg.vertex_cap });
        }
    }
    if gc.len() != g.n() {
        return Err(AutError::ColourLength(gc.len(), g.n()));
    }
    if hc.len() != h.n() {
        return Err(AutError::ColourLength(hc.len(), h.n()));
    }
    if g.n() != h.n() || g.m() != h.m() {
        return Ok(None);
    }
    let mut dg = g.degrees();
    let mut dh = h.degrees();
    dg.sort_unstable();
    dh.sort_unstable();
    if dg != dh {
        return Ok(None);
    }
    let mut sg = Search::new(g, gc, cfg);
    let mut sh = Search::new(h, hc, cfg);
    let path = sg.first_path()?;
    let (root_h, same_trace, keys_h) = sh.root(&mut Trace::compare(&path.root_trace))?;
    if !same_trace || keys_h != path.root_keys {
        return Ok(None);
    }
    sh.dfs(&path, g, gc, root_h, 0)
}

const FNV: u64 = 0xcbf2_9ce4_8422_2325;

#[inline]
fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Ordered partition: `elems[s..end[s]]` is the cell starting at `s`.
#[derive(Clone, Debug)]
struct Partition {
    elems: Vec<usize>,
    pos: Vec<usize>,
    cell: Vec<usize>,
    end: Vec<usize>,
    ncells: usize,
}

impl Partition {
    fn from_keys(keys: &[(u64, u64)]) -> Self {
        let n = keys.len();
        let mut elems: Vec<usize> = (0..n).collect();
        elems.sort_by_key(|&v| (keys[v], v));
        let mut pos = vec![0; n];
        let mut cell = vec![0; n];
        let mut end = vec![0; n];
        let mut ncells = 0;
        let mut s = 0;
        while s < n {
            let mut e = s;
            while e < n && keys[elems[e]] == keys[elems[s]] {
                e += 1;
            }
            for i in s..e {
                pos[elems[i]] = i;
                cell[elems[i]] = s;
            }
            end[s] = e;
            ncells += 1;
            s = e;
        }
        Partition { elems, pos, cell, end, ncells }
    }

    fn cell_starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.ncells);
        let mut s = 0;
        while s < self.elems.len() {
            out.push(s);
            s = self.end[s];
        }
        out
    }

    fn discrete(&self) -> bool {
        self.ncells == self.elems.len()
    }

    /// Smallest non-singleton cell (leftmost on ties).
    fn target_cell(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut s = 0;
        while s < self.elems.len() {
            let len = self.end[s] - s;
            if len > 1 && best.map_or(true, |b| len < self.end[b] - b) {
                best = Some(s);
                if len == 2 {
                    break;
                }
            }
            s = self.end[s];
        }
        best
    }

    fn swap_to(&mut self, v: usize, target: usize) {
        let pv = self.pos[v];
        let x = self.elems[target];
        self.elems[target] = v;
        self.pos[v] = target;
        self.elems[pv] = x;
        self.pos[x] = pv;
    }

    /// Splits `v` off the front of its cell; returns the new singleton start.
    fn individualize(&mut self, v: usize) -> usize {
        let s = self.cell[v];
        let e = self.end[s];
        self.swap_to(v, s);
        self.end[s] = s + 1;
        self.end[s + 1] = e;
        for i in s + 1..e {
            self.cell[self.elems[i]] = s + 1;
        }
        self.ncells += 1;
        s
    }

    fn sorted_cell(&self, s: usize) -> Vec<usize> {
        let mut c = self.elems[s..self.end[s]].to_vec();
        c.sort_unstable();
        c
    }
}

struct Refiner {
    count: Vec<u32>,
    in_queue: Vec<bool>,
    touched: Vec<usize>,
    group: Vec<usize>,
    frags: Vec<(usize, usize)>,
}

impl Refiner {
    fn new(n: usize) -> Self {
        Refiner {
            count: vec![0; n],
            in_queue: vec![false; n],
            touched: Vec::new(),
            group: Vec::new(),
            frags: Vec::new(),
        }
    }

    /// Refines `p` to the coarsest equitable partition below it, starting
    /// from the given splitter cells. Returns false as soon as the trace
    /// departs from the reference (compare mode only).
    fn refine(&mut self, g: &Graph, p: &mut Partition, seeds: &[usize], tr: &mut Trace) -> bool {
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in seeds {
            if !self.in_queue[s] {
                self.in_queue[s] = true;
                queue.push_back(s);
            }
        }
        while let Some(ws) = queue.pop_front() {
            self.in_queue[ws] = false;
            if p.discrete() {
                continue;
            }
            if !tr.event(ws as u64) {
                return self.abort(queue);
            }
            self.touched.clear();
            for i in ws..p.end[ws] {
                for &u in g.neighbors(p.elems[i]) {
                    if self.count[u] == 0 {
                        self.touched.push(u);
                    }
                    self.count[u] += 1;
                }
            }
            let count = &self.count;
            let cell = &p.cell;
            self.touched.sort_unstable_by_key(|&u| (cell[u], count[u], u));
            let mut ok = true;
            let mut i = 0;
            while ok && i < self.touched.len() {
                let c = p.cell[self.touched[i]];
                let mut j = i;
                while j < self.touched.len() && p.cell[self.touched[j]] == c {
                    j += 1;
                }
                self.group.clear();
                self.group.extend_from_slice(&self.touched[i..j]);
                i = j;
                let size = p.end[c] - c;
                let t = self.group.len();
                let lo = self.count[self.group[0]];
                let hi = self.count[self.group[t - 1]];
                ok = tr.event(((c as u64) << 32) ^ ((t as u64) << 8) ^ lo as u64) && tr.event(hi as u64);
                if !ok || size == 1 || (t == size && lo == hi) {
                    continue;
                }
                ok = self.split(p, c, &mut queue, tr);
            }
            for &u in &self.touched {
                self.count[u] = 0;
            }
            if !ok {
                return self.abort(queue);
            }
        }
        tr.event(p.ncells as u64) && tr.complete()
    }

    fn abort(&mut self, queue: VecDeque<usize>) -> bool {
        for s in queue {
            self.in_queue[s] = false;
        }
        false
    }

    fn split(&mut self, p: &mut Partition, s: usize, queue: &mut VecDeque<usize>, tr: &mut Trace) -> bool {
        let e = p.end[s];
        let size = e - s;
        let t = self.group.len();
        for k in 0..t {
            let v = self.group[k];
            p.swap_to(v, e - t + k);
        }
        self.frags.clear();
        if t < size {
            self.frags.push((s, e - t));
        }
        let mut k = 0;
        while k < t {
            let cnt = self.count[self.group[k]];
            let mut l = k;
            while l < t && self.count[self.group[l]] == cnt {
                l += 1;
            }
            self.frags.push((e - t + k, e - t + l));
            k = l;
        }
        let mut ok = true;
        for (idx, &(fs, fe)) in self.frags.iter().enumerate() {
            p.end[fs] = fe;
            if idx > 0 {
                for i in fs..fe {
                    p.cell[p.elems[i]] = fs;
                }
            }
            ok &= tr.event(((fs as u64) << 32) ^ (fe - fs) as u64);
        }
        p.ncells += self.frags.len() - 1;
        if self.in_queue[s] {
            for &(fs, _) in &self.frags[1..] {
                self.in_queue[fs] = true;
                queue.push_back(fs);
            }
        } else {
            let mut largest = 0;
            for (idx, &(fs, fe)) in self.frags.iter().enumerate() {
                let (ls, le) = self.frags[largest];
                if fe - fs > le - ls {
                    largest = idx;
                }
            }
            for (idx, &(fs, _)) in self.frags.iter().enumerate() {
                if idx != largest {
                    self.in_queue[fs] = true;
                    queue.push_back(fs);
                }
            }
        }
        ok
    }
}

/// Refinement trace. Recorded along the first path; elsewhere compared event
/// by event so that a non-matching branch stops at its first difference.
enum Trace<'r> {
    Record(Vec<u64>),
    Compare(&'r [u64], usize),
}

impl<'r> Trace<'r> {
    fn compare(reference: &'r [u64]) -> Self {
        Trace::Compare(reference, 0)
    }

    #[inline]
    fn event(&mut self, x: u64) -> bool {
        match self {
            Trace::Record(v) => {
                v.push(x);
                true
            }
            Trace::Compare(r, i) => {
                if r.get(*i) == Some(&x) {
                    *i += 1;
                    true
                } else {
                    false
                }
            }
        }
    }

    fn complete(&self) -> bool {
        match self {
            Trace::Record(_) => true,
            Trace::Compare(r, i) => *i == r.len(),
        }
    }

    fn into_events(self) -> Vec<u64> {
        match self {
            Trace::Record(v) => v,
            Trace::Compare(..) => Vec::new(),
        }
    }
}

/// Isomorphism-invariant vertex keys: colour plus a hash of the local ball
/// profile (layer sizes, edges inside each layer, edges to the next layer).
fn vertex_keys(g: &Graph, colours: &[u64]) -> Vec<(u64, u64)> {
    let n = g.n();
    let radius: u32 = if n <= 3000 { 3 } else { 2 };
    (0..n)
        .into_par_iter()
        .map_init(
            || (vec![u32::MAX; n], Vec::<usize>::new()),
            |(dist, seen), v| {
                seen.clear();
                dist[v] = 0;
                seen.push(v);
                let mut h = FNV;
                let mut layer_start = 0;
                for r in 0..=radius {
                    let layer_end = seen.len();
                    let (mut inner, mut forward) = (0u64, 0u64);
                    for i in layer_start..layer_end {
                        let x = seen[i];
                        for &y in g.neighbors(x) {
                            if dist[y] == u32::MAX && r < radius {
                                dist[y] = r + 1;
                                seen.push(y);
                            }
                            if dist[y] == r {
                                inner += 1;
                            } else if dist[y] == r + 1 {
                                forward += 1;
                            }
                        }
                    }
                    h = mix(h, (layer_end - layer_start) as u64);
                    h = mix(h, inner);
                    h = mix(h, forward);
                    layer_start = layer_end;
                }
                for &x in seen.iter() {
                    dist[x] = u32::MAX;
                }
                (colours[v], h)
            },
        )
        .collect()
}

struct Level {
    snapshot: Partition,
    target: usize,
    vertex: usize,
    trace: Vec<u64>,
}

struct FirstPath {
    root_keys: Vec<(u64, u64)>,
    root_trace: Vec<u64>,
    levels: Vec<Level>,
    leaf: Vec<usize>,
}

struct Search<'a> {
    g: &'a Graph,
    colours: &'a [u64],
    cfg: &'a AutConfig,
    refiner: Refiner,
    start: Instant,
    nodes: u64,
    root_cells: usize,
    level: usize,
}

impl<'a> Search<'a> {
    fn new(g: &'a Graph, colours: &'a [u64], cfg: &'a AutConfig) -> Self {
        Search {
            g,
            colours,
            cfg,
            refiner: Refiner::new(g.n()),
            start: Instant::now(),
            nodes: 0,
            root_cells: 0,
            level: 0,
        }
    }

    fn tick(&mut self) -> Result<(), AutError> {
        self.nodes += 1;
        if self.nodes > self.cfg.node_budget || self.start.elapsed() > self.cfg.timeout {
            return Err(AutError::Timeout {
                elapsed_ms: self.start.elapsed().as_millis(),
                nodes: self.nodes,
                root_cells: self.root_cells,
                level: self.level,
            });
        }
        Ok(())
    }

    /// Root partition and the sorted key vector; `false` if the root trace
    /// departs from a compared reference.
    fn root(&mut self, tr: &mut Trace) -> Result<(Partition, bool, Vec<(u64, u64)>), AutError> {
        let keys = vertex_keys(self.g, self.colours);
        let mut p = Partition::from_keys(&keys);
        let starts = p.cell_starts();
        let ok = self.refiner.refine(self.g, &mut p, &starts, tr);
        self.root_cells = p.ncells;
        let mut sorted = keys;
        sorted.sort_unstable();
        self.tick()?;
        Ok((p, ok, sorted))
    }

    fn first_path(&mut self) -> Result<FirstPath, AutError> {
        let mut tr = Trace::Record(Vec::new());
        let (mut p, _, root_keys) = self.root(&mut tr)?;
        let root_trace = tr.into_events();
        let mut levels = Vec::new();
        while let Some(target) = p.target_cell() {
            self.tick()?;
            let vertex = *p.elems[target..p.end[target]].iter().min().unwrap();
            let snapshot = p.clone();
            let s = p.individualize(vertex);
            let mut tr = Trace::Record(Vec::new());
            self.refiner.refine(self.g, &mut p, &[s], &mut tr);
            levels.push(Level { snapshot, target, vertex, trace: tr.into_events() });
        }
        Ok(FirstPath { root_keys, root_trace, levels, leaf: p.elems })
    }

    fn run(&mut self) -> Result<PermGroup, AutError> {
        let n = self.g.n();
        let path = self.first_path()?;
        let mut gens: Vec<Vec<usize>> = Vec::new();
        let mut order = BigUint::from(1u32);
        for i in (0..path.levels.len()).rev() {
            self.level = i;
            let lvl = &path.levels[i];
            let mut uf = UnionFind::new(n);
            for p in &gens {
                for (x, &y) in p.iter().enumerate() {
                    uf.union(x, y);
                }
            }
            let mut failed: Vec<usize> = Vec::new();
            for w in lvl.snapshot.sorted_cell(lvl.target) {
                if uf.find(w) == uf.find(lvl.vertex) {
                    continue;
                }
                if failed.iter().any(|&f| uf.find(f) == uf.find(w)) {
                    continue;
                }
                let mut p = lvl.snapshot.clone();
                let s = p.individualize(w);
                let found = if self.refiner.refine(self.g, &mut p, &[s], &mut Trace::compare(&lvl.trace)) {
                    self.dfs(&path, self.g, self.colours, p, i + 1)?
                } else {
                    None
                };
                match found {
                    Some(gamma) => {
                        for (x, &y) in gamma.iter().enumerate() {
                            uf.union(x, y);
                        }
                        gens.push(gamma);
                    }
                    None => failed.push(w),
                }
            }
            let root = uf.find(lvl.vertex);
            let orbit = (0..n).filter(|&x| uf.find(x) == root).count();
            order *= BigUint::from(orbit);
        }
        Ok(PermGroup {
            degree: n,
            generators: gens,
            order,
            base: path.levels.iter().map(|l| l.vertex).collect(),
        })
    }

    /// Searches the subtree below `p` (at depth `j`) for a leaf whose traces
    /// match `path`; returns the map from the reference leaf to it when it is
    /// an isomorphism from `(rg, rc)` onto this search's graph.
    fn dfs(
        &mut self,
        path: &FirstPath,
        rg: &Graph,
        rc: &[u64],
        p: Partition,
        j: usize,
    ) -> Result<Option<Vec<usize>>, AutError> {
        self.tick()?;
        if j == path.levels.len() {
            if !p.discrete() {
                return Ok(None);
            }
            let mut gamma = vec![0; p.elems.len()];
            for (k, &x) in path.leaf.iter().enumerate() {
                gamma[x] = p.elems[k];
            }
            return Ok(is_isomorphism(rg, rc, self.g, self.colours, &gamma).then_some(gamma));
        }
        let target = path.levels[j].target;
        if p.target_cell() != Some(target) {
            return Ok(None);
        }
        for u in p.sorted_cell(target) {
            let mut q = p.clone();
            let s = q.individualize(u);
            if !self.refiner.refine(self.g, &mut q, &[s], &mut Trace::compare(&path.levels[j].trace)) {
                continue;
            }
            if let Some(gamma) = self.dfs(path, rg, rc, q, j + 1)? {
                return Ok(Some(gamma));
            }
        }
        Ok(None)
    }
}

fn is_isomorphism(g: &Graph, gc: &[u64], h: &Graph, hc: &[u64], phi: &[usize]) -> bool {
    if g.m() != h.m() || (0..g.n()).any(|v| gc[v] != hc[phi[v]]) {
        return false;
    }
    g.edges().iter().all(|&(u, v)| h.has_edge(phi[u], phi[v]))
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        // smaller root wins so class representatives are deterministic
        if ra < rb {
            self.parent[rb] = ra;
        } else {
            self.parent[ra] = rb;
        }
        true
    }

    /// Classes sorted by smallest member, each sorted.
    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for x in 0..n {
            let r = self.find(x);
            by_root.entry(r).or_default().push(x);
        }
        by_root.into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).unwrap();
            }
        }
        g
    }

    fn order(g: &Graph) -> u64 {
        automorphism_group(g, &AutConfig::default()).unwrap().order_u64().unwrap()
    }

    #[test]
    fn closed_form_orders() {
        assert_eq!(order(&cycle(5)), 10);
        assert_eq!(order(&cycle(12)), 24);
        assert_eq!(order(&complete(4)), 24);
        assert_eq!(order(&complete(6)), 720);
        assert_eq!(order(&Graph::new(3)), 6);
    }

    #[test]
    fn freeness_of_small_graphs() {
        let cfg = AutConfig::default();
        assert!(!is_vertex_free(&cycle(4), &cfg).unwrap());
        let k2 = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(is_vertex_free(&k2, &cfg).unwrap());
        assert!(!is_edge_free(&k2, &cfg).unwrap());
    }

    #[test]
    fn generators_are_automorphisms() {
        let g = cycle(7);
        let grp = automorphism_group(&g, &AutConfig::default()).unwrap();
        assert!(grp.generators.iter().all(|p| g.is_automorphism(p)));
    }

    #[test]
    fn c6_is_not_two_triangles() {
        let two = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(graphs_isomorphic(&cycle(6), &two, &AutConfig::default()).unwrap(), None);
    }

    #[test]
    fn vertex_cap_enforced() {
        let err = automorphism_group(&cycle(10), &AutConfig::with_cap(5)).unwrap_err();
        assert_eq!(err, AutError::TooLarge { n: 10, cap: 5 });
    }

    #[test]
    fn node_budget_reports_partial_state() {
        let cfg = AutConfig { node_budget: 1, ..AutConfig::default() };
        assert!(matches!(automorphism_group(&cycle(8), &cfg), Err(AutError::Timeout { .. })));
    }

    #[test]
    fn empty_labels_reduce_to_plain_aut() {
        let lg = LabelledGraph::new(cycle(4));
        let grp = label_preserving_automorphisms(&lg, &AutConfig::default()).unwrap();
        assert_eq!(grp.order_u64(), Some(8));
    }

    #[test]
    fn directed_cycle_is_rotations_only() {
        let mut lg = LabelledGraph::new(cycle(5));
        for i in 0..5 {
            lg.set_label(i, (i + 1) % 5, "a", Some((i, (i + 1) % 5))).unwrap();
        }
        let grp = label_preserving_automorphisms(&lg, &AutConfig::default()).unwrap();
        assert_eq!(grp.order_u64(), Some(5));
        assert!(grp.acts_freely_on_vertices());
    }

    #[test]
    fn big_orders_serialize_as_strings() {
        let big = BigUint::from(u64::MAX) * BigUint::from(3u32);
        let c = Count::from(&big);
        assert!(matches!(c, Count::Big(_)));
        assert_eq!(serde_json::to_string(&Count::from(&BigUint::from(7u32))).unwrap(), "7");
    }
}
