//! Finite simplicial graphs, labelled graphs, block decomposition and
//! clique machinery.
//!
//! Vertices are dense indices `0..n`. Adjacency lists are kept sorted so that
//! adjacency tests are a binary search and every derived structure is
//! deterministic for a fixed input.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest clique size accepted by [`cliques_of_size`].
pub const MAX_CLIQUE_SIZE: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) has an endpoint outside 0..{2}")]
    EndpointOutOfRange(usize, usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph not connected")]
    NotConnected,
    #[error("clique size {0} outside supported range 2..={MAX_CLIQUE_SIZE}")]
    CliqueSize(usize),
    #[error("label refers to missing edge ({0}, {1})")]
    MissingLabelledEdge(usize, usize),
    #[error("orientation ({0}, {1}) does not match its edge")]
    BadOrientation(usize, usize),
    #[error("malformed graph document: {0}")]
    Malformed(String),
}

/// Finite undirected simplicial graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], m: 0 }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    /// Appends `k` fresh vertices and returns the index of the first.
    pub fn add_vertices(&mut self, k: usize) -> usize {
        let first = self.adj.len();
        self.adj.resize(first + k, Vec::new());
        first
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.n();
        if u >= n || v >= n {
            return Err(GraphError::EndpointOutOfRange(u, v, n));
        }
        if u == v {
            return Err(GraphError::Loop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Err(GraphError::DuplicateEdge(u.min(v), u.max(v))),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.m += 1;
                Ok(())
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n() || v >= self.n() {
            return false;
        }
        match self.adj[u].binary_search(&v) {
            Ok(pos) => {
                self.adj[u].remove(pos);
                let pos = self.adj[v].binary_search(&u).expect("adjacency is symmetric");
                self.adj[v].remove(pos);
                self.m -= 1;
                true
            }
            Err(_) => false,
        }
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for (u, nb) in self.adj.iter().enumerate() {
            out.extend(nb.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.adj.iter().all(|nb| nb.len() == d)
    }

    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n() <= 1 || self.components().len() == 1
    }

    /// Hop distances from `src`; `usize::MAX` marks unreachable vertices.
    pub fn bfs(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Subgraph induced on `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && j > i {
                    g.add_edge(i, j).expect("induced subgraph stays simplicial");
                }
            }
        }
        g
    }

    /// Image of the graph under the vertex relabelling `v -> perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut adj = vec![Vec::new(); self.n()];
        for (v, nb) in self.adj.iter().enumerate() {
            let mut img: Vec<usize> = nb.iter().map(|&w| perm[w]).collect();
            img.sort_unstable();
            adj[perm[v]] = img;
        }
        Graph { adj, m: self.m }
    }

    /// Appends a copy of `other`; returns the offset of its vertex 0.
    pub fn append(&mut self, other: &Graph) -> usize {
        let off = self.n();
        self.adj
            .extend(other.adj.iter().map(|nb| nb.iter().map(|&w| w + off).collect::<Vec<_>>()));
        self.m += other.m;
        off
    }

    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.n() {
            return false;
        }
        let mut seen = vec![false; perm.len()];
        for &p in perm {
            if p >= perm.len() || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        self.adj.iter().enumerate().all(|(u, nb)| {
            nb.iter().all(|&v| v < u || self.has_edge(perm[u], perm[v]))
        })
    }

    pub fn validate(&self) -> ValidationReport {
        let edges: Vec<[usize; 2]> = self.edges().into_iter().map(|(u, v)| [u, v]).collect();
        validate_edges(self.n(), &edges)
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson { n: self.n(), edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect() }
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for v in 0..self.n() {
            let _ = writeln!(s, "  {v};");
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }
}

/// Wire form of a [`Graph`]: edges with `u < v`, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for Graph {
    type Error = GraphError;

    fn try_from(doc: GraphJson) -> Result<Self, Self::Error> {
        let edges: Vec<(usize, usize)> = doc.edges.iter().map(|e| (e[0], e[1])).collect();
        Graph::from_edges(doc.n, &edges)
    }
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let doc = GraphJson::deserialize(d)?;
        Graph::try_from(doc).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidationReport {
    pub n: usize,
    pub edge_count: usize,
    pub simplicial: bool,
    pub connected: bool,
    pub components: usize,
    pub degrees: Vec<usize>,
    pub violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a raw edge list without rejecting it; every problem becomes a
/// violation string in the report.
pub fn validate_edges(n: usize, edges: &[[usize; 2]]) -> ValidationReport {
    let mut violations = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut seen = std::collections::BTreeSet::new();
    for &[u, v] in edges {
        if u >= n || v >= n {
            violations.push(format!("endpoint out of range: ({u}, {v})"));
            continue;
        }
        if u == v {
            violations.push(format!("loop at {u}"));
            continue;
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            violations.push(format!("duplicate edge ({}, {})", key.0, key.1));
            continue;
        }
        adj[u].push(v);
        adj[v].push(u);
    }
    let simplicial = violations.is_empty();
    let mut g = Graph::new(n);
    for &(u, v) in &seen {
        g.add_edge(u, v).expect("deduplicated");
    }
    let components = g.components().len();
    ValidationReport {
        n,
        edge_count: edges.len(),
        simplicial,
        connected: components <= 1,
        components,
        degrees: adj.iter().map(Vec::len).collect(),
        violations,
    }
}

/// Label carried by one edge of a [`LabelledGraph`].
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeLabel {
    pub label: String,
    /// `(tail, head)` for directed edges.
    pub dir: Option<(usize, usize)>,
}

/// A graph with a partial orientation and a label on every labelled edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelledGraph {
    pub base: Graph,
    labels: BTreeMap<(usize, usize), EdgeLabel>,
}

impl LabelledGraph {
    pub fn new(base: Graph) -> Self {
        LabelledGraph { base, labels: BTreeMap::new() }
    }

    pub fn set_label(
        &mut self,
        u: usize,
        v: usize,
        label: impl Into<String>,
        dir: Option<(usize, usize)>,
    ) -> Result<(), GraphError> {
        let key = (u.min(v), u.max(v));
        if !self.base.has_edge(u, v) {
            return Err(GraphError::MissingLabelledEdge(key.0, key.1));
        }
        if let Some((t, h)) = dir {
            if (t.min(h), t.max(h)) != key || t == h {
                return Err(GraphError::BadOrientation(t, h));
            }
        }
        self.labels.insert(key, EdgeLabel { label: label.into(), dir });
        Ok(())
    }

    pub fn label(&self, u: usize, v: usize) -> Option<&EdgeLabel> {
        self.labels.get(&(u.min(v), u.max(v)))
    }

    /// Labelled edges keyed by `(min, max)` endpoint pair, in sorted order.
    pub fn labels(&self) -> impl Iterator<Item = (&(usize, usize), &EdgeLabel)> {
        self.labels.iter()
    }

    pub fn label_count(&self) -> usize {
        self.labels.len()
    }

    /// Distinct label tokens with whether they occur directed.
    pub fn label_set(&self) -> BTreeMap<String, bool> {
        let mut out = BTreeMap::new();
        for l in self.labels.values() {
            let e = out.entry(l.label.clone()).or_insert(false);
            *e |= l.dir.is_some();
        }
        out
    }

    pub fn to_json(&self) -> LabelledGraphJson {
        let base = self.base.to_json();
        LabelledGraphJson {
            n: base.n,
            edges: base.edges,
            labels: self
                .labels
                .iter()
                .map(|(&(u, v), l)| LabelJson {
                    edge: [u, v],
                    label: l.label.clone(),
                    dir: l.dir.map(|(t, h)| [t, h]),
                })
                .collect(),
        }
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("digraph {name} {{\n");
        for v in 0..self.base.n() {
            let _ = writeln!(s, "  {v};");
        }
        for (u, v) in self.base.edges() {
            match self.label(u, v) {
                Some(EdgeLabel { label, dir: Some((t, h)) }) => {
                    let _ = writeln!(s, "  {t} -> {h} [label=\"{label}\"];");
                }
                Some(EdgeLabel { label, dir: None }) => {
                    let _ = writeln!(s, "  {u} -> {v} [dir=none, label=\"{label}\"];");
                }
                None => {
                    let _ = writeln!(s, "  {u} -> {v} [dir=none];");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelJson {
    pub edge: [usize; 2],
    pub label: String,
    pub dir: Option<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelledGraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default)]
    pub labels: Vec<LabelJson>,
}

impl TryFrom<LabelledGraphJson> for LabelledGraph {
    type Error = GraphError;

    fn try_from(doc: LabelledGraphJson) -> Result<Self, Self::Error> {
        let base = Graph::try_from(GraphJson { n: doc.n, edges: doc.edges })?;
        let mut lg = LabelledGraph::new(base);
        for l in doc.labels {
            lg.set_label(l.edge[0], l.edge[1], l.label, l.dir.map(|d| (d[0], d[1])))?;
        }
        Ok(lg)
    }
}

/// Blocks (maximal 2-connected subgraphs or bridges) and the block–cut tree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockDecomposition {
    /// Sorted vertex sets, ordered by their smallest vertex then lexicographically.
    pub blocks: Vec<Vec<usize>>,
    pub cut_vertices: Vec<usize>,
    /// `(block index, cut vertex)` incidences of the block–cut tree.
    pub tree_edges: Vec<(usize, usize)>,
}

impl BlockDecomposition {
    pub fn is_bridge(&self, block: usize) -> bool {
        self.blocks[block].len() == 2
    }
}

pub fn block_decomposition(g: &Graph) -> Result<BlockDecomposition, GraphError> {
    if !g.is_connected() {
        return Err(GraphError::NotConnected);
    }
    let n = g.n();
    if n <= 1 {
        return Ok(BlockDecomposition {
            blocks: if n == 1 { vec![vec![0]] } else { Vec::new() },
            cut_vertices: Vec::new(),
            tree_edges: Vec::new(),
        });
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut timer = 0;
    let mut edge_stack: Vec<(usize, usize)> = Vec::new();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    // (vertex, parent, next neighbour index)
    let mut stack: Vec<(usize, usize, usize)> = vec![(0, usize::MAX, 0)];
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
        if *idx < g.degree(v) {
            let w = g.neighbors(v)[*idx];
            *idx += 1;
            if disc[w] == usize::MAX {
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                edge_stack.push((v, w));
                stack.push((w, v, 0));
            } else if w != parent && disc[w] < disc[v] {
                edge_stack.push((v, w));
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                if low[v] >= disc[p] {
                    let mut verts = Vec::new();
                    while let Some(e) = edge_stack.pop() {
                        verts.push(e.0);
                        verts.push(e.1);
                        if e == (p, v) {
                            break;
                        }
                    }
                    verts.sort_unstable();
                    verts.dedup();
                    blocks.push(verts);
                }
            }
        }
    }
    blocks.sort();
    let mut count = vec![0usize; n];
    for b in &blocks {
        for &v in b {
            count[v] += 1;
        }
    }
    let cut_vertices: Vec<usize> = (0..n).filter(|&v| count[v] > 1).collect();
    let mut tree_edges = Vec::new();
    for (i, b) in blocks.iter().enumerate() {
        for &v in b {
            if count[v] > 1 {
                tree_edges.push((i, v));
            }
        }
    }
    Ok(BlockDecomposition { blocks, cut_vertices, tree_edges })
}

/// Every `d`-vertex clique, each sorted, listed in lexicographic order.
pub fn cliques_of_size(g: &Graph, d: usize) -> Result<Vec<Vec<usize>>, GraphError> {
    if !(2..=MAX_CLIQUE_SIZE).contains(&d) {
        return Err(GraphError::CliqueSize(d));
    }
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(d);
    for v in 0..g.n() {
        if g.degree(v) + 1 < d {
            continue;
        }
        let cand: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| w > v).collect();
        current.push(v);
        extend_clique(g, d, &mut current, &cand, &mut out);
        current.pop();
    }
    Ok(out)
}

fn extend_clique(
    g: &Graph,
    d: usize,
    current: &mut Vec<usize>,
    cand: &[usize],
    out: &mut Vec<Vec<usize>>,
) {
    if current.len() == d {
        out.push(current.clone());
        return;
    }
    if current.len() + cand.len() < d {
        return;
    }
    for (i, &w) in cand.iter().enumerate() {
        let next: Vec<usize> = cand[i + 1..].iter().copied().filter(|&x| g.has_edge(w, x)).collect();
        current.push(w);
        extend_clique(g, d, current, &next, out);
        current.pop();
    }
}

/// Graph whose vertices are the `d`-cliques of `g` (in [`cliques_of_size`]
/// order); two cliques are adjacent when they share a vertex or contain an
/// adjacent pair.
pub fn clique_graph(g: &Graph, d: usize) -> Result<Graph, GraphError> {
    let cliques = cliques_of_size(g, d)?;
    clique_graph_from(g, &cliques)
}

pub fn clique_graph_from(g: &Graph, cliques: &[Vec<usize>]) -> Result<Graph, GraphError> {
    let mut member: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, c) in cliques.iter().enumerate() {
        for &v in c {
            member[v].push(i);
        }
    }
    let mut out = Graph::new(cliques.len());
    for (i, c) in cliques.iter().enumerate() {
        let mut near: Vec<usize> = Vec::new();
        for &v in c {
            near.extend(member[v].iter().copied());
            for &w in g.neighbors(v) {
                near.extend(member[w].iter().copied());
            }
        }
        near.sort_unstable();
        near.dedup();
        for j in near {
            if j > i {
                out.add_edge(i, j)?;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
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

    #[test]
    fn triangle_report() {
        let r = cycle(3).validate();
        assert!(r.simplicial && r.connected);
        assert_eq!(r.degrees, vec![2, 2, 2]);
        assert!(r.is_valid());
    }

    #[test]
    fn duplicate_edge_is_reported() {
        let r = validate_edges(3, &[[0, 1], [1, 0], [1, 2]]);
        assert!(!r.simplicial);
        assert!(r.violations.iter().any(|v| v.contains("duplicate edge")));
        assert!(Graph::from_edges(2, &[(0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn disjoint_edges_are_disconnected() {
        let r = validate_edges(4, &[[0, 1], [2, 3]]);
        assert!(!r.connected);
        assert_eq!(r.components, 2);
    }

    #[test]
    fn bowtie_has_two_blocks() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let bd = block_decomposition(&g).unwrap();
        assert_eq!(bd.blocks, vec![vec![0, 1, 2], vec![2, 3, 4]]);
        assert_eq!(bd.cut_vertices, vec![2]);
        assert_eq!(bd.tree_edges.len(), 2);
    }

    #[test]
    fn path_blocks_are_bridges() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let bd = block_decomposition(&g).unwrap();
        assert_eq!(bd.blocks.len(), 3);
        assert!((0..3).all(|b| bd.is_bridge(b)));
        assert_eq!(bd.cut_vertices, vec![1, 2]);
    }

    #[test]
    fn disconnected_input_rejected() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(block_decomposition(&g), Err(GraphError::NotConnected));
    }

    #[test]
    fn clique_counts() {
        assert_eq!(cliques_of_size(&complete(4), 4).unwrap().len(), 1);
        assert_eq!(cliques_of_size(&complete(4), 3).unwrap().len(), 4);
        assert!(cliques_of_size(&cycle(5), 3).unwrap().is_empty());
        assert!(cliques_of_size(&cycle(5), 17).is_err());
        assert!(cliques_of_size(&cycle(5), 1).is_err());
    }

    #[test]
    fn joined_k4s_give_an_edge() {
        let mut g = complete(4);
        let off = g.append(&complete(4));
        g.add_edge(0, off).unwrap();
        let cg = clique_graph(&g, 4).unwrap();
        assert_eq!(cg.n(), 2);
        assert_eq!(cg.edges(), vec![(0, 1)]);
        assert_eq!(clique_graph(&cycle(6), 3).unwrap().n(), 0);
    }

    #[test]
    fn labelled_json_roundtrip_and_checks() {
        let mut lg = LabelledGraph::new(cycle(3));
        lg.set_label(0, 1, "a", Some((1, 0))).unwrap();
        lg.set_label(1, 2, "b", None).unwrap();
        assert!(lg.set_label(0, 2, "c", Some((0, 1))).is_err());
        let doc = serde_json::to_string(&lg.to_json()).unwrap();
        let back: LabelledGraphJson = serde_json::from_str(&doc).unwrap();
        assert_eq!(LabelledGraph::try_from(back).unwrap(), lg);
        assert!(lg.to_dot("x").contains("1 -> 0 [label=\"a\"]"));
    }

    #[test]
    fn graph_json_is_sorted() {
        let g = Graph::from_edges(3, &[(2, 1), (1, 0)]).unwrap();
        assert_eq!(serde_json::to_string(&g).unwrap(), r#"{"n":3,"edges":[[0,1],[1,2]]}"#);
    }
}
