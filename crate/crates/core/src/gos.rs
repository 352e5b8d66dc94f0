//! Graphs of finite metric spaces and exact measurements on their
//! realisations.
//!
//! Vertex and edge spaces are finite weighted graphs. The realisation glues
//! each edge space `Y_e` in as a unit-width cylinder `Y_e × [0,1]` carrying
//! the ℓ2 product metric, tail side at `s = 0`. Strings can only change piece
//! where pieces meet, i.e. at α-images, so the intrinsic metric restricted to
//! resident points is the shortest-path metric of a finite network whose
//! nodes are the vertex-space points (plus optional cylinder points).

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{automorphism_group_coloured, AutConfig, AutError, PermGroup};
use crate::graph::{Graph, GraphError};
use crate::groups::{FiniteGroup, GroupError};
use crate::metric::{
    all_pairs, coarse_separation_profile, four_point_delta, set_gromov_product, DistanceMatrix, FourPointOptions,
    FourPointReport, MetricError, WeightedSpace, WeightedSpaceJson, TOL,
};

pub const DEFAULT_GRID_STEP: f64 = 0.25;
/// Largest space handed to the isometry enumeration.
pub const DEFAULT_LINK_CAP: usize = 150;
/// Spaces up to this size get an exhaustive four-point scan.
const UNIFORM_EXHAUSTIVE_CAP: usize = 200;

#[derive(Debug, Error)]
pub enum GosError {
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("vertex {vertex} has degree {degree}, more than the {legs} spider legs")]
    Regularity { vertex: usize, degree: usize, legs: usize },
    #[error("{0} is not a point of the realisation")]
    BadPoint(String),
    #[error("space of {n} points exceeds the enumeration cap {cap}")]
    TooLarge { n: usize, cap: usize },
    #[error("automorphisms do not act freely on vertices; no orbit-consistent leg assignment")]
    NotFree,
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Tail,
    Head,
}

/// Graph Γ with one orientation per edge, a space per vertex and per edge,
/// and the two gluing maps of each edge space.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphOfSpaces {
    pub n: usize,
    /// Edge `e` runs from `orient[e].0` (tail) to `orient[e].1` (head).
    pub orient: Vec<(usize, usize)>,
    pub vertex_spaces: Vec<WeightedSpace>,
    pub edge_spaces: Vec<WeightedSpace>,
    pub alpha_tail: Vec<Vec<usize>>,
    pub alpha_head: Vec<Vec<usize>>,
    pub basepoints: Vec<usize>,
}

impl GraphOfSpaces {
    /// Checks only shapes and index ranges; metric conditions are left to
    /// [`validate_gos`].
    pub fn new(
        n: usize,
        orient: Vec<(usize, usize)>,
        vertex_spaces: Vec<WeightedSpace>,
        edge_spaces: Vec<WeightedSpace>,
        alpha_tail: Vec<Vec<usize>>,
        alpha_head: Vec<Vec<usize>>,
        basepoints: Vec<usize>,
    ) -> Result<Self, GosError> {
        let m = orient.len();
        if vertex_spaces.len() != n {
            return Err(GosError::Invalid(format!("{} vertex spaces for {n} vertices", vertex_spaces.len())));
        }
        for (what, len) in [
            ("edge spaces", edge_spaces.len()),
            ("tail maps", alpha_tail.len()),
            ("head maps", alpha_head.len()),
            ("basepoints", basepoints.len()),
        ] {
            if len != m {
                return Err(GosError::Invalid(format!("{len} {what} for {m} edges")));
            }
        }
        for (e, &(t, h)) in orient.iter().enumerate() {
            if t >= n || h >= n {
                return Err(GosError::Invalid(format!("edge {e} ({t}, {h}) out of range")));
            }
            let ny = edge_spaces[e].n();
            for (side, map, v) in [("tail", &alpha_tail[e], t), ("head", &alpha_head[e], h)] {
                if map.len() != ny {
                    return Err(GosError::Invalid(format!("edge {e} {side} map has {} entries, space has {ny}", map.len())));
                }
                if let Some(&x) = map.iter().find(|&&x| x >= vertex_spaces[v].n()) {
                    return Err(GosError::Invalid(format!("edge {e} {side} map hits {x}, outside vertex space {v}")));
                }
            }
            if basepoints[e] >= ny {
                return Err(GosError::Invalid(format!("basepoint {} of edge {e} out of range", basepoints[e])));
            }
        }
        Ok(GraphOfSpaces { n, orient, vertex_spaces, edge_spaces, alpha_tail, alpha_head, basepoints })
    }

    pub fn m(&self) -> usize {
        self.orient.len()
    }

    pub fn gamma(&self) -> Result<Graph, GraphError> {
        Graph::from_edges(self.n, &self.orient)
    }

    pub fn alpha(&self, e: usize, side: Side) -> &[usize] {
        match side {
            Side::Tail => &self.alpha_tail[e],
            Side::Head => &self.alpha_head[e],
        }
    }

    pub fn endpoint(&self, e: usize, side: Side) -> usize {
        match side {
            Side::Tail => self.orient[e].0,
            Side::Head => self.orient[e].1,
        }
    }

    /// Incident `(edge, side)` pairs of `v`, by edge index.
    pub fn incident(&self, v: usize) -> Vec<(usize, Side)> {
        let mut out = Vec::new();
        for (e, &(t, h)) in self.orient.iter().enumerate() {
            if t == v {
                out.push((e, Side::Tail));
            }
            if h == v {
                out.push((e, Side::Head));
            }
        }
        out
    }

    /// `y_v`: image of the edge basepoint through the first incident side
    /// (point 0 for isolated vertices).
    pub fn vertex_basepoint(&self, v: usize) -> usize {
        self.incident(v).first().map_or(0, |&(e, side)| self.alpha(e, side)[self.basepoints[e]])
    }

    /// Graph distances in Γ, counting each oriented edge once.
    pub fn gamma_distances(&self, src: usize) -> Vec<usize> {
        let mut adj = vec![Vec::new(); self.n];
        for &(t, h) in &self.orient {
            adj[t].push(h);
            adj[h].push(t);
        }
        let mut dist = vec![usize::MAX; self.n];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn to_json(&self) -> GosJson {
        let pair = |&(t, h): &(usize, usize)| [t, h];
        let mut edges: Vec<[usize; 2]> = self.orient.iter().map(|&(t, h)| [t.min(h), t.max(h)]).collect();
        edges.sort_unstable();
        GosJson {
            gamma: GammaJson { n: self.n, edges, orient: self.orient.iter().map(pair).collect() },
            vertex_spaces: self.vertex_spaces.iter().map(WeightedSpace::to_json).enumerate().collect(),
            edge_spaces: self.edge_spaces.iter().map(WeightedSpace::to_json).enumerate().collect(),
            alpha: (0..self.m())
                .map(|e| (e, AlphaJson { tail: self.alpha_tail[e].clone(), head: self.alpha_head[e].clone() }))
                .collect(),
            basepoints: self.basepoints.iter().copied().enumerate().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaJson {
    pub n: usize,
    /// Unoriented copy of `orient`; optional on input.
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
    pub orient: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlphaJson {
    pub tail: Vec<usize>,
    pub head: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GosJson {
    pub gamma: GammaJson,
    pub vertex_spaces: BTreeMap<usize, WeightedSpaceJson>,
    pub edge_spaces: BTreeMap<usize, WeightedSpaceJson>,
    pub alpha: BTreeMap<usize, AlphaJson>,
    pub basepoints: BTreeMap<usize, usize>,
}

impl TryFrom<GosJson> for GraphOfSpaces {
    type Error = GosError;

    fn try_from(doc: GosJson) -> Result<Self, GosError> {
        let n = doc.gamma.n;
        let m = doc.gamma.orient.len();
        let orient: Vec<(usize, usize)> = doc.gamma.orient.iter().map(|&[t, h]| (t, h)).collect();
        if !doc.gamma.edges.is_empty() {
            let mut a: Vec<[usize; 2]> = orient.iter().map(|&(t, h)| [t.min(h), t.max(h)]).collect();
            let mut b: Vec<[usize; 2]> = doc.gamma.edges.iter().map(|&[u, v]| [u.min(v), u.max(v)]).collect();
            a.sort_unstable();
            b.sort_unstable();
            if a != b {
                return Err(GosError::Invalid("edges and orient disagree".into()));
            }
        }
        let dense = |keys: Vec<usize>, len: usize, what: &str| -> Result<(), GosError> {
            if keys != (0..len).collect::<Vec<_>>() {
                return Err(GosError::Invalid(format!("{what} must be keyed 0..{len}")));
            }
            Ok(())
        };
        dense(doc.vertex_spaces.keys().copied().collect(), n, "vertexSpaces")?;
        dense(doc.edge_spaces.keys().copied().collect(), m, "edgeSpaces")?;
        dense(doc.alpha.keys().copied().collect(), m, "alpha")?;
        dense(doc.basepoints.keys().copied().collect(), m, "basepoints")?;
        let vertex_spaces = doc.vertex_spaces.into_values().map(WeightedSpace::try_from).collect::<Result<_, _>>()?;
        let edge_spaces = doc.edge_spaces.into_values().map(WeightedSpace::try_from).collect::<Result<_, _>>()?;
        let (alpha_tail, alpha_head) = doc.alpha.into_values().map(|a| (a.tail, a.head)).unzip();
        GraphOfSpaces::new(
            n,
            orient,
            vertex_spaces,
            edge_spaces,
            alpha_tail,
            alpha_head,
            doc.basepoints.into_values().collect(),
        )
    }
}

impl Serialize for GraphOfSpaces {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for GraphOfSpaces {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        GraphOfSpaces::try_from(GosJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GosValidation {
    pub valid: bool,
    pub vertices: usize,
    pub edges: usize,
    pub simplicial: bool,
    pub violations: Vec<String>,
}

pub fn validate_gos(gos: &GraphOfSpaces) -> GosValidation {
    let mut violations = Vec::new();
    let mut simplicial = true;
    let mut seen = BTreeSet::new();
    for (e, &(t, h)) in gos.orient.iter().enumerate() {
        if t == h {
            simplicial = false;
            violations.push(format!("edge {e}: loop at {t}"));
        } else if !seen.insert((t.min(h), t.max(h))) {
            simplicial = false;
            violations.push(format!("edge {e}: duplicate of ({t}, {h})"));
        }
    }
    let vdm: Vec<Option<DistanceMatrix>> = gos.vertex_spaces.iter().map(|s| all_pairs(s).ok()).collect();
    for (v, d) in vdm.iter().enumerate() {
        if d.is_none() {
            violations.push(format!("vertex space {v}: not connected"));
        }
    }
    for e in 0..gos.m() {
        let Ok(dy) = all_pairs(&gos.edge_spaces[e]) else {
            violations.push(format!("edge space {e}: not connected"));
            continue;
        };
        for side in [Side::Tail, Side::Head] {
            let map = gos.alpha(e, side);
            let v = gos.endpoint(e, side);
            if map.iter().collect::<BTreeSet<_>>().len() != map.len() {
                violations.push(format!("edge {e} {side:?}: not injective"));
            }
            let Some(dx) = &vdm[v] else { continue };
            'pairs: for y in 0..map.len() {
                for z in y + 1..map.len() {
                    let (a, b) = (dy.get(y, z), dx.get(map[y], map[z]));
                    if (a - b).abs() > TOL {
                        violations.push(format!("edge {e} {side:?}: not isometric (d_Y({y},{z}) = {a}, d_X = {b})"));
                        break 'pairs;
                    }
                }
            }
        }
    }
    for v in 0..gos.n {
        let images: BTreeSet<usize> =
            gos.incident(v).into_iter().map(|(e, side)| gos.alpha(e, side)[gos.basepoints[e]]).collect();
        if images.len() > 1 {
            violations.push(format!("vertex {v}: incoherent basepoints {images:?}"));
        }
    }
    GosValidation { valid: violations.is_empty(), vertices: gos.n, edges: gos.m(), simplicial, violations }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Uniformity {
    pub deltas: Vec<f64>,
    pub delta: f64,
    pub c: f64,
    pub exhaustive: bool,
}

/// `δ_v` per vertex space and the largest set Gromov product of two distinct
/// incident edge images at the basepoint.
pub fn uniformity_constants(gos: &GraphOfSpaces) -> Result<Uniformity, GosError> {
    let results: Vec<Result<(f64, f64, bool), GosError>> = (0..gos.n)
        .into_par_iter()
        .map(|v| {
            let dm = all_pairs(&gos.vertex_spaces[v])?;
            let opts = FourPointOptions { exhaustive_cap: UNIFORM_EXHAUSTIVE_CAP, ..FourPointOptions::default() };
            let rep = four_point_delta(&dm, &opts);
            let yv = gos.vertex_basepoint(v);
            let inc = gos.incident(v);
            let mut c = 0.0f64;
            for (i, &(e, se)) in inc.iter().enumerate() {
                for &(f, sf) in &inc[i + 1..] {
                    c = c.max(set_gromov_product(&dm, gos.alpha(e, se), gos.alpha(f, sf), yv));
                }
            }
            Ok((rep.delta, c, rep.exhaustive))
        })
        .collect();
    let mut deltas = Vec::with_capacity(gos.n);
    let (mut c, mut exhaustive) = (0.0f64, true);
    for r in results {
        let (d, cv, ex) = r?;
        deltas.push(d);
        c = c.max(cv);
        exhaustive &= ex;
    }
    let delta = deltas.iter().copied().fold(0.0, f64::max);
    Ok(Uniformity { deltas, delta, c, exhaustive })
}

/// A point of the realisation: `v:i` in a vertex space or `(e, y, s)` in a
/// cylinder, `s` measured from the tail side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum GosPoint {
    Vertex { v: usize, i: usize },
    Cylinder { e: usize, y: usize, s: f64 },
}

impl fmt::Display for GosPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GosPoint::Vertex { v, i } => write!(f, "{v}:{i}"),
            GosPoint::Cylinder { e, y, s } => write!(f, "e{e}:{y}:{s}"),
        }
    }
}

impl FromStr for GosPoint {
    type Err = GosError;

    /// `v:i` or `e<edge>:y:s`.
    fn from_str(text: &str) -> Result<Self, GosError> {
        let bad = || GosError::BadPoint(text.to_string());
        let parts: Vec<&str> = text.split(':').collect();
        match parts.as_slice() {
            [v, i] => Ok(GosPoint::Vertex { v: v.parse().map_err(|_| bad())?, i: i.parse().map_err(|_| bad())? }),
            [e, y, s] => Ok(GosPoint::Cylinder {
                e: e.strip_prefix('e').ok_or_else(bad)?.parse().map_err(|_| bad())?,
                y: y.parse().map_err(|_| bad())?,
                s: s.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "index", rename_all = "camelCase")]
pub enum Piece {
    Vertex(usize),
    Edge(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StringPath {
    pub points: Vec<GosPoint>,
    /// `pieces[k]` holds `points[k]` and `points[k + 1]`.
    pub pieces: Vec<Piece>,
    pub length: f64,
}

#[derive(Copy, Clone, PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite network computing the intrinsic metric between its nodes.
#[derive(Clone, Debug)]
pub struct RealizationNetwork {
    gos: GraphOfSpaces,
    nodes: Vec<GosPoint>,
    offsets: Vec<usize>,
    adj: Vec<Vec<(usize, f64, Piece)>>,
    vdm: Vec<DistanceMatrix>,
    edm: Vec<DistanceMatrix>,
    /// Per edge and side, vertex-space point → edge-space point.
    inverse: Vec<[HashMap<usize, usize>; 2]>,
    /// Per edge, extra nodes inside its cylinder.
    extras: Vec<Vec<usize>>,
}

/// Builds the network on all vertex-space points plus `extra` cylinder points.
pub fn realize_network(gos: &GraphOfSpaces, extra: &[GosPoint]) -> Result<RealizationNetwork, GosError> {
    let vdm = gos.vertex_spaces.iter().map(all_pairs).collect::<Result<Vec<_>, _>>()?;
    let edm = gos.edge_spaces.iter().map(all_pairs).collect::<Result<Vec<_>, _>>()?;
    let mut nodes = Vec::new();
    let mut offsets = Vec::with_capacity(gos.n);
    for (v, space) in gos.vertex_spaces.iter().enumerate() {
        offsets.push(nodes.len());
        nodes.extend((0..space.n()).map(|i| GosPoint::Vertex { v, i }));
    }
    let inverse: Vec<[HashMap<usize, usize>; 2]> = (0..gos.m())
        .map(|e| {
            let inv = |map: &[usize]| map.iter().enumerate().map(|(y, &x)| (x, y)).collect();
            [inv(&gos.alpha_tail[e]), inv(&gos.alpha_head[e])]
        })
        .collect();
    let mut extras = vec![Vec::new(); gos.m()];
    for &p in extra {
        match p {
            GosPoint::Vertex { v, i } if v < gos.n && i < gos.vertex_spaces[v].n() => {}
            GosPoint::Cylinder { e, y, s } if e < gos.m() && y < gos.edge_spaces[e].n() && s > 0.0 && s < 1.0 => {
                let dup = extras[e].iter().any(|&k| nodes[k] == p);
                if !dup {
                    extras[e].push(nodes.len());
                    nodes.push(p);
                }
            }
            _ => return Err(GosError::BadPoint(p.to_string())),
        }
    }
    let mut adj = vec![Vec::new(); nodes.len()];
    for (v, space) in gos.vertex_spaces.iter().enumerate() {
        for &(a, b, w) in space.wedges() {
            let (a, b) = (offsets[v] + a, offsets[v] + b);
            adj[a].push((b, w, Piece::Vertex(v)));
            adj[b].push((a, w, Piece::Vertex(v)));
        }
    }
    let mut link = |a: usize, b: usize, w: f64, piece: Piece| {
        adj[a].push((b, w, piece));
        adj[b].push((a, w, piece));
    };
    for e in 0..gos.m() {
        let dy = &edm[e];
        let ny = dy.n();
        let (t, h) = gos.orient[e];
        let tail = |y: usize| offsets[t] + gos.alpha_tail[e][y];
        let head = |y: usize| offsets[h] + gos.alpha_head[e][y];
        let piece = Piece::Edge(e);
        for y in 0..ny {
            for z in 0..ny {
                link(tail(y), head(z), dy.get(y, z).hypot(1.0), piece);
                if y < z {
                    // same-side segments; redundant when α is isometric
                    link(tail(y), tail(z), dy.get(y, z), piece);
                    link(head(y), head(z), dy.get(y, z), piece);
                }
            }
        }
        for (k, &a) in extras[e].iter().enumerate() {
            let GosPoint::Cylinder { y, s, .. } = nodes[a] else { unreachable!() };
            for z in 0..ny {
                link(a, tail(z), dy.get(y, z).hypot(s), piece);
                link(a, head(z), dy.get(y, z).hypot(1.0 - s), piece);
            }
            for &b in &extras[e][k + 1..] {
                let GosPoint::Cylinder { y: z, s: r, .. } = nodes[b] else { unreachable!() };
                link(a, b, dy.get(y, z).hypot(s - r), piece);
            }
        }
    }
    Ok(RealizationNetwork { gos: gos.clone(), nodes, offsets, adj, vdm, edm, inverse, extras })
}

impl RealizationNetwork {
    pub fn gos(&self) -> &GraphOfSpaces {
        &self.gos
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn point(&self, node: usize) -> GosPoint {
        self.nodes[node]
    }

    pub fn node(&self, p: &GosPoint) -> Option<usize> {
        match *p {
            GosPoint::Vertex { v, i } => (v < self.gos.n && i < self.gos.vertex_spaces[v].n()).then(|| self.offsets[v] + i),
            GosPoint::Cylinder { e, .. } => {
                self.extras.get(e)?.iter().copied().find(|&k| self.nodes[k] == *p)
            }
        }
    }

    fn resolve(&self, p: &GosPoint) -> Result<usize, GosError> {
        self.node(p).ok_or_else(|| GosError::BadPoint(p.to_string()))
    }

    /// Nodes resident in vertex space `v`.
    pub fn vertex_nodes(&self, v: usize) -> std::ops::Range<usize> {
        self.offsets[v]..self.offsets[v] + self.gos.vertex_spaces[v].n()
    }

    pub fn basepoint_node(&self, v: usize) -> usize {
        self.offsets[v] + self.gos.vertex_basepoint(v)
    }

    /// Nodes lying in a piece: a vertex space, or the boundary and extra
    /// points of a cylinder.
    pub fn piece_nodes(&self, piece: Piece) -> Vec<usize> {
        match piece {
            Piece::Vertex(v) => self.vertex_nodes(v).collect(),
            Piece::Edge(e) => {
                let (t, h) = self.gos.orient[e];
                let mut out: Vec<usize> = self.gos.alpha_tail[e].iter().map(|&x| self.offsets[t] + x).collect();
                out.extend(self.gos.alpha_head[e].iter().map(|&x| self.offsets[h] + x));
                out.extend(&self.extras[e]);
                out.sort_unstable();
                out.dedup();
                out
            }
        }
    }

    fn owner(&self, node: usize) -> Option<usize> {
        match self.nodes[node] {
            GosPoint::Vertex { v, .. } => Some(v),
            GosPoint::Cylinder { .. } => None,
        }
    }

    /// Cylinder coordinates `(y, s)` of a node lying in cylinder `e`.
    fn cylinder_coords(&self, e: usize, node: usize) -> Option<(usize, f64)> {
        match self.nodes[node] {
            GosPoint::Cylinder { e: f, y, s } => (f == e).then_some((y, s)),
            GosPoint::Vertex { v, i } => {
                let (t, h) = self.gos.orient[e];
                if v == t {
                    if let Some(&y) = self.inverse[e][0].get(&i) {
                        return Some((y, 0.0));
                    }
                }
                if v == h {
                    if let Some(&y) = self.inverse[e][1].get(&i) {
                        return Some((y, 1.0));
                    }
                }
                None
            }
        }
    }

    /// Distance inside one piece, or `None` if a point is not in it.
    pub fn piece_distance(&self, piece: Piece, a: usize, b: usize) -> Option<f64> {
        match piece {
            Piece::Vertex(v) => {
                let r = self.vertex_nodes(v);
                (r.contains(&a) && r.contains(&b)).then(|| self.vdm[v].get(a - r.start, b - r.start))
            }
            Piece::Edge(e) => {
                let (y, s) = self.cylinder_coords(e, a)?;
                let (z, t) = self.cylinder_coords(e, b)?;
                Some(self.edm[e].get(y, z).hypot(s - t))
            }
        }
    }

    fn search(&self, sources: &[usize]) -> (Vec<f64>, Vec<Option<(usize, Piece)>>) {
        let mut dist = vec![f64::INFINITY; self.len()];
        let mut pred = vec![None; self.len()];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = 0.0;
            heap.push(Item(0.0, s));
        }
        while let Some(Item(d, v)) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(w, wt, piece) in &self.adj[v] {
                let nd = d + wt;
                if nd < dist[w] {
                    dist[w] = nd;
                    pred[w] = Some((v, piece));
                    heap.push(Item(nd, w));
                }
            }
        }
        (dist, pred)
    }

    pub fn distances_from(&self, node: usize) -> Vec<f64> {
        self.search(&[node]).0
    }

    /// Distance from every node to the nearest of `set`.
    pub fn distances_to_set(&self, set: &[usize]) -> Vec<f64> {
        self.search(set).0
    }

    pub fn distance_matrix(&self) -> DistanceMatrix {
        let rows = (0..self.len()).into_par_iter().map(|v| self.distances_from(v)).collect();
        DistanceMatrix::from_rows(rows)
    }

    /// Node chain of a shortest path with the piece of each step.
    fn node_path(&self, a: usize, b: usize) -> (f64, Vec<usize>, Vec<Piece>) {
        let (dist, pred) = self.search(&[a]);
        let mut nodes = vec![b];
        let mut pieces = Vec::new();
        let mut cur = b;
        while let Some((p, piece)) = pred[cur] {
            nodes.push(p);
            pieces.push(piece);
            cur = p;
        }
        nodes.reverse();
        pieces.reverse();
        (dist[b], nodes, pieces)
    }

    /// Reduced string along a shortest path: runs of steps in one piece are
    /// merged, and a zero-length vertex-space step separates two cylinders.
    pub fn geodesic_nodes(&self, a: usize, b: usize) -> (Vec<usize>, Vec<Piece>) {
        let (_, nodes, pieces) = self.node_path(a, b);
        let mut out_nodes = vec![nodes[0]];
        let mut out_pieces: Vec<Piece> = Vec::new();
        for (k, &piece) in pieces.iter().enumerate() {
            let next = nodes[k + 1];
            if out_pieces.last() == Some(&piece) {
                *out_nodes.last_mut().unwrap() = next;
                continue;
            }
            if let (Some(Piece::Edge(_)), Piece::Edge(_)) = (out_pieces.last(), piece) {
                let here = *out_nodes.last().unwrap();
                let v = self.owner(here).expect("cylinders meet inside vertex spaces");
                out_pieces.push(Piece::Vertex(v));
                out_nodes.push(here);
            }
            out_pieces.push(piece);
            out_nodes.push(next);
        }
        (out_nodes, out_pieces)
    }
}

pub fn gos_distance(net: &RealizationNetwork, p: &GosPoint, q: &GosPoint) -> Result<f64, GosError> {
    let (a, b) = (net.resolve(p)?, net.resolve(q)?);
    Ok(net.distances_from(a)[b])
}

pub fn gos_geodesic(net: &RealizationNetwork, p: &GosPoint, q: &GosPoint) -> Result<StringPath, GosError> {
    let (a, b) = (net.resolve(p)?, net.resolve(q)?);
    let (nodes, pieces) = net.geodesic_nodes(a, b);
    let length = pieces
        .iter()
        .enumerate()
        .map(|(k, &piece)| net.piece_distance(piece, nodes[k], nodes[k + 1]).expect("consecutive points share the piece"))
        .sum();
    Ok(StringPath { points: nodes.iter().map(|&x| net.point(x)).collect(), pieces, length })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EmbeddedGraphReport {
    pub pairs: usize,
    pub max_deviation: f64,
    pub exact: bool,
}

/// Compares `d(y_u, y_v)` with the graph distance of Γ for all vertex pairs.
pub fn embedded_graph_check(net: &RealizationNetwork) -> EmbeddedGraphReport {
    let gos = net.gos();
    let devs: Vec<f64> = (0..gos.n)
        .into_par_iter()
        .map(|u| {
            let d = net.distances_from(net.basepoint_node(u));
            let dg = gos.gamma_distances(u);
            (u + 1..gos.n)
                .map(|v| {
                    let x = d[net.basepoint_node(v)];
                    match dg[v] {
                        usize::MAX if x.is_infinite() => 0.0,
                        usize::MAX => f64::INFINITY,
                        k => (x - k as f64).abs(),
                    }
                })
                .fold(0.0, f64::max)
        })
        .collect();
    let max_deviation = devs.into_iter().fold(0.0, f64::max);
    EmbeddedGraphReport { pairs: gos.n * gos.n.saturating_sub(1) / 2, max_deviation, exact: max_deviation <= TOL }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DistortionReport {
    pub vertex: usize,
    pub measured: f64,
    pub delta: f64,
    pub c: f64,
    /// `2δ + 2C + 2`.
    pub bound: f64,
    pub within: bool,
}

/// Largest shortfall `d_{X_v} − d_𝐗` over pairs of `X_v`.
pub fn vertex_embedding_distortion(net: &RealizationNetwork, v: usize, u: &Uniformity) -> DistortionReport {
    let r = net.vertex_nodes(v);
    let measured = r
        .clone()
        .into_par_iter()
        .map(|a| {
            let d = net.distances_from(a);
            r.clone().map(|b| net.vdm[v].get(a - r.start, b - r.start) - d[b]).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let bound = 2.0 * u.delta + 2.0 * u.c + 2.0;
    DistortionReport { vertex: v, measured, delta: u.delta, c: u.c, bound, within: measured <= bound + TOL }
}

/// Chain of constants: `D = 4C + 4δ + 1`, `K = 4C + 4δ + 4D + 5`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundConstants {
    pub d: f64,
    pub k: f64,
    pub sigma: f64,
}

impl BoundConstants {
    pub fn new(delta: f64, c: f64) -> Self {
        let d = 4.0 * c + 4.0 * delta + 1.0;
        let k = 4.0 * c + 4.0 * delta + 4.0 * d + 5.0;
        BoundConstants { d, k, sigma: k + d + 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct QuasiconvexityReport {
    pub vertex: usize,
    pub pairs: usize,
    pub exhaustive: bool,
    pub seed: u64,
    pub measured: f64,
    pub constants: BoundConstants,
    pub within: bool,
}

/// Farthest excursion from `X_v` of geodesics between pairs of `X_v`; all
/// pairs when there are at most `sample_pairs`, otherwise a seeded sample.
pub fn quasiconvexity_measure(
    net: &RealizationNetwork,
    v: usize,
    sample_pairs: usize,
    seed: u64,
    u: &Uniformity,
) -> QuasiconvexityReport {
    let r: Vec<usize> = net.vertex_nodes(v).collect();
    let all: Vec<(usize, usize)> = (0..r.len()).flat_map(|i| (i..r.len()).map(move |j| (i, j))).collect();
    let exhaustive = all.len() <= sample_pairs;
    let pairs: Vec<(usize, usize)> = if exhaustive {
        all
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut idx = sample(&mut rng, all.len(), sample_pairs).into_vec();
        idx.sort_unstable();
        idx.into_iter().map(|k| all[k]).collect()
    };
    let to_xv = net.distances_to_set(&r);
    let measured = pairs
        .par_iter()
        .map(|&(i, j)| {
            let (_, nodes, _) = net.node_path(r[i], r[j]);
            nodes.iter().map(|&x| to_xv[x]).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let constants = BoundConstants::new(u.delta, u.c);
    QuasiconvexityReport {
        vertex: v,
        pairs: pairs.len(),
        exhaustive,
        seed,
        measured,
        constants,
        within: measured <= constants.sigma + TOL,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VisitReport {
    pub vertices: Vec<usize>,
    /// `n − d_Γ(v_1, v_n)`.
    pub defect: i64,
    /// Largest `d_{X_v}(x, y_v)` over interior points of the string.
    pub max_transfer_to_basepoint: f64,
    pub epsilon: f64,
    pub constants: BoundConstants,
    pub within: bool,
}

/// Vertex spaces visited by a string, in order, with its defect against Γ.
pub fn visited_vertex_sequence(net: &RealizationNetwork, path: &StringPath, u: &Uniformity) -> Result<VisitReport, GosError> {
    let gos = net.gos();
    let mut vertices: Vec<usize> = Vec::new();
    let mut max_transfer = 0.0f64;
    for (k, p) in path.points.iter().enumerate() {
        let node = net.resolve(p)?;
        let Some(v) = net.owner(node) else { continue };
        if vertices.last() != Some(&v) {
            vertices.push(v);
        }
        if k > 0 && k + 1 < path.points.len() {
            let y = gos.vertex_basepoint(v);
            max_transfer = max_transfer.max(net.vdm[v].get(node - net.offsets[v], y));
        }
    }
    let (Some(&first), Some(&last)) = (vertices.first(), vertices.last()) else {
        return Err(GosError::BadPoint("string visits no vertex space".into()));
    };
    let dg = gos.gamma_distances(first)[last];
    let defect = vertices.len() as i64 - dg as i64;
    let constants = BoundConstants::new(u.delta, u.c);
    Ok(VisitReport {
        vertices,
        defect,
        max_transfer_to_basepoint: max_transfer,
        epsilon: 0.0,
        constants,
        within: defect as f64 <= constants.k + TOL,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct NeighborhoodReport {
    pub r: f64,
    pub points: usize,
    pub diameter: f64,
}

/// Diameter of the nodes within `r` of both pieces.
pub fn neighborhood_intersection_diameter(net: &RealizationNetwork, a: Piece, b: Piece, r: f64) -> NeighborhoodReport {
    let da = net.distances_to_set(&net.piece_nodes(a));
    let db = net.distances_to_set(&net.piece_nodes(b));
    let set: Vec<usize> = (0..net.len()).filter(|&x| da[x] <= r + TOL && db[x] <= r + TOL).collect();
    let diameter = set
        .par_iter()
        .map(|&x| {
            let d = net.distances_from(x);
            set.iter().map(|&y| d[y]).fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    NeighborhoodReport { r, points: set.len(), diameter }
}

/// Spider with `legs` legs of `len` unit edges; root 0, leg `k` at depth
/// `i ≥ 1` is point `1 + k·len + i − 1`.
pub fn spider(legs: usize, len: usize) -> WeightedSpace {
    let mut wedges = Vec::with_capacity(legs * len);
    for k in 0..legs {
        for i in 1..=len {
            let prev = if i == 1 { 0 } else { spider_point(len, k, i - 1) };
            wedges.push((prev, spider_point(len, k, i), 1.0));
        }
    }
    WeightedSpace::new(1 + legs * len, wedges).expect("spider edges are valid")
}

pub fn spider_point(len: usize, leg: usize, depth: usize) -> usize {
    if depth == 0 {
        0
    } else {
        1 + leg * len + depth - 1
    }
}

/// Point set of one leg, root included.
pub fn spider_leg(len: usize, leg: usize) -> Vec<usize> {
    (0..=len).map(|i| spider_point(len, leg, i)).collect()
}

fn path_space(len: usize) -> WeightedSpace {
    WeightedSpace::new(len + 1, (0..len).map(|i| (i, i + 1, 1.0)).collect()).expect("path edges are valid")
}

#[derive(Clone, Debug)]
pub enum LegAssignment {
    /// Legs in increasing neighbour order at every vertex.
    Sorted,
    /// Sorted at one vertex per orbit and transported by Aut(Γ), so every
    /// automorphism maps legs to legs; needs a free action on vertices.
    OrbitConsistent(AutConfig),
}

/// Graph of spaces with spider vertex spaces and path edge spaces of length
/// `len` glued along legs. Legs beyond a vertex's degree stay unglued.
pub fn build_spider_gos(gamma: &Graph, legs: usize, len: usize, assign: &LegAssignment) -> Result<GraphOfSpaces, GosError> {
    let n = gamma.n();
    if len == 0 {
        return Err(GosError::Invalid("leg length must be positive".into()));
    }
    if let Some(v) = (0..n).find(|&v| gamma.degree(v) > legs) {
        return Err(GosError::Regularity { vertex: v, degree: gamma.degree(v), legs });
    }
    let leg_at = leg_table(gamma, assign)?;
    let edges = gamma.edges();
    let orient = edges.clone();
    let alpha_tail = edges.iter().map(|&(u, v)| spider_leg(len, leg_at[u][&v])).collect();
    let alpha_head = edges.iter().map(|&(u, v)| spider_leg(len, leg_at[v][&u])).collect();
    GraphOfSpaces::new(
        n,
        orient,
        vec![spider(legs, len); n],
        vec![path_space(len); edges.len()],
        alpha_tail,
        alpha_head,
        vec![0; edges.len()],
    )
}

fn leg_table(gamma: &Graph, assign: &LegAssignment) -> Result<Vec<BTreeMap<usize, usize>>, GosError> {
    let n = gamma.n();
    let sorted = |v: usize| gamma.neighbors(v).iter().enumerate().map(|(k, &x)| (x, k)).collect();
    match assign {
        LegAssignment::Sorted => Ok((0..n).map(sorted).collect()),
        LegAssignment::OrbitConsistent(cfg) => {
            let grp = automorphism_group_coloured(gamma, &vec![0; n], cfg)?;
            if !grp.acts_freely_on_vertices() {
                return Err(GosError::NotFree);
            }
            let cap = grp.order_u64().map_or(usize::MAX, |o| o as usize);
            let (_, elems) = FiniteGroup::perm_closure(n, &grp.generators, cap)?;
            let mut table: Vec<Option<BTreeMap<usize, usize>>> = vec![None; n];
            for r in 0..n {
                if table[r].is_some() {
                    continue;
                }
                for g in &elems {
                    let local = gamma.neighbors(r).iter().enumerate().map(|(k, &x)| (g[x], k)).collect();
                    table[g[r]] = Some(local);
                }
            }
            Ok(table.into_iter().map(|t| t.expect("free action covers every vertex")).collect())
        }
    }
}

/// Leg glued to edge `e` on `side`, read off the α-image of depth 1.
pub fn glued_leg(gos: &GraphOfSpaces, e: usize, side: Side, len: usize) -> usize {
    (gos.alpha(e, side)[1] - 1) / len
}

/// Whether each permutation of Γ carries the leg assignment to itself.
pub fn legs_respect(gos: &GraphOfSpaces, len: usize, perms: &[Vec<usize>]) -> bool {
    let mut leg: HashMap<(usize, usize), usize> = HashMap::new();
    for e in 0..gos.m() {
        let (t, h) = gos.orient[e];
        leg.insert((t, h), glued_leg(gos, e, Side::Tail, len));
        leg.insert((h, t), glued_leg(gos, e, Side::Head, len));
    }
    perms.iter().all(|g| leg.iter().all(|(&(u, x), &k)| leg.get(&(g[u], g[x])) == Some(&k)))
}

/// Isometries of a finite metric space preserving each ray setwise, as
/// automorphisms of the pair graph coloured by distance class.
pub fn ray_stabiliser(space: &WeightedSpace, rays: &[Vec<usize>], cap: usize) -> Result<PermGroup, GosError> {
    let n = space.n();
    if n > cap {
        return Err(GosError::TooLarge { n, cap });
    }
    if let Some(&x) = rays.iter().flatten().find(|&&x| x >= n) {
        return Err(GosError::BadPoint(x.to_string()));
    }
    let dm = all_pairs(space)?;
    let mut values: Vec<f64> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).map(|(i, j)| dm.get(i, j)).collect();
    values.sort_by(f64::total_cmp);
    let mut classes: Vec<f64> = Vec::new();
    for x in values {
        if classes.last().map_or(true, |&c| x - c > TOL) {
            classes.push(x);
        }
    }
    let class_of = |d: f64| classes.partition_point(|&c| c < d - TOL) as u64;
    // point colour = ray membership signature; pair vertices sit above 2^32
    let mut signature: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, ray) in rays.iter().enumerate() {
        for &x in ray {
            if signature[x].last() != Some(&k) {
                signature[x].push(k);
            }
        }
    }
    let mut sigs: Vec<&Vec<usize>> = signature.iter().collect();
    sigs.sort();
    sigs.dedup();
    let mut colours: Vec<u64> = signature.iter().map(|s| sigs.binary_search(&s).unwrap() as u64).collect();
    let mut g = Graph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            let p = g.add_vertex();
            g.add_edge(i, p)?;
            g.add_edge(j, p)?;
            colours.push((1 << 32) + class_of(dm.get(i, j)));
        }
    }
    let cfg = AutConfig::with_cap(g.n());
    let grp = automorphism_group_coloured(&g, &colours, &cfg)?;
    let generators = grp.generators.iter().map(|p| p[..n].to_vec()).collect();
    Ok(PermGroup { degree: n, generators, order: grp.order, base: grp.base.into_iter().filter(|&b| b < n).collect() })
}

/// True iff the only isometry fixing every ray setwise is the identity.
pub fn link_rigidity_check(space: &WeightedSpace, rays: &[Vec<usize>]) -> Result<bool, GosError> {
    Ok(ray_stabiliser(space, rays, DEFAULT_LINK_CAP)?.is_trivial())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RealizationDelta {
    /// Larger of the two scans below.
    pub delta: f64,
    pub network: FourPointReport,
    /// Exhaustive δ4 over the embedded copy of Γ (the basepoints).
    pub embedded_delta: f64,
    pub grid_step: f64,
    pub nodes: usize,
}

/// Interior cylinder points at multiples of `step`.
pub fn cylinder_grid(gos: &GraphOfSpaces, step: f64) -> Vec<GosPoint> {
    let k = (1.0 / step).round() as usize;
    let mut out = Vec::new();
    for e in 0..gos.m() {
        for y in 0..gos.edge_spaces[e].n() {
            out.extend((1..k).map(|i| i as f64 * step).filter(|&s| s < 1.0 - TOL).map(|s| GosPoint::Cylinder { e, y, s }));
        }
    }
    out
}

/// Four-point δ of the realisation sampled on vertex-space points plus a
/// cylinder grid, never below the exact value on the embedded graph.
pub fn realization_delta(gos: &GraphOfSpaces, grid_step: f64, samples: u64, seed: u64) -> Result<RealizationDelta, GosError> {
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(GosError::Invalid(format!("grid step {grid_step} not in (0, 1]")));
    }
    let net = realize_network(gos, &cylinder_grid(gos, grid_step))?;
    let dm = net.distance_matrix();
    let network = four_point_delta(&dm, &FourPointOptions { samples, seed, ..FourPointOptions::default() });
    let base: Vec<usize> = (0..gos.n).map(|v| net.basepoint_node(v)).collect();
    let embedded = four_point_delta(&dm.restrict(&base), &FourPointOptions { exhaustive_cap: 64, samples, seed });
    Ok(RealizationDelta {
        delta: network.delta.max(embedded.delta),
        network,
        embedded_delta: embedded.delta,
        grid_step,
        nodes: net.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BottleneckEntry {
    pub kappa: f64,
    pub k: f64,
    pub components: usize,
    pub deep_count: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BottleneckReport {
    pub vertex: usize,
    pub link_points: usize,
    pub entries: Vec<BottleneckEntry>,
}

pub const DEFAULT_KAPPAS: [f64; 3] = [0.5, 1.0, 2.0];
pub const DEFAULT_DEPTHS: [f64; 4] = [0.0, 1.0, 2.0, 4.0];

/// Deep-component counts of `X_v` minus the κ-neighbourhood of its link,
/// over a ladder of (κ, K). A diagnostic only.
pub fn bottleneck_profile(gos: &GraphOfSpaces, v: usize, kappas: &[f64], depths: &[f64]) -> Result<BottleneckReport, GosError> {
    let dm = all_pairs(&gos.vertex_spaces[v])?;
    let mut link: Vec<usize> = gos.incident(v).into_iter().flat_map(|(e, side)| gos.alpha(e, side).to_vec()).collect();
    link.sort_unstable();
    link.dedup();
    let mut entries = Vec::new();
    for &kappa in kappas {
        for &k in depths {
            let prof = coarse_separation_profile(&dm, &link, kappa, k);
            entries.push(BottleneckEntry { kappa, k, components: prof.components.len(), deep_count: prof.deep_count });
        }
    }
    Ok(BottleneckReport { vertex: v, link_points: link.len(), entries })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Cycle,
    Path,
    /// Binary tree on `n` vertices in heap order.
    Tree,
}

impl FromStr for Family {
    type Err = GosError;

    fn from_str(s: &str) -> Result<Self, GosError> {
        match s {
            "cycle" => Ok(Family::Cycle),
            "path" => Ok(Family::Path),
            "tree" => Ok(Family::Tree),
            _ => Err(GosError::Invalid(format!("unknown family {s:?} (cycle|path|tree)"))),
        }
    }
}

impl Family {
    pub fn gamma(self, n: usize) -> Result<Graph, GosError> {
        let edges: Vec<(usize, usize)> = match self {
            Family::Cycle if n < 3 => return Err(GosError::Invalid(format!("cycle needs n ≥ 3, got {n}"))),
            Family::Cycle => (0..n).map(|i| (i, (i + 1) % n)).collect(),
            Family::Path => (1..n).map(|i| (i - 1, i)).collect(),
            Family::Tree => (1..n).map(|i| ((i - 1) / 2, i)).collect(),
        };
        Ok(Graph::from_edges(n, &edges)?)
    }

    /// Spiders over the family member, legs = maximum degree.
    pub fn spider_gos(self, n: usize, len: usize) -> Result<GraphOfSpaces, GosError> {
        let g = self.gamma(n)?;
        build_spider_gos(&g, g.max_degree().max(1), len, &LegAssignment::Sorted)
    }
}

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub leg_length: usize,
    pub grid_step: f64,
    pub samples: u64,
    pub seed: u64,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions { leg_length: 2, grid_step: DEFAULT_GRID_STEP, samples: 100_000, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SweepRow {
    pub n: usize,
    pub gamma_delta: f64,
    pub realization_delta: f64,
    pub embedded_delta: f64,
    pub nodes: usize,
}

/// δ4 of Γ and of its spider realisation across a family.
pub fn sweep(family: Family, ns: &[usize], opts: &SweepOptions) -> Result<Vec<SweepRow>, GosError> {
    ns.iter()
        .map(|&n| {
            let g = family.gamma(n)?;
            let dg = DistanceMatrix::from_graph(&g)?;
            let gamma_delta =
                four_point_delta(&dg, &FourPointOptions { exhaustive_cap: 64, samples: opts.samples, seed: opts.seed }).delta;
            let gos = family.spider_gos(n, opts.leg_length)?;
            let rd = realization_delta(&gos, opts.grid_step, opts.samples, opts.seed)?;
            Ok(SweepRow { n, gamma_delta, realization_delta: rd.delta, embedded_delta: rd.embedded_delta, nodes: rd.nodes })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("n,gamma_delta4,realization_delta4\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", r.n, r.gamma_delta, r.realization_delta));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GosCheck {
    pub validation: GosValidation,
    pub uniformity: Option<Uniformity>,
    pub embedded: Option<EmbeddedGraphReport>,
    pub distortion: Vec<DistortionReport>,
    pub ok: bool,
}

/// Validation, uniformity constants, embedded-graph isometry and per-vertex
/// distortion in one report.
pub fn check(gos: &GraphOfSpaces) -> Result<GosCheck, GosError> {
    let validation = validate_gos(gos);
    if !validation.valid {
        return Ok(GosCheck { validation, uniformity: None, embedded: None, distortion: Vec::new(), ok: false });
    }
    let uniformity = uniformity_constants(gos)?;
    let net = realize_network(gos, &[])?;
    let embedded = embedded_graph_check(&net);
    let distortion: Vec<DistortionReport> =
        (0..gos.n).map(|v| vertex_embedding_distortion(&net, v, &uniformity)).collect();
    let ok = embedded.exact && distortion.iter().all(|d| d.within);
    Ok(GosCheck { validation, uniformity: Some(uniformity), embedded: Some(embedded), distortion, ok })
}
