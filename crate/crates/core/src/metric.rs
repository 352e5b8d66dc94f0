//! Finite metric spaces given by positively weighted graphs: shortest-path
//! metrics, Gromov products, hyperbolicity constants, coarse components.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::UnionFind;
use crate::graph::Graph;

/// Comparison tolerance for all real-valued distances.
pub const TOL: f64 = 1e-9;
pub const DEFAULT_EXHAUSTIVE_CAP: usize = 120;
pub const DEFAULT_SAMPLES: u64 = 200_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricError {
    #[error("space is not connected")]
    Disconnected,
    #[error("weight {0} on edge ({1}, {2}) is not a positive finite number")]
    BadWeight(f64, usize, usize),
    #[error("edge ({0}, {1}) invalid for {2} points")]
    BadEdge(usize, usize, usize),
}

/// Finite metric graph with positive edge weights.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSpace {
    n: usize,
    adj: Vec<Vec<(usize, f64)>>,
    wedges: Vec<(usize, usize, f64)>,
}

impl WeightedSpace {
    pub fn new(n: usize, wedges: Vec<(usize, usize, f64)>) -> Result<Self, MetricError> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v, w) in &wedges {
            if u >= n || v >= n || u == v {
                return Err(MetricError::BadEdge(u, v, n));
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(MetricError::BadWeight(w, u, v));
            }
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        Ok(WeightedSpace { n, adj, wedges })
    }

    pub fn from_graph(g: &Graph) -> Self {
        let wedges = g.edges().into_iter().map(|(u, v)| (u, v, 1.0)).collect();
        WeightedSpace::new(g.n(), wedges).expect("graph edges are valid unit edges")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn wedges(&self) -> &[(usize, usize, f64)] {
        &self.wedges
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adj[v]
    }

    /// Weight of the lightest edge between `u` and `v`, if any.
    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.adj[u].iter().filter(|e| e.0 == v).map(|e| e.1).min_by(f64::total_cmp)
    }

    pub fn dijkstra(&self, src: usize) -> Vec<f64> {
        dijkstra(self.n, |v| self.adj[v].iter().copied(), src)
    }

    pub fn to_json(&self) -> WeightedSpaceJson {
        WeightedSpaceJson { n: self.n, wedges: self.wedges.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedSpaceJson {
    pub n: usize,
    pub wedges: Vec<(usize, usize, f64)>,
}

impl TryFrom<WeightedSpaceJson> for WeightedSpace {
    type Error = MetricError;
    fn try_from(doc: WeightedSpaceJson) -> Result<Self, MetricError> {
        WeightedSpace::new(doc.n, doc.wedges)
    }
}

#[derive(Copy, Clone, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Single-source shortest paths over an arbitrary adjacency callback;
/// unreachable nodes get `f64::INFINITY`.
pub fn dijkstra<F, I>(n: usize, nbrs: F, src: usize) -> Vec<f64>
where
    F: Fn(usize) -> I,
    I: Iterator<Item = (usize, f64)>,
{
    let mut dist = vec![f64::INFINITY; n];
    dist[src] = 0.0;
    let mut heap = BinaryHeap::from([HeapItem(0.0, src)]);
    while let Some(HeapItem(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for (w, wt) in nbrs(v) {
            let nd = d + wt;
            if nd < dist[w] {
                dist[w] = nd;
                heap.push(HeapItem(nd, w));
            }
        }
    }
    dist
}

/// Dense symmetric distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n = rows.len();
        DistanceMatrix { n, d: rows.into_iter().flatten().collect() }
    }

    /// Hop metric of a connected graph.
    pub fn from_graph(g: &Graph) -> Result<Self, MetricError> {
        let n = g.n();
        let rows: Vec<Vec<usize>> = (0..n).into_par_iter().map(|s| g.bfs(s)).collect();
        let mut d = Vec::with_capacity(n * n);
        for row in rows {
            for x in row {
                if x == usize::MAX {
                    return Err(MetricError::Disconnected);
                }
                d.push(x as f64);
            }
        }
        Ok(DistanceMatrix { n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.d[i * self.n..(i + 1) * self.n]
    }

    pub fn diameter(&self) -> f64 {
        self.d.iter().copied().fold(0.0, f64::max)
    }

    /// Restriction to a subset of points, in the given order.
    pub fn restrict(&self, pts: &[usize]) -> DistanceMatrix {
        let rows = pts.iter().map(|&i| pts.iter().map(|&j| self.get(i, j)).collect()).collect();
        DistanceMatrix::from_rows(rows)
    }

    /// Checks symmetry, zero diagonal, positivity and the triangle inequality.
    pub fn is_metric(&self) -> bool {
        let n = self.n;
        for i in 0..n {
            if self.get(i, i).abs() > TOL {
                return false;
            }
            for j in 0..n {
                let dij = self.get(i, j);
                if (dij - self.get(j, i)).abs() > TOL || (i != j && dij <= 0.0) {
                    return false;
                }
                for k in 0..n {
                    if dij > self.get(i, k) + self.get(k, j) + TOL {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn all_pairs(ws: &WeightedSpace) -> Result<DistanceMatrix, MetricError> {
    let rows: Vec<Vec<f64>> = (0..ws.n()).into_par_iter().map(|s| ws.dijkstra(s)).collect();
    if rows.iter().any(|r| r.iter().any(|x| x.is_infinite())) {
        return Err(MetricError::Disconnected);
    }
    Ok(DistanceMatrix::from_rows(rows))
}

/// `⟨x, y⟩_z = (d(x,z) + d(y,z) − d(x,y)) / 2`.
pub fn gromov_product(dm: &DistanceMatrix, x: usize, y: usize, z: usize) -> f64 {
    (dm.get(x, z) + dm.get(y, z) - dm.get(x, y)) / 2.0
}

/// `⟨A, B⟩_z`: maximum of the pointwise products over `A × B`.
pub fn set_gromov_product(dm: &DistanceMatrix, a: &[usize], b: &[usize], z: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for &x in a {
        for &y in b {
            best = best.max(gromov_product(dm, x, y, z));
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FourPointReport {
    pub delta: f64,
    pub exhaustive: bool,
    pub seed: u64,
    /// Quadruples examined.
    pub samples: u64,
}

#[derive(Clone, Debug)]
pub struct FourPointOptions {
    pub exhaustive_cap: usize,
    pub samples: u64,
    pub seed: u64,
}

impl Default for FourPointOptions {
    fn default() -> Self {
        FourPointOptions { exhaustive_cap: DEFAULT_EXHAUSTIVE_CAP, samples: DEFAULT_SAMPLES, seed: 0 }
    }
}

/// Defect of one quadruple: with `S1 ≥ S2 ≥ S3` the three pair sums
/// `d(x,y)+d(z,w)` etc., the maximum over orderings of
/// `(min(⟨x,y⟩_w, ⟨y,z⟩_w) − ⟨x,z⟩_w) / 2` equals `(S1 − S2) / 4`.
#[inline]
pub fn quadruple_defect(dm: &DistanceMatrix, x: usize, y: usize, z: usize, w: usize) -> f64 {
    let a = dm.get(x, y) + dm.get(z, w);
    let b = dm.get(x, z) + dm.get(y, w);
    let c = dm.get(x, w) + dm.get(y, z);
    let (hi, mid) = if a >= b {
        if b >= c { (a, b) } else if a >= c { (a, c) } else { (c, a) }
    } else if a >= c {
        (b, a)
    } else if b >= c {
        (b, c)
    } else {
        (c, b)
    };
    (hi - mid) / 4.0
}

/// Four-point hyperbolicity constant; exhaustive over 4-subsets when
/// `n ≤ exhaustive_cap`, otherwise a seeded uniform sample.
pub fn four_point_delta(dm: &DistanceMatrix, opts: &FourPointOptions) -> FourPointReport {
    let n = dm.n();
    if n < 4 {
        return FourPointReport { delta: 0.0, exhaustive: true, seed: opts.seed, samples: 0 };
    }
    if n <= opts.exhaustive_cap {
        let delta = (0..n)
            .into_par_iter()
            .map(|x| {
                let mut best = 0.0f64;
                for y in x + 1..n {
                    for z in y + 1..n {
                        for w in z + 1..n {
                            best = best.max(quadruple_defect(dm, x, y, z, w));
                        }
                    }
                }
                best
            })
            .reduce(|| 0.0, f64::max);
        let samples = (n as u64) * (n as u64 - 1) * (n as u64 - 2) * (n as u64 - 3) / 24;
        return FourPointReport { delta, exhaustive: true, seed: opts.seed, samples };
    }
    let chunks = 64u64;
    let per = opts.samples.div_ceil(chunks);
    let delta = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(c);
            let mut best = 0.0f64;
            for _ in 0..per {
                let q: [usize; 4] = std::array::from_fn(|_| rng.gen_range(0..n));
                best = best.max(quadruple_defect(dm, q[0], q[1], q[2], q[3]));
            }
            best
        })
        .reduce(|| 0.0, f64::max);
    FourPointReport { delta, exhaustive: false, seed: opts.seed, samples: per * chunks }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ThinTriangleReport {
    pub delta: f64,
    /// True when some geodesic enumeration hit the cap, making `delta` a lower bound.
    pub lower_bound_only: bool,
    pub geodesic_cap: usize,
    /// Largest edge weight: how far the vertex-path restriction can move a fibre diameter.
    pub max_edge_weight: f64,
}

/// All shortest vertex paths from `x` to `y`, at most `cap` of them; the flag
/// reports whether the cap cut the enumeration short.
pub fn geodesics(ws: &WeightedSpace, dm: &DistanceMatrix, x: usize, y: usize, cap: usize) -> (Vec<Vec<usize>>, bool) {
    let mut out = Vec::new();
    let mut path = vec![x];
    let mut truncated = false;
    geodesic_walk(ws, dm, y, &mut path, &mut out, cap, &mut truncated);
    (out, truncated)
}

fn geodesic_walk(
    ws: &WeightedSpace,
    dm: &DistanceMatrix,
    y: usize,
    path: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    cap: usize,
    truncated: &mut bool,
) {
    let v = *path.last().unwrap();
    if v == y {
        if out.len() >= cap {
            *truncated = true;
        } else {
            out.push(path.clone());
        }
        return;
    }
    let mut next: Vec<usize> = ws
        .neighbors(v)
        .iter()
        .filter(|&&(w, wt)| (wt + dm.get(w, y) - dm.get(v, y)).abs() <= TOL)
        .map(|&(w, _)| w)
        .collect();
    next.sort_unstable();
    next.dedup();
    for w in next {
        if *truncated {
            return;
        }
        path.push(w);
        geodesic_walk(ws, dm, y, path, out, cap, truncated);
        path.pop();
    }
}

/// A point of the metric graph: offset `s` from `a` along an edge `a–b` of weight `w`.
#[derive(Copy, Clone, Debug)]
struct EdgePoint {
    a: usize,
    b: usize,
    w: f64,
    s: f64,
}

fn point_distance(dm: &DistanceMatrix, p: EdgePoint, q: EdgePoint) -> f64 {
    let mut best = f64::INFINITY;
    if p.a == q.a && p.b == q.b {
        best = (p.s - q.s).abs();
    } else if p.a == q.b && p.b == q.a {
        best = (p.s - (q.w - q.s)).abs();
    }
    for (alpha, da) in [(p.a, p.s), (p.b, p.w - p.s)] {
        for (beta, db) in [(q.a, q.s), (q.b, q.w - q.s)] {
            best = best.min(da + dm.get(alpha, beta) + db);
        }
    }
    best
}

/// Point at arc length `t` along a vertex path (clamped to the path).
fn point_on_path(ws: &WeightedSpace, path: &[usize], cum: &[f64], t: f64) -> EdgePoint {
    if path.len() == 1 {
        return EdgePoint { a: path[0], b: path[0], w: 0.0, s: 0.0 };
    }
    let mut i = cum.partition_point(|&c| c <= t).saturating_sub(1);
    if i >= path.len() - 1 {
        i = path.len() - 2;
    }
    let w = cum[i + 1] - cum[i];
    let s = (t - cum[i]).clamp(0.0, w);
    debug_assert!(ws.edge_weight(path[i], path[i + 1]).is_some());
    EdgePoint { a: path[i], b: path[i + 1], w, s }
}

fn cumulative(ws: &WeightedSpace, path: &[usize]) -> Vec<f64> {
    let mut cum = vec![0.0];
    for e in path.windows(2) {
        let w = ws.edge_weight(e[0], e[1]).expect("geodesic follows edges");
        cum.push(cum.last().unwrap() + w);
    }
    cum
}

/// `max_{t ∈ [0, T]} d(p(t), q(t))` for unit-speed points on two paths
/// leaving the same corner. On every interval where both points stay inside
/// fixed edges the distance is a minimum of functions of slope −2, 0 or 2,
/// so the maximum is attained at an interval end or at a crossing of two
/// such pieces; all of those are evaluated exactly.
fn corner_fibre_max(ws: &WeightedSpace, dm: &DistanceMatrix, p1: &[usize], p2: &[usize], t_max: f64) -> f64 {
    let c1 = cumulative(ws, p1);
    let c2 = cumulative(ws, p2);
    let mut cuts: Vec<f64> = c1.iter().chain(c2.iter()).copied().filter(|&t| t < t_max).collect();
    cuts.push(t_max);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup_by(|a, b| (*a - *b).abs() <= TOL);
    let eval = |t: f64| point_distance(dm, point_on_path(ws, p1, &c1, t), point_on_path(ws, p2, &c2, t));
    let mut best = 0.0f64;
    for win in cuts.windows(2) {
        let (t0, t1) = (win[0], win[1]);
        let mid = (t0 + t1) / 2.0;
        let p = point_on_path(ws, p1, &c1, mid);
        let q = point_on_path(ws, p2, &c2, mid);
        // offsets from each edge's start as affine functions of t
        let sp0 = p.s - (mid - t0);
        let sq0 = q.s - (mid - t0);
        // pieces (value at t0, slope)
        let mut pieces: Vec<(f64, f64)> = Vec::with_capacity(6);
        for (da0, sa) in [(sp0, 1.0), (p.w - sp0, -1.0)] {
            for (db0, sb) in [(sq0, 1.0), (q.w - sq0, -1.0)] {
                let alpha = if sa > 0.0 { p.a } else { p.b };
                let beta = if sb > 0.0 { q.a } else { q.b };
                pieces.push((da0 + dm.get(alpha, beta) + db0, sa + sb));
            }
        }
        if p.a == q.a && p.b == q.b {
            pieces.push((sp0 - sq0, 0.0));
            pieces.push((sq0 - sp0, 0.0));
        } else if p.a == q.b && p.b == q.a {
            pieces.push((sp0 - (q.w - sq0), 2.0));
            pieces.push(((q.w - sq0) - sp0, -2.0));
        }
        best = best.max(eval(t0)).max(eval(t1));
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                let (v1, m1) = pieces[i];
                let (v2, m2) = pieces[j];
                if (m1 - m2).abs() > TOL {
                    let t = t0 + (v2 - v1) / (m1 - m2);
                    if t > t0 && t < t1 {
                        best = best.max(eval(t));
                    }
                }
            }
        }
    }
    if cuts.len() == 1 {
        best = best.max(eval(cuts[0]));
    }
    best
}

/// Thin-triangle constant over all vertex triples and all combinations of
/// enumerated vertex-path geodesics.
pub fn thin_triangle_delta(ws: &WeightedSpace, geodesic_cap: usize) -> Result<ThinTriangleReport, MetricError> {
    let dm = all_pairs(ws)?;
    let n = ws.n();
    let mut geo: Vec<Vec<Vec<Vec<usize>>>> = vec![vec![Vec::new(); n]; n];
    let mut truncated = false;
    for x in 0..n {
        for y in 0..n {
            if x != y {
                let (paths, cut) = geodesics(ws, &dm, x, y, geodesic_cap);
                truncated |= cut;
                geo[x][y] = paths;
            }
        }
    }
    let triples: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|x| (x + 1..n).flat_map(move |y| (y + 1..n).map(move |z| (x, y, z))))
        .collect();
    let delta = triples
        .par_iter()
        .map(|&(x, y, z)| {
            // fibres at each corner depend only on the two sides through it
            let corner = |c: usize, u: usize, v: usize| {
                let t = gromov_product(&dm, u, v, c);
                let mut best = 0.0f64;
                for g1 in &geo[c][u] {
                    for g2 in &geo[c][v] {
                        best = best.max(corner_fibre_max(ws, &dm, g1, g2, t));
                    }
                }
                best
            };
            corner(x, y, z).max(corner(y, x, z)).max(corner(z, x, y))
        })
        .reduce(|| 0.0, f64::max);
    let max_edge_weight = ws.wedges().iter().map(|e| e.2).fold(0.0, f64::max);
    Ok(ThinTriangleReport { delta, lower_bound_only: truncated, geodesic_cap, max_edge_weight })
}

/// Partition of `pts` into classes joined by chains of steps of length ≤ κ.
pub fn coarse_components(dm: &DistanceMatrix, pts: &[usize], kappa: f64) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(pts.len());
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if dm.get(pts[i], pts[j]) <= kappa + TOL {
                uf.union(i, j);
            }
        }
    }
    let mut classes: Vec<Vec<usize>> = uf
        .classes()
        .into_iter()
        .map(|c| {
            let mut c: Vec<usize> = c.into_iter().map(|i| pts[i]).collect();
            c.sort_unstable();
            c
        })
        .collect();
    classes.sort();
    classes
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CoarseComponent {
    pub points: Vec<usize>,
    pub deep: bool,
    pub max_distance_to_z: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SeparationProfile {
    pub kappa: f64,
    pub k: f64,
    pub components: Vec<CoarseComponent>,
    pub deep_count: usize,
}

/// κ-components of the complement of the closed κ-ball around `z`, each
/// flagged deep when it reaches farther than `k` from `z`.
pub fn coarse_separation_profile(dm: &DistanceMatrix, z: &[usize], kappa: f64, k: f64) -> SeparationProfile {
    let dist_z: Vec<f64> = (0..dm.n())
        .map(|p| z.iter().map(|&q| dm.get(p, q)).fold(f64::INFINITY, f64::min))
        .collect();
    let outside: Vec<usize> = (0..dm.n()).filter(|&p| dist_z[p] > kappa + TOL).collect();
    let components: Vec<CoarseComponent> = coarse_components(dm, &outside, kappa)
        .into_iter()
        .map(|points| {
            let max_distance_to_z = points.iter().map(|&p| dist_z[p]).fold(0.0, f64::max);
            CoarseComponent { deep: max_distance_to_z > k + TOL, max_distance_to_z, points }
        })
        .collect();
    let deep_count = components.iter().filter(|c| c.deep).count();
    SeparationProfile { kappa, k, components, deep_count }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        let e: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &e).unwrap()
    }

    #[test]
    fn relaxation_shortcuts_heavy_edge() {
        let ws = WeightedSpace::new(3, vec![(0, 1, 1.0), (1, 2, 1.0), (0, 2, 5.0)]).unwrap();
        let dm = all_pairs(&ws).unwrap();
        assert_eq!(dm.get(0, 2), 2.0);
        assert!(dm.is_metric());
    }

    #[test]
    fn star_leaves_at_distance_two() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let dm = all_pairs(&WeightedSpace::from_graph(&g)).unwrap();
        for a in 1..5 {
            for b in a + 1..5 {
                assert_eq!(dm.get(a, b), 2.0);
            }
        }
    }

    #[test]
    fn disconnected_space_rejected() {
        let ws = WeightedSpace::new(3, vec![(0, 1, 1.0)]).unwrap();
        assert_eq!(all_pairs(&ws), Err(MetricError::Disconnected));
        assert!(WeightedSpace::new(2, vec![(0, 1, 0.0)]).is_err());
    }

    #[test]
    fn path_products() {
        let dm = DistanceMatrix::from_graph(&path(4)).unwrap();
        assert_eq!(gromov_product(&dm, 0, 3, 0), 0.0);
        assert_eq!(set_gromov_product(&dm, &[0], &[0], 0), 0.0);
    }

    #[test]
    fn four_cycle_delta_is_half() {
        let dm = DistanceMatrix::from_graph(&cycle(4)).unwrap();
        let r = four_point_delta(&dm, &FourPointOptions::default());
        assert_eq!(r.delta, 0.5);
        assert!(r.exhaustive);
    }

    #[test]
    fn sampling_is_reproducible() {
        let dm = DistanceMatrix::from_graph(&cycle(30)).unwrap();
        let opts = FourPointOptions { exhaustive_cap: 10, samples: 5000, seed: 7 };
        let a = four_point_delta(&dm, &opts);
        assert!(!a.exhaustive);
        assert_eq!(a, four_point_delta(&dm, &opts));
    }

    #[test]
    fn tree_is_thin() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let r = thin_triangle_delta(&WeightedSpace::from_graph(&g), 100).unwrap();
        assert_eq!(r.delta, 0.0);
        assert!(!r.lower_bound_only);
    }

    #[test]
    fn geodesic_cap_flags_lower_bound() {
        let r = thin_triangle_delta(&WeightedSpace::from_graph(&cycle(4)), 1).unwrap();
        assert!(r.lower_bound_only);
    }

    #[test]
    fn line_separation() {
        let dm = DistanceMatrix::from_graph(&path(101)).unwrap();
        let prof = coarse_separation_profile(&dm, &[50], 1.0, 10.0);
        assert_eq!(prof.components.len(), 2);
        assert_eq!(prof.deep_count, 2);
        let all: Vec<usize> = (0..101).collect();
        assert!(coarse_separation_profile(&dm, &all, 1.0, 10.0).components.is_empty());
    }

    #[test]
    fn coarse_component_thresholds() {
        let rows = [0.0f64, 1.0, 2.0, 10.0, 11.0];
        let dm = DistanceMatrix::from_rows(rows.iter().map(|a| rows.iter().map(|b| (a - b).abs()).collect()).collect());
        let pts: Vec<usize> = (0..5).collect();
        assert_eq!(coarse_components(&dm, &pts, 1.0), vec![vec![0, 1, 2], vec![3, 4]]);
        assert_eq!(coarse_components(&dm, &pts, 11.0).len(), 1);
        assert_eq!(coarse_components(&dm, &pts, 0.5).len(), 5);
    }
}
