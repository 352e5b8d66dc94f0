//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's metric or search code.
#![allow(dead_code)]

use forge_core::gos::GraphOfSpaces;
use forge_core::graph::Graph;
use forge_core::metric::WeightedSpace;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Floyd–Warshall on a weighted edge list.
pub fn floyd(n: usize, wedges: &[(usize, usize, f64)]) -> Vec<Vec<f64>> {
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
    }
    for &(u, v, w) in wedges {
        d[u][v] = d[u][v].min(w);
        d[v][u] = d[v][u].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

pub fn graph_floyd(g: &Graph) -> Vec<Vec<f64>> {
    let w: Vec<_> = g.edges().into_iter().map(|(u, v)| (u, v, 1.0)).collect();
    floyd(g.n(), &w)
}

/// Four-point defect straight from the definition: largest
/// `(min(⟨x,y⟩_w, ⟨y,z⟩_w) − ⟨x,z⟩_w) / 2` over all labelings of the four points.
pub fn defect_by_products(d: &[Vec<f64>], q: [usize; 4]) -> f64 {
    let gp = |a: usize, b: usize, c: usize| (d[a][c] + d[b][c] - d[a][b]) / 2.0;
    let mut best = f64::NEG_INFINITY;
    for perm in permutations(4) {
        let [x, y, z, w] = [q[perm[0]], q[perm[1]], q[perm[2]], q[perm[3]]];
        best = best.max((gp(x, y, w).min(gp(y, z, w)) - gp(x, z, w)) / 2.0);
    }
    best
}

pub fn delta_by_products(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    let mut best = 0.0f64;
    for x in 0..n {
        for y in x + 1..n {
            for z in y + 1..n {
                for w in z + 1..n {
                    best = best.max(defect_by_products(d, [x, y, z, w]));
                }
            }
        }
    }
    best
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Automorphisms by exhaustive search over all permutations.
pub fn brute_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let edges = g.edges();
    permutations(g.n())
        .into_iter()
        .filter(|p| edges.iter().all(|&(u, v)| g.has_edge(p[u], p[v])))
        .collect()
}

/// Closure of permutation generators by breadth-first multiplication.
pub fn closure(degree: usize, gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let id: Vec<usize> = (0..degree).collect();
    let mut seen = std::collections::HashSet::from([id.clone()]);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for s in gens {
            let p: Vec<usize> = (0..degree).map(|x| s[out[i][x]]).collect();
            if seen.insert(p.clone()) {
                out.push(p);
            }
        }
        i += 1;
    }
    out
}

/// No non-identity element fixes a vertex.
pub fn free_on_vertices(elems: &[Vec<usize>]) -> bool {
    elems.iter().all(|p| p.iter().enumerate().all(|(x, &y)| x != y) || p.iter().enumerate().all(|(x, &y)| x == y))
}

/// No non-identity element maps an edge to itself (either orientation).
pub fn free_on_edges(g: &Graph, elems: &[Vec<usize>]) -> bool {
    let edges = g.edges();
    elems.iter().all(|p| {
        let id = p.iter().enumerate().all(|(x, &y)| x == y);
        id || edges.iter().all(|&(u, v)| {
            let (a, b) = (p[u], p[v]);
            (a.min(b), a.max(b)) != (u, v)
        })
    })
}

/// All `k`-cliques by simple extension in increasing vertex order.
pub fn brute_cliques(g: &Graph, k: usize) -> Vec<Vec<usize>> {
    fn grow(g: &Graph, k: usize, cur: &mut Vec<usize>, cands: &[usize], out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for (i, &v) in cands.iter().enumerate() {
            let next: Vec<usize> = cands[i + 1..].iter().copied().filter(|&w| g.has_edge(v, w)).collect();
            if cur.len() + 1 + next.len() < k {
                continue;
            }
            cur.push(v);
            grow(g, k, cur, &next, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let all: Vec<usize> = (0..g.n()).collect();
    grow(g, k, &mut Vec::new(), &all, &mut out);
    out
}

pub fn bfs_connected(g: &Graph) -> bool {
    if g.n() == 0 {
        return true;
    }
    let mut seen = vec![false; g.n()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

const WEIGHTS: [f64; 5] = [0.5, 1.0, 1.5, 2.0, 3.0];

fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize, f64)> {
    (1..n).map(|i| (rng.gen_range(0..i), i, WEIGHTS[rng.gen_range(0..WEIGHTS.len())])).collect()
}

/// Seeded valid instance with at most three vertex spaces. Each vertex space
/// is a random weighted graph on a core containing the basepoint, with a copy
/// of every incident edge space hung from the basepoint, so the gluing maps
/// are isometric by construction.
pub fn random_gos(seed: u64) -> GraphOfSpaces {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=3);
    let mut orient: Vec<(usize, usize)> = match n {
        1 => vec![],
        2 => vec![(0, 1)],
        _ if rng.gen_bool(0.5) => vec![(0, 1), (1, 2)],
        _ => vec![(0, 1), (1, 2), (0, 2)],
    };
    for e in orient.iter_mut() {
        if rng.gen_bool(0.5) {
            *e = (e.1, e.0);
        }
    }
    let m = orient.len();
    let mut edge_wedges = Vec::new();
    let mut edge_sizes = Vec::new();
    let mut basepoints = Vec::new();
    for _ in 0..m {
        let ny = rng.gen_range(1..=4);
        edge_wedges.push(random_tree(&mut rng, ny));
        edge_sizes.push(ny);
        basepoints.push(rng.gen_range(0..ny));
    }
    let mut vertex_spaces = Vec::new();
    let mut alpha_tail = vec![Vec::new(); m];
    let mut alpha_head = vec![Vec::new(); m];
    for v in 0..n {
        let core = rng.gen_range(1..=5);
        let mut wedges = random_tree(&mut rng, core);
        for _ in 0..rng.gen_range(0..=2) {
            let (a, b) = (rng.gen_range(0..core), rng.gen_range(0..core));
            if a != b {
                wedges.push((a, b, WEIGHTS[rng.gen_range(0..WEIGHTS.len())]));
            }
        }
        let mut size = core;
        for (e, &(t, h)) in orient.iter().enumerate() {
            for (end, alpha) in [(t, &mut alpha_tail), (h, &mut alpha_head)] {
                if end != v {
                    continue;
                }
                let map: Vec<usize> = (0..edge_sizes[e])
                    .map(|y| {
                        if y == basepoints[e] {
                            0
                        } else {
                            size += 1;
                            size - 1
                        }
                    })
                    .collect();
                wedges.extend(edge_wedges[e].iter().map(|&(a, b, w)| (map[a], map[b], w)));
                alpha[e] = map;
            }
        }
        vertex_spaces.push(WeightedSpace::new(size, wedges).unwrap());
    }
    let edge_spaces = (0..m).map(|e| WeightedSpace::new(edge_sizes[e], edge_wedges[e].clone()).unwrap()).collect();
    GraphOfSpaces::new(n, orient, vertex_spaces, edge_spaces, alpha_tail, alpha_head, basepoints).unwrap()
}

/// Global index of every vertex-space point, in `(v, i)` order.
pub fn resident_points(gos: &GraphOfSpaces) -> Vec<(usize, usize)> {
    (0..gos.n).flat_map(|v| (0..gos.vertex_spaces[v].n()).map(move |i| (v, i))).collect()
}

/// Intrinsic distances between resident points as infima over strings of at
/// most `max_pieces` pieces. Pieces are the vertex spaces and the cylinders
/// `Y_e × [0,1]`, whose boundary points are identified with α-images.
pub fn string_oracle(gos: &GraphOfSpaces, max_pieces: usize) -> Vec<Vec<f64>> {
    let pts = resident_points(gos);
    let id = |v: usize, i: usize| pts.iter().position(|&p| p == (v, i)).unwrap();
    // each piece: member ids and their pairwise distances
    let mut pieces: Vec<(Vec<usize>, Vec<Vec<f64>>)> = Vec::new();
    for v in 0..gos.n {
        let s = &gos.vertex_spaces[v];
        pieces.push(((0..s.n()).map(|i| id(v, i)).collect(), floyd(s.n(), s.wedges())));
    }
    for e in 0..gos.m() {
        let y = &gos.edge_spaces[e];
        let dy = floyd(y.n(), y.wedges());
        let (t, h) = gos.orient[e];
        let mut members = Vec::new();
        let mut coords = Vec::new();
        for k in 0..y.n() {
            members.push(id(t, gos.alpha_tail[e][k]));
            coords.push((k, 0.0));
            members.push(id(h, gos.alpha_head[e][k]));
            coords.push((k, 1.0));
        }
        let d = coords
            .iter()
            .map(|&(a, s)| coords.iter().map(|&(b, r): &(usize, f64)| (dy[a][b].powi(2) + (s - r).powi(2)).sqrt()).collect())
            .collect();
        pieces.push((members, d));
    }
    (0..pts.len())
        .map(|src| {
            let mut best = vec![f64::INFINITY; pts.len()];
            best[src] = 0.0;
            for _ in 0..max_pieces {
                let mut next = best.clone();
                for (members, d) in &pieces {
                    for (a, &x) in members.iter().enumerate() {
                        if best[x].is_infinite() {
                            continue;
                        }
                        for (b, &y) in members.iter().enumerate() {
                            next[y] = next[y].min(best[x] + d[a][b]);
                        }
                    }
                }
                best = next;
            }
            best
        })
        .collect()
}

/// Triangle 0–1–2 where vertex 0 carries a two-leg spider (edges to 1 and 2
/// on separate legs of length `k`) while vertices 1 and 2 are single legs
/// shared by both of their edge images. Far leg ends of `X_0` are `2k` apart
/// inside `X_0` but only 3 apart through the other two spaces, and `C = k`.
pub fn shared_prefix_triangle(k: usize) -> GraphOfSpaces {
    use forge_core::gos::{spider, spider_leg};
    let path = WeightedSpace::new(k + 1, (0..k).map(|i| (i, i + 1, 1.0)).collect()).unwrap();
    let leg = |l: usize| spider_leg(k, l);
    GraphOfSpaces::new(
        3,
        vec![(0, 1), (1, 2), (2, 0)],
        vec![spider(2, k), spider(1, k), spider(1, k)],
        vec![path.clone(), path.clone(), path],
        vec![leg(0), leg(0), leg(0)],
        vec![leg(0), leg(0), leg(1)],
        vec![0, 0, 0],
    )
    .unwrap()
}
