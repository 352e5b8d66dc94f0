//! Rigid-graph synthesis: tags, edge gadgets, label blow-up, cubic and
//! d-regular stages, and the end-to-end builder with certificates.
//!
//! Every construction here is deterministic for a fixed seed, and every
//! returned graph has passed the automorphism checks its contract promises.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Instant;

use num_bigint::BigUint;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aut::{
    self, label_preserving_automorphisms, AutConfig, AutError, Count, PermGroup,
};
use crate::graph::{
    block_decomposition, clique_graph, cliques_of_size, Graph, GraphError, LabelledGraph,
};
use crate::groups::{
    cayley_graph, groups_isomorphic, normalize_generating_set, FiniteGroup, GeneratingSet,
    GroupError, DEFAULT_ISO_CAP,
};
use crate::metric::{four_point_delta, DistanceMatrix, FourPointOptions};

/// Frucht graph edge removed to make the bit-0 block.
pub const BIT0_EDGE: (usize, usize) = (0, 1);
/// Frucht graph edge removed to make the cap block.
pub const CAP_EDGE: (usize, usize) = (6, 7);
pub const DEFAULT_PENDANT_RETRIES: usize = 1000;
pub const DEFAULT_SEARCH_BUDGET: usize = 100_000;
/// Bound on the four-point constant of blocks inside tags and gadgets.
pub const BLOCK_DELTA4_BOUND: f64 = 10.0;

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("unknown block design {0:?}")]
    UnknownDesign(String),
    #[error("invalid word {0:?}: expected a nonempty string of 0/1")]
    BadWord(String),
    #[error("no word reserved for label {0:?} with role {1}")]
    MissingReservation(String, Role),
    #[error("gate failed at {stage}: {reason}")]
    Gate { stage: String, reason: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("m must be odd (got m = {0})")]
    EvenOrder(usize),
    #[error("even degree unsupported (parity obstruction)")]
    EvenDegree,
    #[error(
        "pendant search exhausted for d = {d}, m = {m} after {retries} retries \
         (stuck {stuck}, disconnected {disconnected}, symmetric {symmetric}, with d-clique {clique})"
    )]
    PendantExhausted {
        d: usize,
        m: usize,
        retries: usize,
        stuck: usize,
        disconnected: usize,
        symmetric: usize,
        clique: usize,
    },
    #[error("search budget of {0} candidates exhausted")]
    BudgetExhausted(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Aut(#[from] AutError),
}

fn gate(stage: &str, reason: impl Into<String>) -> SynthError {
    SynthError::Gate { stage: stage.to_string(), reason: reason.into() }
}

/// The Frucht graph: cubic, 12 vertices, trivial automorphism group.
pub fn frucht_graph() -> Graph {
    const LCF: [i32; 12] = [-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2];
    let mut g = Graph::new(12);
    for i in 0..12 {
        g.add_edge(i, (i + 1) % 12).unwrap();
    }
    for (i, &k) in LCF.iter().enumerate() {
        let j = (i as i32 + k).rem_euclid(12) as usize;
        if !g.has_edge(i, j) {
            g.add_edge(i, j).unwrap();
        }
    }
    g
}

fn frucht_minus(e: (usize, usize)) -> Graph {
    let mut g = frucht_graph();
    assert!(g.remove_edge(e.0, e.1));
    g
}

/// Which pair of bit blocks and which cap a tag is built from.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlockDesign {
    /// Bit 1 is a plain rung, bit 0 a rung through Frucht minus one edge,
    /// capped by Frucht minus another edge.
    Reference,
    /// Both bits are plain rungs and the cap is a diamond; deliberately
    /// symmetric, kept as a negative control for the gate.
    SymmetricControl,
}

impl BlockDesign {
    pub fn from_name(name: &str) -> Result<Self, SynthError> {
        match name {
            "reference" => Ok(BlockDesign::Reference),
            "symmetric-control" => Ok(BlockDesign::SymmetricControl),
            _ => Err(SynthError::UnknownDesign(name.to_string())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TagSpec {
    pub word: Vec<bool>,
    pub design: BlockDesign,
}

impl TagSpec {
    pub fn parse(word: &str, design: BlockDesign) -> Result<Self, SynthError> {
        if word.is_empty() || !word.bytes().all(|b| b == b'0' || b == b'1') {
            return Err(SynthError::BadWord(word.to_string()));
        }
        Ok(TagSpec { word: word.bytes().map(|b| b == b'1').collect(), design })
    }

    pub fn word_string(&self) -> String {
        self.word.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

/// A tag with its attachment leaf.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tag {
    pub graph: Graph,
    pub leaf: usize,
}

/// Ladder tag: leaf – head – two rails carrying one rung block per bit,
/// closed by a cap block. Vertex 0 is the leaf, 1 the head.
pub fn tag_graph(spec: &TagSpec) -> Result<Tag, SynthError> {
    if spec.word.is_empty() {
        return Err(SynthError::BadWord(String::new()));
    }
    let l = spec.word.len();
    let mut g = Graph::new(2 + 2 * l);
    let (leaf, head) = (0, 1);
    let r = |i: usize| 2 + 2 * i;
    let s = |i: usize| 3 + 2 * i;
    g.add_edge(leaf, head)?;
    g.add_edge(head, r(0))?;
    g.add_edge(head, s(0))?;
    for i in 0..l {
        if i + 1 < l {
            g.add_edge(r(i), r(i + 1))?;
            g.add_edge(s(i), s(i + 1))?;
        }
        match (spec.design, spec.word[i]) {
            (BlockDesign::Reference, false) => {
                let off = g.append(&frucht_minus(BIT0_EDGE));
                g.add_edge(r(i), off + BIT0_EDGE.0)?;
                g.add_edge(s(i), off + BIT0_EDGE.1)?;
            }
            _ => g.add_edge(r(i), s(i))?,
        }
    }
    let (x, y) = match spec.design {
        BlockDesign::Reference => {
            let off = g.append(&frucht_minus(CAP_EDGE));
            (off + CAP_EDGE.0, off + CAP_EDGE.1)
        }
        BlockDesign::SymmetricControl => {
            // K4 minus the edge x–y
            let off = g.add_vertices(4);
            for (a, b) in [(0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
                g.add_edge(off + a, off + b)?;
            }
            (off, off + 1)
        }
    };
    g.add_edge(r(l - 1), x)?;
    g.add_edge(s(l - 1), y)?;
    Ok(Tag { graph: g, leaf })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TagFamilyCertificate {
    pub design: BlockDesign,
    pub words: Vec<String>,
    pub sizes: Vec<usize>,
    pub all_rigid: bool,
    pub unique_leaf: bool,
    pub pairwise_non_isomorphic: bool,
    pub isomorphism_tests: usize,
}

/// Gate over a family of tags: each rigid with a unique leaf, and no two
/// isomorphic. Any violation is an error naming the offending words.
pub fn verify_tag_family(
    words: &[String],
    design: BlockDesign,
    cfg: &AutConfig,
) -> Result<TagFamilyCertificate, SynthError> {
    const STAGE: &str = "tag family";
    for (i, w) in words.iter().enumerate() {
        if words[..i].contains(w) {
            return Err(gate(STAGE, format!("duplicate word {w}")));
        }
    }
    let tags: Vec<Tag> = words
        .iter()
        .map(|w| tag_graph(&TagSpec::parse(w, design)?))
        .collect::<Result<_, _>>()?;
    for (w, t) in words.iter().zip(&tags) {
        let leaves: Vec<usize> = (0..t.graph.n()).filter(|&v| t.graph.degree(v) == 1).collect();
        let others_cubic = (0..t.graph.n()).all(|v| v == t.leaf || t.graph.degree(v) == 3);
        if leaves != vec![t.leaf] || !others_cubic {
            return Err(gate(STAGE, format!("tag {w} does not have a unique leaf with all else cubic")));
        }
        let grp = aut::automorphism_group(&t.graph, cfg)?;
        if !grp.is_trivial() {
            return Err(gate(STAGE, format!("tag {w} has {} automorphisms", grp.order)));
        }
    }
    let mut tests = 0;
    for i in 0..tags.len() {
        for j in i + 1..tags.len() {
            tests += 1;
            if aut::graphs_isomorphic(&tags[i].graph, &tags[j].graph, cfg)?.is_some() {
                return Err(gate(STAGE, format!("tags {} and {} are isomorphic", words[i], words[j])));
            }
        }
    }
    Ok(TagFamilyCertificate {
        design,
        words: words.to_vec(),
        sizes: tags.iter().map(|t| t.graph.n()).collect(),
        all_rigid: true,
        unique_leaf: true,
        pairwise_non_isomorphic: true,
        isomorphism_tests: tests,
    })
}

/// Position of a tag inside an edge gadget.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Role {
    Src,
    Mid,
    Tgt,
    A,
    B,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Role::Src => "SRC",
            Role::Mid => "MID",
            Role::Tgt => "TGT",
            Role::A => "A",
            Role::B => "B",
        };
        f.write_str(s)
    }
}

/// Injective assignment of words to (label, role) pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordReservation {
    pub seed: u64,
    pub length: usize,
    pub design: BlockDesign,
    pub words: BTreeMap<String, BTreeMap<Role, String>>,
}

impl WordReservation {
    /// Reserves words for every label; `labels` maps each token to whether it
    /// is directed. Seed `s` takes the `s`-th block of consecutive words in
    /// the enumeration by (number of zeros, lexicographic), skipping all-ones.
    pub fn new(labels: &BTreeMap<String, bool>, seed: u64) -> Self {
        let pairs: Vec<(String, Role)> = labels
            .iter()
            .flat_map(|(l, &directed)| {
                let roles: &[Role] = if directed { &[Role::Src, Role::Mid, Role::Tgt] } else { &[Role::A, Role::B] };
                roles.iter().map(move |&r| (l.clone(), r))
            })
            .collect();
        let need = pairs.len().max(1);
        let mut length = (usize::BITS - (need - 1).leading_zeros()) as usize + 1;
        while (1u128 << length) - 1 < (seed as u128 + 1) * need as u128 {
            length += 1;
        }
        let mut all: Vec<u64> = (0..(1u64 << length) - 1).collect();
        all.sort_by_key(|&x| (length as u32 - x.count_ones(), x));
        let start = seed as usize * need;
        let mut words: BTreeMap<String, BTreeMap<Role, String>> = BTreeMap::new();
        for (k, (label, role)) in pairs.into_iter().enumerate() {
            let x = all[start + k];
            let w: String = (0..length).rev().map(|b| if x >> b & 1 == 1 { '1' } else { '0' }).collect();
            words.entry(label).or_default().insert(role, w);
        }
        WordReservation { seed, length, design: BlockDesign::Reference, words }
    }

    pub fn word(&self, label: &str, role: Role) -> Result<&str, SynthError> {
        self.words
            .get(label)
            .and_then(|m| m.get(&role))
            .map(String::as_str)
            .ok_or_else(|| SynthError::MissingReservation(label.to_string(), role))
    }

    pub fn tag(&self, label: &str, role: Role) -> Result<Tag, SynthError> {
        tag_graph(&TagSpec::parse(self.word(label, role)?, self.design)?)
    }
}

/// Where an output vertex came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "camelCase")]
pub enum Origin {
    /// Vertex of the input graph of the stage.
    Base { vertex: usize },
    /// Internal vertex of the gadget replacing edge number `instance`.
    Gadget { instance: usize, role: String },
    /// Vertex `local` of a tag hung inside gadget `instance`.
    Tag { instance: usize, role: Role, local: usize },
    /// Vertex of a fixed auxiliary graph (Frucht copy, cover sheet, ...).
    Aux { instance: usize, local: usize },
    /// Vertex `local` of the P-gadget copy that replaced `vertex`.
    Pendant { vertex: usize, local: usize },
}

impl Origin {
    /// Gadget, tag or P-copy instance this vertex belongs to, if any.
    pub fn instance(&self) -> Option<usize> {
        match *self {
            Origin::Base { .. } => None,
            Origin::Gadget { instance, .. }
            | Origin::Tag { instance, .. }
            | Origin::Aux { instance, .. } => Some(instance),
            Origin::Pendant { vertex, .. } => Some(vertex),
        }
    }
}

/// Copies `tag` into `g`, identifying its leaf with `at`; records origins.
fn hang_tag(g: &mut Graph, origin: &mut Vec<Origin>, at: usize, tag: &Tag, instance: usize, role: Role) {
    let mut map = vec![usize::MAX; tag.graph.n()];
    map[tag.leaf] = at;
    for v in 0..tag.graph.n() {
        if v != tag.leaf {
            map[v] = g.add_vertex();
            origin.push(Origin::Tag { instance, role, local: v });
        }
    }
    for (u, v) in tag.graph.edges() {
        g.add_edge(map[u], map[v]).expect("fresh tag copy");
    }
}

/// An edge gadget with its two ports.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub graph: Graph,
    pub ports: (usize, usize),
    pub origin: Vec<Origin>,
}

/// Path `a – m – b` carrying SRC, MID and TGT tags; `a` attaches to the tail.
pub fn gadget_directed(label: &str, res: &WordReservation) -> Result<Gadget, SynthError> {
    let tags = [res.tag(label, Role::Src)?, res.tag(label, Role::Mid)?, res.tag(label, Role::Tgt)?];
    let mut g = Graph::new(3);
    let mut origin: Vec<Origin> = ["a", "m", "b"]
        .iter()
        .map(|r| Origin::Gadget { instance: 0, role: r.to_string() })
        .collect();
    g.add_edge(0, 1)?;
    g.add_edge(1, 2)?;
    for (at, (tag, role)) in tags.iter().zip([Role::Src, Role::Mid, Role::Tgt]).enumerate() {
        hang_tag(&mut g, &mut origin, at, tag, 0, role);
    }
    Ok(Gadget { graph: g, ports: (0, 2), origin })
}

/// Six-cycle `a, p1, p2, b, q2, q1` with A-tags on `p1, q2` and B-tags on
/// `p2, q1`; its only non-trivial symmetry swaps the ports.
pub fn gadget_undirected(label: &str, res: &WordReservation) -> Result<Gadget, SynthError> {
    let ta = res.tag(label, Role::A)?;
    let tb = res.tag(label, Role::B)?;
    let names = ["a", "p1", "p2", "b", "q2", "q1"];
    let mut g = Graph::new(6);
    let mut origin: Vec<Origin> =
        names.iter().map(|r| Origin::Gadget { instance: 0, role: r.to_string() }).collect();
    for i in 0..6 {
        g.add_edge(i, (i + 1) % 6)?;
    }
    hang_tag(&mut g, &mut origin, 1, &ta, 0, Role::A);
    hang_tag(&mut g, &mut origin, 4, &ta, 0, Role::A);
    hang_tag(&mut g, &mut origin, 2, &tb, 0, Role::B);
    hang_tag(&mut g, &mut origin, 5, &tb, 0, Role::B);
    Ok(Gadget { graph: g, ports: (0, 3), origin })
}

/// Output of a construction stage with per-vertex provenance.
#[derive(Clone, Debug)]
pub struct Built {
    pub graph: Graph,
    pub origin: Vec<Origin>,
}

/// Replaces every labelled edge by its gadget (tail side at port `a` for
/// directed labels); unlabelled edges are kept.
pub fn blow_up_labelled(lg: &LabelledGraph, res: &WordReservation, cfg: &AutConfig) -> Result<Built, SynthError> {
    const STAGE: &str = "blow-up";
    if !lg.base.is_regular(3) {
        return Err(SynthError::Precondition("labelled graph is not 3-regular".into()));
    }
    let grp = label_preserving_automorphisms(lg, cfg)?;
    if !grp.acts_freely_on_vertices() {
        return Err(SynthError::Precondition("label-preserving automorphisms are not free on vertices".into()));
    }
    let n = lg.base.n();
    let mut g = Graph::new(n);
    let mut origin: Vec<Origin> = (0..n).map(|vertex| Origin::Base { vertex }).collect();
    let mut cache: HashMap<(String, bool), Gadget> = HashMap::new();
    for (instance, (u, v)) in lg.base.edges().into_iter().enumerate() {
        let Some(label) = lg.label(u, v) else {
            g.add_edge(u, v)?;
            continue;
        };
        let key = (label.label.clone(), label.dir.is_some());
        if !cache.contains_key(&key) {
            let gadget = if label.dir.is_some() {
                gadget_directed(&label.label, res)?
            } else {
                gadget_undirected(&label.label, res)?
            };
            cache.insert(key.clone(), gadget);
        }
        let gadget = &cache[&key];
        let off = g.append(&gadget.graph);
        origin.extend(gadget.origin.iter().map(|o| match o {
            Origin::Gadget { role, .. } => Origin::Gadget { instance, role: role.clone() },
            Origin::Tag { role, local, .. } => Origin::Tag { instance, role: *role, local: *local },
            other => other.clone(),
        }));
        let (tail, head) = label.dir.unwrap_or((u, v));
        g.add_edge(tail, off + gadget.ports.0)?;
        g.add_edge(off + gadget.ports.1, head)?;
    }
    if !g.is_regular(3) || !g.is_connected() {
        return Err(gate(STAGE, "output is not a connected cubic graph"));
    }
    Ok(Built { graph: g, origin })
}

/// Incidence slot of a Cayley-graph edge at one endpoint.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Slot {
    label: String,
    kind: u8, // 0 outgoing, 1 incoming, 2 undirected
    other: usize,
}

/// Replaces every vertex of degree `k > 3` by a directed path with `k − 2`
/// vertices; the two ends take two incident edges, the interior vertices one,
/// in the order given by (label, direction). Path edges are labelled
/// `p1..p{k−3}`. Returns the new graph and, per new vertex, its source vertex.
pub fn three_regularize(lg: &LabelledGraph) -> Result<(LabelledGraph, Vec<usize>), SynthError> {
    let n = lg.base.n();
    let k = if n == 0 { 0 } else { lg.base.degree(0) };
    if k < 3 || !lg.base.is_regular(k) {
        return Err(SynthError::Precondition(format!("expected a regular graph of degree ≥ 3, found degree {k}")));
    }
    if k == 3 {
        return Ok((lg.clone(), (0..n).collect()));
    }
    let per = k - 2;
    let mut slot_vertex: HashMap<(usize, usize), usize> = HashMap::new();
    for v in 0..n {
        let mut slots: Vec<Slot> = lg
            .base
            .neighbors(v)
            .iter()
            .map(|&w| {
                let l = lg.label(v, w).ok_or_else(|| SynthError::Precondition(format!("edge ({v}, {w}) is unlabelled")))?;
                let kind = match l.dir {
                    Some((t, _)) if t == v => 0,
                    Some(_) => 1,
                    None => 2,
                };
                Ok(Slot { label: l.label.clone(), kind, other: w })
            })
            .collect::<Result<_, SynthError>>()?;
        slots.sort();
        for win in slots.windows(2) {
            if win[0].label == win[1].label && win[0].kind == win[1].kind {
                return Err(SynthError::Precondition(format!("vertex {v} has two {} slots", win[0].label)));
            }
        }
        for (i, s) in slots.iter().enumerate() {
            let pos = if i < 2 { 0 } else if i >= k - 2 { per - 1 } else { i - 1 };
            slot_vertex.insert((v, s.other), v * per + pos);
        }
    }
    let mut base = Graph::new(n * per);
    let mut labels = Vec::new();
    for v in 0..n {
        for i in 0..per - 1 {
            base.add_edge(v * per + i, v * per + i + 1)?;
            labels.push((v * per + i, v * per + i + 1, format!("p{}", i + 1), true));
        }
    }
    for (u, v) in lg.base.edges() {
        let (a, b) = (slot_vertex[&(u, v)], slot_vertex[&(v, u)]);
        base.add_edge(a, b)?;
        let l = lg.label(u, v).unwrap();
        match l.dir {
            Some((t, _)) if t == u => labels.push((a, b, l.label.clone(), true)),
            Some(_) => labels.push((b, a, l.label.clone(), true)),
            None => labels.push((a, b, l.label.clone(), false)),
        }
    }
    let mut out = LabelledGraph::new(base);
    for (t, h, l, directed) in labels {
        out.set_label(t, h, l, directed.then_some((t, h)))?;
    }
    Ok((out, (0..n * per).map(|x| x / per).collect()))
}

fn pairing(degrees: &[usize], rng: &mut ChaCha8Rng) -> Vec<(usize, usize)> {
    let mut stubs: Vec<usize> = degrees.iter().enumerate().flat_map(|(v, &d)| std::iter::repeat(v).take(d)).collect();
    stubs.shuffle(rng);
    stubs.chunks(2).map(|c| (c[0], c[1])).collect()
}

/// Sequential configuration model: stubs are paired one at a time, each with
/// a uniformly random stub that keeps the graph simple. `None` when stuck.
fn simple_with_degrees(degrees: &[usize], rng: &mut ChaCha8Rng) -> Option<Graph> {
    let mut g = Graph::new(degrees.len());
    let mut stubs: Vec<usize> = degrees.iter().enumerate().flat_map(|(v, &d)| std::iter::repeat(v).take(d)).collect();
    stubs.shuffle(rng);
    while let Some(u) = stubs.pop() {
        let ok: Vec<usize> = (0..stubs.len()).filter(|&i| stubs[i] != u && !g.has_edge(u, stubs[i])).collect();
        if ok.is_empty() {
            return None;
        }
        let v = stubs.swap_remove(ok[rng.gen_range(0..ok.len())]);
        g.add_edge(u, v).expect("checked simple");
    }
    Some(g)
}

fn complement(g: &Graph) -> Graph {
    let n = g.n();
    let mut h = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) {
                h.add_edge(u, v).unwrap();
            }
        }
    }
    h
}

/// Rigid connected graph on `m` vertices with one root of degree `d − 1`,
/// all other vertices of degree `d`, and no `d`-clique. Vertex 0 is the root.
#[derive(Clone, Debug)]
pub struct Pendant {
    pub graph: Graph,
    pub root: usize,
    pub attempts: usize,
}

pub fn asymmetric_pendant(
    d: usize,
    m: usize,
    rng: &mut ChaCha8Rng,
    retries: usize,
    cfg: &AutConfig,
) -> Result<Pendant, SynthError> {
    if d < 5 || d % 2 == 0 {
        return Err(SynthError::Precondition(format!("d must be odd and at least 5 (got {d})")));
    }
    if m % 2 == 0 {
        return Err(SynthError::EvenOrder(m));
    }
    if m < d + 2 {
        return Err(SynthError::Precondition(format!("m must be at least d + 2 = {}", d + 2)));
    }
    // generate whichever of the graph and its complement is sparser
    let via_complement = m - 1 - d < d;
    let degrees: Vec<usize> = (0..m)
        .map(|v| {
            let target = if v == 0 { d - 1 } else { d };
            if via_complement { m - 1 - target } else { target }
        })
        .collect();
    let (mut stuck, mut disconnected, mut symmetric, mut clique) = (0, 0, 0, 0);
    for attempt in 1..=retries {
        let Some(h) = simple_with_degrees(&degrees, rng) else {
            stuck += 1;
            continue;
        };
        let g = if via_complement { complement(&h) } else { h };
        if !g.is_connected() {
            disconnected += 1;
            continue;
        }
        if !aut::automorphism_group(&g, cfg)?.is_trivial() {
            symmetric += 1;
            continue;
        }
        if !cliques_of_size(&g, d)?.is_empty() {
            clique += 1;
            continue;
        }
        return Ok(Pendant { graph: g, root: 0, attempts: attempt });
    }
    Err(SynthError::PendantExhausted { d, m, retries, stuck, disconnected, symmetric, clique })
}

/// Default pendant orders `d + 4, d + 6, …` (`d − 3` of them).
pub fn default_pendant_orders(d: usize) -> Vec<usize> {
    (0..d - 3).map(|i| d + 4 + 2 * i).collect()
}

/// `K_d` core whose vertices `3..d` each carry a distinct rigid pendant;
/// core vertices `0, 1, 2` are the marked `u1, u2, u3`.
#[derive(Clone, Debug)]
pub struct PGadget {
    pub d: usize,
    pub graph: Graph,
    pub u: [usize; 3],
    pub core: Vec<usize>,
    pub pendant_orders: Vec<usize>,
    pub certificate: PGadgetCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PGadgetCertificate {
    pub n: usize,
    pub aut_order: u64,
    pub moves_only_u: bool,
    pub low_degree_vertices: usize,
    pub unique_d_clique: bool,
    pub pendant_attempts: Vec<usize>,
}

pub fn p_gadget(d: usize, pendant_orders: &[usize], seed: u64, cfg: &AutConfig) -> Result<PGadget, SynthError> {
    const STAGE: &str = "P-gadget";
    if d % 2 == 0 {
        return Err(SynthError::EvenDegree);
    }
    if pendant_orders.len() != d - 3 {
        return Err(SynthError::Precondition(format!("need {} pendant orders", d - 3)));
    }
    let mut sorted = pendant_orders.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != pendant_orders.len() {
        return Err(SynthError::Precondition("pendant orders must be distinct".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(d);
    for a in 0..d {
        for b in a + 1..d {
            g.add_edge(a, b)?;
        }
    }
    let mut attempts = Vec::new();
    for (i, &m) in pendant_orders.iter().enumerate() {
        let p = asymmetric_pendant(d, m, &mut rng, DEFAULT_PENDANT_RETRIES, cfg)?;
        attempts.push(p.attempts);
        let off = g.append(&p.graph);
        g.add_edge(3 + i, off + p.root)?;
    }
    let grp = aut::automorphism_group(&g, cfg)?;
    let moves_only_u = grp.generators.iter().all(|p| (3..g.n()).all(|v| p[v] == v));
    let low = (0..g.n()).filter(|&v| g.degree(v) != d).count();
    let cliques = cliques_of_size(&g, d)?;
    let core: Vec<usize> = (0..d).collect();
    let certificate = PGadgetCertificate {
        n: g.n(),
        aut_order: grp.order_u64().unwrap_or(u64::MAX),
        moves_only_u,
        low_degree_vertices: low,
        unique_d_clique: cliques == vec![core.clone()],
        pendant_attempts: attempts,
    };
    if certificate.aut_order != 6 || !moves_only_u {
        return Err(gate(STAGE, format!("|Aut(P)| = {} (expected 6 acting on u1, u2, u3)", grp.order)));
    }
    if low != 3 || (0..3).any(|u| g.degree(u) != d - 1) {
        return Err(gate(STAGE, "degree profile is not three (d−1)-vertices and the rest d"));
    }
    if !certificate.unique_d_clique {
        return Err(gate(STAGE, format!("{} d-cliques, expected exactly the core", cliques.len())));
    }
    Ok(PGadget { d, graph: g, u: [0, 1, 2], core, pendant_orders: pendant_orders.to_vec(), certificate })
}

/// Replaces each vertex of a cubic graph by a copy of P, joining the copies
/// of `u_k` across the edges matched to them (sorted neighbour order).
pub fn d_regularize_with(g: &Graph, p: &PGadget) -> Result<Built, SynthError> {
    if !g.is_regular(3) || !g.is_connected() {
        return Err(SynthError::Precondition("input must be a connected cubic graph".into()));
    }
    let np = p.graph.n();
    let mut out = Graph::new(0);
    let mut origin = Vec::with_capacity(g.n() * np);
    for v in 0..g.n() {
        out.append(&p.graph);
        origin.extend((0..np).map(|local| Origin::Pendant { vertex: v, local }));
    }
    let port = |v: usize, w: usize| {
        let k = g.neighbors(v).iter().position(|&x| x == w).expect("adjacent");
        v * np + p.u[k]
    };
    for (v, w) in g.edges() {
        out.add_edge(port(v, w), port(w, v))?;
    }
    Ok(Built { graph: out, origin })
}

/// Checks the cubic-graph preconditions, then builds with the default P gadget.
pub fn d_regularize(g: &Graph, d: usize, seed: u64, cfg: &AutConfig) -> Result<Built, SynthError> {
    if d % 2 == 0 {
        return Err(SynthError::EvenDegree);
    }
    if d < 5 {
        return Err(SynthError::Precondition(format!("d must be odd and at least 5 (got {d})")));
    }
    let grp = aut::automorphism_group(g, cfg)?;
    if !grp.acts_freely_on_vertices() || !grp.acts_freely_on_edges(g) {
        return Err(SynthError::Precondition("input must be vertex-free and edge-free".into()));
    }
    let p = p_gadget(d, &default_pendant_orders(d), seed, cfg)?;
    d_regularize_with(g, &p)
}

/// Cubic graph whose automorphism group has order 1, 2 or 3 and acts freely
/// on vertices and edges, carrying tags so that seeds give distinct graphs.
pub fn small_group_base(order: usize, seed: u64, budget: usize, cfg: &AutConfig) -> Result<Built, SynthError> {
    const STAGE: &str = "small-group base";
    let labels = BTreeMap::from([("base".to_string(), false)]);
    let res = WordReservation::new(&labels, seed);
    let tag = res.tag("base", Role::A)?;
    match order {
        1 => {
            let fr = frucht_graph();
            let mut g = Graph::new(0);
            let mut origin: Vec<Origin> = Vec::new();
            g.append(&fr);
            origin.extend((0..12).map(|local| Origin::Aux { instance: 0, local }));
            g.remove_edge(0, 1);
            let x = g.add_vertex();
            origin.push(Origin::Aux { instance: 0, local: 12 });
            g.add_edge(0, x)?;
            g.add_edge(x, 1)?;
            hang_tag(&mut g, &mut origin, x, &tag, 1, Role::A);
            let grp = aut::automorphism_group(&g, cfg)?;
            if !grp.is_trivial() || !g.is_regular(3) {
                return Err(gate(STAGE, "order-1 base is not an asymmetric cubic graph"));
            }
            Ok(Built { graph: g, origin })
        }
        2 | 3 => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(order as u64));
            for attempt in 0..budget {
                let b = 6 + 2 * (attempt % 3);
                if let Some(built) = try_cover(order, b, &tag, &mut rng, cfg)? {
                    return Ok(built);
                }
            }
            Err(SynthError::BudgetExhausted(budget))
        }
        _ => Err(SynthError::Precondition(format!("small-group path handles orders 1..=3, got {order}"))),
    }
}

/// One candidate: a random `Z_m` voltage cover of a random cubic multigraph
/// on `b` vertices, accepted when its group is exactly the deck group; one
/// edge orbit is then subdivided and tagged.
fn try_cover(m: usize, b: usize, tag: &Tag, rng: &mut ChaCha8Rng, cfg: &AutConfig) -> Result<Option<Built>, SynthError> {
    let pairs = pairing(&vec![3; b], rng);
    let volts: Vec<usize> = pairs.iter().map(|_| rng.gen_range(0..m)).collect();
    let mut g = Graph::new(b * m);
    for (&(u, v), &a) in pairs.iter().zip(&volts) {
        for i in 0..m {
            if g.add_edge(u * m + i, v * m + (i + a) % m).is_err() {
                return Ok(None);
            }
        }
    }
    if !g.is_connected() {
        return Ok(None);
    }
    let grp = aut::automorphism_group(&g, cfg)?;
    if grp.order != BigUint::from(m) || !grp.acts_freely_on_vertices() || !grp.acts_freely_on_edges(&g) {
        return Ok(None);
    }
    let mut origin: Vec<Origin> = (0..b * m).map(|local| Origin::Aux { instance: 0, local }).collect();
    let (u, v) = pairs[0];
    let a = volts[0];
    for i in 0..m {
        let (x, y) = (u * m + i, v * m + (i + a) % m);
        g.remove_edge(x, y);
        let s = g.add_vertex();
        origin.push(Origin::Aux { instance: 0, local: b * m + i });
        g.add_edge(x, s)?;
        g.add_edge(s, y)?;
        hang_tag(&mut g, &mut origin, s, tag, 1 + i, Role::A);
    }
    let grp = aut::automorphism_group(&g, cfg)?;
    if grp.order != BigUint::from(m) || !grp.acts_freely_on_vertices() || !grp.acts_freely_on_edges(&g) {
        return Ok(None);
    }
    Ok(Some(Built { graph: g, origin }))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StageReport {
    pub name: String,
    pub n: usize,
    pub m: usize,
    pub regular_degree: Option<usize>,
    pub connected: bool,
    pub aut_order: Count,
    pub vertex_free: bool,
    pub edge_free: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BlockDelta {
    pub stage: String,
    pub block: usize,
    pub instance: usize,
    pub size: usize,
    pub delta4: f64,
    pub exhaustive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct IsomorphismWitness {
    /// Group element index in the input group.
    pub element: usize,
    /// Image automorphism of the final graph.
    pub permutation: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PipelineCertificate {
    pub group: String,
    pub group_order: usize,
    pub degree: usize,
    pub seed: u64,
    pub generating_set: Vec<usize>,
    pub reservation: Option<WordReservation>,
    pub stages: Vec<StageReport>,
    pub p_gadget: Option<PGadgetCertificate>,
    pub clique_graph_recovers_cubic_stage: Option<bool>,
    pub hyperbolicity: Vec<BlockDelta>,
    pub max_block_delta4: f64,
    pub simplicial: bool,
    pub connected: bool,
    pub regular: bool,
    pub vertex_free: bool,
    pub edge_free: bool,
    pub aut_order: Count,
    pub aut_isomorphic_to_group: bool,
    /// Images of the generating set under an isomorphism `G → Aut(Γ)`.
    pub witness: Vec<IsomorphismWitness>,
    /// Wall-clock milliseconds per stage; kept out of serialized artifacts so
    /// certificates are byte-reproducible.
    #[serde(skip)]
    pub timings: BTreeMap<String, u128>,
}

#[derive(Clone, Debug)]
pub struct PipelineOptions {
    pub aut: AutConfig,
    /// Generating set to start from; defaults to the greedy one.
    pub generators: Option<Vec<usize>>,
    pub budget: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { aut: AutConfig::default(), generators: None, budget: DEFAULT_SEARCH_BUDGET }
    }
}

fn stage_config(base: &AutConfig, n: usize) -> AutConfig {
    AutConfig { vertex_cap: base.vertex_cap.max(n), ..base.clone() }
}

fn stage_report(name: &str, g: &Graph, grp: &PermGroup, with_edges: bool) -> StageReport {
    let d = g.degree(0);
    StageReport {
        name: name.to_string(),
        n: g.n(),
        m: g.m(),
        regular_degree: g.is_regular(d).then_some(d),
        connected: g.is_connected(),
        aut_order: Count::from(&grp.order),
        vertex_free: grp.acts_freely_on_vertices(),
        edge_free: with_edges.then(|| grp.acts_freely_on_edges(g)),
    }
}

/// Four-point constants of the blocks lying entirely inside one gadget,
/// tag or P copy. Structurally identical blocks are computed once.
pub fn hyperbolicity_ledger(stage: &str, b: &Built) -> Result<Vec<BlockDelta>, SynthError> {
    let bd = block_decomposition(&b.graph)?;
    let mut cache: HashMap<Vec<(usize, usize)>, (f64, bool)> = HashMap::new();
    let mut out = Vec::new();
    for (i, block) in bd.blocks.iter().enumerate() {
        if block.len() < 4 {
            continue;
        }
        let inst = b.origin[block[0]].instance();
        if inst.is_none() || block.iter().any(|&v| b.origin[v].instance() != inst) {
            continue;
        }
        let sub = b.graph.induced_subgraph(block);
        let key = sub.edges();
        let (delta4, exhaustive) = match cache.get(&key) {
            Some(&v) => v,
            None => {
                let dm = DistanceMatrix::from_graph(&sub).map_err(|e| gate(stage, e.to_string()))?;
                let opts = FourPointOptions { exhaustive_cap: usize::MAX, ..Default::default() };
                let r = four_point_delta(&dm, &opts);
                cache.insert(key, (r.delta, r.exhaustive));
                (r.delta, r.exhaustive)
            }
        };
        out.push(BlockDelta { stage: stage.to_string(), block: i, instance: inst.unwrap(), size: block.len(), delta4, exhaustive });
    }
    Ok(out)
}

/// Builds a connected, simplicial, `d`-regular, vertex- and edge-free graph
/// with automorphism group isomorphic to `group`, together with its
/// certificate. `d` must be 3 or odd and at least 5.
pub fn build_rigid_graph(
    group: &FiniteGroup,
    group_name: &str,
    d: usize,
    seed: u64,
    opts: &PipelineOptions,
) -> Result<(Graph, PipelineCertificate), SynthError> {
    if d % 2 == 0 {
        return Err(SynthError::EvenDegree);
    }
    if d < 3 {
        return Err(SynthError::Precondition(format!("degree must be 3 or odd ≥ 5 (got {d})")));
    }
    let order = group.order();
    let mut timings = BTreeMap::new();
    let mut stages = Vec::new();
    let mut generating_set = Vec::new();
    let mut reservation = None;
    let cfg = &opts.aut;

    let t = Instant::now();
    let cubic = if order <= 3 {
        small_group_base(order, seed, opts.budget, cfg)?
    } else {
        let s0 = opts.generators.clone().unwrap_or_else(|| group.greedy_generators());
        let s = normalize_generating_set(group, &s0)?;
        generating_set = s.gens.clone();
        let cay = cayley_graph(group, &s)?;
        let lgrp = label_preserving_automorphisms(&cay, cfg)?;
        stages.push(stage_report("cayley", &cay.base, &lgrp, false));
        if lgrp.order != BigUint::from(order) {
            return Err(gate("cayley", format!("label-preserving group has order {}, expected {order}", lgrp.order)));
        }
        let (g0, _) = three_regularize(&cay)?;
        let lgrp0 = label_preserving_automorphisms(&g0, &stage_config(cfg, g0.base.n()))?;
        stages.push(stage_report("cubic-labelled", &g0.base, &lgrp0, false));
        if lgrp0.order != BigUint::from(order) || !lgrp0.acts_freely_on_vertices() {
            return Err(gate("cubic-labelled", "label-preserving group changed under 3-regularization"));
        }
        let res = WordReservation::new(&g0.label_set(), seed);
        let built = blow_up_labelled(&g0, &res, &stage_config(cfg, g0.base.n()))?;
        reservation = Some(res);
        built
    };
    timings.insert("cubic".to_string(), t.elapsed().as_millis());

    let t = Instant::now();
    let gamma_cfg = stage_config(cfg, cubic.graph.n());
    let grp = aut::automorphism_group(&cubic.graph, &gamma_cfg)?;
    let report = stage_report("cubic", &cubic.graph, &grp, true);
    if grp.order != BigUint::from(order) || !report.vertex_free || report.edge_free != Some(true) {
        return Err(gate("cubic", format!("Aut has order {}, vertex-free {}, edge-free {:?}", grp.order, report.vertex_free, report.edge_free)));
    }
    stages.push(report);
    let mut hyperbolicity = hyperbolicity_ledger("cubic", &cubic)?;
    timings.insert("cubic-certificate".to_string(), t.elapsed().as_millis());

    let (final_graph, final_grp, p_cert, clique_ok) = if d == 3 {
        (cubic.graph.clone(), grp, None, None)
    } else {
        let t = Instant::now();
        let p = p_gadget(d, &default_pendant_orders(d), seed, cfg)?;
        let built = d_regularize_with(&cubic.graph, &p)?;
        timings.insert("d-regularize".to_string(), t.elapsed().as_millis());
        let t = Instant::now();
        let dcfg = stage_config(cfg, built.graph.n());
        let dgrp = aut::automorphism_group(&built.graph, &dcfg)?;
        let report = stage_report("d-regular", &built.graph, &dgrp, true);
        if dgrp.order != BigUint::from(order) || report.edge_free != Some(true) || report.regular_degree != Some(d) {
            return Err(gate("d-regular", format!("Aut has order {}, edge-free {:?}", dgrp.order, report.edge_free)));
        }
        stages.push(report);
        timings.insert("d-regular-certificate".to_string(), t.elapsed().as_millis());
        let t = Instant::now();
        let cg = clique_graph(&built.graph, d)?;
        let recovered = aut::graphs_isomorphic(&cg, &cubic.graph, &gamma_cfg)?.is_some();
        if !recovered {
            return Err(gate("d-regular", "clique graph is not isomorphic to the cubic stage"));
        }
        timings.insert("clique-graph".to_string(), t.elapsed().as_millis());
        hyperbolicity.extend(hyperbolicity_ledger("d-regular", &built)?);
        (built.graph, dgrp, Some(p.certificate), Some(recovered))
    };

    let t = Instant::now();
    let witness = aut_isomorphism_witness(group, &final_grp, &generating_set)?;
    timings.insert("witness".to_string(), t.elapsed().as_millis());
    let max_block_delta4 = hyperbolicity.iter().map(|b| b.delta4).fold(0.0, f64::max);
    if max_block_delta4 > BLOCK_DELTA4_BOUND {
        return Err(gate("hyperbolicity", format!("block with δ4 = {max_block_delta4}")));
    }
    let cert = PipelineCertificate {
        group: group_name.to_string(),
        group_order: order,
        degree: d,
        seed,
        generating_set,
        reservation,
        stages,
        p_gadget: p_cert,
        clique_graph_recovers_cubic_stage: clique_ok,
        hyperbolicity,
        max_block_delta4,
        simplicial: true,
        connected: final_graph.is_connected(),
        regular: final_graph.is_regular(d),
        vertex_free: final_grp.acts_freely_on_vertices(),
        edge_free: final_grp.acts_freely_on_edges(&final_graph),
        aut_order: Count::from(&final_grp.order),
        aut_isomorphic_to_group: true,
        witness,
        timings,
    };
    Ok((final_graph, cert))
}

/// Closes the automorphism generators to a table and finds an isomorphism
/// from `group`; returns the images of `gens` (or of the greedy generators
/// when `gens` is empty).
pub fn aut_isomorphism_witness(
    group: &FiniteGroup,
    grp: &PermGroup,
    gens: &[usize],
) -> Result<Vec<IsomorphismWitness>, SynthError> {
    let cap = group.order().max(1);
    let (table, elems) = FiniteGroup::perm_closure(grp.degree, &grp.generators, cap + 1)?;
    let phi = groups_isomorphic(group, &table, DEFAULT_ISO_CAP)?
        .ok_or_else(|| gate("witness", "automorphism group is not isomorphic to the input group"))?;
    let chosen: Vec<usize> = if gens.is_empty() { group.greedy_generators() } else { gens.to_vec() };
    Ok(chosen
        .into_iter()
        .map(|element| IsomorphismWitness { element, permutation: elems[phi[element]].clone() })
        .collect())
}

/// Convenience wrapper resolving a generating set for groups of order ≥ 4.
pub fn default_generating_set(group: &FiniteGroup) -> Result<GeneratingSet, SynthError> {
    Ok(normalize_generating_set(group, &group.greedy_generators())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frucht_shape() {
        let f = frucht_graph();
        assert_eq!((f.n(), f.m()), (12, 18));
        assert!(f.is_regular(3));
    }

    #[test]
    fn tag_sizes() {
        let t = tag_graph(&TagSpec::parse("0110", BlockDesign::Reference).unwrap()).unwrap();
        assert_eq!(t.graph.n(), 2 + 8 + 12 * 2 + 12);
        let t1 = tag_graph(&TagSpec::parse("1", BlockDesign::Reference).unwrap()).unwrap();
        assert_eq!((0..t1.graph.n()).filter(|&v| t1.graph.degree(v) == 1).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn bad_inputs() {
        assert!(TagSpec::parse("012", BlockDesign::Reference).is_err());
        assert!(TagSpec::parse("", BlockDesign::Reference).is_err());
        assert!(matches!(BlockDesign::from_name("fancy"), Err(SynthError::UnknownDesign(_))));
    }

    #[test]
    fn reservation_blocks_are_disjoint() {
        let labels = BTreeMap::from([("s0".to_string(), true), ("s1".to_string(), false)]);
        let a = WordReservation::new(&labels, 0);
        let b = WordReservation::new(&labels, 1);
        assert_eq!(a.length, 4);
        let words = |r: &WordReservation| -> Vec<String> {
            r.words.values().flat_map(|m| m.values().cloned()).collect()
        };
        let (wa, wb) = (words(&a), words(&b));
        assert_eq!(wa.len(), 5);
        assert!(wa.iter().all(|w| !wb.contains(w) && w.contains('0')));
        assert!(a.word("s1", Role::Src).is_err());
    }

    #[test]
    fn duplicate_words_fail_gate() {
        let words = vec!["01".to_string(), "01".to_string()];
        let err = verify_tag_family(&words, BlockDesign::Reference, &AutConfig::default()).unwrap_err();
        assert!(err.to_string().contains("duplicate"));
    }

    #[test]
    fn even_order_pendant_rejected() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let err = asymmetric_pendant(5, 8, &mut rng, 10, &AutConfig::default()).unwrap_err();
        assert!(err.to_string().contains("m must be odd"));
    }

    #[test]
    fn even_degree_rejected() {
        let g = FiniteGroup::cyclic(4);
        let err = build_rigid_graph(&g, "C4", 4, 0, &PipelineOptions::default()).unwrap_err();
        assert_eq!(err.to_string(), "even degree unsupported (parity obstruction)");
    }
}
