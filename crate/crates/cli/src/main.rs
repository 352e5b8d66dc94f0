//! `forge`: build and verify rigid graphs, and measure graphs of spaces.
//!
//! Exit codes: 0 success, 1 usage or input error, 2 a gate or invariant
//! failed.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use sha2::{Digest, Sha256};

use forge_core::aut::{self, AutConfig, Count};
use forge_core::gos::{self, Family, GosPoint, GraphOfSpaces, LegAssignment, SweepOptions};
use forge_core::graph::Graph;
use forge_core::groups::{FiniteGroup, GroupSpec};
use forge_core::synth::{self, PipelineOptions, SynthError};

#[derive(Parser)]
#[command(name = "forge", version, about = "Rigid graph synthesis and graph-of-spaces measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a regular graph whose automorphism group is the given group.
    Build {
        /// Group name (trivial, C2..C12, S3, D3..D6, Q8, C2xC2) or a JSON group spec file.
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 3)]
        degree: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Re-check a graph file against a group.
    Verify {
        #[arg(long)]
        group: String,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Graph-of-spaces tools.
    Gos {
        #[command(subcommand)]
        command: GosCommand,
    },
}

#[derive(Args, Clone)]
struct Source {
    /// Instance JSON file; otherwise a spider template is built.
    #[arg(long)]
    instance: Option<PathBuf>,
    /// Template family: cycle, path or tree.
    #[arg(long, default_value = "cycle")]
    family: String,
    #[arg(long, default_value_t = 6)]
    n: usize,
    /// Base graph JSON file for the template, overriding the family.
    #[arg(long)]
    gamma: Option<PathBuf>,
    /// Spider legs; defaults to the maximum degree.
    #[arg(long)]
    legs: Option<usize>,
    #[arg(long, default_value_t = 2)]
    leg_length: usize,
    /// Transport leg choices along Aut(Γ) (needs a free action).
    #[arg(long)]
    orbit_consistent: bool,
}

#[derive(Subcommand)]
enum GosCommand {
    /// Write a spider instance.
    BuildSpider {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validate and report uniformity, embedded-graph isometry and distortion.
    Check {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        json: bool,
    },
    /// Intrinsic distance and a reduced geodesic string.
    Dist {
        #[command(flatten)]
        src: Source,
        /// Point `v:i` or `e<edge>:y:s`.
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
        #[arg(long)]
        json: bool,
    },
    /// Four-point δ of the realisation.
    Delta {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = gos::DEFAULT_GRID_STEP)]
        grid: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Link bottleneck profile of one vertex space.
    Profile {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = 0)]
        vertex: usize,
        #[arg(long)]
        json: bool,
    },
    /// δ4 of Γ and of its realisation across a family, as CSV.
    Sweep {
        #[arg(long, default_value = "cycle")]
        family: String,
        #[arg(long, value_delimiter = ',', default_value = "6,12,18,24")]
        n: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        leg_length: usize,
        #[arg(long, default_value_t = gos::DEFAULT_GRID_STEP)]
        grid: f64,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

enum Failure {
    Usage(String),
    Gate(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Gate(_) => 2,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = std::env::var("FORGE_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // ignore failure: a global pool may already exist
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    let result = match cli.command {
        Command::Build { group, degree, seed, out } => cmd_build(&group, degree, seed, &out),
        Command::Verify { group, graph } => cmd_verify(&group, &graph),
        Command::Gos { command } => cmd_gos(command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Gate(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}

fn load_group(reference: &str) -> Result<FiniteGroup, Failure> {
    if let Ok(g) = FiniteGroup::named(reference) {
        return Ok(g);
    }
    let path = Path::new(reference);
    if !path.exists() {
        return Err(usage(format!("unknown group {reference:?} (not a known name or a file)")));
    }
    let text = fs::read_to_string(path).map_err(usage)?;
    let spec: GroupSpec = serde_json::from_str(&text).map_err(usage)?;
    spec.build().map_err(usage)
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn to_json<T: Serialize>(x: &T) -> String {
    let mut s = serde_json::to_string_pretty(x).expect("reports serialize");
    s.push('\n');
    s
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Artifact {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, String>,
    seeds: Vec<u64>,
    inputs: Vec<Artifact>,
    tool_version: String,
    artifacts: Vec<Artifact>,
    gates: BTreeMap<String, bool>,
    /// Wall-clock data lives in this file so the manifest stays reproducible.
    timings_file: String,
}

fn cmd_build(group_ref: &str, degree: usize, seed: u64, out: &Path) -> Outcome {
    let group = load_group(group_ref)?;
    let started = Instant::now();
    let (graph, cert) = synth::build_rigid_graph(&group, group_ref, degree, seed, &PipelineOptions::default())
        .map_err(|e| match e {
            SynthError::EvenDegree | SynthError::Precondition(_) => usage(e),
            e => Failure::Gate(e.to_string()),
        })?;
    let gates = BTreeMap::from([
        ("simplicial".to_string(), cert.simplicial),
        ("connected".to_string(), cert.connected),
        ("regular".to_string(), cert.regular),
        ("vertexFree".to_string(), cert.vertex_free),
        ("edgeFree".to_string(), cert.edge_free),
        ("autIsomorphicToGroup".to_string(), cert.aut_isomorphic_to_group),
    ]);
    fs::create_dir_all(out).map_err(usage)?;
    let files = [
        ("graph.json", to_json(&graph)),
        ("graph.dot", graph.to_dot("G")),
        ("certificate.json", to_json(&cert)),
    ];
    let mut artifacts = Vec::new();
    for (name, body) in &files {
        fs::write(out.join(name), body).map_err(usage)?;
        artifacts.push(Artifact { path: name.to_string(), sha256: sha256_hex(body.as_bytes()) });
    }
    let mut inputs = Vec::new();
    if Path::new(group_ref).exists() {
        let bytes = fs::read(group_ref).map_err(usage)?;
        inputs.push(Artifact { path: group_ref.to_string(), sha256: sha256_hex(&bytes) });
    }
    let mut timings = cert.timings.clone();
    timings.insert("total".to_string(), started.elapsed().as_millis());
    fs::write(out.join("timings.json"), to_json(&timings)).map_err(usage)?;
    let manifest = RunManifest {
        command: "build".into(),
        parameters: BTreeMap::from([
            ("group".to_string(), group_ref.to_string()),
            ("degree".to_string(), degree.to_string()),
        ]),
        seeds: vec![seed],
        inputs,
        tool_version: env!("CARGO_PKG_VERSION").into(),
        artifacts,
        gates: gates.clone(),
        timings_file: "timings.json".into(),
    };
    fs::write(out.join("manifest.json"), to_json(&manifest)).map_err(usage)?;
    if let Some((name, _)) = gates.iter().find(|(_, ok)| !**ok) {
        return Err(Failure::Gate(format!("gate {name} failed")));
    }
    println!(
        "built {} vertices, {}-regular, |Aut| = {} -> {}",
        graph.n(),
        degree,
        serde_json::to_string(&cert.aut_order).unwrap_or_default(),
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct VerifyReport {
    n: usize,
    connected: bool,
    regular_degree: Option<usize>,
    aut_order: Count,
    vertex_free: bool,
    edge_free: bool,
    aut_isomorphic_to_group: bool,
    ok: bool,
}

fn cmd_verify(group_ref: &str, graph_path: &Path) -> Outcome {
    let group = load_group(group_ref)?;
    let text = fs::read_to_string(graph_path).map_err(usage)?;
    let graph: Graph = serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", graph_path.display())))?;
    let cfg = AutConfig::with_cap(graph.n().max(aut::DEFAULT_VERTEX_CAP));
    let grp = aut::automorphism_group(&graph, &cfg).map_err(|e| Failure::Gate(e.to_string()))?;
    let d = graph.max_degree();
    let regular_degree = graph.is_regular(d).then_some(d);
    let iso = grp.order_u64() == Some(group.order() as u64) && synth::aut_isomorphism_witness(&group, &grp, &[]).is_ok();
    let vertex_free = grp.acts_freely_on_vertices();
    let edge_free = grp.acts_freely_on_edges(&graph);
    let connected = graph.is_connected();
    let ok = connected && regular_degree.is_some() && vertex_free && edge_free && iso;
    let report = VerifyReport {
        n: graph.n(),
        connected,
        regular_degree,
        aut_order: Count::from(&grp.order),
        vertex_free,
        edge_free,
        aut_isomorphic_to_group: iso,
        ok,
    };
    print!("{}", to_json(&report));
    if ok {
        Ok(())
    } else {
        Err(Failure::Gate("graph does not meet the contract".into()))
    }
}

fn load_gos(src: &Source) -> Result<GraphOfSpaces, Failure> {
    if let Some(path) = &src.instance {
        let text = fs::read_to_string(path).map_err(usage)?;
        return serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())));
    }
    let gamma = match &src.gamma {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(usage)?;
            serde_json::from_str::<Graph>(&text).map_err(usage)?
        }
        None => src.family.parse::<Family>().map_err(usage)?.gamma(src.n).map_err(usage)?,
    };
    let legs = src.legs.unwrap_or_else(|| gamma.max_degree().max(1));
    let assign = if src.orbit_consistent {
        LegAssignment::OrbitConsistent(AutConfig::with_cap(gamma.n().max(aut::DEFAULT_VERTEX_CAP)))
    } else {
        LegAssignment::Sorted
    };
    gos::build_spider_gos(&gamma, legs, src.leg_length, &assign).map_err(usage)
}

/// Loads and validates; an invalid instance is an invariant failure.
fn load_valid(src: &Source) -> Result<GraphOfSpaces, Failure> {
    let g = load_gos(src)?;
    let rep = gos::validate_gos(&g);
    if !rep.valid {
        print!("{}", to_json(&rep));
        return Err(Failure::Gate(format!("invalid graph of spaces: {}", rep.violations.join("; "))));
    }
    Ok(g)
}

fn emit<T: Serialize>(json: bool, report: &T, summary: impl FnOnce() -> String) {
    if json {
        print!("{}", to_json(report));
    } else {
        println!("{}", summary());
    }
}

fn cmd_gos(command: GosCommand) -> Outcome {
    match command {
        GosCommand::BuildSpider { src, out } => {
            let g = load_gos(&src)?;
            let body = to_json(&g);
            match out {
                Some(path) => fs::write(path, body).map_err(usage)?,
                None => print!("{body}"),
            }
            Ok(())
        }
        GosCommand::Check { src, json } => {
            let g = load_gos(&src)?;
            let rep = gos::check(&g).map_err(usage)?;
            emit(json, &rep, || match &rep.uniformity {
                Some(u) => format!(
                    "valid; delta = {}, C = {}; embedded graph deviation {}; max distortion {}",
                    u.delta,
                    u.c,
                    rep.embedded.as_ref().map_or(f64::NAN, |e| e.max_deviation),
                    rep.distortion.iter().map(|d| d.measured).fold(0.0, f64::max)
                ),
                None => format!("invalid: {}", rep.validation.violations.join("; ")),
            });
            if rep.ok {
                Ok(())
            } else {
                Err(Failure::Gate("check failed".into()))
            }
        }
        GosCommand::Dist { src, p, q, json } => {
            let g = load_valid(&src)?;
            let (p, q): (GosPoint, GosPoint) = (p.parse().map_err(usage)?, q.parse().map_err(usage)?);
            let extra: Vec<GosPoint> = [p, q].into_iter().filter(|x| matches!(x, GosPoint::Cylinder { .. })).collect();
            let net = gos::realize_network(&g, &extra).map_err(usage)?;
            let path = gos::gos_geodesic(&net, &p, &q).map_err(usage)?;
            let distance = gos::gos_distance(&net, &p, &q).map_err(usage)?;
            #[derive(Serialize)]
            struct DistReport {
                distance: f64,
                geodesic: gos::StringPath,
            }
            let rep = DistReport { distance, geodesic: path };
            emit(json, &rep, || format!("{distance:?}"));
            Ok(())
        }
        GosCommand::Delta { src, grid, samples, seed, json } => {
            let g = load_valid(&src)?;
            let rep = gos::realization_delta(&g, grid, samples, seed).map_err(usage)?;
            emit(json, &rep, || {
                format!("delta4 = {} (embedded graph {}, {} nodes, grid {})", rep.delta, rep.embedded_delta, rep.nodes, rep.grid_step)
            });
            Ok(())
        }
        GosCommand::Profile { src, vertex, json } => {
            let g = load_valid(&src)?;
            if vertex >= g.n {
                return Err(usage(format!("vertex {vertex} out of range")));
            }
            let rep = gos::bottleneck_profile(&g, vertex, &gos::DEFAULT_KAPPAS, &gos::DEFAULT_DEPTHS).map_err(usage)?;
            emit(json, &rep, || {
                rep.entries
                    .iter()
                    .map(|e| format!("kappa {} K {}: {} components, {} deep", e.kappa, e.k, e.components, e.deep_count))
                    .collect::<Vec<_>>()
                    .join("\n")
            });
            Ok(())
        }
        GosCommand::Sweep { family, n, leg_length, grid, samples, seed, out, json } => {
            let fam: Family = family.parse().map_err(usage)?;
            let opts = SweepOptions { leg_length, grid_step: grid, samples, seed };
            let rows = gos::sweep(fam, &n, &opts).map_err(usage)?;
            let body = if json { to_json(&rows) } else { gos::sweep_csv(&rows) };
            match out {
                Some(path) => fs::write(path, body).map_err(usage)?,
                None => print!("{body}"),
            }
            if rows.iter().any(|r| r.realization_delta + 1e-9 < r.gamma_delta) {
                return Err(Failure::Gate("realisation δ4 below δ4 of the base graph".into()));
            }
            Ok(())
        }
    }
}
