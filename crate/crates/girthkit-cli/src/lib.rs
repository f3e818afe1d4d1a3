//! Command implementations behind the `girthkit` binary.

pub mod args;
mod bench;

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use girth_kit::cover::{scales, Cover};
use girth_kit::covers_det::{det_girth, det_girth_factor, det_spanner, roundtrip_cover_traced};
use girth_kit::covers_klogk::{
    klogk_girth, klogk_girth_factor, klogk_spanner, roundtrip_cover2_traced, KlogkParams,
};
use girth_kit::generate::{Family, GeneratorSpec};
use girth_kit::girth3::{girth_estimate, SearchMode, SimilarSetConfig};
use girth_kit::graph::{EdgeId, Graph, Length, INFINITY};
use girth_kit::io::{parse_graph, read_graph, write_graph};
use girth_kit::oracle::{exact_girth, verify_cover, verify_spanner_within, APSP_LIMIT};
use girth_kit::regularize::regularize;
use girth_kit::spanner8::{full_spanner, SpannerParams};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{
    Cli, Command, CoverCommand, GenArgs, GenKind, GirthCommand, Mode, RandomArgs, RegularizeArgs,
    SpannerCommand, SpannerOut, VerifyCommand,
};

/// Version of every JSON report and CSV row layout.
pub const SCHEMA_VERSION: u32 = 1;

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    BadInput(String),
    VerificationFailed(String),
    RetriesExhausted(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::BadInput(_) => 2,
            CliError::VerificationFailed(_) => 3,
            CliError::RetriesExhausted(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::BadInput(m) => write!(f, "bad input: {m}"),
            CliError::VerificationFailed(m) => write!(f, "verification failed: {m}"),
            CliError::RetriesExhausted(m) => write!(f, "{m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl From<girth_kit::Error> for CliError {
    fn from(e: girth_kit::Error) -> Self {
        use girth_kit::Error as E;
        match e {
            E::RetriesExhausted { .. } => CliError::RetriesExhausted(e.to_string()),
            E::Invariant(_) | E::NoGoodCut { .. } | E::MissingSimilarity(_) => {
                CliError::Internal(e.to_string())
            }
            _ => CliError::BadInput(e.to_string()),
        }
    }
}

fn bad_input(e: impl std::fmt::Display) -> CliError {
    CliError::BadInput(e.to_string())
}

type CliResult<T = ()> = Result<T, CliError>;

/// Parameters of one run, echoed in every report.
#[derive(Debug, Default, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub graph: Option<PathBuf>,
    pub k: Option<usize>,
    pub radius: Option<Length>,
    pub mode: Option<String>,
    pub epsilon: Option<f64>,
    pub seed: Option<u64>,
    pub retries: Option<u32>,
    pub light: Option<bool>,
    pub out: Option<PathBuf>,
    pub verify: bool,
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    schema_version: u32,
    kind: &'a str,
    config: &'a RunConfig,
    result: T,
    timings: Timings,
}

#[derive(Serialize)]
struct Timings {
    total_ms: f64,
}

fn emit<T: Serialize>(kind: &str, config: &RunConfig, result: T, started: Instant) -> CliResult {
    let report = Report {
        schema_version: SCHEMA_VERSION,
        kind,
        config,
        result,
        timings: Timings { total_ms: started.elapsed().as_secs_f64() * 1e3 },
    };
    let text =
        serde_json::to_string_pretty(&report).map_err(|e| CliError::Internal(e.to_string()))?;
    println!("{text}");
    Ok(())
}

/// `None` for an infinite length.
fn finite(x: Length) -> Option<Length> {
    (x != INFINITY).then_some(x)
}

fn load(path: &Path) -> CliResult<Graph> {
    read_graph(path).map_err(|e| bad_input(format!("{}: {e}", path.display())))
}

fn check_apsp(g: &Graph) -> CliResult {
    if g.n() > APSP_LIMIT {
        return Err(bad_input(format!(
            "verification needs n <= {APSP_LIMIT}, graph has {} vertices",
            g.n()
        )));
    }
    Ok(())
}

pub fn run(cli: Cli) -> CliResult {
    let started = Instant::now();
    match cli.command {
        Command::Gen(args) => generate(args, started),
        Command::Regularize(args) => regularize_cmd(args, started),
        Command::Girth(cmd) => girth(cmd, started),
        Command::Cover(cmd) => cover(cmd, started),
        Command::Spanner(cmd) => spanner(cmd, started),
        Command::Verify(cmd) => verify(cmd, started),
        Command::Bench(args) => bench::run(&args),
    }
}

fn require<T>(value: Option<T>, flag: &str, kind: &str) -> CliResult<T> {
    value.ok_or_else(|| bad_input(format!("--{flag} is required for {kind}")))
}

fn family(args: &GenArgs) -> CliResult<Family> {
    Ok(match args.kind {
        GenKind::Er => Family::Er { p: require(args.p, "p", "er")? },
        GenKind::PlantedGirth => Family::PlantedGirth {
            girth: require(args.girth, "girth", "planted-girth")?,
            p: require(args.p, "p", "planted-girth")?,
        },
        GenKind::RingOfCliques => {
            Family::RingOfCliques { cliques: require(args.cliques, "cliques", "ring-of-cliques")? }
        }
        GenKind::GridChords => {
            Family::GridChords { chords: require(args.chords, "chords", "grid-chords")? }
        }
        GenKind::RandomRegular => {
            Family::RandomRegular { degree: require(args.degree, "degree", "random-regular")? }
        }
    })
}

fn generate(args: GenArgs, started: Instant) -> CliResult {
    let spec =
        GeneratorSpec::new(family(&args)?, args.n, args.min_weight..=args.max_weight, args.seed);
    let g = spec.generate()?;
    write_graph(&g, &args.out)?;
    let config = RunConfig {
        command: "gen".into(),
        seed: Some(args.seed),
        out: Some(args.out),
        ..Default::default()
    };
    emit("gen", &config, json!({ "spec": spec, "n": g.n(), "m": g.m() }), started)
}

fn regularize_cmd(args: RegularizeArgs, started: Instant) -> CliResult {
    let g = load(&args.input)?;
    let rg = regularize(&g);
    write_graph(&rg.h, &args.out)?;
    let map = serde_json::to_string(&rg.map).map_err(|e| CliError::Internal(e.to_string()))?;
    fs::write(&args.map, map).map_err(bad_input)?;
    let config = RunConfig {
        command: "regularize".into(),
        graph: Some(args.input),
        out: Some(args.out),
        ..Default::default()
    };
    let result = json!({
        "delta": rg.delta,
        "n": g.n(),
        "m": g.m(),
        "h_n": rg.h.n(),
        "h_m": rg.h.m(),
        "max_degree": rg.max_degree(),
    });
    emit("regularize", &config, result, started)
}

fn klogk_params(random: &RandomArgs) -> KlogkParams {
    let base =
        if random.light { KlogkParams::light(random.seed) } else { KlogkParams::new(random.seed) };
    KlogkParams { retries: random.retries, ..base }
}

/// Fails unless `estimate` lies in [g, factor * g].
fn check_sandwich(g: &Graph, estimate: Length, factor: f64) -> CliResult {
    check_apsp(g)?;
    let exact = exact_girth(g).0;
    let ok = if exact == INFINITY {
        estimate == INFINITY
    } else {
        estimate >= exact && estimate as f64 <= factor * exact as f64
    };
    if ok {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(format!(
            "estimate {estimate} outside [{exact}, {factor} * {exact}]"
        )))
    }
}

fn girth(cmd: GirthCommand, started: Instant) -> CliResult {
    match cmd {
        GirthCommand::Exact(arg) => {
            let g = load(&arg.graph)?;
            let (len, cycle) = exact_girth(&g);
            let config = RunConfig {
                command: "girth exact".into(),
                graph: Some(arg.graph),
                ..Default::default()
            };
            emit("girth", &config, json!({ "estimate": finite(len), "cycle": cycle }), started)
        }
        GirthCommand::Approx3 { graph, mode, epsilon, seed, verify } => {
            let g = load(&graph.graph)?;
            let search = match mode {
                Mode::Binary => SearchMode::Binary,
                Mode::Geometric => SearchMode::Geometric { epsilon },
            };
            let est = girth_estimate(&g, search, &SimilarSetConfig::seeded(seed))?;
            let config = RunConfig {
                command: "girth approx3".into(),
                graph: Some(graph.graph),
                mode: Some(format!("{mode:?}").to_lowercase()),
                epsilon: (mode == Mode::Geometric).then_some(epsilon),
                seed: Some(seed),
                verify,
                ..Default::default()
            };
            let result = json!({
                "estimate": finite(est.estimate),
                "cycle": est.witness,
                "radius_schedule": est.radius_schedule,
            });
            emit("girth", &config, result, started)?;
            if verify {
                let factor = match mode {
                    Mode::Binary => 3.0,
                    Mode::Geometric => 3.0 * (1.0 + epsilon),
                };
                check_sandwich(&g, est.estimate, factor)?;
            }
            Ok(())
        }
        GirthCommand::Det { graph, k, verify } => {
            let g = load(&graph.graph)?;
            let est = det_girth(&g, k)?;
            let config = RunConfig {
                command: "girth det".into(),
                graph: Some(graph.graph),
                k: Some(k),
                verify,
                ..Default::default()
            };
            emit("girth", &config, cover_girth_json(&est), started)?;
            if verify {
                check_sandwich(&g, est.estimate, det_girth_factor(g.n(), k) as f64)?;
            }
            Ok(())
        }
        GirthCommand::Klogk { graph, k, random, verify } => {
            let g = load(&graph.graph)?;
            let est = klogk_girth(&g, k, &klogk_params(&random))?;
            let config = RunConfig {
                command: "girth klogk".into(),
                graph: Some(graph.graph),
                k: Some(k),
                seed: Some(random.seed),
                retries: Some(random.retries),
                light: Some(random.light),
                verify,
                ..Default::default()
            };
            emit("girth", &config, cover_girth_json(&est), started)?;
            if verify {
                check_sandwich(&g, est.estimate, klogk_girth_factor(k) as f64)?;
            }
            Ok(())
        }
    }
}

fn cover_girth_json(est: &girth_kit::cover::CoverGirth) -> Value {
    json!({
        "estimate": finite(est.estimate),
        "cycle": est.witness,
        "scale": est.scale,
        "ball": est.ball,
    })
}

fn check_cover(g: &Graph, cover: &Cover) -> CliResult {
    check_apsp(g)?;
    let report = verify_cover(g, cover, cover.stretch as f64, cover.radius)?;
    if report.ok {
        Ok(())
    } else {
        Err(CliError::VerificationFailed(format!("{report:?}")))
    }
}

fn cover(cmd: CoverCommand, started: Instant) -> CliResult {
    match cmd {
        CoverCommand::Det { graph, k, radius, verify } => {
            let g = load(&graph.graph)?;
            let (cover, trace) = roundtrip_cover_traced(&g, k, radius)?;
            let config = RunConfig {
                command: "cover det".into(),
                graph: Some(graph.graph),
                k: Some(k),
                radius: Some(radius),
                verify,
                ..Default::default()
            };
            emit("cover", &config, json!({ "cover": cover, "trace": trace }), started)?;
            if verify {
                check_cover(&g, &cover)?;
            }
            Ok(())
        }
        CoverCommand::Klogk { graph, k, radius, random, verify } => {
            let g = load(&graph.graph)?;
            let (cover, trace) = roundtrip_cover2_traced(&g, k, radius, &klogk_params(&random))?;
            let config = RunConfig {
                command: "cover klogk".into(),
                graph: Some(graph.graph),
                k: Some(k),
                radius: Some(radius),
                seed: Some(random.seed),
                retries: Some(random.retries),
                light: Some(random.light),
                verify,
                ..Default::default()
            };
            emit("cover", &config, json!({ "cover": cover, "trace": trace }), started)?;
            if verify {
                check_cover(&g, &cover)?;
            }
            Ok(())
        }
    }
}

struct SpannerRun {
    edges: Vec<EdgeId>,
    scales: Vec<Length>,
    per_scale_edge_counts: Option<Vec<usize>>,
    alpha: f64,
}

fn finish_spanner(
    g: &Graph,
    run: SpannerRun,
    output: SpannerOut,
    mut config: RunConfig,
    started: Instant,
) -> CliResult {
    if let Some(path) = &output.out {
        write_graph(&g.edge_subgraph(run.edges.iter().copied())?, path)?;
    }
    config.out = output.out;
    config.verify = output.verify;
    let result = json!({
        "edges": run.edges.len(),
        "edge_ids": run.edges,
        "scales": run.scales,
        "per_scale_edge_counts": run.per_scale_edge_counts,
        "alpha": run.alpha,
    });
    emit("spanner", &config, result, started)?;
    if output.verify {
        check_apsp(g)?;
        let report = verify_spanner_within(g, &run.edges, run.alpha, INFINITY)?;
        if !report.ok {
            return Err(CliError::VerificationFailed(format!("{report:?}")));
        }
    }
    Ok(())
}

fn spanner(cmd: SpannerCommand, started: Instant) -> CliResult {
    match cmd {
        SpannerCommand::Const8 { graph, epsilon, seed, light, output } => {
            let g = load(&graph.graph)?;
            let params = if light { SpannerParams::light(seed) } else { SpannerParams::new(seed) };
            let full = full_spanner(&g, epsilon, &params)?;
            let run = SpannerRun {
                edges: full.edges,
                scales: full.scales,
                per_scale_edge_counts: Some(full.per_scale_edge_counts),
                alpha: 8.0 * (1.0 + epsilon),
            };
            let config = RunConfig {
                command: "spanner const8".into(),
                graph: Some(graph.graph),
                epsilon: Some(epsilon),
                seed: Some(seed),
                light: Some(light),
                ..Default::default()
            };
            finish_spanner(&g, run, output, config, started)
        }
        SpannerCommand::Det { graph, k, output } => {
            let g = load(&graph.graph)?;
            let run = SpannerRun {
                edges: det_spanner(&g, k)?,
                scales: scales(&g),
                per_scale_edge_counts: None,
                alpha: 2.0 * det_girth_factor(g.n(), k) as f64,
            };
            let config = RunConfig {
                command: "spanner det".into(),
                graph: Some(graph.graph),
                k: Some(k),
                ..Default::default()
            };
            finish_spanner(&g, run, output, config, started)
        }
        SpannerCommand::Klogk { graph, k, random, output } => {
            let g = load(&graph.graph)?;
            let run = SpannerRun {
                edges: klogk_spanner(&g, k, &klogk_params(&random))?,
                scales: scales(&g),
                per_scale_edge_counts: None,
                alpha: 2.0 * klogk_girth_factor(k) as f64,
            };
            let config = RunConfig {
                command: "spanner klogk".into(),
                graph: Some(graph.graph),
                k: Some(k),
                seed: Some(random.seed),
                retries: Some(random.retries),
                light: Some(random.light),
                ..Default::default()
            };
            finish_spanner(&g, run, output, config, started)
        }
    }
}

/// The `result` member of a report, or the whole document.
fn payload(doc: Value) -> Value {
    match doc {
        Value::Object(mut map) if map.contains_key("result") => map.remove("result").unwrap(),
        other => other,
    }
}

fn read_cover(path: &Path) -> CliResult<Cover> {
    let text =
        fs::read_to_string(path).map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(bad_input)?;
    let mut body = payload(doc);
    if let Some(inner) = body.get_mut("cover") {
        body = inner.take();
    }
    serde_json::from_value(body).map_err(|e| bad_input(format!("not a cover: {e}")))
}

/// Spanner edge ids from a report's `edge_ids` or from a graph file whose
/// arcs must all be edges of `g`.
fn read_spanner(g: &Graph, path: &Path) -> CliResult<Vec<EdgeId>> {
    let text =
        fs::read_to_string(path).map_err(|e| bad_input(format!("{}: {e}", path.display())))?;
    if let Ok(doc) = serde_json::from_str::<Value>(&text) {
        let ids = payload(doc).get("edge_ids").cloned().ok_or_else(|| bad_input("no edge_ids"))?;
        let ids: Vec<EdgeId> = serde_json::from_value(ids).map_err(bad_input)?;
        if let Some(&bad) = ids.iter().find(|&&e| e >= g.m()) {
            return Err(bad_input(format!("edge id {bad} out of range")));
        }
        return Ok(ids);
    }
    let sub = parse_graph(&text)?;
    if sub.n() != g.n() {
        return Err(bad_input("spanner and graph have different vertex counts"));
    }
    sub.edges()
        .iter()
        .map(|e| match g.find_edge(e.from, e.to) {
            Some(id) if g.edge(id).weight == e.weight => Ok(id),
            _ => Err(bad_input(format!(
                "arc {} -> {} is not an edge of the graph",
                e.from + 1,
                e.to + 1
            ))),
        })
        .collect()
}

fn verify(cmd: VerifyCommand, started: Instant) -> CliResult {
    match cmd {
        VerifyCommand::Cover { graph, object, alpha, radius } => {
            let g = load(&graph.graph)?;
            check_apsp(&g)?;
            let cover = read_cover(&object)?;
            let radius = radius.unwrap_or(cover.radius);
            let alpha = alpha.unwrap_or(cover.stretch as f64);
            let report = verify_cover(&g, &cover, alpha, radius)?;
            let config = RunConfig {
                command: "verify cover".into(),
                graph: Some(graph.graph),
                radius: Some(radius),
                ..Default::default()
            };
            let ok = report.ok;
            emit("cover-report", &config, report, started)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::VerificationFailed("cover check failed".into()))
            }
        }
        VerifyCommand::Spanner { graph, object, alpha, radius } => {
            let g = load(&graph.graph)?;
            check_apsp(&g)?;
            let edges = read_spanner(&g, &object)?;
            let report = verify_spanner_within(&g, &edges, alpha, radius.unwrap_or(INFINITY))?;
            let config = RunConfig {
                command: "verify spanner".into(),
                graph: Some(graph.graph),
                radius,
                ..Default::default()
            };
            let ok = report.ok;
            emit("stretch-report", &config, report, started)?;
            if ok {
                Ok(())
            } else {
                Err(CliError::VerificationFailed("spanner check failed".into()))
            }
        }
    }
}
