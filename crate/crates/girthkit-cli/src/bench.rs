//! Benchmark suites: every (instance, algorithm, seed) row runs
//! independently and rows are written in suite order.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use girth_kit::covers_det::{det_girth, det_girth_factor, det_spanner};
use girth_kit::covers_klogk::{klogk_girth, klogk_girth_factor, klogk_spanner, KlogkParams};
use girth_kit::generate::GeneratorSpec;
use girth_kit::girth3::{girth_estimate, SearchMode, SimilarSetConfig};
use girth_kit::graph::{EdgeId, Graph, Length, INFINITY};
use girth_kit::io::read_graph;
use girth_kit::oracle::{exact_girth, verify_spanner, APSP_LIMIT};
use girth_kit::spanner8::{full_spanner, SpannerParams};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::args::BenchArgs;
use crate::{bad_input, CliError, CliResult, SCHEMA_VERSION};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub instances: Vec<SuiteInstance>,
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_k")]
    pub k: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_k() -> usize {
    2
}

fn default_epsilon() -> f64 {
    0.25
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteInstance {
    pub name: String,
    /// Graph file, relative to the suite file.
    pub file: Option<PathBuf>,
    pub generator: Option<GeneratorSpec>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Exact,
    Approx3,
    Approx3Geometric,
    Det,
    Klogk,
    SpannerConst8,
    SpannerDet,
    SpannerKlogk,
}

impl Algorithm {
    /// Deterministic algorithms run once, with the first seed.
    fn is_deterministic(self) -> bool {
        matches!(self, Algorithm::Exact | Algorithm::Det | Algorithm::SpannerDet)
    }
}

/// One CSV row. Girth rows report the estimate as `value` and the exact
/// girth as `baseline`; spanner rows report the edge count and the measured
/// stretch.
#[derive(Debug, Serialize)]
pub struct BenchRecord {
    pub schema_version: u32,
    pub instance: String,
    pub generator: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub generator_seed: Option<u64>,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub wall_ms: Option<f64>,
    pub value: Option<Length>,
    pub baseline: Option<Length>,
    pub ratio: Option<f64>,
    pub max_stretch: Option<f64>,
    pub error: Option<String>,
}

struct Loaded {
    name: String,
    generator: String,
    generator_seed: Option<u64>,
    graph: Result<Graph, String>,
    /// Exact girth, computed once when the instance is small enough.
    girth: Option<Length>,
}

fn load(instance: &SuiteInstance, base: &std::path::Path) -> Loaded {
    let (generator, generator_seed, graph) = match (&instance.file, &instance.generator) {
        (Some(file), None) => {
            let path = base.join(file);
            let graph = read_graph(&path).map_err(|e| format!("{}: {e}", path.display()));
            ("file".to_string(), None, graph)
        }
        (None, Some(spec)) => {
            let kind = serde_json::to_value(&spec.family)
                .ok()
                .and_then(|v| v.get("kind").and_then(|k| k.as_str().map(str::to_string)))
                .unwrap_or_default();
            (kind, Some(spec.seed.0), spec.generate().map_err(|e| e.to_string()))
        }
        _ => ("none".into(), None, Err("instance needs exactly one of file or generator".into())),
    };
    let girth = match &graph {
        Ok(g) if g.n() <= APSP_LIMIT => Some(exact_girth(g).0),
        _ => None,
    };
    Loaded { name: instance.name.clone(), generator, generator_seed, graph, girth }
}

enum Measured {
    Girth(Length),
    Spanner(Vec<EdgeId>, f64),
}

fn measure(
    g: &Graph,
    algorithm: Algorithm,
    seed: u64,
    suite: &Suite,
) -> girth_kit::Result<Measured> {
    let k = suite.k;
    let cfg = SimilarSetConfig::seeded(seed);
    Ok(match algorithm {
        Algorithm::Exact => Measured::Girth(exact_girth(g).0),
        Algorithm::Approx3 => {
            Measured::Girth(girth_estimate(g, SearchMode::Binary, &cfg)?.estimate)
        }
        Algorithm::Approx3Geometric => {
            let mode = SearchMode::Geometric { epsilon: suite.epsilon };
            Measured::Girth(girth_estimate(g, mode, &cfg)?.estimate)
        }
        Algorithm::Det => Measured::Girth(det_girth(g, k)?.estimate),
        Algorithm::Klogk => Measured::Girth(klogk_girth(g, k, &KlogkParams::new(seed))?.estimate),
        Algorithm::SpannerConst8 => {
            let full = full_spanner(g, suite.epsilon, &SpannerParams::new(seed))?;
            Measured::Spanner(full.edges, 8.0 * (1.0 + suite.epsilon))
        }
        Algorithm::SpannerDet => {
            Measured::Spanner(det_spanner(g, k)?, 2.0 * det_girth_factor(g.n(), k) as f64)
        }
        Algorithm::SpannerKlogk => Measured::Spanner(
            klogk_spanner(g, k, &KlogkParams::new(seed))?,
            2.0 * klogk_girth_factor(k) as f64,
        ),
    })
}

fn row(instance: &Loaded, algorithm: Algorithm, seed: u64, suite: &Suite) -> BenchRecord {
    let mut record = BenchRecord {
        schema_version: SCHEMA_VERSION,
        instance: instance.name.clone(),
        generator: instance.generator.clone(),
        n: None,
        m: None,
        generator_seed: instance.generator_seed,
        algorithm,
        seed,
        wall_ms: None,
        value: None,
        baseline: None,
        ratio: None,
        max_stretch: None,
        error: None,
    };
    let g = match &instance.graph {
        Ok(g) => g,
        Err(e) => {
            record.error = Some(e.clone());
            return record;
        }
    };
    record.n = Some(g.n());
    record.m = Some(g.m());
    let started = Instant::now();
    let measured = measure(g, algorithm, seed, suite);
    record.wall_ms = Some(started.elapsed().as_secs_f64() * 1e3);
    match measured {
        Err(e) => record.error = Some(e.to_string()),
        Ok(Measured::Girth(estimate)) => {
            record.value = (estimate != INFINITY).then_some(estimate);
            record.baseline = instance.girth.filter(|&b| b != INFINITY);
            if let (Some(v), Some(b)) = (record.value, record.baseline) {
                record.ratio = (b > 0).then(|| v as f64 / b as f64);
            }
        }
        Ok(Measured::Spanner(edges, alpha)) => {
            record.value = Some(edges.len() as Length);
            record.baseline = Some(g.m() as Length);
            if g.n() <= APSP_LIMIT {
                match verify_spanner(g, &edges, alpha) {
                    Ok(report) if report.pairs_checked > 0 => {
                        record.max_stretch = Some(report.max_stretch)
                    }
                    Ok(_) => {}
                    Err(e) => record.error = Some(e.to_string()),
                }
            }
        }
    }
    record
}

fn thread_cap() -> CliResult<Option<usize>> {
    match std::env::var("GIRTHKIT_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.parse::<usize>() {
            Ok(t) if t > 0 => Ok(Some(t)),
            _ => Err(bad_input(format!("GIRTHKIT_THREADS must be a positive integer, got `{v}`"))),
        },
    }
}

pub fn run(args: &BenchArgs) -> CliResult {
    let text = fs::read_to_string(&args.suite)
        .map_err(|e| bad_input(format!("{}: {e}", args.suite.display())))?;
    let suite: Suite = serde_json::from_str(&text).map_err(|e| bad_input(format!("suite: {e}")))?;
    if suite.seeds.is_empty() || suite.algorithms.is_empty() {
        return Err(bad_input("suite needs at least one algorithm and one seed"));
    }
    let base = args.suite.parent().map(|p| p.to_path_buf()).unwrap_or_default();

    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(threads) = thread_cap()? {
        builder = builder.num_threads(threads);
    }
    let pool = builder.build().map_err(|e| CliError::Internal(e.to_string()))?;

    let records: Vec<BenchRecord> = pool.install(|| {
        let loaded: Vec<Loaded> = suite.instances.par_iter().map(|i| load(i, &base)).collect();
        let mut jobs: Vec<(&Loaded, Algorithm, u64)> = Vec::new();
        for inst in &loaded {
            for &a in &suite.algorithms {
                let seeds = if a.is_deterministic() { &suite.seeds[..1] } else { &suite.seeds[..] };
                jobs.extend(seeds.iter().map(|&s| (inst, a, s)));
            }
        }
        jobs.par_iter().map(|&(inst, a, s)| row(inst, a, s, &suite)).collect()
    });

    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(fs::File::create(path).map_err(bad_input)?),
        None => Box::new(std::io::stdout()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    for record in &records {
        writer.serialize(record).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    writer.flush().map_err(|e| CliError::Internal(e.to_string()))?;
    Ok(())
}
