//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use girth_kit::cover::CoverGirth;
use girth_kit::covers_det::{
    cover_stretch, det_girth, det_girth_factor, det_spanner, roundtrip_cover,
};
use girth_kit::covers_klogk::{klogk_girth, klogk_stretch, roundtrip_cover2, KlogkParams};
use girth_kit::error::Error;
use girth_kit::generate::random_regular;
use girth_kit::girth3::{girth_estimate, GirthEstimate, SearchMode, SimilarSetConfig};
use girth_kit::graph::{Graph, Length, INFINITY};
use girth_kit::oracle::{
    exact_girth, roundtrip_matrix, verify_cover, verify_spanner, verify_spanner_within,
};
use girth_kit::regularize::{branching_factor, regularize};
use girth_kit::rng::Seed;
use girth_kit::spanner8::{edge_allowance, full_spanner, spanner_approx, SpannerParams};

type Outcome = Result<String, String>;

/// Name, check and time limit of one criterion.
type Criterion = (&'static str, fn() -> Outcome, Duration);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn at_least(hits: usize, total: usize, fraction: f64) -> bool {
    hits as f64 >= fraction * total as f64
}

fn check_cycle_estimate(
    g: &Graph,
    exact: Length,
    est: &GirthEstimate,
    what: &str,
) -> Result<(), String> {
    match &est.witness {
        Some(w) => {
            let replayed =
                w.replay(g).map_err(|e| format!("{what}: witness does not replay: {e}"))?;
            ensure(replayed == est.estimate, || {
                format!("{what}: witness {replayed} != estimate {}", est.estimate)
            })?;
        }
        None => {
            ensure(est.estimate == INFINITY, || format!("{what}: finite estimate without witness"))?
        }
    }
    ensure(est.estimate >= exact, || {
        format!("{what}: estimate {} below girth {exact}", est.estimate)
    })
}

fn check_cover_estimate(
    g: &Graph,
    exact: Length,
    est: &CoverGirth,
    what: &str,
) -> Result<(), String> {
    match &est.witness {
        Some(w) => {
            let replayed =
                w.replay(g).map_err(|e| format!("{what}: witness does not replay: {e}"))?;
            ensure(replayed <= est.estimate, || {
                format!("{what}: witness {replayed} above estimate")
            })?;
        }
        None => {
            ensure(est.estimate == INFINITY, || format!("{what}: finite estimate without witness"))?
        }
    }
    ensure(est.estimate >= exact, || {
        format!("{what}: estimate {} below girth {exact}", est.estimate)
    })
}

fn soundness() -> Outcome {
    let corpus = common::corpus(210, 120, 1);
    let mut checks = 0;
    for inst in &corpus {
        let g = &inst.graph;
        let exact = exact_girth(g).0;
        let cfg = SimilarSetConfig::seeded(0);
        let err = |e: Error| format!("{}: {e}", inst.name);
        for mode in [SearchMode::Binary, SearchMode::Geometric { epsilon: 0.25 }] {
            let est = girth_estimate(g, mode, &cfg).map_err(err)?;
            check_cycle_estimate(g, exact, &est, &format!("{} approx3 {mode:?}", inst.name))?;
            checks += 1;
        }
        for k in [2, 3] {
            let est = det_girth(g, k).map_err(err)?;
            check_cover_estimate(g, exact, &est, &format!("{} det k={k}", inst.name))?;
            checks += 1;
        }
        for params in [KlogkParams::new(0), KlogkParams::light(0)] {
            let est = klogk_girth(g, 2, &params).map_err(err)?;
            check_cover_estimate(g, exact, &est, &format!("{} klogk", inst.name))?;
            checks += 1;
        }
    }
    Ok(format!(
        "{} instances, {checks} estimates, all >= exact girth with replayed witnesses",
        corpus.len()
    ))
}

fn approx3_sandwich() -> Outcome {
    let corpus = common::planted_corpus(100, 120, 2);
    let mut within = 0;
    let mut worst: f64 = 1.0;
    for (i, (g, girth)) in corpus.iter().enumerate() {
        let est = girth_estimate(g, SearchMode::Binary, &SimilarSetConfig::seeded(0))
            .map_err(|e| format!("instance {i}: {e}"))?;
        ensure(est.estimate >= *girth, || format!("instance {i}: {} < {girth}", est.estimate))?;
        worst = worst.max(est.estimate as f64 / *girth as f64);
        within += (est.estimate <= 3 * girth) as usize;
    }
    ensure(within >= 95, || format!("g' <= 3g on {within} of 100"))?;
    Ok(format!("g' <= 3g on {within} of 100 planted instances, worst ratio {worst:.3}"))
}

fn deterministic_covers() -> Outcome {
    let corpus = common::corpus(50, 80, 3);
    let mut covers = 0;
    let mut worst_ratio: f64 = 0.0;
    for inst in &corpus {
        let g = &inst.graph;
        let n = g.n();
        let exact = exact_girth(g).0;
        for k in [2, 3] {
            for radius in [1, 2, 4, 8] {
                let cover = roundtrip_cover(g, k, radius).map_err(|e| e.to_string())?;
                let report = verify_cover(g, &cover, cover_stretch(n, k) as f64, radius)
                    .map_err(|e| e.to_string())?;
                ensure(report.ok, || format!("{} k={k} R={radius}: {report:?}", inst.name))?;
                let limit = 10.0 * (n as f64).powf(k as f64 / (k as f64 - 1.0));
                ensure(cover.total_members() as f64 <= limit, || {
                    format!("{} k={k} R={radius}: {} members", inst.name, cover.total_members())
                })?;
                let again = roundtrip_cover(g, k, radius).map_err(|e| e.to_string())?;
                ensure(
                    serde_json::to_vec(&cover).unwrap() == serde_json::to_vec(&again).unwrap(),
                    || format!("{} k={k} R={radius}: runs differ", inst.name),
                )?;
                covers += 1;
            }
            let est = det_girth(g, k).map_err(|e| e.to_string())?;
            ensure(est.estimate >= exact, || format!("{}: below girth", inst.name))?;
            if exact < INFINITY {
                let bound = det_girth_factor(n, k) * exact;
                ensure(est.estimate <= bound, || {
                    format!("{} k={k}: {} > {bound}", inst.name, est.estimate)
                })?;
                worst_ratio = worst_ratio.max(est.estimate as f64 / exact as f64);
            }
        }
    }
    Ok(format!("{covers} covers verified and reproducible; worst girth ratio {worst_ratio:.2}"))
}

fn deterministic_spanners() -> Outcome {
    let corpus = common::corpus(30, 60, 4);
    let mut worst: f64 = 0.0;
    for inst in &corpus {
        let g = &inst.graph;
        let edges = det_spanner(g, 2).map_err(|e| e.to_string())?;
        let alpha = 2.0 * det_girth_factor(g.n(), 2) as f64;
        let report = verify_spanner(g, &edges, alpha).map_err(|e| e.to_string())?;
        ensure(report.ok, || format!("{}: {report:?}", inst.name))?;
        if report.pairs_checked > 0 {
            worst = worst.max(report.max_stretch);
        }
    }
    Ok(format!("30 spanners within alpha; worst stretch {worst:.2}"))
}

fn randomized_covers() -> Outcome {
    let corpus = common::corpus(50, 70, 5);
    let stretch = klogk_stretch(2) as f64;
    let mut summary = Vec::new();
    for (label, make) in
        [("default", KlogkParams::new as fn(u64) -> KlogkParams), ("light", KlogkParams::light)]
    {
        let mut good = 0;
        let mut runs = 0;
        for (i, inst) in corpus.iter().enumerate() {
            let g = &inst.graph;
            let radius = [1, 2, 4, 8][i % 4];
            for seed in [0, 1] {
                runs += 1;
                match roundtrip_cover2(g, 2, radius, &make(seed)) {
                    Ok(cover) => {
                        let report =
                            verify_cover(g, &cover, stretch, radius).map_err(|e| e.to_string())?;
                        good += report.ok as usize;
                    }
                    Err(Error::RetriesExhausted { .. }) => {}
                    Err(e) => return Err(format!("{} seed {seed}: {e}", inst.name)),
                }
            }
        }
        ensure(at_least(good, runs, 0.95), || format!("{label}: {good} of {runs} verified"))?;
        summary.push(format!("{label} {good}/{runs}"));
    }
    Ok(format!("covers verified: {}; no invariant check fired", summary.join(", ")))
}

fn constant_spanners() -> Outcome {
    let graphs = common::cyclic_er(40, 60, 6);
    let mut summary = Vec::new();
    let mut worst_size: f64 = 0.0;
    for (label, make) in [
        ("default", SpannerParams::new as fn(u64) -> SpannerParams),
        ("light", SpannerParams::light),
    ] {
        let mut good = 0;
        for (i, g) in graphs.iter().enumerate() {
            let radius = 2 * exact_girth(g).0;
            let rg = regularize(g);
            let h_edges =
                spanner_approx(&rg.h, radius, &make(i as u64)).map_err(|e| e.to_string())?;
            let lifted = rg.lift_subgraph(&h_edges);
            let report =
                verify_spanner_within(g, &lifted, 8.0, radius).map_err(|e| e.to_string())?;
            good += report.ok as usize;
        }
        ensure(at_least(good, 40, 0.95), || format!("{label} per-radius: {good} of 40"))?;

        let mut full_good = 0;
        for (i, g) in graphs.iter().take(20).enumerate() {
            let full = full_spanner(g, 0.25, &make(100 + i as u64)).map_err(|e| e.to_string())?;
            full_good +=
                verify_spanner(g, &full.edges, 8.0 * 1.25).map_err(|e| e.to_string())?.ok as usize;
            let allowance = edge_allowance(regularize(g).h.n(), 4.0);
            for &count in &full.per_scale_edge_counts {
                ensure(count as f64 <= allowance, || {
                    format!("{label}: scale with {count} edges > {allowance:.0}")
                })?;
                worst_size = worst_size.max(count as f64 / allowance);
            }
        }
        ensure(at_least(full_good, 20, 0.95), || format!("{label} full: {full_good} of 20"))?;
        summary.push(format!("{label} per-radius {good}/40 full {full_good}/20"));
    }
    Ok(format!(
        "{}; largest scale uses {:.5} of the edge allowance",
        summary.join(", "),
        worst_size
    ))
}

fn regularization() -> Outcome {
    let corpus = common::corpus(100, 40, 7);
    for inst in &corpus {
        let g = &inst.graph;
        let rg = regularize(g);
        let bound = branching_factor(g);
        ensure(bound == 2.max(g.m().div_ceil(g.n())), || format!("{}: delta {bound}", inst.name))?;
        ensure(rg.max_degree() <= bound, || {
            format!("{}: degree {} > {bound}", inst.name, rg.max_degree())
        })?;
        let before = roundtrip_matrix(g).map_err(|e| e.to_string())?;
        let after = roundtrip_matrix(&rg.h).map_err(|e| e.to_string())?;
        for u in 0..g.n() {
            for v in 0..g.n() {
                ensure(before[u][v] == after[u][v], || format!("{}: pair ({u}, {v})", inst.name))?;
            }
        }
    }
    Ok("100 instances: roundtrips exact, degrees within max(2, ceil(m/n))".into())
}

fn oracle_consistency() -> Outcome {
    let corpus = common::corpus(100, 24, 8);
    for inst in &corpus {
        let exact = exact_girth(&inst.graph).0;
        let matrix = common::min_plus_girth(&inst.graph);
        ensure(exact == matrix, || format!("{}: {exact} vs {matrix}", inst.name))?;
    }
    Ok("100 instances: exact girth equals the min-plus matrix oracle".into())
}

fn time<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

fn scaling() -> Outcome {
    let sizes = [1_000usize, 4_000, 16_000];
    let mut approx_times = Vec::new();
    let mut exact_times = Vec::new();
    let mut rows = Vec::new();
    for &n in &sizes {
        let g = random_regular(n, 3, 1..=100, Seed(9)).map_err(|e| e.to_string())?;
        let (est, t_approx) =
            time(|| girth_estimate(&g, SearchMode::Binary, &SimilarSetConfig::seeded(0)));
        let est = est.map_err(|e| e.to_string())?;
        let ((exact, _), t_exact) = time(|| exact_girth(&g));
        ensure(est.estimate >= exact && est.estimate <= 3 * exact, || {
            format!("n={n}: estimate {} vs girth {exact}", est.estimate)
        })?;
        approx_times.push(t_approx);
        exact_times.push(t_exact);
        rows.push(format!("n={n} approx {t_approx:.2}s exact {t_exact:.2}s"));
    }
    let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let approx_slope = common::loglog_slope(&xs, &approx_times);
    let exact_slope = common::loglog_slope(&xs, &exact_times);
    let detail = format!(
        "{}; fitted exponents approx {approx_slope:.2} exact {exact_slope:.2}",
        rows.join(", ")
    );
    ensure(approx_slope <= 1.8 + 0.3 && exact_slope >= 1.9 - 0.3, || detail.clone())?;
    Ok(detail)
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("soundness of every girth estimate", soundness, Duration::from_secs(120)),
        ("approx3 sandwich on planted girth", approx3_sandwich, Duration::from_secs(300)),
        ("deterministic covers, girth and size", deterministic_covers, Duration::from_secs(300)),
        ("deterministic spanners", deterministic_spanners, Duration::from_secs(180)),
        ("randomized covers", randomized_covers, Duration::from_secs(300)),
        ("constant-stretch spanners", constant_spanners, Duration::from_secs(300)),
        ("regularization", regularization, Duration::from_secs(120)),
        ("oracle self-consistency", oracle_consistency, Duration::from_secs(60)),
        ("scaling smoke test", scaling, Duration::MAX),
    ];
    let mut failed = 0;
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let (outcome, secs) = time(run);
        let outcome = outcome.and_then(|detail| {
            if secs > limit.as_secs_f64() {
                Err(format!("{detail}; took {secs:.1}s, limit {}s", limit.as_secs()))
            } else {
                Ok(detail)
            }
        });
        match outcome {
            Ok(detail) => println!("PASS criterion {} ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {} ({name}): {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
