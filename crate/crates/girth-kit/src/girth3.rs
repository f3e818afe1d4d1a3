//! Randomized 3-approximation of the girth.
//!
//! For a radius `R`, sampled vertices either expose a cycle of length at most
//! `3R` directly, or their distances are used to shrink, for every vertex
//! `v`, the set of vertices that could share a cycle of length at most `R`
//! with `v`. A search restricted to those sets then finds such a cycle. The
//! outer search over `R` turns this into a girth estimate.

use rand::Rng;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    dijkstra, is_acyclic, pruned_dijkstra, shortest_cycle_through, zero_length_cycle, CycleWitness,
    Direction, DistanceMap, EdgeId, Graph, Length, VertexId, INFINITY,
};
use crate::regularize::regularize;
use crate::rng::{bernoulli_subset, sample_sorted, Seed};

/// ceil(log2 n), at least 1.
pub(crate) fn log2_ceil(n: usize) -> usize {
    (usize::BITS - n.max(2).saturating_sub(1).leading_zeros()) as usize
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimilarSetParams {
    /// Number of filtering rounds M; sample sets S_0..S_M.
    pub rounds: usize,
    /// Probability with which each vertex enters each sample set.
    pub sample_prob: f64,
    /// Size of each witness set R_i(v).
    pub witness_size: usize,
    pub seed: Seed,
}

impl SimilarSetParams {
    /// M = 50 ceil(log2 n), p = n^(-1/2), witness size 100 ceil(log2 n).
    pub fn for_size(n: usize, seed: Seed) -> Self {
        let log = log2_ceil(n);
        SimilarSetParams {
            rounds: 50 * log,
            sample_prob: (n.max(1) as f64).powf(-0.5).min(1.0),
            witness_size: 100 * log,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 || self.witness_size == 0 {
            return Err(Error::InvalidArgument("rounds and witness size must be positive".into()));
        }
        if !(self.sample_prob > 0.0 && self.sample_prob <= 1.0) {
            return Err(Error::InvalidArgument(format!(
                "sample probability {} outside (0, 1]",
                self.sample_prob
            )));
        }
        Ok(())
    }

    fn reseeded(&self, seed: Seed) -> Self {
        SimilarSetParams { seed, ..self.clone() }
    }
}

/// Parameters left unset take their size-dependent defaults, resolved
/// against the graph the filtering actually runs on.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SimilarSetConfig {
    pub rounds: Option<usize>,
    pub sample_prob: Option<f64>,
    pub witness_size: Option<usize>,
    pub seed: Seed,
}

impl SimilarSetConfig {
    pub fn seeded(seed: u64) -> Self {
        SimilarSetConfig { seed: Seed(seed), ..Default::default() }
    }

    pub fn resolve(&self, n: usize) -> SimilarSetParams {
        let defaults = SimilarSetParams::for_size(n, self.seed);
        SimilarSetParams {
            rounds: self.rounds.unwrap_or(defaults.rounds),
            sample_prob: self.sample_prob.unwrap_or(defaults.sample_prob),
            witness_size: self.witness_size.unwrap_or(defaults.witness_size),
            seed: self.seed,
        }
    }
}

/// The vertices kept for one `v`, with the search tree that reached them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimilarSet {
    /// Ascending.
    pub members: Vec<VertexId>,
    pub tree: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimilarSetOutcome {
    /// A sampled vertex lies on this cycle of length at most 3R.
    Cycle(CycleWitness),
    /// A_v for every vertex, indexed by vertex id.
    Sets(Vec<SimilarSet>),
}

/// The sample sets S_0..S_M and distances to every sampled vertex, bounded
/// at 3R/2, from which the per-vertex filtering reads all its distances.
pub(crate) struct SampleDistances {
    radius: Length,
    samples: Vec<Vec<VertexId>>,
    to_sample: FxHashMap<VertexId, DistanceMap>,
    /// For each vertex v, the sampled s with d(v, s) <= R/2, ascending.
    near: Vec<Vec<VertexId>>,
}

impl SampleDistances {
    /// Distinct sampled vertices, ascending.
    pub(crate) fn union(samples: &[Vec<VertexId>]) -> Vec<VertexId> {
        let mut all: Vec<VertexId> = samples.iter().flatten().copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }

    pub(crate) fn new(g: &Graph, radius: Length, samples: Vec<Vec<VertexId>>) -> Result<Self> {
        let half = radius / 2;
        let three_half = radius.saturating_mul(3) / 2;
        let mut to_sample = FxHashMap::default();
        let mut near = vec![Vec::new(); g.n()];
        for s in Self::union(&samples) {
            let map = dijkstra(g, s, Direction::In, Some(three_half))?;
            for (x, d) in map.reached() {
                if d <= half {
                    near[x].push(s);
                }
            }
            to_sample.insert(s, map);
        }
        Ok(SampleDistances { radius, samples, to_sample, near })
    }

    fn within_three_half(&self, x: VertexId, t: VertexId) -> bool {
        self.to_sample[&t].dist(x) <= self.radius.saturating_mul(3) / 2
    }

    /// A_v: the witness rounds followed by a search to depth R/2 that keeps
    /// only `allowed` vertices within 3R/2 of every witness.
    pub(crate) fn filter<F>(
        &self,
        g: &Graph,
        v: VertexId,
        witness_size: usize,
        rng: &mut impl Rng,
        allowed: F,
    ) -> Result<SimilarSet>
    where
        F: Fn(VertexId) -> bool,
    {
        let mut witnesses: Vec<VertexId> = Vec::new();
        for round in &self.samples {
            let candidates: Vec<VertexId> = self.near[v]
                .iter()
                .copied()
                .filter(|s| round.binary_search(s).is_ok())
                .filter(|&s| witnesses.iter().all(|&t| self.within_three_half(s, t)))
                .collect();
            witnesses.extend(sample_sorted(rng, &candidates, witness_size));
        }
        witnesses.sort_unstable();
        witnesses.dedup();
        let keep = |x: VertexId| {
            x == v || (allowed(x) && witnesses.iter().all(|&t| self.within_three_half(x, t)))
        };
        let tree = pruned_dijkstra(g, v, Direction::Out, self.radius / 2, keep)?;
        let members = tree.reached().into_iter().map(|(x, _)| x).collect();
        Ok(SimilarSet { members, tree: tree.tree_edges() })
    }
}

pub(crate) fn sample_rounds(
    n: usize,
    rounds: usize,
    p: f64,
    seed: Seed,
    tag: &str,
) -> Vec<Vec<VertexId>> {
    (0..=rounds as u64).map(|i| bernoulli_subset(&mut seed.derive(tag, i).rng(), n, p)).collect()
}

/// Either a cycle of length at most 3R through a sampled vertex, or the
/// filtered sets A_v for every vertex.
pub fn similar_set(
    g: &Graph,
    radius: Length,
    params: &SimilarSetParams,
) -> Result<SimilarSetOutcome> {
    params.validate()?;
    if radius == 0 {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    let samples =
        sample_rounds(g.n(), params.rounds, params.sample_prob, params.seed, "similar-sample");
    let limit = radius.saturating_mul(3);
    for s in SampleDistances::union(&samples) {
        let from_s = dijkstra(g, s, Direction::Out, Some(limit))?;
        if let Some(cycle) = shortest_cycle_through(g, &from_s) {
            if cycle.length <= limit {
                return Ok(SimilarSetOutcome::Cycle(cycle));
            }
        }
    }
    let distances = SampleDistances::new(g, radius, samples)?;
    let sets = g
        .vertices()
        .map(|v| {
            let mut rng = params.seed.derive("similar-witness", v as u64).rng();
            distances.filter(g, v, params.witness_size, &mut rng, |_| true)
        })
        .collect::<Result<_>>()?;
    Ok(SimilarSetOutcome::Sets(sets))
}

/// Merges two ascending vertex lists.
pub(crate) fn merge_sorted(a: &[VertexId], b: &[VertexId]) -> Vec<VertexId> {
    let mut merged = Vec::with_capacity(a.len() + b.len());
    merged.extend_from_slice(a);
    merged.extend_from_slice(b);
    merged.sort_unstable();
    merged.dedup();
    merged
}

/// A cycle of length at most 3R, guaranteed to be found when the girth is at
/// most R.
pub fn girth_approx(
    g: &Graph,
    radius: Length,
    params: &SimilarSetParams,
) -> Result<Option<CycleWitness>> {
    let out_sets = match similar_set(g, radius, &params.reseeded(params.seed.derive("out", 0)))? {
        SimilarSetOutcome::Cycle(c) => return Ok(Some(c)),
        SimilarSetOutcome::Sets(sets) => sets,
    };
    let rev = g.reversed();
    let in_sets = match similar_set(&rev, radius, &params.reseeded(params.seed.derive("in", 0)))? {
        SimilarSetOutcome::Cycle(c) => return Ok(Some(c.reversed())),
        SimilarSetOutcome::Sets(sets) => sets,
    };
    let limit = radius.saturating_mul(3);
    for v in g.vertices() {
        let union = merge_sorted(&out_sets[v].members, &in_sets[v].members);
        if union.len() < 2 && g.self_loop(v).is_none() {
            continue;
        }
        let from_v =
            pruned_dijkstra(g, v, Direction::Out, radius, |x| union.binary_search(&x).is_ok())?;
        if let Some(cycle) = shortest_cycle_through(g, &from_v) {
            if cycle.length <= limit {
                return Ok(Some(cycle));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum SearchMode {
    /// Bisection over integer radii in [0, nW].
    Binary,
    /// Radii growing by a factor 1 + epsilon from the lightest edge weight.
    Geometric { epsilon: f64 },
}

/// One radius tried by the outer search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusProbe {
    pub radius: Length,
    /// Length of the cycle found, if any.
    pub found: Option<Length>,
    pub attempts: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GirthEstimate {
    /// Length of `witness`; [`INFINITY`] for acyclic graphs.
    pub estimate: Length,
    pub witness: Option<CycleWitness>,
    pub radius_schedule: Vec<RadiusProbe>,
}

struct Prober<'a> {
    h: &'a Graph,
    config: &'a SimilarSetConfig,
    schedule: Vec<RadiusProbe>,
    best: Option<CycleWitness>,
}

impl Prober<'_> {
    /// Runs the radius once, and once more with a fresh seed on failure.
    fn probe(&mut self, radius: Length) -> Result<bool> {
        let base = self.config.resolve(self.h.n());
        let mut attempts = 0;
        let mut found = None;
        while attempts < 2 && found.is_none() {
            let seed = base.seed.derive("radius", radius).derive("attempt", attempts as u64);
            attempts += 1;
            found = girth_approx(self.h, radius, &base.reseeded(seed))?;
        }
        self.schedule.push(RadiusProbe {
            radius,
            found: found.as_ref().map(|c| c.length),
            attempts,
        });
        let success = found.is_some();
        if let Some(c) = found {
            if self.best.as_ref().is_none_or(|b| c.length < b.length) {
                self.best = Some(c);
            }
        }
        Ok(success)
    }
}

/// Girth estimate g' with g <= g' <= 3g in binary mode and
/// g <= g' <= 3(1 + epsilon)g in geometric mode; g' is always the length of
/// a returned cycle.
pub fn girth_estimate(
    g: &Graph,
    mode: SearchMode,
    config: &SimilarSetConfig,
) -> Result<GirthEstimate> {
    if let SearchMode::Geometric { epsilon } = mode {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be positive")));
        }
    }
    let screened =
        |estimate, witness| GirthEstimate { estimate, witness, radius_schedule: Vec::new() };
    if let Some(zero) = zero_length_cycle(g) {
        return Ok(screened(0, Some(zero)));
    }
    if is_acyclic(g) {
        return Ok(screened(INFINITY, None));
    }
    let rg = regularize(g);
    let mut prober = Prober { h: &rg.h, config, schedule: Vec::new(), best: None };
    let horizon = g.length_horizon().max(1);
    match mode {
        SearchMode::Binary => {
            let (mut lo, mut hi) = (0, horizon);
            if prober.probe(hi)? {
                while hi - lo > 1 {
                    let mid = lo + (hi - lo) / 2;
                    if prober.probe(mid)? {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
            }
        }
        SearchMode::Geometric { epsilon } => {
            let mut radius = g.min_positive_weight().unwrap_or(1);
            loop {
                if prober.probe(radius.min(horizon))? || radius >= horizon {
                    break;
                }
                let grown = (radius as f64 * (1.0 + epsilon)).floor() as Length;
                radius = grown.max(radius + 1);
            }
        }
    }
    let Prober { schedule, best, .. } = prober;
    let mut witness = best.map(|c| rg.lift_cycle(g, &c)).transpose()?;
    if let Some((v, w)) = g.lightest_self_loop() {
        if witness.as_ref().is_none_or(|c| w < c.length) {
            witness = Some(CycleWitness { vertices: vec![v], length: w });
        }
    }
    let estimate = witness.as_ref().map_or(INFINITY, |c| c.length);
    Ok(GirthEstimate { estimate, witness, radius_schedule: schedule })
}
