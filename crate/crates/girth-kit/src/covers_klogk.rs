//! Randomized roundtrip covers with stretch O(k log k): sampled vertices
//! resolve dense regions directly, and the rest is partitioned by growing
//! balls of vertices that pass sampled distance tests.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::cover::{girth_from_covers, scales, zero_roundtrip_edges, Ball, Cover, CoverGirth};
use crate::covers_det::power_at_most;
use crate::error::{Error, Result};
use crate::girth3::log2_ceil;
use crate::graph::{
    dijkstra, induced_subgraph, pruned_dijkstra, Direction, DistanceMap, EdgeId, Graph, Length,
    VertexId, VertexMap,
};
use crate::rng::{sample_sorted, uniform_subset, Seed};

/// K = max(10, ceil(10 k log2 max(k, 2))).
pub fn big_k(k: usize) -> usize {
    let k_f = k as f64;
    ((10.0 * k_f * k_f.max(2.0).log2()).ceil() as usize).max(10)
}

/// Multiplier on `R` bounding every ball: 4K + 1.
pub fn klogk_stretch(k: usize) -> u64 {
    4 * big_k(k) as u64 + 1
}

/// Sandwich factor for [`klogk_girth`]: g <= estimate <= factor * g w.h.p.
pub fn klogk_girth_factor(k: usize) -> u64 {
    2 * klogk_stretch(k)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KlogkParams {
    /// Sample rounds: `rounds_factor * ceil(log2 n_hat)`.
    pub rounds_factor: usize,
    /// Sample size per round: `sample_factor * n^(1/k) * ceil(log2 n_hat)^2`,
    /// capped at n.
    pub sample_factor: f64,
    /// Witnesses drawn per round: `witness_factor * ceil(log2 n_hat)`.
    pub witness_factor: usize,
    /// Reseeded attempts after a failed ball growth.
    pub retries: u32,
    /// Run the ball-growth invariant checks while building.
    pub check_lemmas: bool,
    /// Keep a log of recursive calls and deletions in the trace.
    pub record_events: bool,
    pub seed: Seed,
}

impl KlogkParams {
    pub fn new(seed: u64) -> Self {
        KlogkParams {
            rounds_factor: 100,
            sample_factor: 100.0,
            witness_factor: 50,
            retries: 3,
            check_lemmas: true,
            record_events: false,
            seed: Seed(seed),
        }
    }

    /// Small constants so that sampling is sparse on small graphs and the
    /// ball-growing phase does real work.
    pub fn light(seed: u64) -> Self {
        KlogkParams { rounds_factor: 1, sample_factor: 0.01, witness_factor: 1, ..Self::new(seed) }
    }

    fn validate(&self) -> Result<()> {
        if self.rounds_factor == 0 || self.witness_factor == 0 {
            return Err(Error::InvalidArgument(
                "round and witness factors must be positive".into(),
            ));
        }
        if !(self.sample_factor > 0.0 && self.sample_factor.is_finite()) {
            return Err(Error::InvalidArgument("sample factor must be positive".into()));
        }
        Ok(())
    }
}

/// Sampled distances answering similarity queries for one subproblem.
#[derive(Clone, Debug)]
pub struct SimilarityData {
    radius: Length,
    big_k: usize,
    /// S^1.. in local ids, ascending.
    samples: Vec<Vec<VertexId>>,
    /// Distances to each sampled vertex, bounded at (4K + 1)R.
    to_sample: FxHashMap<VertexId, DistanceMap>,
    /// Union of the witness sets S_v^j; `None` for vertices marked off.
    witnesses: Vec<Option<Vec<VertexId>>>,
}

impl SimilarityData {
    pub fn samples(&self) -> &[Vec<VertexId>] {
        &self.samples
    }

    pub fn witnesses(&self, v: VertexId) -> Result<&[VertexId]> {
        self.witnesses.get(v).and_then(Option::as_deref).ok_or(Error::MissingSimilarity(v))
    }

    /// d(u, w) for a sampled `w`.
    pub fn dist_to_sample(&self, u: VertexId, w: VertexId) -> Length {
        self.to_sample.get(&w).map_or(crate::graph::INFINITY, |m| m.dist(u))
    }

    /// Whether `u` is i-similar to `v`, given d(v, u) from the caller's search.
    pub fn similar(&self, u: VertexId, v: VertexId, dist_vu: Length, i: usize) -> Result<bool> {
        let witnesses = self.witnesses(v)?;
        if dist_vu > (i as Length).saturating_mul(self.radius) {
            return Ok(false);
        }
        let limit = ((i + self.big_k) as Length).saturating_mul(self.radius);
        Ok(witnesses.iter().all(|&w| self.dist_to_sample(u, w) <= limit))
    }
}

/// Result of the sampling phase on one graph.
#[derive(Clone, Debug)]
pub struct SimilarOutput {
    /// Vertices still to be handled by ball growing.
    pub on: Vec<bool>,
    pub balls: Vec<Ball>,
    pub data: SimilarityData,
}

/// True when recursing on a ball of `outer` vertices and deleting `inner`
/// vertices is good progress in an `n`-vertex graph.
pub fn good_cut2(n: usize, inner: usize, outer: usize, k: usize) -> bool {
    power_at_most(outer, k as u32, inner, k as u32 - 1, n)
}

/// Bookkeeping from one cover construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlogkTrace {
    pub attempts: u32,
    pub subproblems: u64,
    /// Subproblems sampled exhaustively because the previous cut did not
    /// shrink the graph.
    pub exhaustive_fallbacks: usize,
    pub marked_off: usize,
    pub sample_balls: usize,
    /// Largest level i at which a good cut was taken.
    pub max_cut_level: usize,
    /// Ball-growth invariant checks that ran (all passed).
    pub lemma_checks: usize,
    /// Filled when `record_events` is set.
    pub events: Vec<GrowthEvent>,
}

/// One step of ball growing, with vertex ids of the input graph, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GrowthEvent {
    Recurse { vertices: Vec<VertexId> },
    TurnOff { vertices: Vec<VertexId> },
}

/// Above this size the neighbor-absorption check is skipped.
const ABSORPTION_CHECK_LIMIT: usize = 128;

struct Builder<'p> {
    k: usize,
    radius: Length,
    big_k: usize,
    n_hat: usize,
    params: &'p KlogkParams,
    seed: Seed,
    balls: Vec<Ball>,
    trace: KlogkTrace,
}

impl Builder<'_> {
    fn cover(&mut self, local: &Graph, to_top: &VertexMap, exhaustive: bool) -> Result<()> {
        let seed = self.seed.derive("subproblem", self.trace.subproblems);
        self.trace.subproblems += 1;
        if exhaustive {
            self.trace.exhaustive_fallbacks += 1;
        }
        let SimilarOutput { mut on, balls, data } =
            self.build_similar(local, to_top, seed, exhaustive)?;
        self.balls.extend(balls);
        self.ball_grow(local, to_top, &mut on, &data)
    }

    fn build_similar(
        &mut self,
        local: &Graph,
        to_top: &VertexMap,
        seed: Seed,
        exhaustive: bool,
    ) -> Result<SimilarOutput> {
        let n = local.n();
        let log = log2_ceil(self.n_hat);
        let samples: Vec<Vec<VertexId>> = if exhaustive {
            vec![(0..n).collect()]
        } else {
            let rounds = self.params.rounds_factor * log;
            let scaled = self.params.sample_factor
                * (n as f64).powf(1.0 / self.k as f64)
                * (log * log) as f64;
            let size = (scaled.ceil() as usize).clamp(1, n.max(1));
            (0..rounds as u64)
                .map(|i| uniform_subset(&mut seed.derive("klogk-sample", i).rng(), n, size))
                .collect()
        };
        let mut union: Vec<VertexId> = samples.iter().flatten().copied().collect();
        union.sort_unstable();
        union.dedup();

        let r = self.radius;
        let k_r = (self.big_k as Length).saturating_mul(r);
        let two_k_r = k_r.saturating_mul(2);
        let ball_radius = (4 * self.big_k as Length + 1).saturating_mul(r);
        let mut on = vec![true; n];
        let mut balls = Vec::with_capacity(union.len());
        let mut to_sample = FxHashMap::default();
        for &u in &union {
            let out = dijkstra(local, u, Direction::Out, Some(ball_radius))?;
            let inward = dijkstra(local, u, Direction::In, Some(ball_radius))?;
            balls.push(Ball::from_searches(to_top, &out, &inward, ball_radius));
            for (x, d) in out.reached() {
                if d <= two_k_r && inward.dist(x) <= two_k_r {
                    on[x] = false;
                }
            }
            to_sample.insert(u, inward);
        }
        self.trace.sample_balls += balls.len();
        self.trace.marked_off += on.iter().filter(|&&b| !b).count();

        let mut near: Vec<Vec<VertexId>> = vec![Vec::new(); n];
        for &u in &union {
            for (x, d) in to_sample[&u].reached() {
                if on[x] && d <= k_r {
                    near[x].push(u);
                }
            }
        }
        let target = self.params.witness_factor * log;
        let levels = self.big_k.min(samples.len());
        let mut witnesses = vec![None; n];
        for v in (0..n).filter(|&v| on[v]) {
            let mut rng = seed.derive("klogk-witness", v as u64).rng();
            let mut chosen: Vec<VertexId> = Vec::new();
            for round in &samples[..levels] {
                let candidates: Vec<VertexId> = near[v]
                    .iter()
                    .copied()
                    .filter(|u| round.binary_search(u).is_ok())
                    .filter(|&u| chosen.iter().all(|w| to_sample[w].dist(u) <= two_k_r))
                    .collect();
                if candidates.len() < target {
                    break;
                }
                chosen.extend(sample_sorted(&mut rng, &candidates, target));
            }
            chosen.sort_unstable();
            chosen.dedup();
            witnesses[v] = Some(chosen);
        }
        let data = SimilarityData { radius: r, big_k: self.big_k, samples, to_sample, witnesses };
        Ok(SimilarOutput { on, balls, data })
    }

    /// E_v^i: on vertices reachable from `v` through i-similar vertices
    /// within distance iR, ascending.
    fn similar_ball(
        &self,
        local: &Graph,
        on: &[bool],
        data: &SimilarityData,
        v: VertexId,
        i: usize,
    ) -> Result<Vec<VertexId>> {
        let witnesses = data.witnesses(v)?;
        let limit = ((i + self.big_k) as Length).saturating_mul(self.radius);
        let bound = (i as Length).saturating_mul(self.radius);
        let keep =
            |x: VertexId| on[x] && witnesses.iter().all(|&w| data.dist_to_sample(x, w) <= limit);
        match pruned_dijkstra(local, v, Direction::Out, bound, keep) {
            Ok(search) => Ok(search.reached().into_iter().map(|(x, _)| x).collect()),
            Err(Error::SourceExcluded(_)) => {
                Err(Error::Invariant(format!("center {v} is not {i}-similar to itself")))
            }
            Err(e) => Err(e),
        }
    }

    /// Every on vertex within roundtrip R of a member of `inner` (inside the
    /// on subgraph) must lie in `outer`.
    fn check_absorption(
        &mut self,
        local: &Graph,
        on: &[bool],
        inner: &[VertexId],
        outer: &[VertexId],
    ) -> Result<()> {
        for &u in inner {
            let there = pruned_dijkstra(local, u, Direction::Out, self.radius, |x| on[x])?;
            let back = pruned_dijkstra(local, u, Direction::In, self.radius, |x| on[x])?;
            for (x, d) in there.reached() {
                let roundtrip = d.saturating_add(back.dist(x));
                if roundtrip <= self.radius && outer.binary_search(&x).is_err() {
                    return Err(Error::Invariant(format!(
                        "vertex {x} within roundtrip {roundtrip} of ball member {u} was not absorbed"
                    )));
                }
            }
        }
        self.trace.lemma_checks += 1;
        Ok(())
    }

    fn ball_grow(
        &mut self,
        local: &Graph,
        to_top: &VertexMap,
        on: &mut [bool],
        data: &SimilarityData,
    ) -> Result<()> {
        let n_on = on.iter().filter(|&&b| b).count();
        let checks = self.params.check_lemmas;
        let mut next = 0;
        loop {
            while next < on.len() && !on[next] {
                next += 1;
            }
            if next == on.len() {
                return Ok(());
            }
            let v = next;
            let mut inner = self.similar_ball(local, on, data, v, 0)?;
            if checks {
                if inner.binary_search(&v).is_err() {
                    return Err(Error::Invariant(format!("center {v} missing from its own ball")));
                }
                self.trace.lemma_checks += 1;
            }
            let mut cut = None;
            for i in 0..self.big_k {
                let outer = self.similar_ball(local, on, data, v, i + 1)?;
                if checks {
                    if !inner.iter().all(|x| outer.binary_search(x).is_ok()) {
                        return Err(Error::Invariant(format!(
                            "level {i} ball of center {v} is not nested in level {}",
                            i + 1
                        )));
                    }
                    self.trace.lemma_checks += 1;
                    if local.n() <= ABSORPTION_CHECK_LIMIT {
                        self.check_absorption(local, on, &inner, &outer)?;
                    }
                }
                if good_cut2(n_on, inner.len(), outer.len(), self.k) {
                    self.trace.max_cut_level = self.trace.max_cut_level.max(i);
                    cut = Some(outer);
                    break;
                }
                inner = outer;
            }
            let Some(outer) = cut else {
                return Err(Error::NoGoodCut { center: to_top.to_parent(v), size: inner.len() });
            };
            let exhaustive = outer.len() == local.n();
            let (sub, sub_map) = induced_subgraph(local, &outer)?;
            if self.params.record_events {
                let vertices = top_ids(to_top, &outer);
                self.trace.events.push(GrowthEvent::Recurse { vertices });
            }
            self.cover(&sub, &sub_map.then(to_top), exhaustive)?;
            if self.params.record_events {
                let vertices = top_ids(to_top, &inner);
                self.trace.events.push(GrowthEvent::TurnOff { vertices });
            }
            for x in inner {
                on[x] = false;
            }
        }
    }
}

fn top_ids(to_top: &VertexMap, local: &[VertexId]) -> Vec<VertexId> {
    let mut ids: Vec<VertexId> = local.iter().map(|&x| to_top.to_parent(x)).collect();
    ids.sort_unstable();
    ids
}

fn check_arguments(k: usize, radius: Length) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if radius == 0 {
        return Err(Error::InvalidArgument("cover radius must be at least 1".into()));
    }
    Ok(())
}

/// The sampling phase alone, on the whole of `g`.
pub fn build_similar(
    g: &Graph,
    k: usize,
    radius: Length,
    n_hat: usize,
    params: &KlogkParams,
) -> Result<SimilarOutput> {
    check_arguments(k, radius)?;
    params.validate()?;
    let mut builder = Builder {
        k,
        radius,
        big_k: big_k(k),
        n_hat: n_hat.max(g.n()),
        params,
        seed: params.seed,
        balls: Vec::new(),
        trace: KlogkTrace::default(),
    };
    builder.build_similar(g, &VertexMap::identity(g), params.seed, false)
}

pub fn roundtrip_cover2(
    g: &Graph,
    k: usize,
    radius: Length,
    params: &KlogkParams,
) -> Result<Cover> {
    roundtrip_cover2_traced(g, k, radius, params).map(|(cover, _)| cover)
}

/// [`roundtrip_cover2`] plus its bookkeeping. A failed ball growth is retried
/// with a fresh seed up to `params.retries` times.
pub fn roundtrip_cover2_traced(
    g: &Graph,
    k: usize,
    radius: Length,
    params: &KlogkParams,
) -> Result<(Cover, KlogkTrace)> {
    check_arguments(k, radius)?;
    params.validate()?;
    let mut last = None;
    for attempt in 0..=params.retries {
        let seed =
            if attempt == 0 { params.seed } else { params.seed.derive("retry", attempt as u64) };
        let mut builder = Builder {
            k,
            radius,
            big_k: big_k(k),
            n_hat: g.n(),
            params,
            seed,
            balls: Vec::new(),
            trace: KlogkTrace { attempts: attempt + 1, ..Default::default() },
        };
        match builder.cover(g, &VertexMap::identity(g), false) {
            Ok(()) => {
                let cover = Cover { k, radius, stretch: klogk_stretch(k), balls: builder.balls };
                return Ok((cover, builder.trace));
            }
            Err(e @ Error::NoGoodCut { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted {
        attempts: params.retries as usize + 1,
        last: Box::new(last.expect("at least one attempt ran")),
    })
}

pub fn klogk_girth(g: &Graph, k: usize, params: &KlogkParams) -> Result<CoverGirth> {
    girth_from_covers(g, klogk_stretch(k), |radius| roundtrip_cover2(g, k, radius, params))
}

pub fn klogk_spanner(g: &Graph, k: usize, params: &KlogkParams) -> Result<Vec<EdgeId>> {
    let mut edges = zero_roundtrip_edges(g);
    if g.m() > 0 {
        for radius in scales(g) {
            edges.extend(roundtrip_cover2(g, k, radius, params)?.tree_edges());
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(edges)
}
