//! Roundtrip spanners with stretch 8 per target radius, and their union over
//! a geometric radius schedule.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::girth3::{
    log2_ceil, merge_sorted, sample_rounds, SampleDistances, SimilarSet, SimilarSetConfig,
};
use crate::graph::{
    dijkstra, pruned_dijkstra, Direction, EdgeId, Graph, Length, VertexId, INFINITY,
};
use crate::regularize::regularize;
use crate::rng::{bernoulli_subset, Seed};

/// Where a spanner edge came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeSource {
    /// Shortest-path tree of a globally sampled vertex.
    GlobalTree,
    /// Tree grown from one vertex inside its similar sets.
    VertexTree,
    /// Global-sample tree computed on the reversed graph, re-oriented.
    Reversed,
}

/// Deduplicated edge set with the first source that added each edge.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpannerAccumulator {
    edges: BTreeMap<EdgeId, EdgeSource>,
}

impl SpannerAccumulator {
    pub fn add(&mut self, edge: EdgeId, source: EdgeSource) {
        self.edges.entry(edge).or_insert(source);
    }

    pub fn extend(&mut self, edges: impl IntoIterator<Item = EdgeId>, source: EdgeSource) {
        for e in edges {
            self.add(e, source);
        }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn provenance(&self, edge: EdgeId) -> Option<EdgeSource> {
        self.edges.get(&edge).copied()
    }

    pub fn count(&self, source: EdgeSource) -> usize {
        self.edges.values().filter(|&&s| s == source).count()
    }

    /// Ascending edge ids.
    pub fn edges(&self) -> Vec<EdgeId> {
        self.edges.keys().copied().collect()
    }
}

/// Vertices whose roundtrip distance to every global sample exceeds 3R.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurvivorSet {
    members: Vec<bool>,
}

impl SurvivorSet {
    pub fn contains(&self, v: VertexId) -> bool {
        self.members[v]
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.members.iter().enumerate().filter(|&(_, &b)| b).map(|(v, _)| v)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpannerParams {
    /// Global sample probability: `min(1, global_factor * log2 n / sqrt n)`.
    pub global_factor: f64,
    /// Sample rounds, probability and witness count for the filtering step;
    /// its seed drives all randomness.
    pub filter: SimilarSetConfig,
}

impl SpannerParams {
    pub fn new(seed: u64) -> Self {
        SpannerParams { global_factor: 100.0, filter: SimilarSetConfig::seeded(seed) }
    }

    /// Sparse global sampling so that survivors and similar sets are
    /// nonempty on small graphs.
    pub fn light(seed: u64) -> Self {
        SpannerParams {
            global_factor: 0.2,
            filter: SimilarSetConfig {
                rounds: Some(3),
                witness_size: Some(2),
                ..SimilarSetConfig::seeded(seed)
            },
        }
    }

    fn reseeded(&self, seed: Seed) -> Self {
        SpannerParams { filter: SimilarSetConfig { seed, ..self.filter.clone() }, ..self.clone() }
    }

    fn global_probability(&self, n: usize) -> f64 {
        if n == 0 {
            return 0.0;
        }
        (self.global_factor * (n as f64).log2().max(1.0) / (n as f64).sqrt()).min(1.0)
    }
}

/// Output of one filtering pass on `g` or its reverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarSetSpanner {
    /// Edges of the in- and out-trees of every global sample.
    pub h_prime: Vec<EdgeId>,
    /// The global sample U, ascending.
    pub global: Vec<VertexId>,
    pub survivors: SurvivorSet,
    /// A_v for survivors, `None` elsewhere.
    pub sets: Vec<Option<SimilarSet>>,
}

pub fn similar_set_spanner(
    g: &Graph,
    radius: Length,
    params: &SpannerParams,
) -> Result<SimilarSetSpanner> {
    if radius == 0 {
        return Err(Error::InvalidArgument("radius must be at least 1".into()));
    }
    let n = g.n();
    let filter = params.filter.resolve(n);
    filter.validate()?;
    let seed = filter.seed;
    let global = bernoulli_subset(
        &mut seed.derive("spanner-global", 0).rng(),
        n,
        params.global_probability(n),
    );

    let mut h_prime = Vec::new();
    let mut nearest = vec![INFINITY; n];
    for &u in &global {
        let out = dijkstra(g, u, Direction::Out, None)?;
        let inward = dijkstra(g, u, Direction::In, None)?;
        h_prime.extend(out.tree_edges());
        h_prime.extend(inward.tree_edges());
        for (x, there) in out.reached() {
            let roundtrip = there.saturating_add(inward.dist(x));
            nearest[x] = nearest[x].min(roundtrip);
        }
    }
    h_prime.sort_unstable();
    h_prime.dedup();
    let limit = radius.saturating_mul(3);
    let survivors = SurvivorSet { members: nearest.iter().map(|&d| d > limit).collect() };

    let mut samples = sample_rounds(n, filter.rounds, filter.sample_prob, seed, "spanner-sample");
    for round in &mut samples {
        round.retain(|&s| survivors.contains(s));
    }
    let distances = SampleDistances::new(g, radius, samples)?;
    let mut sets = vec![None; n];
    for v in survivors.iter() {
        let mut rng = seed.derive("spanner-witness", v as u64).rng();
        let set =
            distances.filter(g, v, filter.witness_size, &mut rng, |x| survivors.contains(x))?;
        sets[v] = Some(set);
    }
    Ok(SimilarSetSpanner { h_prime, global, survivors, sets })
}

/// Counters from one [`spanner_approx`] run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpannerTrace {
    pub global_out: usize,
    pub global_in: usize,
    pub survivors_out: usize,
    pub survivors_in: usize,
    /// Largest |A_v| over both directions.
    pub max_similar_set: usize,
    pub global_tree_edges: usize,
    pub vertex_tree_edges: usize,
    pub reversed_edges: usize,
}

/// Both filtering passes, kept for inspection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpannerPasses {
    pub out: SimilarSetSpanner,
    /// Computed on the reversed graph; vertex ids agree with `g`.
    pub inward: SimilarSetSpanner,
}

/// Edges H with d_H(u⇄v) <= 8R for every pair with d(u⇄v) <= R.
pub fn spanner_approx(g: &Graph, radius: Length, params: &SpannerParams) -> Result<Vec<EdgeId>> {
    spanner_approx_traced(g, radius, params).map(|(acc, _, _)| acc.edges())
}

pub fn spanner_approx_traced(
    g: &Graph,
    radius: Length,
    params: &SpannerParams,
) -> Result<(SpannerAccumulator, SpannerTrace, SpannerPasses)> {
    let seed = params.filter.seed;
    let out = similar_set_spanner(g, radius, &params.reseeded(seed.derive("out", 0)))?;
    let rev = g.reversed();
    let inward = similar_set_spanner(&rev, radius, &params.reseeded(seed.derive("in", 0)))?;

    let mut acc = SpannerAccumulator::default();
    acc.extend(out.h_prime.iter().copied(), EdgeSource::GlobalTree);
    let re_oriented = inward.h_prime.iter().map(|&e| {
        let edge = rev.edge(e);
        g.find_edge(edge.to, edge.from).expect("reversed edge exists in the original")
    });
    acc.extend(re_oriented, EdgeSource::Reversed);

    let mut max_similar_set = 0;
    for v in g.vertices() {
        let (a_out, a_in) = (out.sets[v].as_ref(), inward.sets[v].as_ref());
        max_similar_set = max_similar_set
            .max(a_out.map_or(0, |s| s.members.len()))
            .max(a_in.map_or(0, |s| s.members.len()));
        let members = match (a_out, a_in) {
            (None, None) => continue,
            (Some(a), None) | (None, Some(a)) => a.members.clone(),
            (Some(a), Some(b)) => merge_sorted(&a.members, &b.members),
        };
        if members.len() < 2 {
            continue;
        }
        let tree =
            pruned_dijkstra(g, v, Direction::Out, INFINITY, |x| members.binary_search(&x).is_ok())?;
        acc.extend(tree.tree_edges(), EdgeSource::VertexTree);
    }

    let trace = SpannerTrace {
        global_out: out.global.len(),
        global_in: inward.global.len(),
        survivors_out: out.survivors.len(),
        survivors_in: inward.survivors.len(),
        max_similar_set,
        global_tree_edges: acc.count(EdgeSource::GlobalTree),
        vertex_tree_edges: acc.count(EdgeSource::VertexTree),
        reversed_edges: acc.count(EdgeSource::Reversed),
    };
    Ok((acc, trace, SpannerPasses { out, inward }))
}

/// Per-scale edge allowance `slack * constant * n^1.5 * log2 n` with the
/// expected-size constant 800.
pub fn edge_allowance(n: usize, slack: f64) -> f64 {
    let n = n.max(2) as f64;
    slack * 800.0 * n.powf(1.5) * n.log2()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FullSpanner {
    /// Ascending edge ids of `g`.
    pub edges: Vec<EdgeId>,
    pub scales: Vec<Length>,
    /// Lifted edge count contributed by each scale.
    pub per_scale_edge_counts: Vec<usize>,
}

/// Radii from the lightest positive weight up to the length horizon, each
/// at most (1 + epsilon) times the previous one or one more than it.
pub fn radius_schedule(g: &Graph, epsilon: f64) -> Result<Vec<Length>> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::InvalidArgument(format!("epsilon {epsilon} must be positive")));
    }
    let horizon = g.length_horizon().max(1);
    let mut radius = g.min_positive_weight().unwrap_or(1).min(horizon);
    let mut schedule = vec![radius];
    while radius < horizon {
        let grown = (radius as f64 * (1.0 + epsilon)).floor() as Length;
        radius = grown.max(radius + 1).min(horizon);
        schedule.push(radius);
    }
    Ok(schedule)
}

/// An 8(1 + epsilon) roundtrip spanner of `g`, built on the degree-reduced
/// graph and lifted back.
pub fn full_spanner(g: &Graph, epsilon: f64, params: &SpannerParams) -> Result<FullSpanner> {
    let scales = radius_schedule(g, epsilon)?;
    let rg = regularize(g);
    let mut edges = Vec::new();
    let mut per_scale_edge_counts = Vec::with_capacity(scales.len());
    for &radius in &scales {
        let scale_params = params.reseeded(params.filter.seed.derive("scale", radius));
        let lifted = rg.lift_subgraph(&spanner_approx(&rg.h, radius, &scale_params)?);
        per_scale_edge_counts.push(lifted.len());
        edges.extend(lifted);
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(FullSpanner { edges, scales, per_scale_edge_counts })
}

/// Witness-count scale used by the filtering step on `n` vertices.
pub fn similar_set_bound(n: usize) -> usize {
    200 * ((n as f64).sqrt().ceil() as usize) * log2_ceil(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::erdos_renyi;
    use crate::oracle::{roundtrip_matrix, verify_spanner, verify_spanner_within};

    fn cycle(len: usize, w: Length) -> Graph {
        Graph::new(len, (0..len).map(|i| (i, (i + 1) % len, w))).unwrap()
    }

    #[test]
    fn accumulator_is_idempotent() {
        let mut acc = SpannerAccumulator::default();
        acc.add(3, EdgeSource::VertexTree);
        acc.add(3, EdgeSource::GlobalTree);
        acc.extend([1, 3], EdgeSource::Reversed);
        assert_eq!(acc.edges(), vec![1, 3]);
        assert_eq!(acc.provenance(3), Some(EdgeSource::VertexTree));
        assert_eq!(acc.count(EdgeSource::Reversed), 1);
    }

    #[test]
    fn exhaustive_global_sample_leaves_no_survivors() {
        let g = erdos_renyi(20, 0.15, 1..=5, Seed(2)).unwrap();
        let pass = similar_set_spanner(&g, 3, &SpannerParams::new(1)).unwrap();
        assert_eq!(pass.global.len(), 20);
        assert!(pass.survivors.is_empty());
        let (acc, _, _) = spanner_approx_traced(&g, 3, &SpannerParams::new(1)).unwrap();
        assert!(verify_spanner(&g, &acc.edges(), 1.0).unwrap().ok);
    }

    #[test]
    fn isolated_vertices_keep_singleton_sets() {
        let g = Graph::new(3, [(0, 1, 100), (1, 2, 100), (2, 0, 100)]).unwrap();
        let params = SpannerParams { global_factor: 1e-9, ..SpannerParams::new(4) };
        let pass = similar_set_spanner(&g, 4, &params).unwrap();
        assert!(pass.global.is_empty());
        assert_eq!(pass.survivors.len(), 3);
        for v in 0..3 {
            assert_eq!(pass.sets[v].as_ref().unwrap().members, vec![v]);
        }
    }

    #[test]
    fn single_cycle_is_kept_whole() {
        let g = cycle(5, 2);
        for params in [SpannerParams::new(0), SpannerParams::light(0)] {
            let h = spanner_approx(&g, 10, &params).unwrap();
            assert_eq!(h, (0..5).collect::<Vec<_>>());
        }
    }

    #[test]
    fn acyclic_output_is_a_subgraph() {
        let g = Graph::new(4, [(0, 1, 1), (1, 2, 1), (0, 3, 2)]).unwrap();
        let h = spanner_approx(&g, 4, &SpannerParams::light(3)).unwrap();
        assert!(h.iter().all(|&e| e < g.m()));
    }

    #[test]
    fn light_profile_meets_the_per_radius_stretch() {
        for seed in 0..10 {
            let g = erdos_renyi(50, 0.06, 1..=6, Seed(100 + seed)).unwrap();
            let radius = 12;
            let (acc, trace, _) =
                spanner_approx_traced(&g, radius, &SpannerParams::light(seed)).unwrap();
            assert!(trace.survivors_out > 0, "{trace:?}");
            let report = verify_spanner_within(&g, &acc.edges(), 8.0, radius).unwrap();
            assert!(report.ok, "seed {seed}: {report:?}");
        }
    }

    #[test]
    fn survivors_are_far_from_the_global_sample() {
        let g = erdos_renyi(40, 0.08, 1..=4, Seed(9)).unwrap();
        let pass = similar_set_spanner(&g, 2, &SpannerParams::light(5)).unwrap();
        let rt = roundtrip_matrix(&g).unwrap();
        for (v, row) in rt.iter().enumerate() {
            let far = pass.global.iter().all(|&u| row[u] > 6);
            assert_eq!(pass.survivors.contains(v), far);
        }
    }

    #[test]
    fn full_spanner_on_two_cycle_and_collapsed_schedule() {
        let g = Graph::new(2, [(0, 1, 3), (1, 0, 4)]).unwrap();
        let full = full_spanner(&g, 0.25, &SpannerParams::light(1)).unwrap();
        assert_eq!(full.edges, vec![0, 1]);
        let one = full_spanner(&g, 1e6, &SpannerParams::light(1)).unwrap();
        assert_eq!(one.scales.len(), 2);
        assert!(radius_schedule(&g, 0.0).is_err());
    }

    #[test]
    fn full_spanner_stretch() {
        let g = erdos_renyi(40, 0.08, 1..=9, Seed(21)).unwrap();
        let full = full_spanner(&g, 0.25, &SpannerParams::light(2)).unwrap();
        assert!(verify_spanner(&g, &full.edges, 8.0 * 1.25).unwrap().ok);
        let n = regularize(&g).h.n();
        assert!(full.per_scale_edge_counts.iter().all(|&c| (c as f64) <= edge_allowance(n, 4.0)));
    }
}
