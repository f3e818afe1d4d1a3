//! Seeded random graph families used as test corpora and benchmark inputs.

use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{dijkstra, Direction, Graph, Length, VertexId};
use crate::oracle::{exact_girth, APSP_LIMIT};
use crate::rng::Seed;

/// A generator family with its shape parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Family {
    /// Every ordered pair independently with probability `p`.
    Er { p: f64 },
    /// Girth exactly `girth`: a random DAG with forward density `p`, heavy
    /// back edges with density `p / 2`, and one planted cycle.
    PlantedGirth { girth: Length, p: f64 },
    /// Complete digraphs joined in a directed ring.
    RingOfCliques { cliques: usize },
    /// Directed torus grid plus random chords.
    GridChords { chords: usize },
    /// Union of `degree` random permutations: in- and out-degree `degree`
    /// up to collisions.
    RandomRegular { degree: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    #[serde(flatten)]
    pub family: Family,
    pub n: usize,
    pub min_weight: Length,
    pub max_weight: Length,
    pub seed: Seed,
}

impl GeneratorSpec {
    pub fn new(family: Family, n: usize, weights: RangeInclusive<Length>, seed: u64) -> Self {
        GeneratorSpec {
            family,
            n,
            min_weight: *weights.start(),
            max_weight: *weights.end(),
            seed: Seed(seed),
        }
    }

    pub fn generate(&self) -> Result<Graph> {
        if self.min_weight > self.max_weight {
            return Err(Error::Generation(format!(
                "empty weight range {}..={}",
                self.min_weight, self.max_weight
            )));
        }
        let weights = self.min_weight..=self.max_weight;
        let seed = self.seed;
        match self.family {
            Family::Er { p } => erdos_renyi(self.n, p, weights, seed),
            Family::PlantedGirth { girth, p } => planted_girth(self.n, girth, p, weights, seed),
            Family::RingOfCliques { cliques } => ring_of_cliques(self.n, cliques, weights, seed),
            Family::GridChords { chords } => grid_chords(self.n, chords, weights, seed),
            Family::RandomRegular { degree } => random_regular(self.n, degree, weights, seed),
        }
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Generation(format!("edge probability {p} outside [0, 1]")))
    }
}

pub fn erdos_renyi(n: usize, p: f64, weights: RangeInclusive<Length>, seed: Seed) -> Result<Graph> {
    check_probability(p)?;
    let mut rng = seed.derive("er", 0).rng();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && rng.random_bool(p) {
                edges.push((u, v, rng.random_range(weights.clone())));
            }
        }
    }
    Graph::new(n, edges)
}

/// Random graph whose girth is exactly `girth`, certified by the exact
/// oracle when `n` is small enough.
///
/// Vertices get a random topological order. Forward edges are arbitrary;
/// backward edges weigh at least `girth`, except the closing edge of the
/// planted cycle, which is set so the cheapest way around it is exactly
/// `girth`. Every cycle uses a backward edge, so none is shorter.
pub fn planted_girth(
    n: usize,
    girth: Length,
    p: f64,
    weights: RangeInclusive<Length>,
    seed: Seed,
) -> Result<Graph> {
    check_probability(p)?;
    if n < 2 {
        return Err(Error::Generation("a planted cycle needs at least 2 vertices".into()));
    }
    if girth < 2 {
        return Err(Error::Generation(format!(
            "no cycle of length {girth} fits with positive weights (minimum 2)"
        )));
    }
    let mut rng = seed.derive("planted-girth", 0).rng();
    let low = (*weights.start()).max(1);
    let high = (*weights.end()).max(low);

    let mut order: Vec<VertexId> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i < j && rng.random_bool(p) {
                edges.push((order[i], order[j], rng.random_range(low..=high)));
            } else if i > j && rng.random_bool(p / 2.0) {
                edges.push((order[i], order[j], rng.random_range(girth..=high.max(girth))));
            }
        }
    }

    // Cycle positions ascending in the order; path weights sum to girth - 1.
    let max_len = (girth as usize).min(n).min(8);
    let len = rng.random_range(2..=max_len);
    let mut positions: Vec<usize> = rand::seq::index::sample(&mut rng, n, len).into_vec();
    positions.sort_unstable();
    let cycle: Vec<VertexId> = positions.iter().map(|&i| order[i]).collect();
    let mut cuts: Vec<Length> = rand::seq::index::sample(&mut rng, (girth - 2) as usize, len - 2)
        .into_iter()
        .map(|c| c as Length + 1)
        .collect();
    cuts.sort_unstable();
    let mut previous = 0;
    for (step, cut) in cuts.iter().copied().chain([girth - 1]).enumerate() {
        edges.push((cycle[step], cycle[step + 1], cut - previous));
        previous = cut;
    }

    let (first, last) = (cycle[0], cycle[len - 1]);
    edges.retain(|&(u, v, _)| !(u == last && v == first));
    let open = Graph::new(n, edges.iter().copied())?;
    let span = dijkstra(&open, first, Direction::Out, None)?.dist(last);
    debug_assert!(span < girth);
    edges.push((last, first, girth - span));
    let g = Graph::new(n, edges)?;

    if n <= APSP_LIMIT {
        let (exact, _) = exact_girth(&g);
        if exact != girth {
            return Err(Error::Generation(format!(
                "planted girth {girth} but the graph has girth {exact}"
            )));
        }
    }
    Ok(g)
}

pub fn ring_of_cliques(
    n: usize,
    cliques: usize,
    weights: RangeInclusive<Length>,
    seed: Seed,
) -> Result<Graph> {
    if cliques == 0 || cliques > n {
        return Err(Error::Generation(format!("cannot split {n} vertices into {cliques} cliques")));
    }
    let mut rng = seed.derive("ring-of-cliques", 0).rng();
    let size = n / cliques;
    let bounds: Vec<(usize, usize)> = (0..cliques)
        .map(|c| (c * size, if c + 1 == cliques { n } else { (c + 1) * size }))
        .collect();
    let mut edges = Vec::new();
    for &(lo, hi) in &bounds {
        for u in lo..hi {
            for v in lo..hi {
                if u != v {
                    edges.push((u, v, rng.random_range(weights.clone())));
                }
            }
        }
    }
    if cliques > 1 {
        for c in 0..cliques {
            let (lo, hi) = bounds[c];
            let (next_lo, next_hi) = bounds[(c + 1) % cliques];
            let from = rng.random_range(lo..hi);
            let to = rng.random_range(next_lo..next_hi);
            edges.push((from, to, rng.random_range(weights.clone())));
        }
    }
    Graph::new(n, edges)
}

pub fn grid_chords(
    n: usize,
    chords: usize,
    weights: RangeInclusive<Length>,
    seed: Seed,
) -> Result<Graph> {
    let mut rng = seed.derive("grid-chords", 0).rng();
    let width = ((n as f64).sqrt().ceil() as usize).max(1);
    let mut edges = Vec::new();
    for v in 0..n {
        let (row, col) = (v / width, v % width);
        let row_len = width.min(n - row * width);
        let right = row * width + (col + 1) % row_len;
        let down = if v + width < n { v + width } else { col };
        for to in [right, down] {
            if to != v {
                edges.push((v, to, rng.random_range(weights.clone())));
            }
        }
    }
    if n > 1 {
        for _ in 0..chords {
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            if u != v {
                edges.push((u, v, rng.random_range(weights.clone())));
            }
        }
    }
    Graph::new(n, edges)
}

pub fn random_regular(
    n: usize,
    degree: usize,
    weights: RangeInclusive<Length>,
    seed: Seed,
) -> Result<Graph> {
    let mut rng = seed.derive("random-regular", 0).rng();
    let mut edges = Vec::with_capacity(n * degree);
    let mut targets: Vec<VertexId> = (0..n).collect();
    for _ in 0..degree {
        targets.shuffle(&mut rng);
        for (u, &v) in targets.iter().enumerate() {
            edges.push((u, v, rng.random_range(weights.clone())));
        }
    }
    let edges: Vec<_> = edges.into_iter().filter(|&(u, v, _)| u != v).collect();
    Graph::new(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_acyclic, strongly_connected_components};

    #[test]
    fn er_with_zero_probability_is_edgeless() {
        let g = erdos_renyi(10, 0.0, 1..=5, Seed(1)).unwrap();
        assert_eq!(g.m(), 0);
    }

    #[test]
    fn planted_girth_is_exact() {
        for seed in 0..20 {
            let g = planted_girth(50, 7, 0.1, 1..=100, Seed(seed)).unwrap();
            assert_eq!(exact_girth(&g).0, 7, "seed {seed}");
        }
        let g = planted_girth(30, 2, 0.2, 1..=100, Seed(3)).unwrap();
        assert_eq!(exact_girth(&g).0, 2);
    }

    #[test]
    fn infeasible_plants_are_rejected() {
        assert!(matches!(planted_girth(10, 1, 0.1, 1..=9, Seed(0)), Err(Error::Generation(_))));
        assert!(matches!(planted_girth(1, 5, 0.1, 1..=9, Seed(0)), Err(Error::Generation(_))));
    }

    #[test]
    fn ring_of_cliques_is_strongly_connected() {
        let g = ring_of_cliques(30, 3, 1..=10, Seed(4)).unwrap();
        assert_eq!(strongly_connected_components(&g).0, 1);
    }

    #[test]
    fn grid_and_regular_have_cycles() {
        let grid = grid_chords(30, 10, 1..=10, Seed(5)).unwrap();
        assert!(!is_acyclic(&grid));
        let reg = random_regular(100, 3, 1..=10, Seed(6)).unwrap();
        assert!(reg.vertices().all(|v| reg.out_degree(v) <= 3 && reg.in_degree(v) <= 3));
        assert!(reg.m() > 250);
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = GeneratorSpec::new(Family::Er { p: 0.2 }, 20, 1..=9, 11);
        assert_eq!(spec.generate().unwrap(), spec.generate().unwrap());
    }
}
