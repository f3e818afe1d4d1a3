//! Shared corpus and independent oracles for the integration tests.
#![allow(dead_code)]

use girth_kit::generate::{
    erdos_renyi, grid_chords, planted_girth, random_regular, ring_of_cliques,
};
use girth_kit::graph::{Graph, Length, VertexId, INFINITY};
use girth_kit::rng::Seed;

/// One labelled corpus instance.
pub struct Instance {
    pub name: String,
    pub graph: Graph,
}

fn instance(name: String, graph: Graph) -> Instance {
    Instance { name, graph }
}

/// Mixed-family corpus of `count` graphs with at most `max_n` vertices,
/// deterministic in `seed`.
pub fn corpus(count: usize, max_n: usize, seed: u64) -> Vec<Instance> {
    let base = Seed(seed);
    (0..count)
        .map(|i| {
            let s = base.derive("corpus", i as u64);
            let n = 8 + (s.0 as usize % (max_n - 7));
            let weights = if i % 7 == 3 { 0..=10 } else { 1..=100 };
            let g = match i % 5 {
                0 => erdos_renyi(n, 3.0 / n as f64, weights.clone(), s),
                1 => planted_girth(n, 2 + s.0 % 60, 2.0 / n as f64, 1..=100, s),
                2 => ring_of_cliques(n, 2 + i % 4, weights.clone(), s),
                3 => grid_chords(n, n / 4, weights.clone(), s),
                _ => random_regular(n, 2, weights.clone(), s),
            }
            .expect("corpus generation");
            let family = ["er", "planted", "cliques", "grid", "regular"][i % 5];
            instance(format!("{family}-{i}-n{n}"), g)
        })
        .collect()
}

/// Planted-girth instances with integer weights at most 100.
pub fn planted_corpus(count: usize, max_n: usize, seed: u64) -> Vec<(Graph, Length)> {
    (0..count)
        .map(|i| {
            let s = Seed(seed).derive("planted", i as u64);
            let n = 10 + (s.0 as usize % (max_n - 9));
            let girth = 2 + s.0 / 7 % 99;
            let g = planted_girth(n, girth, 2.5 / n as f64, 1..=100, s).expect("planted");
            (g, girth)
        })
        .collect()
}

/// Random digraphs with at least one cycle.
pub fn cyclic_er(count: usize, max_n: usize, seed: u64) -> Vec<Graph> {
    (0..count)
        .map(|i| {
            let s = Seed(seed).derive("cyclic", i as u64);
            let n = 12 + (s.0 as usize % (max_n - 11));
            let g = erdos_renyi(n, 2.5 / n as f64, 1..=20, s).expect("er");
            let mut edges: Vec<_> = g.edges().iter().map(|e| (e.from, e.to, e.weight)).collect();
            edges.push((n - 1, 0, 20));
            edges.extend((0..n - 1).map(|v| (v, v + 1, 20)));
            Graph::new(n, edges).expect("cyclic")
        })
        .collect()
}

fn min_plus(a: &[Vec<Length>], b: &[Vec<Length>]) -> Vec<Vec<Length>> {
    let n = a.len();
    let mut c = vec![vec![INFINITY; n]; n];
    for i in 0..n {
        for k in 0..n {
            if a[i][k] == INFINITY {
                continue;
            }
            for j in 0..n {
                let via = a[i][k].saturating_add(b[k][j]);
                if via < c[i][j] {
                    c[i][j] = via;
                }
            }
        }
    }
    c
}

/// Lightest-edge adjacency matrix with self-loops on the diagonal.
pub fn weight_matrix(g: &Graph) -> Vec<Vec<Length>> {
    let n = g.n();
    let mut w = vec![vec![INFINITY; n]; n];
    for e in g.edges() {
        w[e.from][e.to] = w[e.from][e.to].min(e.weight);
    }
    for &(v, len) in g.self_loops() {
        w[v][v] = w[v][v].min(len);
    }
    w
}

/// All-pairs distances by repeated min-plus squaring.
pub fn min_plus_apsp(g: &Graph) -> Vec<Vec<Length>> {
    let n = g.n();
    let mut d = weight_matrix(g);
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    let mut hops = 1;
    while hops < n {
        d = min_plus(&d, &d);
        hops *= 2;
    }
    d
}

/// Girth as min_i M^n[i][i], where M^n is the min-plus n-th power of the
/// adjacency matrix accumulated over all powers 1..=n.
pub fn min_plus_girth(g: &Graph) -> Length {
    let w = weight_matrix(g);
    let mut power = w.clone();
    let mut best = (0..g.n()).map(|i| w[i][i]).min().unwrap_or(INFINITY);
    for _ in 1..g.n() {
        power = min_plus(&power, &w);
        best = best.min((0..g.n()).map(|i| power[i][i]).min().unwrap_or(INFINITY));
    }
    best
}

/// Single-source distances by Bellman-Ford relaxation.
pub fn bellman_ford(g: &Graph, source: VertexId) -> Vec<Length> {
    let mut dist = vec![INFINITY; g.n()];
    dist[source] = 0;
    for _ in 0..g.n() {
        let mut changed = false;
        for e in g.edges() {
            if dist[e.from] != INFINITY && dist[e.from] + e.weight < dist[e.to] {
                dist[e.to] = dist[e.from] + e.weight;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    dist
}

/// Roundtrip matrix from min-plus APSP.
pub fn min_plus_roundtrips(g: &Graph) -> Vec<Vec<Length>> {
    let d = min_plus_apsp(g);
    let n = g.n();
    (0..n).map(|u| (0..n).map(|v| d[u][v].saturating_add(d[v][u])).collect()).collect()
}

/// Least-squares slope of log(y) against log(x).
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.max(1e-9).ln()).collect();
    let k = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / k;
    let my = ly.iter().sum::<f64>() / k;
    let cov: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let var: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    cov / var
}
