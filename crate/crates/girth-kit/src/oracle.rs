//! Exact baselines and verifiers. Everything here is brute force on purpose:
//! it is the ground truth the approximation pipelines are checked against.

use serde::{Deserialize, Serialize};

use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::graph::{
    dijkstra, induced_subgraph, shortest_cycle_through, CycleWitness, Direction, EdgeId, Graph,
    Length, VertexId, INFINITY,
};

/// Largest graph the all-pairs verifiers accept.
pub const APSP_LIMIT: usize = 512;

/// Exact girth by one out-search per vertex, closing each search with the
/// in-edges of its source. Returns [`INFINITY`] and no witness iff `g` is
/// acyclic.
pub fn exact_girth(g: &Graph) -> (Length, Option<CycleWitness>) {
    let mut best: Option<CycleWitness> =
        g.lightest_self_loop().map(|(v, w)| CycleWitness { vertices: vec![v], length: w });
    for v in g.vertices() {
        if g.in_degree(v) == 0 || g.out_degree(v) == 0 {
            continue;
        }
        let from_v = dijkstra(g, v, Direction::Out, None).expect("vertex is in range");
        if let Some(c) = shortest_cycle_through(g, &from_v) {
            if best.as_ref().is_none_or(|b| c.length < b.length) {
                best = Some(c);
            }
        }
    }
    match best {
        Some(c) => (c.length, Some(c)),
        None => (INFINITY, None),
    }
}

fn check_capacity(g: &Graph) -> Result<()> {
    if g.n() > APSP_LIMIT {
        return Err(Error::Capacity { n: g.n(), limit: APSP_LIMIT });
    }
    Ok(())
}

/// `d[u][v]` for all ordered pairs, by one out-search per vertex.
pub fn distance_matrix(g: &Graph) -> Result<Vec<Vec<Length>>> {
    check_capacity(g)?;
    Ok(g.vertices()
        .map(|u| {
            let from_u = dijkstra(g, u, Direction::Out, None).expect("vertex is in range");
            g.vertices().map(|v| from_u.dist(v)).collect()
        })
        .collect())
}

/// Roundtrip distances `d(u,v) + d(v,u)` for all pairs.
pub fn roundtrip_matrix(g: &Graph) -> Result<Vec<Vec<Length>>> {
    let d = distance_matrix(g)?;
    let n = g.n();
    Ok((0..n).map(|u| (0..n).map(|v| add_lengths(d[u][v], d[v][u])).collect()).collect())
}

fn add_lengths(a: Length, b: Length) -> Length {
    if a == INFINITY || b == INFINITY {
        INFINITY
    } else {
        a + b
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UncoveredPair {
    pub u: VertexId,
    pub v: VertexId,
    pub roundtrip: Length,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadiusViolation {
    pub ball: usize,
    pub realized: Length,
    pub declared: Length,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverReport {
    pub ok: bool,
    /// Largest realized ball radius (roundtrip distance to the center inside
    /// the ball), [`INFINITY`] if some member cannot reach its center.
    pub max_radius_seen: Length,
    pub violating_pair: Option<UncoveredPair>,
    /// First ball whose realized radius exceeds its declared bound.
    pub radius_violation: Option<RadiusViolation>,
    /// First ball whose declared bound exceeds `stretch_bound * R`.
    pub oversized_ball: Option<usize>,
    pub ball_count: usize,
    pub total_ball_vertices: usize,
}

/// Checks that `cover` is a valid roundtrip cover of `g` at radius `radius`
/// with every ball bound at most `stretch_bound * radius`.
pub fn verify_cover(
    g: &Graph,
    cover: &Cover,
    stretch_bound: f64,
    radius: Length,
) -> Result<CoverReport> {
    let rt = roundtrip_matrix(g)?;
    let n = g.n();
    let mut balls_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, ball) in cover.balls.iter().enumerate() {
        for &v in &ball.members {
            g.check_vertex(v)?;
            balls_of[v].push(i);
        }
    }

    let mut violating_pair = None;
    'pairs: for u in 0..n {
        for v in u + 1..n {
            if rt[u][v] > radius || shares_ball(&balls_of[u], &balls_of[v]) {
                continue;
            }
            violating_pair = Some(UncoveredPair { u, v, roundtrip: rt[u][v] });
            break 'pairs;
        }
    }

    let mut max_radius_seen = 0;
    let mut radius_violation = None;
    let mut oversized_ball = None;
    for (i, ball) in cover.balls.iter().enumerate() {
        let realized = realized_radius(g, &ball.members, ball.center)?;
        max_radius_seen = max_radius_seen.max(realized);
        if realized > ball.radius_bound && radius_violation.is_none() {
            radius_violation =
                Some(RadiusViolation { ball: i, realized, declared: ball.radius_bound });
        }
        if ball.radius_bound as f64 > stretch_bound * radius as f64 && oversized_ball.is_none() {
            oversized_ball = Some(i);
        }
    }

    Ok(CoverReport {
        ok: violating_pair.is_none() && radius_violation.is_none() && oversized_ball.is_none(),
        max_radius_seen,
        violating_pair,
        radius_violation,
        oversized_ball,
        ball_count: cover.balls.len(),
        total_ball_vertices: cover.total_members(),
    })
}

fn shares_ball(a: &[usize], b: &[usize]) -> bool {
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}

/// Largest roundtrip distance to `center` within the subgraph induced by
/// `members`; [`INFINITY`] if the center is missing or unreachable.
pub fn realized_radius(g: &Graph, members: &[VertexId], center: VertexId) -> Result<Length> {
    let (sub, map) = induced_subgraph(g, members)?;
    let Some(c) = map.to_local(center) else {
        return Ok(INFINITY);
    };
    let out = dijkstra(&sub, c, Direction::Out, None)?;
    let inward = dijkstra(&sub, c, Direction::In, None)?;
    Ok(sub.vertices().map(|v| add_lengths(out.dist(v), inward.dist(v))).max().unwrap_or(0))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StretchPair {
    pub u: VertexId,
    pub v: VertexId,
    pub spanner_roundtrip: Length,
    pub graph_roundtrip: Length,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub ok: bool,
    pub alpha: f64,
    /// Largest `d_H(u⇄v) / d_G(u⇄v)`; infinite when the spanner breaks a
    /// finite roundtrip (serialized as `null`).
    pub max_stretch: f64,
    pub worst_pair: Option<StretchPair>,
    pub pairs_checked: usize,
}

/// Stretch of the subgraph formed by `spanner_edges` over all pairs with a
/// finite roundtrip distance in `g`.
pub fn verify_spanner(g: &Graph, spanner_edges: &[EdgeId], alpha: f64) -> Result<StretchReport> {
    verify_spanner_within(g, spanner_edges, alpha, INFINITY)
}

/// As [`verify_spanner`], restricted to pairs with `d_G(u⇄v) <= max_roundtrip`.
pub fn verify_spanner_within(
    g: &Graph,
    spanner_edges: &[EdgeId],
    alpha: f64,
    max_roundtrip: Length,
) -> Result<StretchReport> {
    check_capacity(g)?;
    let h = g.edge_subgraph(spanner_edges.iter().copied())?;
    let rt_g = roundtrip_matrix(g)?;
    let rt_h = roundtrip_matrix(&h)?;

    // Worst ratio so far as (spanner, graph) distances; compared by
    // cross-multiplication to stay exact.
    let mut worst: Option<StretchPair> = None;
    let mut pairs_checked = 0;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            let dg = rt_g[u][v];
            if dg == INFINITY || dg > max_roundtrip {
                continue;
            }
            pairs_checked += 1;
            let dh = rt_h[u][v];
            let candidate = StretchPair { u, v, spanner_roundtrip: dh, graph_roundtrip: dg };
            if worst.as_ref().is_none_or(|w| stretch_exceeds(&candidate, w)) {
                worst = Some(candidate);
            }
        }
    }
    let max_stretch = worst.as_ref().map_or(1.0, stretch_value);
    let ok = worst.as_ref().is_none_or(|w| {
        w.spanner_roundtrip != INFINITY
            && w.spanner_roundtrip as f64 <= alpha * w.graph_roundtrip as f64
    });
    Ok(StretchReport { ok, alpha, max_stretch, worst_pair: worst, pairs_checked })
}

fn stretch_value(p: &StretchPair) -> f64 {
    match (p.spanner_roundtrip, p.graph_roundtrip) {
        (INFINITY, _) => f64::INFINITY,
        (0, 0) => 1.0,
        (_, 0) => f64::INFINITY,
        (h, g) => h as f64 / g as f64,
    }
}

fn stretch_exceeds(a: &StretchPair, b: &StretchPair) -> bool {
    let key = |p: &StretchPair| -> (u128, u128) {
        match (p.spanner_roundtrip, p.graph_roundtrip) {
            (INFINITY, _) | (1.., 0) => (1, 0),
            (0, 0) => (1, 1),
            (h, g) => (h as u128, g as u128),
        }
    };
    let ((ah, ag), (bh, bg)) = (key(a), key(b));
    ah * bg > bh * ag
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cover::Ball;

    fn triangle() -> Graph {
        Graph::new(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap()
    }

    #[test]
    fn exact_girth_examples() {
        let (g, w) = exact_girth(&triangle());
        assert_eq!(g, 3);
        let w = w.unwrap();
        assert_eq!(w.vertices.len(), 3);
        w.validate(&triangle()).unwrap();
        let dag = Graph::new(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)]).unwrap();
        assert_eq!(exact_girth(&dag), (INFINITY, None));
        let looped = Graph::new(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1), (1, 1, 2)]).unwrap();
        assert_eq!(exact_girth(&looped).0, 2);
    }

    #[test]
    fn whole_graph_ball_covers_everything() {
        let g = triangle();
        let ball = Ball {
            center: 0,
            radius_bound: 3,
            members: vec![0, 1, 2],
            in_tree: vec![],
            out_tree: vec![],
        };
        let cover = Cover { k: 1, radius: 100, stretch: 1, balls: vec![ball] };
        let report = verify_cover(&g, &cover, 1.0, 3).unwrap();
        assert!(report.ok, "{report:?}");
        assert_eq!(report.max_radius_seen, 3);
        assert_eq!(report.total_ball_vertices, 3);
    }

    #[test]
    fn empty_cover_reports_the_pair() {
        let g = Graph::new(3, [(0, 1, 1), (1, 0, 1)]).unwrap();
        let cover = Cover { k: 1, radius: 2, stretch: 1, balls: vec![] };
        let report = verify_cover(&g, &cover, 1.0, 2).unwrap();
        assert!(!report.ok);
        assert_eq!(report.violating_pair, Some(UncoveredPair { u: 0, v: 1, roundtrip: 2 }));
    }

    #[test]
    fn understated_radius_is_caught() {
        let g = triangle();
        let ball = Ball {
            center: 0,
            radius_bound: 2,
            members: vec![0, 1, 2],
            in_tree: vec![],
            out_tree: vec![],
        };
        let cover = Cover { k: 1, radius: 3, stretch: 1, balls: vec![ball] };
        let report = verify_cover(&g, &cover, 1.0, 3).unwrap();
        assert_eq!(
            report.radius_violation,
            Some(RadiusViolation { ball: 0, realized: 3, declared: 2 })
        );
    }

    #[test]
    fn spanner_stretch_extremes() {
        let g = triangle();
        let all: Vec<EdgeId> = (0..g.m()).collect();
        let full = verify_spanner(&g, &all, 1.0).unwrap();
        assert!(full.ok);
        assert_eq!(full.max_stretch, 1.0);
        assert_eq!(full.pairs_checked, 3);

        let two_cycle = Graph::new(2, [(0, 1, 1), (1, 0, 1)]).unwrap();
        let empty = verify_spanner(&two_cycle, &[], 8.0).unwrap();
        assert!(!empty.ok);
        assert!(empty.max_stretch.is_infinite());

        assert!(matches!(verify_spanner(&g, &[7], 1.0), Err(Error::EdgeOutOfRange { .. })));
    }

    #[test]
    fn capacity_guard_is_explicit() {
        let g = Graph::empty(APSP_LIMIT + 1);
        assert!(matches!(roundtrip_matrix(&g), Err(Error::Capacity { .. })));
    }
}
