//! Roundtrip balls and covers, shared by the deterministic and randomized
//! cover constructions.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{
    dijkstra, is_acyclic, strongly_connected_components, zero_length_cycle, CycleWitness,
    Direction, DistanceMap, Edge, EdgeId, Graph, Length, VertexId, VertexMap, INFINITY,
};

/// A roundtrip ball: members within roundtrip distance `radius_bound` of
/// `center`, with shortest-path trees from and to the center. Vertex and
/// edge ids refer to the graph the cover was built for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    pub center: VertexId,
    pub radius_bound: Length,
    /// Sorted ascending.
    pub members: Vec<VertexId>,
    /// Edges of the tree of shortest paths into the center.
    pub in_tree: Vec<EdgeId>,
    /// Edges of the tree of shortest paths out of the center.
    pub out_tree: Vec<EdgeId>,
}

impl Ball {
    /// Collects the ball of radius `radius_bound` from an out-search and an
    /// in-search around the same center, run on a subgraph of the cover's
    /// graph described by `to_top`.
    pub(crate) fn from_searches(
        to_top: &VertexMap,
        out: &DistanceMap,
        inward: &DistanceMap,
        radius_bound: Length,
    ) -> Ball {
        debug_assert_eq!(out.source(), inward.source());
        let mut members = Vec::new();
        let mut in_tree = Vec::new();
        let mut out_tree = Vec::new();
        for (v, there) in out.reached() {
            let home = inward.dist(v);
            if home == crate::graph::INFINITY || there + home > radius_bound {
                continue;
            }
            members.push(to_top.to_parent(v));
            if let Some(e) = out.parent(v) {
                out_tree.push(to_top.parent_edge(e));
            }
            if let Some(e) = inward.parent(v) {
                in_tree.push(to_top.parent_edge(e));
            }
        }
        in_tree.sort_unstable();
        out_tree.sort_unstable();
        Ball { center: to_top.to_parent(out.source()), radius_bound, members, in_tree, out_tree }
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    /// At least two members, so the ball certifies a cycle.
    pub fn is_nontrivial(&self) -> bool {
        self.members.len() >= 2
    }

    /// A cycle inside the ball of length at most `radius_bound`: the tree path
    /// from the center to the first other member and back, reduced to a
    /// simple cycle.
    pub fn witness_cycle(&self, g: &Graph) -> Option<CycleWitness> {
        let target = *self.members.iter().find(|&&u| u != self.center)?;
        let into: FxHashMap<VertexId, EdgeId> =
            self.out_tree.iter().map(|&e| (g.edge(e).to, e)).collect();
        let out_of: FxHashMap<VertexId, EdgeId> =
            self.in_tree.iter().map(|&e| (g.edge(e).from, e)).collect();

        let mut there = vec![target];
        let mut cur = target;
        while cur != self.center {
            cur = g.edge(*into.get(&cur)?).from;
            there.push(cur);
        }
        there.reverse();
        let mut walk = there;
        walk.pop();
        let mut cur = target;
        while cur != self.center {
            walk.push(cur);
            cur = g.edge(*out_of.get(&cur)?).to;
        }
        // walk = center .. target .. (just before center)
        CycleWitness::from_closed_walk(g, &walk).ok()
    }
}

/// A collection of balls such that every pair at roundtrip distance at most
/// `radius` shares a ball and each ball's bound is at most `stretch * radius`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    pub k: usize,
    pub radius: Length,
    /// Multiplier on `radius` bounding every ball's `radius_bound`.
    pub stretch: u64,
    pub balls: Vec<Ball>,
}

impl Cover {
    pub fn total_members(&self) -> usize {
        self.balls.iter().map(|b| b.members.len()).sum()
    }

    /// All tree edges of all balls, sorted and deduplicated.
    pub fn tree_edges(&self) -> Vec<EdgeId> {
        let mut edges: Vec<EdgeId> =
            self.balls.iter().flat_map(|b| b.in_tree.iter().chain(&b.out_tree).copied()).collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }
}

/// ceil(log2 x) for x >= 1.
pub fn ceil_log2(x: u64) -> u32 {
    if x <= 1 {
        0
    } else {
        u64::BITS - (x - 1).leading_zeros()
    }
}

/// Radii 1, 2, 4, ..., 2^ceil(log2(nW)): every finite roundtrip distance is
/// at most the last one.
pub fn scales(g: &Graph) -> Vec<Length> {
    let top = ceil_log2(g.length_horizon().max(1)).min(62);
    (0..=top).map(|i| 1 << i).collect()
}

/// Girth estimate certified by a nontrivial ball of some cover.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverGirth {
    /// Smallest `radius_bound` of a nontrivial ball; [`INFINITY`] if none.
    pub estimate: Length,
    /// A cycle no longer than `estimate`.
    pub witness: Option<CycleWitness>,
    /// Radius of the cover the ball came from.
    pub scale: Option<Length>,
    pub ball: Option<Ball>,
}

impl CoverGirth {
    fn screened(estimate: Length, witness: Option<CycleWitness>) -> CoverGirth {
        CoverGirth { estimate, witness, scale: None, ball: None }
    }
}

/// Sweeps `build` over [`scales`] and keeps the tightest nontrivial ball.
/// Every ball a cover builds at radius `R` has `radius_bound >= min_stretch * R`,
/// which lets the sweep stop once no later scale can improve the estimate.
pub(crate) fn girth_from_covers<F>(g: &Graph, min_stretch: u64, mut build: F) -> Result<CoverGirth>
where
    F: FnMut(Length) -> Result<Cover>,
{
    if let Some(zero) = zero_length_cycle(g) {
        return Ok(CoverGirth::screened(0, Some(zero)));
    }
    if is_acyclic(g) {
        return Ok(CoverGirth::screened(INFINITY, None));
    }
    let mut best = match g.lightest_self_loop() {
        Some((v, w)) => {
            CoverGirth::screened(w, Some(CycleWitness { vertices: vec![v], length: w }))
        }
        None => CoverGirth::screened(INFINITY, None),
    };
    for radius in scales(g) {
        if radius.saturating_mul(min_stretch) >= best.estimate {
            break;
        }
        let cover = build(radius)?;
        let tightest = cover
            .balls
            .iter()
            .filter(|b| b.is_nontrivial())
            .min_by_key(|b| (b.radius_bound, b.center));
        if let Some(ball) = tightest {
            if ball.radius_bound < best.estimate {
                best = CoverGirth {
                    estimate: ball.radius_bound,
                    witness: ball.witness_cycle(g),
                    scale: Some(radius),
                    ball: Some(ball.clone()),
                };
            }
        }
    }
    Ok(best)
}

/// Edges keeping every zero roundtrip distance at zero: an in-tree and an
/// out-tree of zero-weight edges for each strongly connected component of
/// the zero-weight subgraph. Positive-radius covers cannot provide these.
pub fn zero_roundtrip_edges(g: &Graph) -> Vec<EdgeId> {
    let ids: Vec<EdgeId> = (0..g.m()).filter(|&e| g.edge(e).weight == 0).collect();
    if ids.is_empty() {
        return Vec::new();
    }
    let zero_edges: Vec<Edge> = ids.iter().map(|&e| g.edge(e)).collect();
    let zero = Graph::from_normalized(g.n(), zero_edges, Vec::new()).expect("subgraph is valid");
    let (count, comp) = strongly_connected_components(&zero);
    let mut root = vec![None; count];
    let mut size = vec![0usize; count];
    for v in zero.vertices() {
        root[comp[v]].get_or_insert(v);
        size[comp[v]] += 1;
    }
    let mut edges = Vec::new();
    for c in (0..count).filter(|&c| size[c] > 1) {
        let r = root[c].expect("component is nonempty");
        for dir in [Direction::Out, Direction::In] {
            let tree = dijkstra(&zero, r, dir, Some(0)).expect("vertex is in range");
            for (v, _) in tree.reached() {
                if comp[v] == c {
                    edges.extend(tree.parent(v).map(|e| ids[e]));
                }
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    edges
}
