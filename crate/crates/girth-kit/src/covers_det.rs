//! Deterministic roundtrip covers by in/out ball growing, and the girth and
//! spanner estimates derived from them.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::cover::{
    ceil_log2, girth_from_covers, scales, zero_roundtrip_edges, Ball, Cover, CoverGirth,
};
use crate::error::{Error, Result};
use crate::graph::{
    induced_subgraph, pruned_dijkstra, Direction, EdgeId, Graph, Length, VertexId, VertexMap,
    INFINITY,
};

/// max(1, ceil(log2 log2 max(n, 4))).
pub fn loglog(n: usize) -> u64 {
    let inner = ceil_log2(n.max(4) as u64) as u64;
    (ceil_log2(inner) as u64).max(1)
}

/// Vertex and induced-edge count of a ball.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BallSize {
    pub vertices: usize,
    pub edges: usize,
}

impl BallSize {
    pub fn new(vertices: usize, edges: usize) -> Self {
        BallSize { vertices, edges }
    }
}

/// Whether `a^p <= b^q * c`, exactly when it fits in 128 bits.
pub(crate) fn power_at_most(a: usize, p: u32, b: usize, q: u32, c: usize) -> bool {
    let (a, b, c) = (a as u128, b as u128, c as u128);
    let lhs = a.checked_pow(p);
    let rhs = b.checked_pow(q).and_then(|x| x.checked_mul(c));
    match (lhs, rhs) {
        (Some(l), Some(r)) => l <= r,
        (Some(_), None) => true,
        (None, Some(_)) => false,
        (None, None) => {
            if a == 0 {
                return true;
            }
            if (b == 0 && q > 0) || c == 0 {
                return false;
            }
            let lhs = p as f64 * (a as f64).ln();
            let rhs = q as f64 * (b as f64).ln() + (c as f64).ln();
            lhs <= rhs
        }
    }
}

/// True when recursing on `outer` and deleting `inner` is good progress in a
/// graph with `n` vertices and `m` edges.
pub fn good_cut(n: usize, m: usize, inner: BallSize, outer: BallSize, k: usize) -> bool {
    let k32 = k as u32;
    let small = 4 * outer.vertices <= 3 * n;
    let vertices = power_at_most(outer.vertices, k32, inner.vertices, k32 - 1, n);
    let edges = k * outer.edges <= (k + 1) * inner.edges
        || power_at_most(outer.edges, k32, inner.edges, k32 - 1, m);
    small && vertices && edges
}

/// Bookkeeping from one cover construction.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverTrace {
    /// Largest 1 + max(i_in, i_out) reached at any center.
    pub max_growth_index: u64,
    /// Subgraphs the construction recursed into, the input included.
    pub subproblems: usize,
    /// Sum of vertex counts over all subproblems.
    pub subproblem_vertices: usize,
    /// Vertex deletions over all subproblems.
    pub deletions: usize,
}

/// Dijkstra that settles vertices lazily, one radius level at a time, and
/// tallies the vertices and induced edges of each level's ball.
struct Grower<'a> {
    g: &'a Graph,
    alive: &'a [bool],
    dir: Direction,
    step: Length,
    dist: FxHashMap<VertexId, Length>,
    settled: FxHashSet<VertexId>,
    order: Vec<VertexId>,
    heap: BinaryHeap<Reverse<(Length, VertexId)>>,
    edges: usize,
    levels: Vec<BallSize>,
}

impl<'a> Grower<'a> {
    fn new(
        g: &'a Graph,
        alive: &'a [bool],
        center: VertexId,
        dir: Direction,
        step: Length,
    ) -> Self {
        let mut dist = FxHashMap::default();
        dist.insert(center, 0);
        Grower {
            g,
            alive,
            dir,
            step,
            dist,
            settled: FxHashSet::default(),
            order: Vec::new(),
            heap: BinaryHeap::from([Reverse((0, center))]),
            edges: 0,
            levels: Vec::new(),
        }
    }

    fn radius(&self, level: usize) -> Length {
        (level as Length).saturating_mul(self.step).min(INFINITY - 1)
    }

    /// Size of the ball of radius `level * step`.
    fn level(&mut self, level: usize) -> BallSize {
        while self.levels.len() <= level {
            let radius = self.radius(self.levels.len());
            self.settle_through(radius);
            self.levels.push(BallSize::new(self.order.len(), self.edges));
        }
        self.levels[level]
    }

    fn settle_through(&mut self, radius: Length) {
        while let Some(&Reverse((d, x))) = self.heap.peek() {
            if d > radius {
                break;
            }
            self.heap.pop();
            if self.settled.contains(&x) {
                continue;
            }
            self.settled.insert(x);
            self.order.push(x);
            let g = self.g;
            self.edges += g
                .out_neighbors(x)
                .iter()
                .chain(g.in_neighbors(x))
                .filter(|nb| self.settled.contains(&nb.vertex))
                .count();
            for nb in g.neighbors(x, self.dir) {
                let nd = d + nb.weight;
                if !self.alive[nb.vertex]
                    || nd >= self.dist.get(&nb.vertex).copied().unwrap_or(INFINITY)
                {
                    continue;
                }
                self.dist.insert(nb.vertex, nd);
                self.heap.push(Reverse((nd, nb.vertex)));
            }
        }
    }

    /// Members of the ball of a level already computed, in settle order.
    fn members(&self, level: usize) -> Vec<VertexId> {
        debug_assert!(level < self.levels.len());
        self.order[..self.levels[level].vertices].to_vec()
    }
}

enum Step {
    /// Line-6 case: emit a ball and delete the core of the two big balls.
    Emit { ball: Ball, delete: Vec<VertexId> },
    /// Good cut: cover `recurse_on` separately, then delete `delete`.
    Cut { recurse_on: Vec<VertexId>, delete: Vec<VertexId> },
}

struct Builder {
    k: usize,
    radius: Length,
    balls: Vec<Ball>,
    trace: CoverTrace,
}

impl Builder {
    fn cover(&mut self, local: &Graph, to_top: &VertexMap) -> Result<()> {
        self.trace.subproblems += 1;
        self.trace.subproblem_vertices += local.n();
        let mut alive = vec![true; local.n()];
        let mut n_alive = local.n();
        let mut m_alive = local.m();
        let mut next = 0;
        while n_alive > 0 {
            while !alive[next] {
                next += 1;
            }
            let (recurse_on, delete) =
                match self.grow(local, to_top, &alive, next, n_alive, m_alive)? {
                    Step::Emit { ball, delete } => {
                        self.balls.push(ball);
                        (None, delete)
                    }
                    Step::Cut { recurse_on, delete } => (Some(recurse_on), delete),
                };
            if let Some(members) = recurse_on {
                let (sub, sub_map) = induced_subgraph(local, &members)?;
                self.cover(&sub, &sub_map.then(to_top))?;
            }
            for x in delete {
                debug_assert!(alive[x], "vertex {x} deleted twice");
                m_alive -= local
                    .out_neighbors(x)
                    .iter()
                    .chain(local.in_neighbors(x))
                    .filter(|nb| alive[nb.vertex])
                    .count();
                alive[x] = false;
                n_alive -= 1;
                self.trace.deletions += 1;
            }
        }
        Ok(())
    }

    fn grow(
        &mut self,
        local: &Graph,
        to_top: &VertexMap,
        alive: &[bool],
        center: VertexId,
        n: usize,
        m: usize,
    ) -> Result<Step> {
        let (k, radius) = (self.k, self.radius);
        let budget = 5 * k as u64 * loglog(n);
        let mut inward = Grower::new(local, alive, center, Direction::In, radius);
        let mut outward = Grower::new(local, alive, center, Direction::Out, radius);
        let (mut i_in, mut i_out) = (0, 0);
        loop {
            let index = 1 + i_in.max(i_out) as u64;
            self.trace.max_growth_index = self.trace.max_growth_index.max(index);
            if index > budget {
                return Err(Error::Invariant(format!(
                    "ball growth index {index} exceeds 5k*LL(n) = {budget} at center {}",
                    to_top.to_parent(center)
                )));
            }
            let in_next = inward.level(i_in + 1);
            let out_next = outward.level(i_out + 1);
            if 4 * in_next.vertices.min(out_next.vertices) >= 3 * n {
                let r = budget.saturating_mul(radius);
                let bound = r.saturating_mul(2).saturating_add(radius).min(INFINITY - 1);
                let keep = |x: VertexId| alive[x];
                let out_map = pruned_dijkstra(local, center, Direction::Out, bound, keep)?;
                let in_map = pruned_dijkstra(local, center, Direction::In, bound, keep)?;
                let ball = Ball::from_searches(to_top, &out_map, &in_map, bound);
                let core: FxHashSet<VertexId> = inward.members(i_in + 1).into_iter().collect();
                let delete =
                    outward.members(i_out + 1).into_iter().filter(|x| core.contains(x)).collect();
                return Ok(Step::Emit { ball, delete });
            }
            let in_cur = inward.level(i_in);
            if good_cut(n, m, in_cur, in_next, k) {
                return Ok(Step::Cut {
                    recurse_on: inward.members(i_in + 1),
                    delete: inward.members(i_in),
                });
            }
            let out_cur = outward.level(i_out);
            if good_cut(n, m, out_cur, out_next, k) {
                return Ok(Step::Cut {
                    recurse_on: outward.members(i_out + 1),
                    delete: outward.members(i_out),
                });
            }
            if in_cur.edges <= out_cur.edges || 4 * out_cur.vertices >= 3 * n {
                i_in += 1;
            } else {
                i_out += 1;
            }
        }
    }
}

/// Multiplier on `R` bounding every ball of a cover of an `n`-vertex graph:
/// 2r + R with r = 5kR * LL(n).
pub fn cover_stretch(n: usize, k: usize) -> u64 {
    10 * k as u64 * loglog(n) + 1
}

pub fn roundtrip_cover(g: &Graph, k: usize, radius: Length) -> Result<Cover> {
    roundtrip_cover_traced(g, k, radius).map(|(cover, _)| cover)
}

/// [`roundtrip_cover`] plus its recursion bookkeeping.
pub fn roundtrip_cover_traced(g: &Graph, k: usize, radius: Length) -> Result<(Cover, CoverTrace)> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if radius == 0 {
        return Err(Error::InvalidArgument("cover radius must be at least 1".into()));
    }
    let mut builder = Builder { k, radius, balls: Vec::new(), trace: CoverTrace::default() };
    builder.cover(g, &VertexMap::identity(g))?;
    let cover = Cover { k, radius, stretch: cover_stretch(g.n(), k), balls: builder.balls };
    if k >= 2 {
        let limit = 10.0 * (g.n() as f64).powf(k as f64 / (k as f64 - 1.0));
        if cover.total_members() as f64 > limit {
            return Err(Error::Invariant(format!(
                "cover has {} ball memberships, above 10 n^(k/(k-1)) = {limit:.0}",
                cover.total_members()
            )));
        }
    }
    Ok((cover, builder.trace))
}

/// Girth estimate from the tightest nontrivial ball over all scales.
pub fn det_girth(g: &Graph, k: usize) -> Result<CoverGirth> {
    girth_from_covers(g, 10 * k as u64 + 1, |radius| roundtrip_cover(g, k, radius))
}

/// Union of the ball trees of the covers at every scale.
pub fn det_spanner(g: &Graph, k: usize) -> Result<Vec<EdgeId>> {
    let mut edges = zero_roundtrip_edges(g);
    if g.m() > 0 {
        for radius in scales(g) {
            edges.extend(roundtrip_cover(g, k, radius)?.tree_edges());
        }
    }
    edges.sort_unstable();
    edges.dedup();
    Ok(edges)
}

/// Sandwich factor for [`det_girth`]: g <= estimate <= factor * g.
pub fn det_girth_factor(n: usize, k: usize) -> u64 {
    20 * k as u64 * loglog(n) + 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{exact_girth, verify_cover};

    #[test]
    fn loglog_floor() {
        assert_eq!(loglog(1), 1);
        assert_eq!(loglog(4), 1);
        assert_eq!(loglog(5), 2);
        assert_eq!(loglog(16), 2);
        assert_eq!(loglog(17), 3);
    }

    #[test]
    fn good_cut_examples() {
        let (b1, b2) = (BallSize::new(9, 20), BallSize::new(25, 80));
        assert!(good_cut(100, 400, b1, b2, 2));
        assert!(!good_cut(100, 400, b1, BallSize::new(100, 80), 2));
        let same = BallSize::new(30, 50);
        assert!(good_cut(100, 400, same, same, 3));
        assert!(!good_cut(100, 400, BallSize::new(1, 0), BallSize::new(40, 0), 2));
    }

    #[test]
    fn power_comparison_falls_back_to_logs() {
        assert!(power_at_most(10, 2, 10, 1, 10));
        assert!(!power_at_most(11, 2, 10, 1, 10));
        let big = usize::MAX / 2;
        assert!(power_at_most(big, 5, big, 4, big));
        assert!(!power_at_most(big, 5, big / 4, 4, big));
    }

    #[test]
    fn two_cycle_is_one_ball() {
        let g = Graph::new(2, [(0, 1, 1), (1, 0, 1)]).unwrap();
        let cover = roundtrip_cover(&g, 2, 2).unwrap();
        assert_eq!(cover.balls.len(), 1);
        assert_eq!(cover.balls[0].members, vec![0, 1]);
        assert!(cover.balls[0].radius_bound <= 2 * (5 * 2 * 2 * loglog(2)) + 2);
    }

    #[test]
    fn empty_graph_gives_empty_cover() {
        let g = Graph::empty(0);
        assert!(roundtrip_cover(&g, 2, 1).unwrap().balls.is_empty());
        assert!(det_spanner(&g, 2).unwrap().is_empty());
    }

    #[test]
    fn far_apart_two_cycles() {
        let g =
            Graph::new(4, [(0, 1, 1), (1, 0, 1), (2, 3, 1), (3, 2, 1), (1, 2, 10_000)]).unwrap();
        let cover = roundtrip_cover(&g, 2, 2).unwrap();
        assert!(cover.balls.iter().all(|b| !(b.contains(0) && b.contains(2))));
        assert!(verify_cover(&g, &cover, cover.stretch as f64, 2).unwrap().ok);
    }

    #[test]
    fn deletions_partition_every_subproblem() {
        let g = crate::generate::erdos_renyi(60, 0.06, 1..=5, crate::rng::Seed(23)).unwrap();
        let (cover, trace) = roundtrip_cover_traced(&g, 2, 4).unwrap();
        assert_eq!(trace.deletions, trace.subproblem_vertices);
        assert!(trace.max_growth_index <= 5 * 2 * loglog(60));
        assert!(verify_cover(&g, &cover, cover.stretch as f64, 4).unwrap().ok);
        assert_eq!(roundtrip_cover(&g, 2, 4).unwrap(), cover);
    }

    #[test]
    fn triangle_and_acyclic_girth() {
        let g = Graph::new(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]).unwrap();
        let est = det_girth(&g, 2).unwrap();
        assert!(est.estimate >= 3 && est.estimate <= 3 * det_girth_factor(3, 2));
        let w = est.witness.unwrap();
        w.validate(&g).unwrap();
        assert!(w.length <= est.estimate);

        let tournament: Vec<_> = (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v, 1))).collect();
        let dag = Graph::new(6, tournament).unwrap();
        assert_eq!(det_girth(&dag, 2).unwrap().estimate, INFINITY);
        for radius in [1, 4, 16] {
            let cover = roundtrip_cover(&dag, 2, radius).unwrap();
            assert!(cover.balls.iter().all(|b| !b.is_nontrivial()));
        }
    }

    #[test]
    fn single_cycle_spanner_is_the_cycle() {
        let g = Graph::new(5, (0..5).map(|v| (v, (v + 1) % 5, 2))).unwrap();
        assert_eq!(det_spanner(&g, 2).unwrap(), (0..5).collect::<Vec<_>>());
    }

    #[test]
    fn girth_respects_self_loops_and_zero_cycles() {
        let g = Graph::new(3, [(0, 1, 5), (1, 0, 5), (2, 2, 3)]).unwrap();
        assert_eq!(det_girth(&g, 2).unwrap().estimate, 3);
        let z = Graph::new(2, [(0, 1, 0), (1, 0, 0)]).unwrap();
        assert_eq!(det_girth(&z, 2).unwrap().estimate, 0);
        assert_eq!(exact_girth(&z).0, 0);
    }
}
