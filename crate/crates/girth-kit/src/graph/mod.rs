//! Directed weighted graphs with forward and reverse adjacency, plus the
//! shortest-path primitives shared by every algorithm in the crate.

mod cycle;
mod search;
mod subgraph;

pub use cycle::{is_acyclic, strongly_connected_components, zero_length_cycle, CycleWitness};
pub use search::{
    dijkstra, pruned_dijkstra, roundtrip_distance, shortest_cycle_through, DistanceMap,
};
pub use subgraph::{induced_subgraph, VertexMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;
pub type Length = u64;

/// Distance of an unreachable vertex. Strictly larger than any path length,
/// since graphs with `n * W` overflowing are rejected at construction.
pub const INFINITY: Length = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
    pub weight: Length,
}

/// Which way a search follows edges relative to its source.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// Distances from the source: d(source, v).
    Out,
    /// Distances to the source: d(v, source).
    In,
}

impl Direction {
    pub fn reverse(self) -> Direction {
        match self {
            Direction::Out => Direction::In,
            Direction::In => Direction::Out,
        }
    }
}

/// One adjacency entry: the vertex at the other end, the edge weight and the
/// id of the underlying edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Neighbor {
    pub vertex: VertexId,
    pub weight: Length,
    pub edge: EdgeId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Adjacency {
    start: Vec<usize>,
    entries: Vec<Neighbor>,
}

impl Adjacency {
    fn build(n: usize, edges: &[Edge], dir: Direction) -> Adjacency {
        let mut start = vec![0usize; n + 1];
        for e in edges {
            let tail = match dir {
                Direction::Out => e.from,
                Direction::In => e.to,
            };
            start[tail + 1] += 1;
        }
        for v in 0..n {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let placeholder = Neighbor { vertex: 0, weight: 0, edge: 0 };
        let mut entries = vec![placeholder; edges.len()];
        for (id, e) in edges.iter().enumerate() {
            let (tail, head) = match dir {
                Direction::Out => (e.from, e.to),
                Direction::In => (e.to, e.from),
            };
            entries[fill[tail]] = Neighbor { vertex: head, weight: e.weight, edge: id };
            fill[tail] += 1;
        }
        Adjacency { start, entries }
    }

    fn of(&self, v: VertexId) -> &[Neighbor] {
        &self.entries[self.start[v]..self.start[v + 1]]
    }
}

/// Immutable directed graph with non-negative integer weights.
///
/// Construction normalizes the edge list: parallel edges collapse to the
/// lightest one, and self-loops are removed from the edge list and kept in a
/// side table (each is a cycle of its own). Edges are stored sorted by
/// `(from, to)`, so edge ids are stable for a given edge set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    forward: Adjacency,
    backward: Adjacency,
    self_loops: Vec<(VertexId, Length)>,
}

impl Graph {
    /// Builds a graph from `(from, to, weight)` triples.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (VertexId, VertexId, Length)>,
    {
        let mut plain = Vec::new();
        let mut loops = Vec::new();
        for (from, to, weight) in edges {
            for vertex in [from, to] {
                if vertex >= n {
                    return Err(Error::VertexOutOfRange { vertex, n });
                }
            }
            if from == to {
                loops.push((from, weight));
            } else {
                plain.push(Edge { from, to, weight });
            }
        }
        plain.sort_unstable();
        plain.dedup_by(|later, earlier| later.from == earlier.from && later.to == earlier.to);
        loops.sort_unstable();
        loops.dedup_by_key(|(v, _)| *v);
        Graph::from_normalized(n, plain, loops)
    }

    /// `edges` must be sorted by `(from, to)` without duplicate pairs or
    /// self-loops, and `self_loops` sorted by vertex with one entry each.
    pub(crate) fn from_normalized(
        n: usize,
        edges: Vec<Edge>,
        self_loops: Vec<(VertexId, Length)>,
    ) -> Result<Graph> {
        debug_assert!(edges.windows(2).all(|w| (w[0].from, w[0].to) < (w[1].from, w[1].to)));
        debug_assert!(edges.iter().all(|e| e.from != e.to && e.from < n && e.to < n));
        let graph = Graph {
            n,
            forward: Adjacency::build(n, &edges, Direction::Out),
            backward: Adjacency::build(n, &edges, Direction::In),
            edges,
            self_loops,
        };
        let w = graph.max_weight();
        if (n as u128) * (w as u128) >= INFINITY as u128 {
            return Err(Error::InvalidArgument(format!(
                "n * W = {n} * {w} does not fit below the distance sentinel"
            )));
        }
        Ok(graph)
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_normalized(n, Vec::new(), Vec::new()).expect("edgeless graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of edges, excluding self-loops.
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id]
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.n
    }

    pub fn neighbors(&self, v: VertexId, dir: Direction) -> &[Neighbor] {
        match dir {
            Direction::Out => self.forward.of(v),
            Direction::In => self.backward.of(v),
        }
    }

    pub fn out_neighbors(&self, v: VertexId) -> &[Neighbor] {
        self.forward.of(v)
    }

    pub fn in_neighbors(&self, v: VertexId) -> &[Neighbor] {
        self.backward.of(v)
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.forward.of(v).len()
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.backward.of(v).len()
    }

    pub fn find_edge(&self, from: VertexId, to: VertexId) -> Option<EdgeId> {
        if from >= self.n {
            return None;
        }
        let out = self.forward.of(from);
        out.binary_search_by_key(&to, |nb| nb.vertex).ok().map(|i| out[i].edge)
    }

    /// Self-loops removed at construction, as `(vertex, lightest weight)`.
    pub fn self_loops(&self) -> &[(VertexId, Length)] {
        &self.self_loops
    }

    pub fn self_loop(&self, v: VertexId) -> Option<Length> {
        self.self_loops.binary_search_by_key(&v, |&(u, _)| u).ok().map(|i| self.self_loops[i].1)
    }

    /// Lightest self-loop, which bounds the girth from above.
    pub fn lightest_self_loop(&self) -> Option<(VertexId, Length)> {
        self.self_loops.iter().copied().min_by_key(|&(v, w)| (w, v))
    }

    /// Largest edge weight W, self-loops included; 0 for an edgeless graph.
    pub fn max_weight(&self) -> Length {
        let plain = self.edges.iter().map(|e| e.weight).max().unwrap_or(0);
        let loops = self.self_loops.iter().map(|&(_, w)| w).max().unwrap_or(0);
        plain.max(loops)
    }

    pub fn min_positive_weight(&self) -> Option<Length> {
        self.edges
            .iter()
            .map(|e| e.weight)
            .chain(self.self_loops.iter().map(|&(_, w)| w))
            .filter(|&w| w > 0)
            .min()
    }

    /// `n * W`, an upper bound on the length of any simple cycle.
    pub fn length_horizon(&self) -> Length {
        (self.n as Length).saturating_mul(self.max_weight())
    }

    pub fn reversed(&self) -> Graph {
        let mut edges: Vec<Edge> =
            self.edges.iter().map(|e| Edge { from: e.to, to: e.from, weight: e.weight }).collect();
        edges.sort_unstable();
        Graph::from_normalized(self.n, edges, self.self_loops.clone())
            .expect("reversal preserves validity")
    }

    /// Subgraph on the same vertex set keeping only the given edges.
    pub fn edge_subgraph<I>(&self, ids: I) -> Result<Graph>
    where
        I: IntoIterator<Item = EdgeId>,
    {
        let mut kept = Vec::new();
        for id in ids {
            if id >= self.m() {
                return Err(Error::EdgeOutOfRange { edge: id, m: self.m() });
            }
            kept.push(self.edges[id]);
        }
        kept.sort_unstable();
        kept.dedup();
        Graph::from_normalized(self.n, kept, Vec::new())
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }
}
