use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use super::{CycleWitness, Direction, EdgeId, Graph, Length, VertexId, INFINITY};
use crate::error::{Error, Result};

const NO_EDGE: EdgeId = EdgeId::MAX;

#[derive(Clone, Debug)]
enum Store {
    Dense { dist: Vec<Length>, parent: Vec<EdgeId> },
    Sparse(FxHashMap<VertexId, (Length, EdgeId)>),
}

impl Store {
    fn dist(&self, v: VertexId) -> Length {
        match self {
            Store::Dense { dist, .. } => dist[v],
            Store::Sparse(map) => map.get(&v).map_or(INFINITY, |&(d, _)| d),
        }
    }

    fn set(&mut self, v: VertexId, d: Length, via: EdgeId) {
        match self {
            Store::Dense { dist, parent } => {
                dist[v] = d;
                parent[v] = via;
            }
            Store::Sparse(map) => {
                map.insert(v, (d, via));
            }
        }
    }
}

/// Result of a single-source search: shortest-path distances and the
/// shortest-path tree, in the direction the search ran.
///
/// Vertices that were not reached (or lie beyond the search radius) report
/// [`INFINITY`].
#[derive(Clone, Debug)]
pub struct DistanceMap {
    source: VertexId,
    direction: Direction,
    store: Store,
}

impl DistanceMap {
    pub fn source(&self) -> VertexId {
        self.source
    }

    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn dist(&self, v: VertexId) -> Length {
        self.store.dist(v)
    }

    pub fn reaches(&self, v: VertexId) -> bool {
        self.dist(v) != INFINITY
    }

    /// Tree edge by which `v` was reached; `None` for the source and for
    /// unreached vertices.
    pub fn parent(&self, v: VertexId) -> Option<EdgeId> {
        let via = match &self.store {
            Store::Dense { dist, parent } => {
                if dist[v] == INFINITY {
                    NO_EDGE
                } else {
                    parent[v]
                }
            }
            Store::Sparse(map) => map.get(&v).map_or(NO_EDGE, |&(_, e)| e),
        };
        (via != NO_EDGE).then_some(via)
    }

    /// Reached vertices with their distances, sorted by vertex id.
    pub fn reached(&self) -> Vec<(VertexId, Length)> {
        match &self.store {
            Store::Dense { dist, .. } => dist
                .iter()
                .enumerate()
                .filter(|&(_, &d)| d != INFINITY)
                .map(|(v, &d)| (v, d))
                .collect(),
            Store::Sparse(map) => {
                let mut out: Vec<_> = map.iter().map(|(&v, &(d, _))| (v, d)).collect();
                out.sort_unstable();
                out
            }
        }
    }

    pub fn reached_count(&self) -> usize {
        match &self.store {
            Store::Dense { dist, .. } => dist.iter().filter(|&&d| d != INFINITY).count(),
            Store::Sparse(map) => map.len(),
        }
    }

    /// Tree edges, sorted by id.
    pub fn tree_edges(&self) -> Vec<EdgeId> {
        let mut edges: Vec<EdgeId> =
            self.reached().into_iter().filter_map(|(v, _)| self.parent(v)).collect();
        edges.sort_unstable();
        edges
    }

    /// Vertex sequence of the tree path between the source and `v`, in edge
    /// direction: source..v for an out-search, v..source for an in-search.
    pub fn path(&self, g: &Graph, v: VertexId) -> Option<Vec<VertexId>> {
        if !self.reaches(v) {
            return None;
        }
        let mut walk = vec![v];
        let mut cur = v;
        while let Some(e) = self.parent(cur) {
            let edge = g.edge(e);
            cur = match self.direction {
                Direction::Out => edge.from,
                Direction::In => edge.to,
            };
            walk.push(cur);
        }
        if self.direction == Direction::Out {
            walk.reverse();
        }
        Some(walk)
    }
}

fn search<F>(
    g: &Graph,
    source: VertexId,
    dir: Direction,
    bound: Length,
    keep: F,
    mut store: Store,
) -> DistanceMap
where
    F: Fn(VertexId) -> bool,
{
    store.set(source, 0, NO_EDGE);
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0, source)));
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > store.dist(v) {
            continue;
        }
        for nb in g.neighbors(v, dir) {
            let nd = d + nb.weight;
            if nd > bound || nd >= store.dist(nb.vertex) || !keep(nb.vertex) {
                continue;
            }
            store.set(nb.vertex, nd, nb.edge);
            heap.push(Reverse((nd, nb.vertex)));
        }
    }
    DistanceMap { source, direction: dir, store }
}

/// Single-source shortest paths from (`Out`) or to (`In`) `source`.
///
/// With a radius bound only vertices within it are reported, and the result
/// is stored sparsely so that small balls stay cheap on large graphs.
pub fn dijkstra(
    g: &Graph,
    source: VertexId,
    dir: Direction,
    radius_bound: Option<Length>,
) -> Result<DistanceMap> {
    g.check_vertex(source)?;
    let store = match radius_bound {
        Some(_) => Store::Sparse(FxHashMap::default()),
        None => Store::Dense { dist: vec![INFINITY; g.n()], parent: vec![NO_EDGE; g.n()] },
    };
    Ok(search(g, source, dir, radius_bound.unwrap_or(INFINITY - 1), |_| true, store))
}

/// Dijkstra restricted to the subgraph induced by `keep`, truncated at
/// `radius_bound`. Excluded vertices are never entered, so their edges are
/// never relaxed.
pub fn pruned_dijkstra<F>(
    g: &Graph,
    source: VertexId,
    dir: Direction,
    radius_bound: Length,
    keep: F,
) -> Result<DistanceMap>
where
    F: Fn(VertexId) -> bool,
{
    g.check_vertex(source)?;
    if !keep(source) {
        return Err(Error::SourceExcluded(source));
    }
    let bound = radius_bound.min(INFINITY - 1);
    Ok(search(g, source, dir, bound, keep, Store::Sparse(FxHashMap::default())))
}

/// d(u, v) + d(v, u), or [`INFINITY`] when either direction is unreachable.
pub fn roundtrip_distance(g: &Graph, u: VertexId, v: VertexId) -> Result<Length> {
    g.check_vertex(v)?;
    let out = dijkstra(g, u, Direction::Out, None)?;
    let back = dijkstra(g, u, Direction::In, None)?;
    let (there, home) = (out.dist(v), back.dist(v));
    if there == INFINITY || home == INFINITY {
        Ok(INFINITY)
    } else {
        Ok(there + home)
    }
}

/// Shortest cycle through the source of an out-search, closing the tree path
/// to some in-neighbor `u` with the edge `u -> source`. Only in-neighbors the
/// search reached are considered, so a pruned search yields the shortest
/// cycle through the source inside its kept subgraph.
pub fn shortest_cycle_through(g: &Graph, from_source: &DistanceMap) -> Option<CycleWitness> {
    debug_assert_eq!(from_source.direction(), Direction::Out);
    let v = from_source.source();
    let (length, closer) = g
        .in_neighbors(v)
        .iter()
        .filter(|nb| from_source.reaches(nb.vertex))
        .map(|nb| (from_source.dist(nb.vertex) + nb.weight, nb.vertex))
        .min()?;
    let vertices = from_source.path(g, closer).expect("closer was reached");
    Some(CycleWitness { vertices, length })
}
