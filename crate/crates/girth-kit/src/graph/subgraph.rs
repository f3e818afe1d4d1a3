use serde::{Deserialize, Serialize};

use super::{Edge, EdgeId, Graph, VertexId};
use crate::error::Result;

/// Correspondence between an induced subgraph and its parent graph.
///
/// Local vertex ids follow the parent's order, so `vertices` is ascending and
/// the lowest local id is also the lowest parent id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexMap {
    vertices: Vec<VertexId>,
    edges: Vec<EdgeId>,
}

impl VertexMap {
    pub fn identity(g: &Graph) -> VertexMap {
        VertexMap { vertices: g.vertices().collect(), edges: (0..g.m()).collect() }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Parent id of every local vertex, ascending.
    pub fn parent_vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn to_parent(&self, local: VertexId) -> VertexId {
        self.vertices[local]
    }

    pub fn to_local(&self, parent: VertexId) -> Option<VertexId> {
        self.vertices.binary_search(&parent).ok()
    }

    pub fn parent_edge(&self, local: EdgeId) -> EdgeId {
        self.edges[local]
    }

    /// Chains `self` (sub -> mid) with `outer` (mid -> top) into sub -> top.
    pub fn then(&self, outer: &VertexMap) -> VertexMap {
        VertexMap {
            vertices: self.vertices.iter().map(|&v| outer.to_parent(v)).collect(),
            edges: self.edges.iter().map(|&e| outer.parent_edge(e)).collect(),
        }
    }
}

/// G[W]: the vertices in `vertices` and every edge with both ends among them.
pub fn induced_subgraph(g: &Graph, vertices: &[VertexId]) -> Result<(Graph, VertexMap)> {
    let mut chosen = vertices.to_vec();
    chosen.sort_unstable();
    chosen.dedup();
    for &v in &chosen {
        g.check_vertex(v)?;
    }
    let local = |v: VertexId| chosen.binary_search(&v).ok();
    let mut edges = Vec::new();
    let mut parent_edges = Vec::new();
    for (from, &v) in chosen.iter().enumerate() {
        for nb in g.out_neighbors(v) {
            if let Some(to) = local(nb.vertex) {
                edges.push(Edge { from, to, weight: nb.weight });
                parent_edges.push(nb.edge);
            }
        }
    }
    let loops = g.self_loops().iter().filter_map(|&(v, w)| local(v).map(|l| (l, w))).collect();
    let sub = Graph::from_normalized(chosen.len(), edges, loops)?;
    Ok((sub, VertexMap { vertices: chosen, edges: parent_edges }))
}
