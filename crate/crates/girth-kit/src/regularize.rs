//! Degree reduction that preserves roundtrip distances.
//!
//! Every vertex whose out-degree exceeds `delta` has its out-edges rerouted
//! through a balanced `delta`-ary tree of zero-weight edges; in-edges are
//! handled symmetrically. Original edges become cross edges from an out-tree
//! leaf of their tail to an in-tree leaf of their head.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{CycleWitness, Direction, EdgeId, Graph, Length, VertexId};

/// Which tree an auxiliary vertex belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TreeSide {
    Out,
    In,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum NodeRole {
    Original,
    Aux { owner: VertexId, side: TreeSide },
}

/// Correspondence between `h` and the graph it was built from. Original
/// vertices keep their ids `0..original_count`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularizeMap {
    pub original_count: usize,
    pub roles: Vec<NodeRole>,
    /// For each edge of `h`, the edge of the original graph it stands for;
    /// `None` for zero-weight tree edges.
    pub lifted_edges: Vec<Option<EdgeId>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegularizedGraph {
    pub h: Graph,
    pub delta: usize,
    pub map: RegularizeMap,
}

/// max(2, ceil(m / n)).
pub fn branching_factor(g: &Graph) -> usize {
    if g.n() == 0 {
        return 2;
    }
    g.m().div_ceil(g.n()).max(2)
}

struct Builder {
    delta: usize,
    roles: Vec<NodeRole>,
    edges: Vec<(VertexId, VertexId, Length)>,
}

impl Builder {
    fn fresh(&mut self, owner: VertexId, side: TreeSide) -> VertexId {
        self.roles.push(NodeRole::Aux { owner, side });
        self.roles.len() - 1
    }

    fn tree_edge(&mut self, parent: VertexId, child: VertexId, side: TreeSide) {
        match side {
            TreeSide::Out => self.edges.push((parent, child, 0)),
            TreeSide::In => self.edges.push((child, parent, 0)),
        }
    }

    /// Attachment point in `h` for each of `degree` edges at `root`: the root
    /// itself when the degree fits, otherwise one of the tree's leaves.
    fn attach(&mut self, root: VertexId, degree: usize, side: TreeSide) -> Vec<VertexId> {
        if degree <= self.delta {
            return vec![root; degree];
        }
        let leaves: Vec<VertexId> =
            (0..degree.div_ceil(self.delta)).map(|_| self.fresh(root, side)).collect();
        let mut level = leaves.clone();
        while level.len() > self.delta {
            let mut parents = Vec::with_capacity(level.len().div_ceil(self.delta));
            for chunk in level.chunks(self.delta) {
                let parent = self.fresh(root, side);
                for &child in chunk {
                    self.tree_edge(parent, child, side);
                }
                parents.push(parent);
            }
            level = parents;
        }
        for &child in &level {
            self.tree_edge(root, child, side);
        }
        (0..degree).map(|j| leaves[j / self.delta]).collect()
    }
}

pub fn regularize(g: &Graph) -> RegularizedGraph {
    let n = g.n();
    let delta = branching_factor(g);
    let mut builder = Builder { delta, roles: vec![NodeRole::Original; n], edges: Vec::new() };

    let mut tail_slot = vec![0; g.m()];
    let mut head_slot = vec![0; g.m()];
    for v in g.vertices() {
        let slots = builder.attach(v, g.out_degree(v), TreeSide::Out);
        for (nb, slot) in g.out_neighbors(v).iter().zip(slots) {
            tail_slot[nb.edge] = slot;
        }
        let slots = builder.attach(v, g.in_degree(v), TreeSide::In);
        for (nb, slot) in g.in_neighbors(v).iter().zip(slots) {
            head_slot[nb.edge] = slot;
        }
    }
    for (id, e) in g.edges().iter().enumerate() {
        builder.edges.push((tail_slot[id], head_slot[id], e.weight));
    }
    builder.edges.extend(g.self_loops().iter().map(|&(v, w)| (v, v, w)));

    let Builder { roles, edges, .. } = builder;
    let h = Graph::new(roles.len(), edges).expect("regularized graph stays within capacity");
    let mut lifted_edges = vec![None; h.m()];
    for (id, e) in g.edges().iter().enumerate() {
        let h_edge = h.find_edge(tail_slot[id], head_slot[id]).expect("cross edge present");
        debug_assert_eq!(h.edge(h_edge).weight, e.weight);
        lifted_edges[h_edge] = Some(id);
    }
    RegularizedGraph { h, delta, map: RegularizeMap { original_count: n, roles, lifted_edges } }
}

impl RegularizedGraph {
    pub fn is_original(&self, v: VertexId) -> bool {
        v < self.map.original_count
    }

    pub fn role(&self, v: VertexId) -> NodeRole {
        self.map.roles[v]
    }

    /// The original edge represented by edge `h_edge` of `h`, if any.
    pub fn original_edge(&self, h_edge: EdgeId) -> Option<EdgeId> {
        self.map.lifted_edges[h_edge]
    }

    /// The same cycle in the original graph, with tree vertices contracted.
    pub fn lift_cycle(&self, g: &Graph, cycle: &CycleWitness) -> Result<CycleWitness> {
        let length = cycle.replay(&self.h)?;
        if let [v] = cycle.vertices[..] {
            if !self.is_original(v) {
                return Err(Error::Invariant(format!("self-loop at auxiliary vertex {v}")));
            }
            return Ok(CycleWitness { vertices: vec![v], length });
        }
        let k = cycle.vertices.len();
        let mut vertices = Vec::new();
        for i in 0..k {
            let (a, b) = (cycle.vertices[i], cycle.vertices[(i + 1) % k]);
            let h_edge = self.h.find_edge(a, b).expect("replayed cycle edge");
            if let Some(id) = self.original_edge(h_edge) {
                vertices.push(g.edge(id).from);
            }
        }
        if vertices.is_empty() {
            return Err(Error::Invariant("cycle lies entirely inside one tree".into()));
        }
        let lifted = CycleWitness { vertices, length };
        lifted.validate(g)?;
        Ok(lifted)
    }

    /// Original edges represented by `h_edges`, ascending and deduplicated.
    pub fn lift_subgraph(&self, h_edges: &[EdgeId]) -> Vec<EdgeId> {
        let mut lifted: Vec<EdgeId> =
            h_edges.iter().filter_map(|&e| self.original_edge(e)).collect();
        lifted.sort_unstable();
        lifted.dedup();
        lifted
    }

    /// Largest in- or out-degree over all vertices of `h`.
    pub fn max_degree(&self) -> usize {
        self.h.vertices().map(|v| self.h.out_degree(v).max(self.h.in_degree(v))).max().unwrap_or(0)
    }

    /// Out- or in-degree of `v` in `h`.
    pub fn degree(&self, v: VertexId, dir: Direction) -> usize {
        self.h.neighbors(v, dir).len()
    }
}
