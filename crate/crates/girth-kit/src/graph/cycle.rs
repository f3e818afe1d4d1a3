use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{dijkstra, shortest_cycle_through, Direction, Edge, Graph, Length, VertexId};
use crate::error::{Error, Result};

/// A directed cycle given by its cyclic vertex sequence. A single vertex
/// denotes a self-loop.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleWitness {
    pub vertices: Vec<VertexId>,
    pub length: Length,
}

impl CycleWitness {
    /// Sum of the weights of the edges joining consecutive vertices.
    pub fn replay(&self, g: &Graph) -> Result<Length> {
        let k = self.vertices.len();
        if k == 0 {
            return Err(Error::InvalidCycle("cycle has no vertices".into()));
        }
        let mut total: Length = 0;
        for i in 0..k {
            let (from, to) = (self.vertices[i], self.vertices[(i + 1) % k]);
            g.check_vertex(from)?;
            let weight = if from == to {
                g.self_loop(from)
            } else {
                g.find_edge(from, to).map(|e| g.edge(e).weight)
            };
            let weight = weight
                .ok_or_else(|| Error::InvalidCycle(format!("missing edge {from} -> {to}")))?;
            total += weight;
        }
        Ok(total)
    }

    /// Checks that every step is an edge of `g` and that the declared length
    /// matches the replayed one.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let replayed = self.replay(g)?;
        if replayed != self.length {
            return Err(Error::InvalidCycle(format!(
                "declared length {} but edges sum to {replayed}",
                self.length
            )));
        }
        Ok(())
    }

    /// The same cycle in the reversed graph.
    pub fn reversed(&self) -> CycleWitness {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        CycleWitness { vertices, length: self.length }
    }

    /// Extracts a simple cycle from a closed walk (the walk returns from its
    /// last vertex to its first). The cycle is no longer than the walk.
    pub fn from_closed_walk(g: &Graph, walk: &[VertexId]) -> Result<CycleWitness> {
        if walk.is_empty() {
            return Err(Error::InvalidCycle("empty walk".into()));
        }
        let mut seen: FxHashMap<VertexId, usize> = FxHashMap::default();
        let closed = walk.iter().chain(std::iter::once(&walk[0]));
        for (pos, &v) in closed.enumerate() {
            if let Some(&first) = seen.get(&v) {
                let vertices = walk[first..pos].to_vec();
                let length = CycleWitness { vertices: vertices.clone(), length: 0 }.replay(g)?;
                return Ok(CycleWitness { vertices, length });
            }
            seen.insert(v, pos);
        }
        unreachable!("the closing step repeats the first vertex")
    }
}

/// Strongly connected components as a component index per vertex, plus the
/// component count. Components are numbered in reverse topological order.
pub fn strongly_connected_components(g: &Graph) -> (usize, Vec<usize>) {
    const UNVISITED: usize = usize::MAX;
    let n = g.n();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut comp = vec![UNVISITED; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut next_index = 0;
    let mut count = 0;
    // (vertex, position in its out-adjacency)
    let mut frames: Vec<(VertexId, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        frames.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(frame) = frames.last_mut() {
            let v = frame.0;
            let out = g.out_neighbors(v);
            if frame.1 < out.len() {
                let w = out[frame.1].vertex;
                frame.1 += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("component root is on the stack");
                    on_stack[w] = false;
                    comp[w] = count;
                    if w == v {
                        break;
                    }
                }
                count += 1;
            }
        }
    }
    (count, comp)
}

/// True iff `g` has no directed cycle, self-loops included.
pub fn is_acyclic(g: &Graph) -> bool {
    if !g.self_loops().is_empty() {
        return false;
    }
    let (count, _) = strongly_connected_components(g);
    count == g.n()
}

/// A cycle of total length 0, if one exists. Positive-radius searches can
/// never certify girth 0, so the girth pipelines screen for this first.
pub fn zero_length_cycle(g: &Graph) -> Option<CycleWitness> {
    if let Some(&(v, _)) = g.self_loops().iter().find(|&&(_, w)| w == 0) {
        return Some(CycleWitness { vertices: vec![v], length: 0 });
    }
    let zero_edges: Vec<Edge> = g.edges().iter().copied().filter(|e| e.weight == 0).collect();
    let zero = Graph::from_normalized(g.n(), zero_edges, Vec::new()).expect("subgraph is valid");
    let (count, comp) = strongly_connected_components(&zero);
    if count == g.n() {
        return None;
    }
    let mut size = vec![0usize; count];
    for &c in &comp {
        size[c] += 1;
    }
    let v = (0..g.n()).find(|&v| size[comp[v]] > 1)?;
    let from_v = dijkstra(&zero, v, Direction::Out, Some(0)).expect("vertex is in range");
    shortest_cycle_through(&zero, &from_v)
}
