//! Reduction gadgets: the Staller short-game graph of a hypergraph, the
//! vertex-doubling graph for dominating sets, and the universal-vertex graph.
//! Each output carries the map from source objects to output vertices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{add_universal_vertex, Graph};
use crate::hypergraph::Hypergraph;

/// The source object an output vertex stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "kind", content = "index", rename_all = "snake_case")]
pub enum Source {
    /// A vertex of the input graph or hypergraph.
    Vertex(usize),
    /// A hyperedge of the input hypergraph, in its sorted edge order.
    Hyperedge(usize),
    /// The added universal vertex.
    Universal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Correspondence {
    pub source: Source,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GadgetInstance {
    #[serde(skip)]
    pub graph: Graph,
    pub correspondence: Vec<Correspondence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl GadgetInstance {
    pub fn vertices_of(&self, source: Source) -> &[usize] {
        self.correspondence
            .iter()
            .find(|c| c.source == source)
            .map_or(&[], |c| c.vertices.as_slice())
    }

    /// Checks that every output vertex belongs to exactly one source.
    pub fn validate(&self) -> Result<()> {
        let mut seen = vec![false; self.graph.n()];
        for v in self.correspondence.iter().flat_map(|c| &c.vertices) {
            match seen.get_mut(*v) {
                Some(slot) if !*slot => *slot = true,
                _ => return Err(Error::Inconsistent(format!("vertex {v} mapped twice or out of range"))),
            }
        }
        match seen.iter().position(|s| !s) {
            Some(v) => Err(Error::Inconsistent(format!("vertex {v} has no source"))),
            None => Ok(()),
        }
    }

    /// The correspondence as JSON, for a sidecar file next to the graph.
    pub fn correspondence_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("correspondence serializes")
    }
}

/// A clique on the hypergraph's vertices plus `k + 2` fresh vertices per
/// hyperedge, each joined to the clique vertices of that hyperedge's members.
/// Maker fills a hyperedge within `k` moves exactly when Staller isolates a
/// vertex of the output within `k + 1` moves, for the same first player.
pub fn staller_hardness_gadget(h: &Hypergraph, k: usize) -> Result<GadgetInstance> {
    if let Some(&v) = h.isolated_vertices().first() {
        return Err(Error::input(format!("hypergraph vertex {v} lies in no hyperedge")));
    }
    let n = h.n();
    let mut edges: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut correspondence: Vec<Correspondence> =
        (0..n).map(|v| Correspondence { source: Source::Vertex(v), vertices: vec![v] }).collect();
    let copies = k + 2;
    for (i, f) in h.edges().iter().enumerate() {
        let fresh: Vec<usize> = (n + i * copies..n + (i + 1) * copies).collect();
        for &w in &fresh {
            edges.extend(f.iter().map(|&u| (u, w)));
        }
        correspondence.push(Correspondence { source: Source::Hyperedge(i), vertices: fresh });
    }
    let graph = Graph::new(n + copies * h.edges().len(), &edges)?;
    Ok(GadgetInstance { graph, correspondence, k: Some(k) })
}

/// Vertex `v_i` becomes the adjacent pair `x_i = i`, `y_i = n + i`; every edge
/// `v_i v_j` becomes all four edges between the pairs. A dominating set of
/// size `k` lets Dominator win within `k` moves by pairing `x_i` with `y_i`.
pub fn dominator_hardness_gadget(g: &Graph) -> GadgetInstance {
    let n = g.n();
    let mut edges: Vec<(usize, usize)> = (0..n).map(|i| (i, n + i)).collect();
    for (i, j) in g.edges() {
        edges.extend([(i, j), (n + i, n + j), (i, n + j), (j, n + i)]);
    }
    let graph = Graph::new(2 * n, &edges).expect("doubled edges are in range");
    let correspondence =
        (0..n).map(|i| Correspondence { source: Source::Vertex(i), vertices: vec![i, n + i] }).collect();
    GadgetInstance { graph, correspondence, k: None }
}

/// `G` plus a vertex `n` adjacent to every vertex of `G`.
pub fn universal_vertex_gadget(g: &Graph) -> GadgetInstance {
    let n = g.n();
    let mut correspondence: Vec<Correspondence> =
        (0..n).map(|v| Correspondence { source: Source::Vertex(v), vertices: vec![v] }).collect();
    correspondence.push(Correspondence { source: Source::Universal, vertices: vec![n] });
    GadgetInstance { graph: add_universal_vertex(g), correspondence, k: None }
}

/// A smallest dominating set of size at most `k`, by exhaustive search.
pub fn dominating_set_within(g: &Graph, k: usize) -> Option<Vec<usize>> {
    fn extend(g: &Graph, from: usize, left: usize, chosen: &mut Vec<usize>) -> bool {
        if g.is_dominating(chosen).expect("chosen vertices are in range") {
            return true;
        }
        if left == 0 {
            return false;
        }
        for v in from..g.n() {
            chosen.push(v);
            if extend(g, v + 1, left - 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    (0..=k.min(g.n())).find_map(|size| {
        let mut chosen = Vec::new();
        extend(g, 0, size, &mut chosen).then_some(chosen)
    })
}
