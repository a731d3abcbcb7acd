//! Simple undirected graphs with dense vertex indices.
//!
//! Every constructor keeps adjacency lists sorted, symmetric and loop-free, so
//! two graphs built from the same edge set compare equal.

use std::collections::{BTreeSet, HashMap, VecDeque};

use rand::RngCore;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composition {
    Union,
    Join,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TwinKind {
    /// Members share their closed neighborhood (and so induce a clique).
    True,
    /// Members share their open neighborhood (and so induce a stable set).
    False,
    Singleton,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinClass {
    pub kind: TwinKind,
    pub members: Vec<usize>,
}

/// Partition of the vertex set into maximal twin classes, ordered by smallest member.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwinPartition {
    pub classes: Vec<TwinClass>,
}

impl TwinPartition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterProfile {
    pub is_cluster: bool,
    pub isolated_count: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate pairs collapse; loops and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![BTreeSet::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            adj[u].insert(v);
            adj[v].insert(u);
        }
        Ok(Graph {
            adj: adj.into_iter().map(|s| s.into_iter().collect()).collect(),
            labels: None,
        })
    }

    pub fn empty(n: usize) -> Self {
        Graph { adj: vec![Vec::new(); n], labels: None }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::input(format!(
                "{} labels for {} vertices",
                labels.len(),
                self.n()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            out.extend(nbrs.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n() {
            return Err(Error::input(format!("vertex {v} out of range for n={}", self.n())));
        }
        Ok(())
    }

    fn check_set(&self, set: &[usize]) -> Result<()> {
        set.iter().try_for_each(|&v| self.check_vertex(v))
    }

    /// `N[v]`, sorted.
    pub fn closed_neighborhood(&self, v: usize) -> Result<Vec<usize>> {
        self.check_vertex(v)?;
        Ok(self.closed_nbhd(v))
    }

    pub(crate) fn closed_nbhd(&self, v: usize) -> Vec<usize> {
        let mut out = self.adj[v].clone();
        let pos = out.binary_search(&v).unwrap_err();
        out.insert(pos, v);
        out
    }

    pub fn is_dominating(&self, set: &[usize]) -> Result<bool> {
        self.check_set(set)?;
        let mut dominated = vec![false; self.n()];
        for &v in set {
            dominated[v] = true;
            for &w in &self.adj[v] {
                dominated[w] = true;
            }
        }
        Ok(dominated.into_iter().all(|d| d))
    }

    /// True iff all members of `set` have the same neighborhood outside it.
    pub fn is_module(&self, set: &[usize]) -> Result<bool> {
        self.check_set(set)?;
        let mut inside = vec![false; self.n()];
        for &v in set {
            inside[v] = true;
        }
        let outside = |v: usize| -> Vec<usize> {
            self.adj[v].iter().copied().filter(|&w| !inside[w]).collect()
        };
        let mut members = set.iter();
        let Some(&first) = members.next() else {
            return Ok(true);
        };
        let reference = outside(first);
        Ok(members.all(|&v| outside(v) == reference))
    }

    pub fn are_true_twins(&self, u: usize, v: usize) -> bool {
        u != v && self.has_edge(u, v) && self.closed_nbhd(u) == self.closed_nbhd(v)
    }

    pub fn are_false_twins(&self, u: usize, v: usize) -> bool {
        u != v && !self.has_edge(u, v) && self.adj[u] == self.adj[v]
    }

    pub fn are_twins(&self, u: usize, v: usize) -> bool {
        self.are_true_twins(u, v) || self.are_false_twins(u, v)
    }

    /// Maximal twin classes by neighborhood-signature hashing.
    ///
    /// A vertex cannot have both a true twin and a false twin, so grouping by
    /// closed neighborhoods first and open neighborhoods second is well defined.
    pub fn twin_partition(&self) -> TwinPartition {
        let n = self.n();
        let mut by_closed: HashMap<Vec<usize>, Vec<usize>> = HashMap::new();
        let mut by_open: HashMap<&[usize], Vec<usize>> = HashMap::new();
        for v in 0..n {
            by_closed.entry(self.closed_nbhd(v)).or_default().push(v);
            by_open.entry(&self.adj[v]).or_default().push(v);
        }
        let mut assigned = vec![false; n];
        let mut classes = Vec::new();
        for (kind, groups) in [
            (TwinKind::True, by_closed.into_values().collect::<Vec<_>>()),
            (TwinKind::False, by_open.into_values().collect::<Vec<_>>()),
        ] {
            for members in groups {
                if members.len() >= 2 && members.iter().all(|&v| !assigned[v]) {
                    members.iter().for_each(|&v| assigned[v] = true);
                    classes.push(TwinClass { kind, members });
                }
            }
        }
        for v in 0..n {
            if !assigned[v] {
                classes.push(TwinClass { kind: TwinKind::Singleton, members: vec![v] });
            }
        }
        classes.sort_by_key(|c| c.members[0]);
        TwinPartition { classes }
    }

    /// Disjoint union or join; vertices of `h` are shifted by `self.n()`.
    pub fn compose(&self, h: &Graph, kind: Composition) -> Graph {
        let offset = self.n();
        let mut edges = self.edges();
        edges.extend(h.edges().into_iter().map(|(u, v)| (u + offset, v + offset)));
        if kind == Composition::Join {
            for u in 0..offset {
                edges.extend((0..h.n()).map(|v| (u, v + offset)));
            }
        }
        Graph::new(offset + h.n(), &edges).expect("composition of valid graphs")
    }

    /// Replaces vertex `v` by a copy of `h` joined to `v`'s neighbors. Vertex 0
    /// of `h` takes index `v`; the others are appended in order.
    pub fn substitute(&self, v: usize, h: &Graph) -> Result<Graph> {
        self.check_vertex(v)?;
        if h.n() == 0 {
            return Err(Error::input("cannot substitute the empty graph"));
        }
        let n = self.n();
        let at = |i: usize| if i == 0 { v } else { n + i - 1 };
        let mut edges = self.edges();
        for &w in &self.adj[v] {
            edges.extend((1..h.n()).map(|i| (w, at(i))));
        }
        edges.extend(h.edges().into_iter().map(|(a, b)| (at(a), at(b))));
        Graph::new(n + h.n() - 1, &edges)
    }

    /// `G[vertices]`, with vertex `i` of the result being `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &v) in vertices.iter().enumerate() {
            for &w in &self.adj[v] {
                let j = index[w];
                if j != usize::MAX && i < j {
                    edges.push((i, j));
                }
            }
        }
        Graph::new(vertices.len(), &edges).expect("induced subgraph is valid")
    }

    /// Deletes `removed` and renumbers densely, returning the old-to-new map.
    pub fn remove_vertices(&self, removed: &[usize]) -> (Graph, Vec<Option<usize>>) {
        let mut gone = vec![false; self.n()];
        removed.iter().for_each(|&v| gone[v] = true);
        let kept: Vec<usize> = (0..self.n()).filter(|&v| !gone[v]).collect();
        let mut map = vec![None; self.n()];
        for (i, &v) in kept.iter().enumerate() {
            map[v] = Some(i);
        }
        (self.induced(&kept), map)
    }

    /// Appends `count` isolated vertices followed by `edges` (in new indexing).
    pub(crate) fn extend(&self, count: usize, extra: &[(usize, usize)]) -> Graph {
        let mut edges = self.edges();
        edges.extend_from_slice(extra);
        Graph::new(self.n() + count, &edges).expect("extension stays valid")
    }

    pub fn complement(&self) -> Graph {
        let n = self.n();
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if !self.has_edge(u, v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::new(n, &edges).expect("complement is valid")
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push_back(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// `(|E| - |V| + components, non-tree edges of a BFS spanning forest)`.
    pub fn feedback_edge_set(&self) -> (usize, Vec<(usize, usize)>) {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut tree = BTreeSet::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        tree.insert((v.min(w), v.max(w)));
                        queue.push_back(w);
                    }
                }
            }
        }
        let rest: Vec<_> = self.edges().into_iter().filter(|e| !tree.contains(e)).collect();
        (rest.len(), rest)
    }

    pub fn feedback_edge_number(&self) -> usize {
        self.edge_count() + self.components().len() - self.n()
    }

    pub fn cluster_profile(&self) -> ClusterProfile {
        let comps = self.components();
        let is_cluster = comps
            .iter()
            .all(|c| c.iter().all(|&v| self.degree(v) == c.len() - 1));
        let isolated_count = comps.iter().filter(|c| c.len() == 1).count();
        ClusterProfile { is_cluster, isolated_count }
    }

    pub fn is_clique(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| self.has_edge(u, v)))
    }

    pub fn is_stable(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }
}

// ---------------------------------------------------------------------------
// Families

#[derive(Debug, Clone)]
pub enum Family {
    Path(usize),
    Clique(usize),
    /// Star with the given number of leaves; the center is vertex 0.
    Star(usize),
    Cycle(usize),
    /// `k` new path vertices, first joined to `u`, last joined to `v`.
    AttachPath { base: Graph, u: usize, v: usize, k: usize },
    /// `k` new path vertices, only the first joined to `u`.
    AttachPendingPath { base: Graph, u: usize, k: usize },
    AddUniversalVertex(Graph),
    /// Erdős–Rényi `G(n, p)`; see [`random_graph`].
    Random { n: usize, p: f64, seed: u64 },
}

pub fn generate(family: &Family) -> Result<Graph> {
    match family {
        Family::Path(n) => {
            let edges: Vec<_> = (1..*n).map(|i| (i - 1, i)).collect();
            Graph::new(*n, &edges)
        }
        Family::Clique(n) => {
            let edges: Vec<_> = (0..*n)
                .flat_map(|u| (u + 1..*n).map(move |v| (u, v)))
                .collect();
            Graph::new(*n, &edges)
        }
        Family::Star(leaves) => {
            let edges: Vec<_> = (1..=*leaves).map(|v| (0, v)).collect();
            Graph::new(leaves + 1, &edges)
        }
        Family::Cycle(n) => {
            if *n < 3 {
                return Err(Error::input(format!("cycle needs at least 3 vertices, got {n}")));
            }
            let edges: Vec<_> = (0..*n).map(|i| (i, (i + 1) % n)).collect();
            Graph::new(*n, &edges)
        }
        Family::AttachPath { base, u, v, k } => attach_path(base, *u, *v, *k),
        Family::AttachPendingPath { base, u, k } => attach_pending_path(base, *u, *k),
        Family::AddUniversalVertex(base) => Ok(add_universal_vertex(base)),
        Family::Random { n, p, seed } => random_graph(*n, *p, *seed),
    }
}

pub fn attach_path(base: &Graph, u: usize, v: usize, k: usize) -> Result<Graph> {
    base.check_vertex(u)?;
    base.check_vertex(v)?;
    if k < 1 {
        return Err(Error::input("attached path needs k >= 1"));
    }
    let first = base.n();
    let mut extra: Vec<_> = (1..k).map(|i| (first + i - 1, first + i)).collect();
    extra.push((u, first));
    extra.push((v, first + k - 1));
    Ok(base.extend(k, &extra))
}

pub fn attach_pending_path(base: &Graph, u: usize, k: usize) -> Result<Graph> {
    base.check_vertex(u)?;
    if k < 1 {
        return Err(Error::input("pending path needs k >= 1"));
    }
    let first = base.n();
    let mut extra: Vec<_> = (1..k).map(|i| (first + i - 1, first + i)).collect();
    extra.push((u, first));
    Ok(base.extend(k, &extra))
}

/// Appends one vertex adjacent to every existing vertex.
pub fn add_universal_vertex(base: &Graph) -> Graph {
    let n = base.n();
    let extra: Vec<_> = (0..n).map(|v| (v, n)).collect();
    base.extend(1, &extra)
}

/// Deterministic `G(n, p)`.
///
/// A ChaCha8 stream seeded with `seed` (via `seed_from_u64`) yields one `u64`
/// per vertex pair in lexicographic order `(0,1), (0,2), …, (n-2,n-1)`; the
/// pair becomes an edge iff `(x >> 11) * 2^-53 < p`.
pub fn random_graph(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("edge probability {p} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if unit_f64(rng.next_u64()) < p {
                edges.push((u, v));
            }
        }
    }
    Graph::new(n, &edges)
}

pub(crate) fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

// ---------------------------------------------------------------------------
// Serialization

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl From<&Graph> for GraphJson {
    fn from(g: &Graph) -> Self {
        GraphJson {
            n: g.n(),
            edges: g.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            labels: g.labels.clone(),
        }
    }
}

impl TryFrom<GraphJson> for Graph {
    type Error = Error;

    fn try_from(j: GraphJson) -> Result<Graph> {
        let edges: Vec<_> = j.edges.iter().map(|e| (e[0], e[1])).collect();
        let g = Graph::new(j.n, &edges)?;
        match j.labels {
            Some(labels) => g.with_labels(labels),
            None => Ok(g),
        }
    }
}

impl Graph {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&GraphJson::from(self)).expect("graph serializes")
    }

    pub fn from_json(text: &str) -> Result<Graph> {
        let j: GraphJson =
            serde_json::from_str(text).map_err(|e| Error::input(format!("graph JSON: {e}")))?;
        Graph::try_from(j)
    }

    /// `n m` on the first line, then one `u v` per edge.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::input("empty edge list"))?;
        let nums = parse_numbers(header)?;
        let [n, m] = nums[..] else {
            return Err(Error::input(format!("edge list header must be `n m`, got `{header}`")));
        };
        let mut edges = Vec::with_capacity(m);
        for line in lines.by_ref().take(m) {
            match parse_numbers(line)?[..] {
                [u, v] => edges.push((u, v)),
                _ => return Err(Error::input(format!("bad edge line `{line}`"))),
            }
        }
        if edges.len() != m {
            return Err(Error::input(format!("expected {m} edges, found {}", edges.len())));
        }
        if lines.next().is_some() {
            return Err(Error::input("trailing content after edge list"));
        }
        Graph::new(n, &edges)
    }

    /// Accepts either JSON (leading `{`) or the edge-list text format.
    pub fn parse(text: &str) -> Result<Graph> {
        if text.trim_start().starts_with('{') {
            Graph::from_json(text)
        } else {
            Graph::from_edge_list(text)
        }
    }
}

fn parse_numbers(line: &str) -> Result<Vec<usize>> {
    line.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::input(format!("not a vertex index: `{t}`"))))
        .collect()
}
