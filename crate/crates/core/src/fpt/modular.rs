//! Modular decomposition, the decomposition-tree format shared with the
//! P4-fewness solver, and the modular-width algorithm.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::collapse_modules;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::position::Outcome;
use crate::rewrite::{compose_outcome, Composite};
use crate::solver::outcome;

/// A decomposition tree over global vertex ids. Modular decompositions use
/// `leaf`, `union`, `join` and `substitution`; P4-fewness decompositions use
/// `small`, `union`, `join`, `spider` and `separable` (and `leaf`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecompTree {
    Leaf {
        vertex: usize,
    },
    Union {
        children: Vec<DecompTree>,
    },
    Join {
        children: Vec<DecompTree>,
    },
    /// Child `i` substitutes quotient vertex `i`.
    Substitution {
        quotient_edges: Vec<[usize; 2]>,
        children: Vec<DecompTree>,
    },
    Small {
        vertices: Vec<usize>,
        edges: Vec<[usize; 2]>,
    },
    /// `c[i]` is the clique vertex paired with stable vertex `s[i]`.
    Spider {
        r: Option<Box<DecompTree>>,
        c: Vec<usize>,
        s: Vec<usize>,
        thin: bool,
    },
    /// `rest` is complete to `h1` and anticomplete to `h2`; `h_edges` are the
    /// edges inside `h1 ∪ h2`.
    Separable {
        rest: Box<DecompTree>,
        h1: Vec<usize>,
        h2: Vec<usize>,
        h_edges: Vec<[usize; 2]>,
    },
}

impl DecompTree {
    /// Vertices under this node, in ascending order.
    pub fn vertices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out.sort_unstable();
        out
    }

    fn collect(&self, out: &mut Vec<usize>) {
        match self {
            DecompTree::Leaf { vertex } => out.push(*vertex),
            DecompTree::Union { children }
            | DecompTree::Join { children }
            | DecompTree::Substitution { children, .. } => children.iter().for_each(|c| c.collect(out)),
            DecompTree::Small { vertices, .. } => out.extend_from_slice(vertices),
            DecompTree::Spider { r, c, s, .. } => {
                if let Some(r) = r {
                    r.collect(out);
                }
                out.extend_from_slice(c);
                out.extend_from_slice(s);
            }
            DecompTree::Separable { rest, h1, h2, .. } => {
                rest.collect(out);
                out.extend_from_slice(h1);
                out.extend_from_slice(h2);
            }
        }
    }

    /// Edges the tree describes, as ordered pairs `(u, v)` with `u < v`.
    fn edges_into(&self, out: &mut BTreeSet<(usize, usize)>) -> Result<()> {
        let mut add = |u: usize, v: usize| {
            out.insert((u.min(v), u.max(v)));
        };
        match self {
            DecompTree::Leaf { .. } => {}
            DecompTree::Union { children } => {
                if children.len() < 2 {
                    return Err(Error::input("union node needs at least two children"));
                }
                for c in children {
                    c.edges_into(out)?;
                }
            }
            DecompTree::Join { children } => {
                if children.len() < 2 {
                    return Err(Error::input("join node needs at least two children"));
                }
                let sets: Vec<Vec<usize>> = children.iter().map(|c| c.vertices()).collect();
                for i in 0..sets.len() {
                    for j in i + 1..sets.len() {
                        for &u in &sets[i] {
                            sets[j].iter().for_each(|&v| add(u, v));
                        }
                    }
                }
                for c in children {
                    c.edges_into(out)?;
                }
            }
            DecompTree::Substitution { quotient_edges, children } => {
                let sets: Vec<Vec<usize>> = children.iter().map(|c| c.vertices()).collect();
                for &[a, b] in quotient_edges {
                    if a >= sets.len() || b >= sets.len() || a == b {
                        return Err(Error::input("quotient edge out of range"));
                    }
                    for &u in &sets[a] {
                        sets[b].iter().for_each(|&v| add(u, v));
                    }
                }
                for c in children {
                    c.edges_into(out)?;
                }
            }
            DecompTree::Small { vertices, edges } => {
                for &[u, v] in edges {
                    if !vertices.contains(&u) || !vertices.contains(&v) || u == v {
                        return Err(Error::input("small-node edge leaves its vertex set"));
                    }
                    add(u, v);
                }
            }
            DecompTree::Spider { r, c, s, thin } => {
                if c.len() != s.len() || c.len() < 2 {
                    return Err(Error::input("spider needs |C| = |S| >= 2"));
                }
                for i in 0..c.len() {
                    for j in 0..c.len() {
                        if i < j {
                            add(c[i], c[j]);
                        }
                        if (i == j) == *thin {
                            add(s[i], c[j]);
                        }
                    }
                }
                if let Some(r) = r {
                    for u in r.vertices() {
                        c.iter().for_each(|&v| add(u, v));
                    }
                    r.edges_into(out)?;
                }
            }
            DecompTree::Separable { rest, h1, h2, h_edges } => {
                if h1.is_empty() && h2.is_empty() {
                    return Err(Error::input("separable node needs a non-empty H"));
                }
                let h: BTreeSet<usize> = h1.iter().chain(h2).copied().collect();
                for &[u, v] in h_edges {
                    if !h.contains(&u) || !h.contains(&v) || u == v {
                        return Err(Error::input("separable-node edge leaves H"));
                    }
                    add(u, v);
                }
                for u in rest.vertices() {
                    h1.iter().for_each(|&v| add(u, v));
                }
                rest.edges_into(out)?;
            }
        }
        Ok(())
    }

    /// Checks that the tree's vertices are exactly `0..g.n()`, each once, and
    /// that the graph it describes is `g`.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let mut vs = Vec::new();
        self.collect(&mut vs);
        let distinct: BTreeSet<usize> = vs.iter().copied().collect();
        if distinct.len() != vs.len() {
            return Err(Error::input("decomposition repeats a vertex"));
        }
        if vs.len() != g.n() || distinct.iter().any(|&v| v >= g.n()) {
            return Err(Error::input("decomposition does not cover the vertex set"));
        }
        let mut edges = BTreeSet::new();
        self.edges_into(&mut edges)?;
        let expected: BTreeSet<(usize, usize)> = g.edges().into_iter().collect();
        if edges != expected {
            return Err(Error::input("decomposition does not reconstruct the graph"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("tree serializes")
    }

    pub fn from_json(text: &str) -> Result<DecompTree> {
        serde_json::from_str(text).map_err(|e| Error::input(format!("decomposition JSON: {e}")))
    }

    /// Largest quotient among substitution nodes (0 for cographs).
    pub fn width(&self) -> usize {
        match self {
            DecompTree::Substitution { children, .. } => {
                children.iter().map(|c| c.width()).max().unwrap_or(0).max(children.len())
            }
            DecompTree::Union { children } | DecompTree::Join { children } => {
                children.iter().map(|c| c.width()).max().unwrap_or(0)
            }
            _ => 0,
        }
    }
}

/// Adjacency matrix restricted to a vertex subset, with local indices.
struct Local {
    vs: Vec<usize>,
    adj: Vec<Vec<bool>>,
}

impl Local {
    fn new(g: &Graph, vs: Vec<usize>) -> Local {
        let adj = vs.iter().map(|&u| vs.iter().map(|&v| g.has_edge(u, v)).collect()).collect();
        Local { vs, adj }
    }

    fn components(&self, complement: bool) -> Vec<Vec<usize>> {
        let n = self.vs.len();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut stack = vec![s];
            comp[s] = id;
            let mut members = Vec::new();
            while let Some(u) = stack.pop() {
                members.push(u);
                for w in 0..n {
                    if w != u && comp[w] == usize::MAX && self.adj[u][w] != complement {
                        comp[w] = id;
                        stack.push(w);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Smallest module (local indices) containing `seed`.
    fn module_closure(&self, seed: &[usize]) -> Vec<bool> {
        let n = self.vs.len();
        let mut inside = vec![false; n];
        let mut members: Vec<usize> = seed.to_vec();
        seed.iter().for_each(|&v| inside[v] = true);
        loop {
            let splitter = (0..n).find(|&w| {
                !inside[w] && {
                    let hits = members.iter().filter(|&&m| self.adj[w][m]).count();
                    hits != 0 && hits != members.len()
                }
            });
            match splitter {
                Some(w) => {
                    inside[w] = true;
                    members.push(w);
                }
                None => return inside,
            }
        }
    }
}

/// Modular decomposition by components, co-components and splitter closure.
pub fn modular_decomposition(g: &Graph) -> Result<DecompTree> {
    if g.n() == 0 {
        return Err(Error::input("modular decomposition needs at least one vertex"));
    }
    Ok(decompose(g, (0..g.n()).collect()))
}

fn decompose(g: &Graph, vs: Vec<usize>) -> DecompTree {
    if vs.len() == 1 {
        return DecompTree::Leaf { vertex: vs[0] };
    }
    let local = Local::new(g, vs);
    let lift = |part: &[usize]| part.iter().map(|&i| local.vs[i]).collect::<Vec<_>>();
    let comps = local.components(false);
    if comps.len() > 1 {
        let children = comps.iter().map(|c| decompose(g, lift(c))).collect();
        return DecompTree::Union { children };
    }
    let cocomps = local.components(true);
    if cocomps.len() > 1 {
        let children = cocomps.iter().map(|c| decompose(g, lift(c))).collect();
        return DecompTree::Join { children };
    }
    // Both G and its complement are connected: the maximal proper modules
    // partition the vertices, and u shares v's module iff the smallest module
    // containing both is proper.
    let n = local.vs.len();
    let mut class = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for v in 0..n {
        if class[v] != usize::MAX {
            continue;
        }
        let id = classes.len();
        let mut members = vec![v];
        class[v] = id;
        for u in v + 1..n {
            if class[u] == usize::MAX && local.module_closure(&[u, v]).iter().any(|&x| !x) {
                class[u] = id;
                members.push(u);
            }
        }
        classes.push(members);
    }
    let mut quotient_edges = Vec::new();
    for i in 0..classes.len() {
        for j in i + 1..classes.len() {
            if local.adj[classes[i][0]][classes[j][0]] {
                quotient_edges.push([i, j]);
            }
        }
    }
    let children = classes.iter().map(|c| decompose(g, lift(c))).collect();
    DecompTree::Substitution { quotient_edges, children }
}

/// Vertex sets of every node of the modular decomposition, root first.
pub fn strong_modules(g: &Graph) -> Vec<Vec<usize>> {
    fn walk(t: &DecompTree, out: &mut Vec<Vec<usize>>) {
        out.push(t.vertices());
        if let DecompTree::Union { children }
        | DecompTree::Join { children }
        | DecompTree::Substitution { children, .. } = t
        {
            children.iter().for_each(|c| walk(c, out));
        }
    }
    let mut out = Vec::new();
    if let Ok(t) = modular_decomposition(g) {
        walk(&t, &mut out);
    }
    out
}

/// Combines child outcomes of a union or join node.
pub(crate) fn fold_children(join: bool, parts: &[(Outcome, bool)]) -> Result<Outcome> {
    let (mut acc, mut acc_k1) = parts[0];
    for &(o, k1) in &parts[1..] {
        acc = if join {
            compose_outcome(Composite::Join { left: acc, left_is_k1: acc_k1, right: o, right_is_k1: k1 })?
        } else {
            compose_outcome(Composite::Union(acc, o))?
        };
        acc_k1 = false;
    }
    Ok(acc)
}

/// Outcome of `g` computed bottom-up over its modular decomposition.
pub fn solve_via_modular_width(g: &Graph) -> Result<Outcome> {
    if g.n() == 0 {
        return outcome(g, &[], &[]);
    }
    let tree = modular_decomposition(g)?;
    let direct_limit = 3 * tree.width();
    mw_node(g, &tree, direct_limit)
}

fn mw_node(g: &Graph, t: &DecompTree, direct_limit: usize) -> Result<Outcome> {
    let vs = t.vertices();
    if vs.len() == 1 {
        return Ok(Outcome::N);
    }
    if vs.len() <= direct_limit {
        return outcome(&g.induced(&vs), &[], &[]);
    }
    match t {
        DecompTree::Union { children } | DecompTree::Join { children } => {
            let parts = children
                .iter()
                .map(|c| Ok((mw_node(g, c, direct_limit)?, c.vertices().len() == 1)))
                .collect::<Result<Vec<_>>>()?;
            fold_children(matches!(t, DecompTree::Join { .. }), &parts)
        }
        DecompTree::Substitution { children, .. } => {
            let h = g.induced(&vs);
            let local = |v: usize| vs.binary_search(&v).expect("child vertex under node");
            let mut modules = Vec::new();
            for c in children {
                let cv = c.vertices();
                if cv.len() >= 3 {
                    let o = mw_node(g, c, direct_limit)?;
                    modules.push((cv.iter().map(|&v| local(v)).collect(), o));
                }
            }
            outcome(&collapse_modules(&h, &modules), &[], &[])
        }
        _ => Err(Error::input("not a modular decomposition node")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, random_graph, Family};
    use crate::solver::naive;

    fn fig3() -> Graph {
        // v1..v7 as 0..6; M = {0,1,2,3} induces the path v1-v3-v2-v4.
        let mut edges = vec![(0, 2), (2, 1), (1, 3), (4, 5)];
        for m in 0..4 {
            edges.push((m, 4));
            edges.push((m, 6));
        }
        Graph::new(7, &edges).unwrap()
    }

    fn is_prime(q: &Graph) -> bool {
        let n = q.n();
        (1u32..(1 << n)).all(|mask| {
            let set: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            set.len() < 2 || set.len() == n || !q.is_module(&set).unwrap()
        })
    }

    fn check_primes(t: &DecompTree) {
        if let DecompTree::Substitution { quotient_edges, children } = t {
            let edges: Vec<_> = quotient_edges.iter().map(|e| (e[0], e[1])).collect();
            assert!(is_prime(&Graph::new(children.len(), &edges).unwrap()));
        }
        if let DecompTree::Union { children } | DecompTree::Join { children } | DecompTree::Substitution { children, .. } = t {
            children.iter().for_each(check_primes);
        }
    }

    #[test]
    fn cographs_and_primes() {
        let k3 = generate(&Family::Clique(3)).unwrap();
        let t = modular_decomposition(&k3).unwrap();
        assert!(matches!(&t, DecompTree::Join { children } if children.len() == 3));
        let p4 = generate(&Family::Path(4)).unwrap();
        let t = modular_decomposition(&p4).unwrap();
        assert!(matches!(&t, DecompTree::Substitution { children, .. } if children.len() == 4));
        t.validate(&p4).unwrap();
    }

    #[test]
    fn fig3_module_is_a_child() {
        let g = fig3();
        let t = modular_decomposition(&g).unwrap();
        t.validate(&g).unwrap();
        let DecompTree::Substitution { children, .. } = &t else { panic!("expected substitution root") };
        assert!(children.len() >= 2);
        assert!(children.iter().any(|c| c.vertices() == vec![0, 1, 2, 3]));
        assert!(strong_modules(&g).contains(&vec![0, 1, 2, 3]));
    }

    #[test]
    fn reconstruction_and_primality_on_random_graphs() {
        for seed in 0..80 {
            let g = random_graph(1 + seed as usize % 11, 0.5, seed).unwrap();
            let t = modular_decomposition(&g).unwrap();
            t.validate(&g).unwrap();
            check_primes(&t);
            assert_eq!(DecompTree::from_json(&t.to_json()).unwrap(), t);
        }
    }

    #[test]
    fn validation_rejects_wrong_trees() {
        let p3 = generate(&Family::Path(3)).unwrap();
        let leaves = |vs: &[usize]| vs.iter().map(|&v| DecompTree::Leaf { vertex: v }).collect::<Vec<_>>();
        assert!(DecompTree::Join { children: leaves(&[0, 1, 2]) }.validate(&p3).is_err());
        assert!(DecompTree::Union { children: leaves(&[0, 1]) }.validate(&p3).is_err());
        assert!(DecompTree::Union { children: leaves(&[0, 1, 1]) }.validate(&p3).is_err());
    }

    #[test]
    fn modular_width_outcomes() {
        let k2 = generate(&Family::Clique(2)).unwrap();
        let p3 = generate(&Family::Path(3)).unwrap();
        use crate::graph::Composition::Union;
        assert_eq!(solve_via_modular_width(&k2.compose(&k2, Union)).unwrap(), Outcome::D);
        assert_eq!(solve_via_modular_width(&p3.compose(&p3, Union)).unwrap(), Outcome::S);
        assert_eq!(solve_via_modular_width(&fig3()).unwrap(), naive::outcome(&fig3()));
        for seed in 0..40 {
            let g = random_graph(4 + seed as usize % 8, 0.4, 100 + seed).unwrap();
            assert_eq!(solve_via_modular_width(&g).unwrap(), naive::outcome(&g), "seed {seed}");
        }
    }
}
