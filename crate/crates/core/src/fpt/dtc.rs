//! Kernel for distance to cluster.
//!
//! With `X` a cluster-deletion set, the cliques of `G - X` are trimmed and
//! their number per signature bounded, repeating until nothing changes:
//! (c) four or more cliques of size ≥ 3 sharing a signature become one edge
//! joined to their neighbors in `X`; (a) each clique keeps at most two
//! vertices per neighborhood in `X`; (b) single-vertex cliques keep two per
//! signature; (d) surplus size-2 cliques beyond `f(|X|)` per signature are
//! deleted one at a time.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::Graph;
use crate::position::{Outcome, Player, Position};
use crate::rewrite::{replace_module_by, Edit, ReductionTrace, Rewrite};

/// Multiset of `N(v) ∩ X` over the vertices of one clique, sorted.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CliqueSignature(pub Vec<Vec<usize>>);

/// How a class of four or more equal-signature cliques of size ≥ 3 shrinks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LargeCliqueRule {
    /// Replace the whole class by one edge joined to the class's neighbors in `X`.
    #[default]
    Edge,
    /// Keep three cliques of the class and delete the rest.
    KeepThree,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DtcOptions {
    pub large_cliques: LargeCliqueRule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DtcResult {
    /// No cluster-deletion set within the budget.
    Infeasible,
    Kernel {
        graph: Graph,
        trace: ReductionTrace,
        /// The deletion set used, in input numbering.
        deletion_set: Vec<usize>,
    },
}

/// A smallest set of at most `k` vertices whose removal leaves a cluster.
pub fn cluster_deletion_set(g: &Graph, k: usize) -> Option<Vec<usize>> {
    (0..=k).find_map(|budget| {
        let mut removed = vec![false; g.n()];
        branch(g, &mut removed, budget).then(|| (0..g.n()).filter(|&v| removed[v]).collect())
    })
}

fn branch(g: &Graph, removed: &mut Vec<bool>, budget: usize) -> bool {
    let Some(p3) = induced_p3(g, removed) else {
        return true;
    };
    if budget == 0 {
        return false;
    }
    for v in p3 {
        removed[v] = true;
        if branch(g, removed, budget - 1) {
            return true;
        }
        removed[v] = false;
    }
    false
}

/// Some `a - b - c` with `a ≁ c` among the kept vertices.
fn induced_p3(g: &Graph, removed: &[bool]) -> Option<[usize; 3]> {
    for b in 0..g.n() {
        if removed[b] {
            continue;
        }
        let nb: Vec<usize> = g.neighbors(b).iter().copied().filter(|&w| !removed[w]).collect();
        for (i, &a) in nb.iter().enumerate() {
            for &c in &nb[i + 1..] {
                if !g.has_edge(a, c) {
                    return Some([a, b, c]);
                }
            }
        }
    }
    None
}

/// `(2^k + 3) · 3^(2^k) + 2`, or `None` when it does not fit in a `u128`.
pub fn surplus_bound(k: usize) -> Option<u128> {
    let two_k = 1u128.checked_shl(u32::try_from(k).ok()?)?;
    let pow = 3u128.checked_pow(u32::try_from(two_k).ok()?)?;
    (two_k + 3).checked_mul(pow)?.checked_add(2)
}

pub fn dtc_kernel(g: &Graph, k: usize, options: DtcOptions) -> DtcResult {
    let Some(x) = cluster_deletion_set(g, k) else {
        return DtcResult::Infeasible;
    };
    let bound = surplus_bound(x.len());
    let mut pos = Position::start(g.clone(), Player::Dominator);
    let mut in_x = vec![false; g.n()];
    x.iter().for_each(|&v| in_x[v] = true);
    let mut trace = ReductionTrace::default();
    while let Some((next, step)) = reduce_once(&pos, &in_x, bound, options) {
        let mut moved = vec![false; next.graph.n()];
        for (v, slot) in step.index_map.iter().enumerate() {
            if let Some(w) = slot {
                moved[*w] = in_x[v];
            }
        }
        in_x = moved;
        trace.steps.push(step);
        pos = next;
    }
    DtcResult::Kernel { graph: pos.graph, trace, deletion_set: x }
}

struct Clique {
    members: Vec<usize>,
    signature: CliqueSignature,
    /// Neighbors of the clique inside `X`.
    attach: BTreeSet<usize>,
}

fn cliques(g: &Graph, in_x: &[bool]) -> Vec<Clique> {
    let mut seen = in_x.to_vec();
    let mut out = Vec::new();
    for s in 0..g.n() {
        if seen[s] {
            continue;
        }
        // Components of G - X are cliques, so N[s] - X is the whole component.
        let members: Vec<usize> = g.closed_nbhd(s).into_iter().filter(|&v| !in_x[v]).collect();
        members.iter().for_each(|&v| seen[v] = true);
        let xn = |v: usize| g.neighbors(v).iter().copied().filter(|&w| in_x[w]).collect::<Vec<_>>();
        let mut sig: Vec<Vec<usize>> = members.iter().map(|&v| xn(v)).collect();
        sig.sort();
        let attach = sig.iter().flatten().copied().collect();
        out.push(Clique { members, signature: CliqueSignature(sig), attach });
    }
    out
}

fn reduce_once(p: &Position, in_x: &[bool], bound: Option<u128>, options: DtcOptions) -> Option<Rewrite> {
    let g = &p.graph;
    let cl = cliques(g, in_x);
    let mut by_sig: BTreeMap<(usize, &CliqueSignature), Vec<usize>> = BTreeMap::new();
    for (i, c) in cl.iter().enumerate() {
        by_sig.entry((c.members.len(), &c.signature)).or_default().push(i);
    }

    // (c) large cliques.
    for (&(size, _), class) in &by_sig {
        if size >= 3 && class.len() >= 4 {
            return Some(match options.large_cliques {
                LargeCliqueRule::Edge => {
                    let deleted: Vec<usize> = class.iter().flat_map(|&i| cl[i].members.clone()).collect();
                    let (mut edit, map, first) = Edit::new(p, deleted.clone());
                    edit.added = 2;
                    edit.edges.push((first, first + 1));
                    for &y in &cl[class[0]].attach {
                        edit.edges.push((map[y].unwrap(), first));
                        edit.edges.push((map[y].unwrap(), first + 1));
                    }
                    edit.finish("cluster_class_to_edge", deleted, p.to_move)
                }
                LargeCliqueRule::KeepThree => {
                    let deleted: Vec<usize> = class[3..].iter().flat_map(|&i| cl[i].members.clone()).collect();
                    let (edit, _, _) = Edit::new(p, deleted.clone());
                    edit.finish("cluster_class_keep_three", deleted, p.to_move)
                }
            });
        }
    }

    // (a) twins inside one clique.
    for c in &cl {
        let mut groups: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for &v in &c.members {
            let xn: Vec<usize> = g.neighbors(v).iter().copied().filter(|&w| in_x[w]).collect();
            groups.entry(xn).or_default().push(v);
        }
        if let Some(group) = groups.values().find(|grp| grp.len() >= 3) {
            return Some(replace_module_by(p, group, Outcome::D));
        }
    }

    // (b) single vertices sharing a neighborhood in X.
    for (&(size, _), class) in &by_sig {
        if size == 1 && class.len() >= 3 {
            let module: Vec<usize> = class.iter().map(|&i| cl[i].members[0]).collect();
            return Some(replace_module_by(p, &module, Outcome::S));
        }
    }

    // (d) surplus edges.
    let bound = bound?;
    for (&(size, _), class) in &by_sig {
        if size == 2 && class.len() as u128 > bound {
            let deleted = cl[*class.last().unwrap()].members.clone();
            let (edit, _, _) = Edit::new(p, deleted.clone());
            return Some(edit.finish("cluster_drop_surplus_edge", deleted, p.to_move));
        }
    }
    None
}
