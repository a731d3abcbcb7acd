//! Spider detection and the outcome algorithm over a supplied P4-fewness
//! decomposition tree.

use super::collapse_modules;
use super::modular::{fold_children, DecompTree};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::position::{Outcome, Player};
use crate::solver::outcome;

/// A spider partition `(R, C, S)`; `c[i]` is paired with `s[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spider {
    pub r: Vec<usize>,
    pub c: Vec<usize>,
    pub s: Vec<usize>,
    pub thin: bool,
}

/// Finds the spider partition of `g`, preferring the thin reading when both
/// apply (`m = 2`, e.g. `P4`).
pub fn spider_detect(g: &Graph) -> Option<Spider> {
    if let Some((r, c, s)) = thin_parts(g) {
        return Some(Spider { r, c, s, thin: true });
    }
    // A thick spider's complement is a thin spider with C and S swapped.
    let (r, c, s) = thin_parts(&g.complement())?;
    Some(Spider { r, c: s, s: c, thin: false })
}

/// In a thin spider the legs are exactly the degree-1 vertices.
fn thin_parts(g: &Graph) -> Option<(Vec<usize>, Vec<usize>, Vec<usize>)> {
    let s: Vec<usize> = (0..g.n()).filter(|&v| g.degree(v) == 1).collect();
    if s.len() < 2 {
        return None;
    }
    let c: Vec<usize> = s.iter().map(|&v| g.neighbors(v)[0]).collect();
    let mut in_c = vec![false; g.n()];
    for &v in &c {
        if in_c[v] || g.degree(v) == 1 {
            return None;
        }
        in_c[v] = true;
    }
    if !g.is_clique(&c) {
        return None;
    }
    let r: Vec<usize> = (0..g.n()).filter(|&v| !in_c[v] && g.degree(v) != 1).collect();
    if r.iter().any(|&v| c.iter().any(|&w| !g.has_edge(v, w))) {
        return None;
    }
    Some((r, c, s))
}

/// Outcome of `g` from a validated P4-fewness decomposition with parameter `q`.
pub fn solve_via_p4_decomposition(g: &Graph, tree: &DecompTree, q: usize) -> Result<Outcome> {
    tree.validate(g)?;
    p4_node(g, tree, q)
}

fn p4_node(g: &Graph, t: &DecompTree, q: usize) -> Result<Outcome> {
    match t {
        DecompTree::Leaf { .. } => Ok(Outcome::N),
        DecompTree::Small { vertices, .. } => {
            if vertices.len() > q {
                return Err(Error::input(format!("small node has {} > q vertices", vertices.len())));
            }
            let mut vs = vertices.clone();
            vs.sort_unstable();
            outcome(&g.induced(&vs), &[], &[])
        }
        DecompTree::Union { children } | DecompTree::Join { children } => {
            let parts = children
                .iter()
                .map(|c| Ok((p4_node(g, c, q)?, c.vertices().len() == 1)))
                .collect::<Result<Vec<_>>>()?;
            fold_children(matches!(t, DecompTree::Join { .. }), &parts)
        }
        DecompTree::Spider { r, c, thin: true, .. } => {
            let _ = c;
            // Dominator opens in C and pairs each leg with its body vertex.
            // Staller first: every (leg, body) pair resolves by the forced
            // exchange, leaving G[R] with Staller to move.
            let staller_first = match r {
                None => Player::Dominator,
                Some(r) => p4_node(g, r, q)?.winner(Player::Staller),
            };
            Outcome::from_winners(Player::Dominator, staller_first)
        }
        DecompTree::Spider { r, c, thin: false, .. } => {
            if c.len() >= 4 {
                // Dominator pairs two disjoint edges inside C.
                return Ok(Outcome::D);
            }
            let module = r.as_deref();
            solve_with_collapsed(g, t, module, q)
        }
        DecompTree::Separable { rest, h1, h2, .. } => {
            if h1.len() + h2.len() >= q {
                return Err(Error::input("separable node needs |H| < q"));
            }
            solve_with_collapsed(g, t, Some(rest), q)
        }
        DecompTree::Substitution { .. } => {
            Err(Error::input("substitution nodes do not belong in a P4-fewness decomposition"))
        }
    }
}

/// Solves node `t` directly after replacing its module child (if it has at
/// least three vertices) by the stand-in for its outcome.
fn solve_with_collapsed(g: &Graph, t: &DecompTree, module: Option<&DecompTree>, q: usize) -> Result<Outcome> {
    let vs = t.vertices();
    let h = g.induced(&vs);
    let mut modules = Vec::new();
    if let Some(m) = module {
        let mv = m.vertices();
        if mv.len() >= 3 {
            let o = p4_node(g, m, q)?;
            let local = mv.iter().map(|v| vs.binary_search(v).expect("module under node")).collect();
            modules.push((local, o));
        }
    }
    outcome(&collapse_modules(&h, &modules), &[], &[])
}
