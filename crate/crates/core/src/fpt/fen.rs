//! Outcome via the feedback-edge-number kernel.
//!
//! Each candidate start (Staller moving first on the empty board, or
//! Dominator having claimed one vertex with Staller to move) is reduced:
//! forced leaf exchanges, removal of Staller vertices and leaves that are
//! already dominated, splitting of Dominator vertices, then shortening of
//! pending and internal degree-2 paths. The small residual is solved exactly.

use rayon::prelude::*;

use crate::error::Result;
use crate::graph::Graph;
use crate::position::{Outcome, Player, Position};
use crate::rewrite::{
    degree_two_runs, force_leaf_support, pending_paths, remove_dominated_staller_vertex, shorten_internal_path,
    shorten_pending_path, split_dominator_vertex, Edit, ReductionTrace, MIN_SHORTENED_PATH,
};
use crate::solver::solve_position;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FenReport {
    pub outcome: Outcome,
    /// Vertices in the residual of the Staller-first start.
    pub staller_first_residual: usize,
    /// Largest residual over all starts.
    pub max_residual: usize,
}

pub fn solve_via_fen(g: &Graph) -> Result<Outcome> {
    Ok(fen_report(g)?.outcome)
}

pub fn fen_report(g: &Graph) -> Result<FenReport> {
    let (staller_first, s_size) = reduced_winner(Position::start(g.clone(), Player::Staller))?;
    let firsts: Vec<(Player, usize)> = (0..g.n())
        .into_par_iter()
        .map(|x| {
            let p = Position::new(g.clone(), [x], [], Player::Staller).expect("vertex in range");
            reduced_winner(p)
        })
        .collect::<Result<_>>()?;
    let dominator_first = if g.n() == 0 || firsts.iter().any(|&(w, _)| w == Player::Dominator) {
        Player::Dominator
    } else {
        Player::Staller
    };
    let max_residual = firsts.iter().map(|&(_, s)| s).chain([s_size]).max().unwrap_or(0);
    Ok(FenReport {
        outcome: Outcome::from_winners(dominator_first, staller_first)?,
        staller_first_residual: s_size,
        max_residual,
    })
}

/// Reduces a Staller-to-move position and solves the residual.
fn reduced_winner(p: Position) -> Result<(Player, usize)> {
    let (residual, _) = fen_reduce(&p)?;
    let size = residual.graph.n();
    Ok((solve_position(&residual)?, size))
}

/// The kernelization steps for a position with Staller to move and no
/// Staller claims.
pub fn fen_reduce(p: &Position) -> Result<(Position, ReductionTrace)> {
    let mut cur = p.clone();
    let mut trace = ReductionTrace::default();
    let mut push = |cur: &mut Position, (next, step)| {
        *cur = next;
        trace.steps.push(step);
    };
    loop {
        if let Some(r) = force_leaf_support(&cur) {
            push(&mut cur, r);
        } else if let Some(r) = remove_dominated_staller_vertex(&cur) {
            push(&mut cur, r);
        } else if let Some(r) = remove_dominated_leaf(&cur) {
            push(&mut cur, r);
        } else if let Some(&v) = cur.dominator.iter().find(|&&v| cur.graph.degree(v) != 1) {
            let r = split_dominator_vertex(&cur, v)?;
            push(&mut cur, r);
        } else {
            break;
        }
    }
    loop {
        let mut changed = false;
        for path in pending_paths(&cur) {
            if let Some(r) = shorten_pending_path(&cur, &path)? {
                push(&mut cur, r);
                changed = true;
                break;
            }
        }
        if changed {
            continue;
        }
        if cur.staller.is_empty() {
            if let Some(run) = degree_two_runs(&cur).into_iter().find(|r| r.len() >= MIN_SHORTENED_PATH) {
                if let Some(r) = shorten_internal_path(&cur, &run)? {
                    push(&mut cur, r);
                    continue;
                }
            }
        }
        break;
    }
    Ok((cur, trace))
}

/// An unclaimed leaf whose support is a Dominator vertex: it is dominated and
/// can dominate nothing new, so neither player needs it.
fn remove_dominated_leaf(p: &Position) -> Option<(Position, crate::rewrite::TraceStep)> {
    let g = &p.graph;
    let leaf = (0..g.n()).find(|&v| g.degree(v) == 1 && p.is_free(v) && p.dominator.contains(&g.neighbors(v)[0]))?;
    let (edit, _, _) = Edit::new(p, vec![leaf]);
    Some(edit.finish("remove_dominated_leaf", vec![leaf], p.to_move))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{attach_path, generate, random_graph, Family};
    use crate::solver::naive;

    #[test]
    fn trees_and_cycles() {
        let p7 = generate(&Family::Path(7)).unwrap();
        assert_eq!(solve_via_fen(&p7).unwrap(), naive::outcome(&p7));
        let ds = Graph::new(6, &[(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)]).unwrap();
        assert_eq!(solve_via_fen(&ds).unwrap(), Outcome::S);
        let c13 = generate(&Family::Cycle(13)).unwrap();
        let report = fen_report(&c13).unwrap();
        assert!(report.staller_first_residual <= 9);
        assert_eq!(report.outcome, crate::solver::outcome(&c13, &[], &[]).unwrap());
    }

    #[test]
    fn matches_oracle_on_sparse_graphs() {
        let mut checked = 0;
        for seed in 0..60u64 {
            let n = 5 + seed as usize % 6;
            let base = random_graph(n, 1.6 / n as f64, seed).unwrap();
            // Long internal and pending paths exercise the shortening steps.
            let g = match seed % 3 {
                0 => attach_path(&random_graph(5, 0.4, seed).unwrap(), 0, 4, 9).unwrap(),
                1 => crate::graph::attach_pending_path(&base, 1, 5).unwrap(),
                _ => base,
            };
            if g.feedback_edge_number() <= 3 {
                let expected = crate::solver::outcome(&g, &[], &[]).unwrap();
                assert_eq!(solve_via_fen(&g).unwrap(), expected, "seed {seed}");
                checked += 1;
            }
        }
        assert!(checked >= 30, "only {checked} graphs checked");
    }
}
