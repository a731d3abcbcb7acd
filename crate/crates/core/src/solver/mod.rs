//! Exact game-tree search for the Maker-Breaker domination game.
//!
//! Positions are bitsets (`u128`), so the solver handles graphs with at most
//! 128 vertices. Every ply first runs the terminal tests (full domination, an
//! isolated closed neighborhood) and the one-move threat tests, then expands
//! moves with memoization keyed on `(D, S, to_move)`.

mod short;

pub use short::{short_game_win, Arena, Role, ShortQuery};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::position::{Outcome, Player, Position};

pub(crate) type Mask = u128;

pub const MAX_VERTICES: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    /// Skip a move `u` when an unclaimed `v` has `N[u] ⊆ N[v]`.
    pub prune_dominated_moves: bool,
    /// Give one of each unclaimed twin pair to each player before expanding.
    pub prune_twins: bool,
    /// Entries kept in the transposition table; later results are not cached.
    pub memo_capacity: usize,
    /// Expanded-node budget; exceeding it is an error.
    pub node_limit: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            prune_dominated_moves: true,
            prune_twins: true,
            memo_capacity: 1 << 22,
            node_limit: 50_000_000,
        }
    }
}

impl SearchConfig {
    /// Plain exhaustive search: both prunings off.
    pub fn reference() -> Self {
        SearchConfig { prune_dominated_moves: false, prune_twins: false, ..Self::default() }
    }
}

pub(crate) fn bit(v: usize) -> Mask {
    1u128 << v
}

pub(crate) fn mask_of(vs: impl IntoIterator<Item = usize>) -> Mask {
    vs.into_iter().fold(0, |m, v| m | bit(v))
}

pub(crate) fn members(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let v = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(v)
        }
    })
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n > MAX_VERTICES {
        return Err(Error::input(format!(
            "solver handles at most {MAX_VERTICES} vertices, got {n}"
        )));
    }
    Ok(())
}

/// Closed-neighborhood bitsets plus the precomputed pruning tables.
pub(crate) struct Board {
    pub all: Mask,
    pub closed: Vec<Mask>,
    /// `better[u]`: vertices whose closed neighborhood strictly contains `N[u]`,
    /// plus lower-indexed vertices with the same closed neighborhood.
    better: Vec<Mask>,
    twin_pairs: Vec<(usize, usize)>,
}

impl Board {
    pub fn new(g: &Graph) -> Result<Board> {
        let n = g.n();
        check_size(n)?;
        let closed: Vec<Mask> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(bit(v), |m, &w| m | bit(w)))
            .collect();
        let all = if n == 128 { Mask::MAX } else { (1u128 << n) - 1 };
        let mut better = vec![0; n];
        for u in 0..n {
            for v in 0..n {
                if u == v {
                    continue;
                }
                let contained = closed[u] & !closed[v] == 0;
                if contained && (closed[u] != closed[v] || v < u) {
                    better[u] |= bit(v);
                }
            }
        }
        let mut twin_pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if g.are_twins(u, v) {
                    twin_pairs.push((u, v));
                }
            }
        }
        Ok(Board { all, closed, better, twin_pairs })
    }

    pub fn dominated(&self, d: Mask) -> Mask {
        members(d).fold(0, |m, v| m | self.closed[v])
    }
}

pub(crate) struct Search<'a> {
    board: &'a Board,
    config: SearchConfig,
    memo: FxHashMap<(Mask, Mask, bool), bool>,
    nodes: u64,
}

impl<'a> Search<'a> {
    pub fn new(board: &'a Board, config: SearchConfig) -> Self {
        Search { board, config, memo: FxHashMap::default(), nodes: 0 }
    }

    /// Does Dominator win from `(d, s)` with the given player to move?
    pub fn dominator_wins(&mut self, mut d: Mask, mut s: Mask, dom_turn: bool) -> Result<bool> {
        let b = self.board;
        if self.config.prune_twins {
            for &(u, v) in &b.twin_pairs {
                let claimed = d | s;
                if claimed & (bit(u) | bit(v)) == 0 {
                    d |= bit(u);
                    s |= bit(v);
                }
            }
        }
        let dominated = b.dominated(d);
        if dominated == b.all {
            return Ok(true);
        }
        let undominated = b.all & !dominated;
        let free = b.all & !(d | s);
        // Undominated vertices have no Dominator vertex in N[v], so N[v] ⊆ S ∪ free.
        if members(undominated).any(|v| b.closed[v] & free == 0) {
            return Ok(false);
        }
        let key = (d, s, dom_turn);
        if let Some(&r) = self.memo.get(&key) {
            return Ok(r);
        }
        self.nodes += 1;
        if self.nodes > self.config.node_limit {
            return Err(Error::NodeLimit { limit: self.config.node_limit });
        }

        let result = if dom_turn {
            self.dominator_turn(d, s, free, undominated)?
        } else {
            self.staller_turn(d, s, free, undominated)?
        };
        if self.memo.len() < self.config.memo_capacity {
            self.memo.insert(key, result);
        }
        Ok(result)
    }

    fn dominator_turn(&mut self, d: Mask, s: Mask, free: Mask, undominated: Mask) -> Result<bool> {
        let b = self.board;
        if members(free).any(|u| undominated & !b.closed[u] == 0) {
            return Ok(true);
        }
        // Staller threats: an undominated vertex with a single free neighbor left.
        let mut forced: Mask = 0;
        for v in members(undominated) {
            let open = b.closed[v] & free;
            if open.count_ones() == 1 {
                forced |= open;
            }
        }
        match forced.count_ones() {
            0 => {}
            1 => return self.dominator_wins(d | forced, s, false),
            _ => return Ok(false),
        }
        for u in self.ordered_moves(free, undominated) {
            if self.dominator_wins(d | bit(u), s, false)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn staller_turn(&mut self, d: Mask, s: Mask, free: Mask, undominated: Mask) -> Result<bool> {
        let b = self.board;
        if members(undominated).any(|v| (b.closed[v] & free).count_ones() == 1) {
            return Ok(false);
        }
        // Dominator threats: free vertices that would finish the domination.
        let threats = members(free)
            .filter(|&u| undominated & !b.closed[u] == 0)
            .fold(0, |m, u| m | bit(u));
        match threats.count_ones() {
            0 => {}
            1 => return self.dominator_wins(d, s | threats, true),
            _ => return Ok(true),
        }
        for u in self.ordered_moves(free, undominated) {
            if !self.dominator_wins(d, s | bit(u), true)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Candidate moves, most undominated-vertex coverage first, ties by index.
    fn ordered_moves(&self, free: Mask, undominated: Mask) -> Vec<usize> {
        let b = self.board;
        let mut moves: Vec<(u32, usize)> = members(free)
            .filter(|&u| !self.config.prune_dominated_moves || b.better[u] & free == 0)
            .map(|u| ((b.closed[u] & undominated).count_ones(), u))
            .collect();
        moves.sort_by(|a, c| c.0.cmp(&a.0).then(a.1.cmp(&c.1)));
        moves.into_iter().map(|(_, u)| u).collect()
    }
}

fn masks(p: &Position) -> (Mask, Mask) {
    (mask_of(p.dominator.iter().copied()), mask_of(p.staller.iter().copied()))
}

/// Winner of `p` under perfect play, with the default configuration.
pub fn solve_position(p: &Position) -> Result<Player> {
    solve_position_with(p, &SearchConfig::default())
}

pub fn solve_position_with(p: &Position, config: &SearchConfig) -> Result<Player> {
    let board = Board::new(&p.graph)?;
    let (d, s) = masks(p);
    let mut search = Search::new(&board, *config);
    let dom = search.dominator_wins(d, s, p.to_move == Player::Dominator)?;
    Ok(if dom { Player::Dominator } else { Player::Staller })
}

/// Outcome class of `(g, D, S)`.
pub fn outcome(g: &Graph, dominator: &[usize], staller: &[usize]) -> Result<Outcome> {
    outcome_with(g, dominator, staller, &SearchConfig::default())
}

pub fn outcome_with(
    g: &Graph,
    dominator: &[usize],
    staller: &[usize],
    config: &SearchConfig,
) -> Result<Outcome> {
    let p = Position::new(g.clone(), dominator.iter().copied(), staller.iter().copied(), Player::Dominator)?;
    outcome_of_with(&p, config)
}

/// Outcome of the claims in `p`; `p.to_move` is ignored.
pub fn outcome_of(p: &Position) -> Result<Outcome> {
    outcome_of_with(p, &SearchConfig::default())
}

pub fn outcome_of_with(p: &Position, config: &SearchConfig) -> Result<Outcome> {
    let board = Board::new(&p.graph)?;
    let (d, s) = masks(p);
    // One table serves both searches: keys carry the side to move.
    let mut search = Search::new(&board, *config);
    let first = |dom: bool| if dom { Player::Dominator } else { Player::Staller };
    let dom_first = first(search.dominator_wins(d, s, true)?);
    let st_first = first(search.dominator_wins(d, s, false)?);
    Outcome::from_winners(dom_first, st_first)
}

/// True when the game at `p` is already decided.
pub fn is_terminal(p: &Position) -> Result<bool> {
    let board = Board::new(&p.graph)?;
    let (d, s) = masks(p);
    let dominated = board.dominated(d);
    if dominated == board.all {
        return Ok(true);
    }
    let free = board.all & !(d | s);
    Ok(members(board.all & !dominated).any(|v| board.closed[v] & free == 0))
}

/// A move for the player to move: the lowest-indexed winning move if one
/// exists; otherwise the move leaving the opponent the fewest winning replies
/// (ties to the lowest index).
pub fn best_move(p: &Position) -> Result<usize> {
    best_move_with(p, &SearchConfig::default())
}

pub fn best_move_with(p: &Position, config: &SearchConfig) -> Result<usize> {
    if is_terminal(p)? {
        return Err(Error::State("position is already decided".into()));
    }
    let board = Board::new(&p.graph)?;
    let (d, s) = masks(p);
    let free = board.all & !(d | s);
    let mut search = Search::new(&board, *config);
    let dom = p.to_move == Player::Dominator;
    let child = |d: Mask, s: Mask, u: usize| if dom { (d | bit(u), s) } else { (d, s | bit(u)) };

    for u in members(free) {
        let (cd, cs) = child(d, s, u);
        if search.dominator_wins(cd, cs, !dom)? == dom {
            return Ok(u);
        }
    }
    let mut best: Option<(usize, usize)> = None;
    for u in members(free) {
        let (cd, cs) = child(d, s, u);
        let reply_free = board.all & !(cd | cs);
        let mut replies = 0;
        for w in members(reply_free) {
            let (rd, rs) = if dom { (cd, cs | bit(w)) } else { (cd | bit(w), cs) };
            if search.dominator_wins(rd, rs, dom)? != dom {
                replies += 1;
            }
        }
        if best.map_or(true, |(r, _)| replies < r) {
            best = Some((replies, u));
        }
    }
    Ok(best.expect("non-terminal position has a free vertex").1)
}

#[cfg(test)]
pub(crate) mod naive {
    //! Memoized plain minimax over claim vectors, sharing no code with the solver.
    use std::collections::HashMap;

    use crate::graph::Graph;

    #[derive(Clone, Copy, PartialEq, Eq, Hash)]
    pub enum Cell {
        Free,
        Dom,
        Stal,
    }

    pub fn dominator_wins(g: &Graph, cells: &mut Vec<Cell>, dom_turn: bool) -> bool {
        let mut memo = HashMap::new();
        rec(g, cells, dom_turn, &mut memo)
    }

    fn rec(
        g: &Graph,
        cells: &mut Vec<Cell>,
        dom_turn: bool,
        memo: &mut HashMap<(Vec<Cell>, bool), bool>,
    ) -> bool {
        let n = g.n();
        let dominated = |v: usize, cells: &[Cell]| {
            cells[v] == Cell::Dom || g.neighbors(v).iter().any(|&w| cells[w] == Cell::Dom)
        };
        if (0..n).all(|v| dominated(v, cells)) {
            return true;
        }
        let isolated = (0..n).any(|v| {
            cells[v] == Cell::Stal && g.neighbors(v).iter().all(|&w| cells[w] == Cell::Stal)
        });
        if isolated || cells.iter().all(|&c| c != Cell::Free) {
            return false;
        }
        if let Some(&r) = memo.get(&(cells.clone(), dom_turn)) {
            return r;
        }
        let mut result = !dom_turn;
        for v in 0..n {
            if cells[v] != Cell::Free {
                continue;
            }
            cells[v] = if dom_turn { Cell::Dom } else { Cell::Stal };
            let r = rec(g, cells, !dom_turn, memo);
            cells[v] = Cell::Free;
            if r == dom_turn {
                result = dom_turn;
                break;
            }
        }
        memo.insert((cells.clone(), dom_turn), result);
        result
    }

    /// Winner of a position with its claims and player to move.
    pub fn winner(p: &crate::position::Position) -> crate::position::Player {
        use crate::position::Player;
        let mut cells: Vec<Cell> = (0..p.graph.n())
            .map(|v| {
                if p.dominator.contains(&v) {
                    Cell::Dom
                } else if p.staller.contains(&v) {
                    Cell::Stal
                } else {
                    Cell::Free
                }
            })
            .collect();
        if dominator_wins(&p.graph, &mut cells, p.to_move == Player::Dominator) {
            Player::Dominator
        } else {
            Player::Staller
        }
    }

    pub fn outcome(g: &Graph) -> crate::position::Outcome {
        use crate::position::{Outcome, Player};
        let mut cells = vec![Cell::Free; g.n()];
        let w = |b: bool| if b { Player::Dominator } else { Player::Staller };
        let df = w(dominator_wins(g, &mut cells, true));
        let sf = w(dominator_wins(g, &mut cells, false));
        Outcome::from_winners(df, sf).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, random_graph, Family};

    fn c4() -> Graph {
        generate(&Family::Cycle(4)).unwrap()
    }

    fn double_star() -> Graph {
        Graph::new(6, &[(0, 1), (0, 2), (0, 3), (3, 4), (3, 5)]).unwrap()
    }

    #[test]
    fn figure_outcomes() {
        let st = |g: Graph| solve_position(&Position::start(g, Player::Staller)).unwrap();
        assert_eq!(st(c4()), Player::Dominator);
        assert_eq!(st(generate(&Family::Path(3)).unwrap()), Player::Staller);
        assert_eq!(outcome(&c4(), &[], &[]).unwrap(), Outcome::D);
        assert_eq!(outcome(&generate(&Family::Path(3)).unwrap(), &[], &[]).unwrap(), Outcome::N);
        assert_eq!(outcome(&double_star(), &[], &[]).unwrap(), Outcome::S);
    }

    #[test]
    fn small_outcomes_match_naive_oracle() {
        let p4 = generate(&Family::Path(4)).unwrap();
        assert_eq!(naive::outcome(&p4), Outcome::D);
        assert_eq!(outcome(&p4, &[], &[]).unwrap(), Outcome::D);
        assert_eq!(outcome(&Graph::empty(1), &[], &[]).unwrap(), Outcome::N);
        assert_eq!(outcome(&Graph::empty(0), &[], &[]).unwrap(), Outcome::D);
        for seed in 0..60 {
            let g = random_graph(3 + (seed as usize % 6), 0.45, seed).unwrap();
            let expected = naive::outcome(&g);
            assert_eq!(outcome(&g, &[], &[]).unwrap(), expected, "seed {seed}");
            assert_eq!(outcome_with(&g, &[], &[], &SearchConfig::reference()).unwrap(), expected);
        }
    }

    #[test]
    fn path_with_claimed_endpoint() {
        for n in 1..=10 {
            let g = generate(&Family::Path(n)).unwrap();
            let p = Position::new(g, [0], [], Player::Staller).unwrap();
            assert_eq!(solve_position(&p).unwrap(), Player::Dominator, "P{n}");
        }
    }

    #[test]
    fn finished_positions() {
        let p = Position::new(c4(), [0, 2], [], Player::Staller).unwrap();
        assert_eq!(solve_position(&p).unwrap(), Player::Dominator);
        let p = Position::new(generate(&Family::Path(2)).unwrap(), [], [0, 1], Player::Dominator).unwrap();
        assert_eq!(solve_position(&p).unwrap(), Player::Staller);
        assert!(matches!(best_move(&p), Err(Error::State(_))));
    }

    #[test]
    fn node_limit_is_an_error() {
        let g = random_graph(12, 0.3, 5).unwrap();
        let cfg = SearchConfig { node_limit: 3, ..SearchConfig::reference() };
        let p = Position::start(g, Player::Dominator);
        assert!(matches!(solve_position_with(&p, &cfg), Err(Error::NodeLimit { limit: 3 })));
    }

    #[test]
    fn best_moves() {
        let p3 = Position::start(generate(&Family::Path(3)).unwrap(), Player::Staller);
        assert_eq!(best_move(&p3).unwrap(), 1);
        assert_eq!(best_move(&Position::start(Graph::empty(1), Player::Dominator)).unwrap(), 0);
        assert_eq!(best_move(&Position::start(c4(), Player::Dominator)).unwrap(), 0);
    }

    #[test]
    fn second_player_never_wins_both() {
        assert!(Outcome::from_winners(Player::Staller, Player::Dominator).is_err());
    }

    #[test]
    fn too_large_graph_is_rejected() {
        let g = Graph::empty(129);
        assert!(matches!(solve_position(&Position::start(g, Player::Dominator)), Err(Error::Input(_))));
    }
}
