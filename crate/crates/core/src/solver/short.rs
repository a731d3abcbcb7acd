//! Bounded-move games: can a role reach its goal within `k` of its own moves?
//!
//! Maker/Breaker queries run on a hypergraph, Dominator/Staller queries on a
//! graph. The two pairs use separate searches so that comparing a Staller
//! query on `G` with a Maker query on its neighborhood hypergraph is a real
//! cross-check.

use rustc_hash::FxHashMap;

use super::{bit, check_size, mask_of, members, Board, Mask};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hypergraph::Hypergraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    Maker,
    Breaker,
    Dominator,
    Staller,
}

impl Role {
    pub fn opponent(self) -> Role {
        match self {
            Role::Maker => Role::Breaker,
            Role::Breaker => Role::Maker,
            Role::Dominator => Role::Staller,
            Role::Staller => Role::Dominator,
        }
    }
}

impl std::str::FromStr for Role {
    type Err = Error;

    fn from_str(s: &str) -> Result<Role> {
        match s.to_ascii_lowercase().as_str() {
            "maker" => Ok(Role::Maker),
            "breaker" => Ok(Role::Breaker),
            "dominator" => Ok(Role::Dominator),
            "staller" => Ok(Role::Staller),
            _ => Err(Error::input(format!("unknown role '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShortQuery {
    pub role: Role,
    /// Moves the queried role may make.
    pub k: usize,
    pub first: Role,
}

impl ShortQuery {
    pub fn new(role: Role, k: usize, first: Role) -> ShortQuery {
        ShortQuery { role, k, first }
    }
}

#[derive(Debug, Clone, Copy)]
pub enum Arena<'a> {
    Graph(&'a Graph),
    Hypergraph(&'a Hypergraph),
}

const NODE_LIMIT: u64 = 50_000_000;

/// Whether `q.role` can reach its goal within `q.k` own moves against any
/// opposition. Budgets above the vertex count are clamped.
pub fn short_game_win(arena: Arena<'_>, q: ShortQuery) -> Result<bool> {
    if q.first != q.role && q.first != q.role.opponent() {
        return Err(Error::input(format!("{:?} does not play against {:?}", q.first, q.role)));
    }
    let role_first = q.first == q.role;
    match (arena, q.role) {
        (Arena::Hypergraph(h), Role::Maker | Role::Breaker) => {
            check_size(h.n())?;
            let mut s = EdgeSearch::new(h, q.k.min(h.n()));
            if q.role == Role::Maker {
                s.maker(0, 0, role_first)
            } else {
                s.breaker(0, 0, role_first)
            }
        }
        (Arena::Graph(g), Role::Dominator | Role::Staller) => {
            let board = Board::new(g)?;
            let mut s = GraphSearch::new(g, &board, q.k.min(g.n()));
            if q.role == Role::Staller {
                s.staller(0, 0, role_first)
            } else {
                s.dominator(0, 0, role_first)
            }
        }
        (Arena::Graph(_), r) => Err(Error::input(format!("{r:?} queries need a hypergraph"))),
        (Arena::Hypergraph(_), r) => Err(Error::input(format!("{r:?} queries need a graph"))),
    }
}

/// Keeps the lowest candidate of each class of interchangeable vertices.
fn one_per_class(candidates: Mask, class_of: &[usize]) -> Vec<usize> {
    let mut seen = Vec::new();
    members(candidates)
        .filter(|&u| {
            let c = class_of[u];
            if seen.contains(&c) {
                false
            } else {
                seen.push(c);
                true
            }
        })
        .collect()
}

fn tick(nodes: &mut u64) -> Result<()> {
    *nodes += 1;
    if *nodes > NODE_LIMIT {
        return Err(Error::NodeLimit { limit: NODE_LIMIT });
    }
    Ok(())
}

struct EdgeSearch {
    all: Mask,
    edges: Vec<Mask>,
    /// Vertices lying in exactly the same hyperedges are swapped by an automorphism.
    class_of: Vec<usize>,
    k: u32,
    memo: FxHashMap<(Mask, Mask, bool), bool>,
    nodes: u64,
}

impl EdgeSearch {
    fn new(h: &Hypergraph, k: usize) -> EdgeSearch {
        let n = h.n();
        let edges: Vec<Mask> = h.edges().iter().map(|e| mask_of(e.iter().copied())).collect();
        let signature = |v: usize| -> Vec<usize> {
            edges.iter().enumerate().filter(|(_, &e)| e & bit(v) != 0).map(|(i, _)| i).collect()
        };
        let sigs: Vec<Vec<usize>> = (0..n).map(signature).collect();
        let class_of = (0..n).map(|v| sigs.iter().position(|s| *s == sigs[v]).unwrap()).collect();
        let all = mask_of(0..n);
        EdgeSearch { all, edges, class_of, k: k as u32, memo: FxHashMap::default(), nodes: 0 }
    }

    fn maker(&mut self, m: Mask, b: Mask, maker_turn: bool) -> Result<bool> {
        if self.edges.iter().any(|&e| e & !m == 0) {
            return Ok(true);
        }
        let left = self.k - m.count_ones();
        if left == 0 {
            return Ok(false);
        }
        let free = self.all & !(m | b);
        // Edges Breaker has not touched and Maker can still fill in time.
        let live: Vec<Mask> = self
            .edges
            .iter()
            .filter(|&&e| e & b == 0 && (e & free).count_ones() <= left)
            .map(|&e| e & free)
            .collect();
        if live.is_empty() {
            return Ok(false);
        }
        if maker_turn && live.iter().any(|e| e.count_ones() == 1) {
            return Ok(true);
        }
        if let Some(&r) = self.memo.get(&(m, b, maker_turn)) {
            return Ok(r);
        }
        tick(&mut self.nodes)?;
        let relevant = live.iter().fold(0, |acc, e| acc | e);
        let moves = one_per_class(relevant, &self.class_of);
        let mut result = !maker_turn;
        for u in moves {
            let r = if maker_turn { self.maker(m | bit(u), b, false)? } else { self.maker(m, b | bit(u), true)? };
            if r == maker_turn {
                result = maker_turn;
                break;
            }
        }
        self.memo.insert((m, b, maker_turn), result);
        Ok(result)
    }

    fn breaker(&mut self, m: Mask, b: Mask, breaker_turn: bool) -> Result<bool> {
        let unhit: Vec<Mask> = self.edges.iter().copied().filter(|&e| e & b == 0).collect();
        if unhit.is_empty() {
            return Ok(true);
        }
        if unhit.iter().any(|&e| e & !m == 0) {
            return Ok(false);
        }
        let left = self.k - b.count_ones();
        if left == 0 {
            return Ok(false);
        }
        let free = self.all & !(m | b);
        let relevant = unhit.iter().fold(0, |acc, e| acc | (e & free));
        let cover = |u: usize| unhit.iter().filter(|&&e| e & bit(u) != 0).count();
        let best = members(relevant).map(cover).max().unwrap_or(0);
        if unhit.len() > left as usize * best {
            return Ok(false);
        }
        if breaker_turn && best == unhit.len() {
            return Ok(true);
        }
        if !breaker_turn && unhit.iter().any(|&e| (e & free).count_ones() == 1) {
            return Ok(false);
        }
        if let Some(&r) = self.memo.get(&(m, b, breaker_turn)) {
            return Ok(r);
        }
        tick(&mut self.nodes)?;
        let moves = one_per_class(relevant, &self.class_of);
        let mut result = !breaker_turn;
        for u in moves {
            let r = if breaker_turn {
                self.breaker(m, b | bit(u), false)?
            } else {
                self.breaker(m | bit(u), b, true)?
            };
            if r == breaker_turn {
                result = breaker_turn;
                break;
            }
        }
        self.memo.insert((m, b, breaker_turn), result);
        Ok(result)
    }
}

struct GraphSearch<'a> {
    board: &'a Board,
    /// Twin classes: swapping two twins is an automorphism.
    class_of: Vec<usize>,
    k: u32,
    memo: FxHashMap<(Mask, Mask, bool), bool>,
    nodes: u64,
}

impl<'a> GraphSearch<'a> {
    fn new(g: &Graph, board: &'a Board, k: usize) -> GraphSearch<'a> {
        let mut class_of = vec![0; g.n()];
        for (i, class) in g.twin_partition().classes.iter().enumerate() {
            for &v in &class.members {
                class_of[v] = i;
            }
        }
        GraphSearch { board, class_of, k: k as u32, memo: FxHashMap::default(), nodes: 0 }
    }

    fn staller(&mut self, d: Mask, s: Mask, staller_turn: bool) -> Result<bool> {
        let b = self.board;
        let undominated = b.all & !b.dominated(d);
        let free = b.all & !(d | s);
        if members(undominated).any(|v| b.closed[v] & free == 0) {
            return Ok(true);
        }
        let left = self.k - s.count_ones();
        if left == 0 {
            return Ok(false);
        }
        // Closed neighborhoods Staller can still complete within the budget.
        let reachable: Vec<Mask> = members(undominated)
            .map(|v| b.closed[v] & free)
            .filter(|open| open.count_ones() <= left)
            .collect();
        if reachable.is_empty() {
            return Ok(false);
        }
        if staller_turn && reachable.iter().any(|open| open.count_ones() == 1) {
            return Ok(true);
        }
        if let Some(&r) = self.memo.get(&(d, s, staller_turn)) {
            return Ok(r);
        }
        tick(&mut self.nodes)?;
        let relevant = reachable.iter().fold(0, |acc, o| acc | o);
        let moves = one_per_class(relevant, &self.class_of);
        let mut result = !staller_turn;
        for u in moves {
            let r = if staller_turn {
                self.staller(d, s | bit(u), false)?
            } else {
                self.staller(d | bit(u), s, true)?
            };
            if r == staller_turn {
                result = staller_turn;
                break;
            }
        }
        self.memo.insert((d, s, staller_turn), result);
        Ok(result)
    }

    fn dominator(&mut self, d: Mask, s: Mask, dom_turn: bool) -> Result<bool> {
        let b = self.board;
        let undominated = b.all & !b.dominated(d);
        if undominated == 0 {
            return Ok(true);
        }
        let free = b.all & !(d | s);
        if members(undominated).any(|v| b.closed[v] & free == 0) {
            return Ok(false);
        }
        let left = self.k - d.count_ones();
        if left == 0 {
            return Ok(false);
        }
        let useful = members(free).filter(|&u| b.closed[u] & undominated != 0).fold(0, |m, u| m | bit(u));
        let best = members(useful).map(|u| (b.closed[u] & undominated).count_ones()).max().unwrap_or(0);
        if undominated.count_ones() > left * best {
            return Ok(false);
        }
        if dom_turn && best == undominated.count_ones() {
            return Ok(true);
        }
        if !dom_turn && members(undominated).any(|v| (b.closed[v] & free).count_ones() == 1) {
            return Ok(false);
        }
        if let Some(&r) = self.memo.get(&(d, s, dom_turn)) {
            return Ok(r);
        }
        tick(&mut self.nodes)?;
        let moves = one_per_class(useful, &self.class_of);
        let mut result = !dom_turn;
        for u in moves {
            let r = if dom_turn { self.dominator(d | bit(u), s, false)? } else { self.dominator(d, s | bit(u), true)? };
            if r == dom_turn {
                result = dom_turn;
                break;
            }
        }
        self.memo.insert((d, s, dom_turn), result);
        Ok(result)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, random_graph, Family};

    fn fig1a() -> Hypergraph {
        Hypergraph::new(4, &[vec![0, 1, 2], vec![2, 3]]).unwrap()
    }

    /// Plain budgeted minimax over every free vertex, no pruning.
    fn naive(edges: &[Vec<usize>], n: usize, maker_role: bool, k: usize, role_first: bool) -> bool {
        fn rec(
            edges: &[Vec<usize>],
            cells: &mut Vec<u8>,
            maker_role: bool,
            k: usize,
            role_turn: bool,
        ) -> bool {
            let filled = edges.iter().any(|e| e.iter().all(|&v| cells[v] == 1));
            let hit = edges.iter().all(|e| e.iter().any(|&v| cells[v] == 2));
            if maker_role && filled || !maker_role && hit {
                return true;
            }
            if maker_role && hit || !maker_role && filled {
                return false;
            }
            let role_cell = if maker_role { 1 } else { 2 };
            let used = cells.iter().filter(|&&c| c == role_cell).count();
            if used == k || cells.iter().all(|&c| c != 0) {
                return false;
            }
            let mover_cell = if role_turn { role_cell } else { 3 - role_cell };
            let mut any = false;
            let mut all = true;
            for v in 0..cells.len() {
                if cells[v] != 0 {
                    continue;
                }
                cells[v] = mover_cell;
                let r = rec(edges, cells, maker_role, k, !role_turn);
                cells[v] = 0;
                any |= r;
                all &= r;
            }
            if role_turn { any } else { all }
        }
        rec(edges, &mut vec![0; n], maker_role, k, role_first)
    }

    #[test]
    fn fig1a_is_a_breaker_win() {
        // Breaker answers u3 with u4 and then blocks f; any other Maker start
        // lets Breaker take u3 and hit both edges.
        let h = fig1a();
        for k in 0..=4 {
            for first in [Role::Maker, Role::Breaker] {
                let q = ShortQuery::new(Role::Maker, k, first);
                assert!(!short_game_win(Arena::Hypergraph(&h), q).unwrap());
                assert!(!naive(h.edges(), 4, true, k, first == Role::Maker));
            }
        }
        // u3 lies in both edges, so one Breaker move moving first suffices.
        let q = ShortQuery::new(Role::Breaker, 1, Role::Breaker);
        assert!(short_game_win(Arena::Hypergraph(&h), q).unwrap());
        let q = ShortQuery::new(Role::Breaker, 1, Role::Maker);
        assert!(!short_game_win(Arena::Hypergraph(&h), q).unwrap());
        let q = ShortQuery::new(Role::Breaker, 2, Role::Maker);
        assert!(short_game_win(Arena::Hypergraph(&h), q).unwrap());
    }

    #[test]
    fn maker_wins_with_a_shared_pair() {
        // Edges {0,1}, {0,2}: claiming 0 leaves two one-move threats.
        let h = Hypergraph::new(3, &[vec![0, 1], vec![0, 2]]).unwrap();
        let q = ShortQuery::new(Role::Maker, 2, Role::Maker);
        assert!(short_game_win(Arena::Hypergraph(&h), q).unwrap());
        let q = ShortQuery::new(Role::Maker, 1, Role::Maker);
        assert!(!short_game_win(Arena::Hypergraph(&h), q).unwrap());
        let q = ShortQuery::new(Role::Maker, 2, Role::Breaker);
        assert!(!short_game_win(Arena::Hypergraph(&h), q).unwrap());
    }

    #[test]
    fn zero_budget_loses() {
        let h = fig1a();
        for role in [Role::Maker, Role::Breaker] {
            let q = ShortQuery::new(role, 0, role);
            assert!(!short_game_win(Arena::Hypergraph(&h), q).unwrap());
        }
        let g = generate(&Family::Path(3)).unwrap();
        for role in [Role::Dominator, Role::Staller] {
            let q = ShortQuery::new(role, 0, role);
            assert!(!short_game_win(Arena::Graph(&g), q).unwrap());
        }
    }

    #[test]
    fn star_center_dominates() {
        let g = generate(&Family::Star(3)).unwrap();
        let q = ShortQuery::new(Role::Dominator, 1, Role::Dominator);
        assert!(short_game_win(Arena::Graph(&g), q).unwrap());
        let q = ShortQuery::new(Role::Dominator, 1, Role::Staller);
        assert!(!short_game_win(Arena::Graph(&g), q).unwrap());
    }

    #[test]
    fn role_must_match_arena() {
        let g = generate(&Family::Path(3)).unwrap();
        let q = ShortQuery::new(Role::Maker, 1, Role::Maker);
        assert!(short_game_win(Arena::Graph(&g), q).is_err());
        let q = ShortQuery::new(Role::Maker, 1, Role::Staller);
        assert!(short_game_win(Arena::Hypergraph(&fig1a()), q).is_err());
    }

    #[test]
    fn matches_naive_budgeted_search() {
        for seed in 0..25u64 {
            let g = random_graph(4 + (seed as usize % 3), 0.4, seed).unwrap();
            let h = Hypergraph::neighborhoods(&g);
            let n = g.n();
            for k in 0..=n {
                for first in [true, false] {
                    let st = short_game_win(
                        Arena::Graph(&g),
                        ShortQuery::new(Role::Staller, k, if first { Role::Staller } else { Role::Dominator }),
                    )
                    .unwrap();
                    let mk = short_game_win(
                        Arena::Hypergraph(&h),
                        ShortQuery::new(Role::Maker, k, if first { Role::Maker } else { Role::Breaker }),
                    )
                    .unwrap();
                    let dm = short_game_win(
                        Arena::Graph(&g),
                        ShortQuery::new(Role::Dominator, k, if first { Role::Dominator } else { Role::Staller }),
                    )
                    .unwrap();
                    let br = short_game_win(
                        Arena::Hypergraph(&h),
                        ShortQuery::new(Role::Breaker, k, if first { Role::Breaker } else { Role::Maker }),
                    )
                    .unwrap();
                    assert_eq!(st, naive(h.edges(), n, true, k, first), "seed {seed} k {k}");
                    assert_eq!(mk, st);
                    assert_eq!(br, naive(h.edges(), n, false, k, first), "seed {seed} k {k}");
                    assert_eq!(dm, br);
                }
            }
        }
    }

    #[test]
    fn full_budget_matches_unbounded_game() {
        use crate::position::{Player, Position};
        for seed in 0..20u64 {
            let g = random_graph(6, 0.35, seed).unwrap();
            for (first, role_first) in [(Player::Dominator, Role::Dominator), (Player::Staller, Role::Staller)] {
                let unbounded = crate::solver::solve_position(&Position::start(g.clone(), first)).unwrap();
                let q = ShortQuery::new(Role::Dominator, 99, role_first);
                let dom = short_game_win(Arena::Graph(&g), q).unwrap();
                assert_eq!(dom, unbounded == Player::Dominator, "seed {seed}");
            }
        }
    }
}
