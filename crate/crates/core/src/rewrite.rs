//! Outcome-preserving rewrites of positions, a fixpoint engine, and a trace
//! recording every step with its vertex correspondence.
//!
//! Rules that delete vertices renumber the survivors densely; vertices a rule
//! creates are appended after them.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fpt::modular::strong_modules;
use crate::graph::{ClusterProfile, Graph};
use crate::position::{Outcome, Player, Position};
use crate::solver::outcome_of;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    RemoveDominatedStallerVertex,
    ForceLeafSupport,
    SplitDominatorVertex,
    AssignTwins,
    ReplaceModule,
    ShortenInternalPath,
    ShortenPendingPath,
}

impl Rule {
    pub const ALL: [Rule; 7] = [
        Rule::RemoveDominatedStallerVertex,
        Rule::ForceLeafSupport,
        Rule::SplitDominatorVertex,
        Rule::AssignTwins,
        Rule::ReplaceModule,
        Rule::ShortenInternalPath,
        Rule::ShortenPendingPath,
    ];

    /// Cheap local rules first, solver-backed module replacement late.
    pub const DEFAULT_PRIORITY: [Rule; 5] = [
        Rule::RemoveDominatedStallerVertex,
        Rule::ForceLeafSupport,
        Rule::SplitDominatorVertex,
        Rule::ReplaceModule,
        Rule::ShortenInternalPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::RemoveDominatedStallerVertex => "remove_dominated_staller_vertex",
            Rule::ForceLeafSupport => "force_leaf_support",
            Rule::SplitDominatorVertex => "split_dominator_vertex",
            Rule::AssignTwins => "assign_twins",
            Rule::ReplaceModule => "replace_module",
            Rule::ShortenInternalPath => "shorten_internal_path",
            Rule::ShortenPendingPath => "shorten_pending_path",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Rule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rule> {
        Rule::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::input(format!("unknown rule '{s}'")))
    }
}

/// One rewrite. `matched` and `deleted` use the input numbering, `added` the
/// output numbering; `index_map[v]` is the output index of input vertex `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: String,
    pub matched: Vec<usize>,
    pub deleted: Vec<usize>,
    pub added: Vec<usize>,
    pub index_map: Vec<Option<usize>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    /// Where each of the `n` original vertices ended up, if it survived.
    pub fn correspondence(&self, n: usize) -> Vec<Option<usize>> {
        let mut map: Vec<Option<usize>> = (0..n).map(Some).collect();
        for step in &self.steps {
            for slot in map.iter_mut() {
                *slot = slot.and_then(|v| step.index_map.get(v).copied().flatten());
            }
        }
        map
    }

    /// One JSON object per step, newline-terminated.
    pub fn to_json_lines(&self) -> String {
        self.steps
            .iter()
            .map(|s| serde_json::to_string(s).expect("trace step serializes") + "\n")
            .collect()
    }
}

pub type Rewrite = (Position, TraceStep);

/// Deletes `deleted`, appends `added` fresh vertices, adds `edges` and the
/// given claims (all in output numbering).
pub(crate) struct Edit<'a> {
    pub deleted: Vec<usize>,
    pub added: usize,
    pub edges: Vec<(usize, usize)>,
    pub dominator: Vec<usize>,
    pub staller: Vec<usize>,
    p: &'a Position,
}

impl<'a> Edit<'a> {
    /// Also returns the input-to-output map of surviving vertices and the
    /// index of the first added vertex.
    pub fn new(p: &'a Position, deleted: Vec<usize>) -> (Edit<'a>, Vec<Option<usize>>, usize) {
        let (_, map) = p.graph.remove_vertices(&deleted);
        let kept = p.graph.n() - deleted.iter().collect::<BTreeSet<_>>().len();
        let edit = Edit { deleted, added: 0, edges: vec![], dominator: vec![], staller: vec![], p };
        (edit, map, kept)
    }

    pub fn finish(mut self, rule: &str, matched: Vec<usize>, to_move: Player) -> Rewrite {
        let (g, map) = self.p.graph.remove_vertices(&self.deleted);
        let base = g.n();
        let g = g.extend(self.added, &self.edges);
        let remap = |set: &BTreeSet<usize>| set.iter().filter_map(|&v| map[v]).collect::<Vec<_>>();
        let mut dominator = remap(&self.p.dominator);
        dominator.append(&mut self.dominator);
        let mut staller = remap(&self.p.staller);
        staller.append(&mut self.staller);
        let pos = Position::new(g, dominator, staller, to_move).expect("rewrite keeps claims valid");
        self.deleted.sort_unstable();
        self.deleted.dedup();
        let step = TraceStep {
            rule: rule.to_string(),
            matched,
            deleted: self.deleted,
            added: (base..base + self.added).collect(),
            index_map: map,
        };
        (pos, step)
    }
}

/// Deletes a Staller vertex that already has a Dominator neighbor.
pub fn remove_dominated_staller_vertex(p: &Position) -> Option<Rewrite> {
    let v = p
        .staller
        .iter()
        .copied()
        .find(|&v| p.graph.neighbors(v).iter().any(|w| p.dominator.contains(w)))?;
    let (edit, _, _) = Edit::new(p, vec![v]);
    Some(edit.finish(Rule::RemoveDominatedStallerVertex.name(), vec![v], p.to_move))
}

/// Replaces Dominator vertex `v` by one fresh Dominator leaf on each neighbor.
pub fn split_dominator_vertex(p: &Position, v: usize) -> Result<Rewrite> {
    if !p.dominator.contains(&v) {
        return Err(Error::input(format!("vertex {v} is not claimed by Dominator")));
    }
    let (mut edit, map, kept) = Edit::new(p, vec![v]);
    let nbrs = p.graph.neighbors(v);
    edit.added = nbrs.len();
    for (i, &w) in nbrs.iter().enumerate() {
        let leaf = kept + i;
        edit.edges.push((map[w].expect("neighbor survives"), leaf));
        edit.dominator.push(leaf);
    }
    Ok(edit.finish(Rule::SplitDominatorVertex.name(), vec![v], p.to_move))
}

/// With Staller to move, an unclaimed leaf with an unclaimed support vertex is
/// resolved by the forced exchange (Staller takes the support, Dominator the
/// leaf) and both vertices are deleted.
pub fn force_leaf_support(p: &Position) -> Option<Rewrite> {
    if p.to_move != Player::Staller {
        return None;
    }
    let g = &p.graph;
    let (leaf, support) = (0..g.n())
        .filter(|&v| g.degree(v) == 1 && p.is_free(v))
        .map(|v| (v, g.neighbors(v)[0]))
        .find(|&(_, s)| p.is_free(s))?;
    let (edit, _, _) = Edit::new(p, vec![leaf, support]);
    Some(edit.finish(Rule::ForceLeafSupport.name(), vec![leaf, support], Player::Staller))
}

/// Gives twin `u` to Dominator and twin `v` to Staller.
pub fn assign_twins(p: &Position, u: usize, v: usize) -> Result<Rewrite> {
    let n = p.graph.n();
    if u >= n || v >= n || u == v || !p.is_free(u) || !p.is_free(v) {
        return Err(Error::input(format!("{u} and {v} must be distinct unclaimed vertices")));
    }
    if !p.graph.are_twins(u, v) {
        return Err(Error::input(format!("{u} and {v} are not twins")));
    }
    let (mut edit, map, _) = Edit::new(p, vec![]);
    edit.dominator.push(map[u].unwrap());
    edit.staller.push(map[v].unwrap());
    Ok(edit.finish(Rule::AssignTwins.name(), vec![u, v], p.to_move))
}

/// Largest module the rule will solve directly.
pub const MODULE_SOLVE_LIMIT: usize = 14;

/// Replaces an unclaimed module `m` (`3 ≤ |m| ≤ 14`) by `P2`, `2K1` or `P3`
/// according to the outcome of `G[m]`, joined to the module's outside
/// neighbors. Returns `None` outside that size range.
pub fn replace_module(p: &Position, m: &[usize]) -> Result<Option<Rewrite>> {
    let g = &p.graph;
    let set: BTreeSet<usize> = m.iter().copied().collect();
    if !g.is_module(m)? {
        return Err(Error::input("vertex set is not a module"));
    }
    if set.len() < 3 || set.len() > MODULE_SOLVE_LIMIT {
        return Ok(None);
    }
    if set.iter().any(|&v| !p.is_free(v)) {
        return Err(Error::input("module contains claimed vertices"));
    }
    let members: Vec<usize> = set.iter().copied().collect();
    let inner = module_outcome(&g.induced(&members))?;
    Ok(Some(replace_module_by(p, &members, inner)))
}

/// `o(G[M])`, short-circuited for cliques and stable sets of size ≥ 2.
pub(crate) fn module_outcome(h: &Graph) -> Result<Outcome> {
    let all: Vec<usize> = (0..h.n()).collect();
    if h.n() >= 2 && h.is_clique(&all) {
        Ok(Outcome::D)
    } else if h.n() >= 2 && h.is_stable(&all) {
        Ok(Outcome::S)
    } else {
        outcome_of(&Position::start(h.clone(), Player::Dominator))
    }
}

pub(crate) fn replace_module_by(p: &Position, members: &[usize], inner: Outcome) -> Rewrite {
    let g = &p.graph;
    let outside: BTreeSet<usize> = members
        .iter()
        .flat_map(|&v| g.neighbors(v).iter().copied())
        .filter(|w| !members.contains(w))
        .collect();
    let (mut edit, map, kept) = Edit::new(p, members.to_vec());
    let (size, inner_edges): (usize, Vec<(usize, usize)>) = match inner {
        Outcome::D => (2, vec![(0, 1)]),
        Outcome::S => (2, vec![]),
        Outcome::N => (3, vec![(0, 1), (1, 2)]),
    };
    edit.added = size;
    edit.edges.extend(inner_edges.iter().map(|&(a, b)| (kept + a, kept + b)));
    for &w in &outside {
        for i in 0..size {
            edit.edges.push((map[w].unwrap(), kept + i));
        }
    }
    edit.finish(Rule::ReplaceModule.name(), members.to_vec(), p.to_move)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Composite {
    Union(Outcome, Outcome),
    /// Outcomes of two non-empty graphs and whether each is exactly `K1`.
    Join { left: Outcome, left_is_k1: bool, right: Outcome, right_is_k1: bool },
    Cluster(ClusterProfile),
}

pub fn compose_outcome(c: Composite) -> Result<Outcome> {
    use Outcome::*;
    match c {
        Composite::Union(a, b) => Ok(match (a, b) {
            (S, _) | (_, S) | (N, N) => S,
            (D, D) => D,
            _ => N,
        }),
        Composite::Join { left, left_is_k1, right, right_is_k1 } => {
            Ok(if left_is_k1 && right == S || right_is_k1 && left == S { N } else { D })
        }
        Composite::Cluster(profile) => {
            if !profile.is_cluster {
                return Err(Error::input("profile is not a cluster"));
            }
            Ok(match profile.isolated_count {
                0 => D,
                1 => N,
                _ => S,
            })
        }
    }
}

/// Shortest internal path the path rule shortens.
pub const MIN_SHORTENED_PATH: usize = 9;

/// Checks that `path` is a chain of unclaimed degree-2 vertices and returns
/// the outside neighbors of its two ends.
fn path_anchors(p: &Position, path: &[usize]) -> Result<(usize, usize)> {
    let g = &p.graph;
    let on_path: BTreeSet<usize> = path.iter().copied().collect();
    if path.is_empty() || on_path.len() != path.len() || path.iter().any(|&v| v >= g.n()) {
        return Err(Error::input("path must be a non-empty list of distinct vertices"));
    }
    if path.iter().any(|&v| !p.is_free(v)) {
        return Err(Error::input("claimed vertex on the path"));
    }
    if path.iter().any(|&v| g.degree(v) != 2) {
        return Err(Error::input("path vertices must have degree 2"));
    }
    if path.windows(2).any(|w| !g.has_edge(w[0], w[1])) {
        return Err(Error::input("consecutive path vertices must be adjacent"));
    }
    let k = path.len();
    let other = |v: usize, not: usize| {
        let nb = g.neighbors(v);
        if nb[0] == not { nb[1] } else { nb[0] }
    };
    let (u, v) = if k == 1 {
        (g.neighbors(path[0])[0], g.neighbors(path[0])[1])
    } else {
        (other(path[0], path[1]), other(path[k - 1], path[k - 2]))
    };
    if on_path.contains(&u) || on_path.contains(&v) {
        return Err(Error::input("path closes on itself"));
    }
    Ok((u, v))
}

/// Removes two internal vertices of an unclaimed degree-2 path with at least
/// nine vertices between its anchors. Requires no Staller claims; Dominator
/// claims must be off the path.
pub fn shorten_internal_path(p: &Position, path: &[usize]) -> Result<Option<Rewrite>> {
    if !p.staller.is_empty() {
        return Err(Error::input("path shortening needs an empty Staller set"));
    }
    let (u, v) = path_anchors(p, path)?;
    if path.len() < MIN_SHORTENED_PATH {
        return Ok(None);
    }
    let (mut edit, map, _) = Edit::new(p, vec![path[1], path[2]]);
    edit.edges.push((map[path[0]].unwrap(), map[path[3]].unwrap()));
    let mut matched = vec![u];
    matched.extend_from_slice(path);
    matched.push(v);
    Ok(Some(edit.finish(Rule::ShortenInternalPath.name(), matched, p.to_move)))
}

/// Contracts a pending path `v1..vk` (only `vk` claimed, by Dominator, `vk` a
/// leaf, `v1` attached to an anchor) to three vertices. `None` for `k ≤ 3`
/// or when the shape does not match.
pub fn shorten_pending_path(p: &Position, path: &[usize]) -> Result<Option<Rewrite>> {
    let g = &p.graph;
    let k = path.len();
    if k < 3 {
        return Ok(None);
    }
    let tip = path[k - 1];
    if tip >= g.n() || !p.dominator.contains(&tip) || g.degree(tip) != 1 || !g.has_edge(tip, path[k - 2]) {
        return Ok(None);
    }
    let body = &path[..k - 1];
    let Ok((anchor, _)) = path_anchors(p, body) else {
        return Ok(None);
    };
    if k == 3 {
        return Ok(None);
    }
    let (mut edit, map, _) = Edit::new(p, path[1..k - 2].to_vec());
    edit.edges.push((map[path[0]].unwrap(), map[path[k - 2]].unwrap()));
    let mut matched = vec![anchor];
    matched.extend_from_slice(path);
    Ok(Some(edit.finish(Rule::ShortenPendingPath.name(), matched, p.to_move)))
}

/// Maximal runs of unclaimed degree-2 vertices, in path order. A component
/// that is a cycle of such vertices is opened at its lowest vertex and that
/// vertex's lower neighbor, which then act as the two anchors.
pub(crate) fn degree_two_runs(p: &Position) -> Vec<Vec<usize>> {
    let g = &p.graph;
    let inner = |v: usize| g.degree(v) == 2 && p.is_free(v);
    let step = |cur: usize, prev: usize| {
        let nb = g.neighbors(cur);
        if nb[0] == prev { nb[1] } else { nb[0] }
    };
    let mut seen = vec![false; g.n()];
    let mut runs = Vec::new();
    for start in 0..g.n() {
        if seen[start] || !inner(start) {
            continue;
        }
        // Walk towards neighbors[0] until leaving the run or returning to start.
        let (mut prev, mut cur) = (start, g.neighbors(start)[0]);
        while inner(cur) && cur != start {
            let next = step(cur, prev);
            prev = cur;
            cur = next;
        }
        if cur == start {
            let mut cycle = vec![start];
            let (mut prev, mut cur) = (start, g.neighbors(start)[0]);
            while cur != start {
                cycle.push(cur);
                let next = step(cur, prev);
                prev = cur;
                cur = next;
            }
            cycle.iter().for_each(|&v| seen[v] = true);
            // `start` is the lowest vertex and neighbors are sorted, so
            // cycle[1] is its lower neighbor; the rest forms the run.
            runs.push(cycle[2..].iter().rev().copied().collect());
            continue;
        }
        // `prev` is an end of the run and `cur` its outside neighbor.
        let mut run = Vec::new();
        let (mut from, mut here) = (cur, prev);
        loop {
            run.push(here);
            seen[here] = true;
            let next = step(here, from);
            if !inner(next) || next == run[0] {
                break;
            }
            from = here;
            here = next;
        }
        runs.push(run);
    }
    runs
}

/// Pending paths ending in a Dominator leaf: the tip, then unclaimed degree-2
/// vertices walking inward, reported in anchor-to-tip order.
pub(crate) fn pending_paths(p: &Position) -> Vec<Vec<usize>> {
    let g = &p.graph;
    let mut out = Vec::new();
    for &tip in &p.dominator {
        if g.degree(tip) != 1 {
            continue;
        }
        let mut path = vec![tip];
        let mut prev = tip;
        let mut cur = g.neighbors(tip)[0];
        while g.degree(cur) == 2 && p.is_free(cur) && cur != tip {
            path.push(cur);
            let next = if g.neighbors(cur)[0] == prev { g.neighbors(cur)[1] } else { g.neighbors(cur)[0] };
            prev = cur;
            cur = next;
        }
        path.reverse();
        if path.len() >= 4 {
            out.push(path);
        }
    }
    out
}

fn first_rewrite(p: &Position, rule: Rule) -> Result<Option<Rewrite>> {
    Ok(match rule {
        Rule::RemoveDominatedStallerVertex => remove_dominated_staller_vertex(p),
        Rule::ForceLeafSupport => force_leaf_support(p),
        Rule::SplitDominatorVertex => {
            // Leaves are left alone: splitting one only recreates it.
            match p.dominator.iter().copied().find(|&v| p.graph.degree(v) != 1) {
                Some(v) => Some(split_dominator_vertex(p, v)?),
                None => None,
            }
        }
        Rule::AssignTwins => {
            let free = p.free_vertices();
            let pair = free.iter().enumerate().find_map(|(i, &u)| {
                free[i + 1..].iter().copied().find(|&v| p.graph.are_twins(u, v)).map(|v| (u, v))
            });
            match pair {
                Some((u, v)) => Some(assign_twins(p, u, v)?),
                None => None,
            }
        }
        Rule::ReplaceModule => {
            let n = p.graph.n();
            let mut found = None;
            for m in strong_modules(&p.graph) {
                if m.len() < 3 || m.len() > MODULE_SOLVE_LIMIT || m.len() == n {
                    continue;
                }
                if m.iter().any(|&v| !p.is_free(v)) {
                    continue;
                }
                let inner = module_outcome(&p.graph.induced(&m))?;
                // A size-3 module of outcome N would be replaced by itself.
                if inner == Outcome::N && m.len() == 3 {
                    continue;
                }
                found = Some(replace_module_by(p, &m, inner));
                break;
            }
            found
        }
        Rule::ShortenInternalPath => {
            if !p.staller.is_empty() {
                return Ok(None);
            }
            let mut found = None;
            for run in degree_two_runs(p) {
                if run.len() >= MIN_SHORTENED_PATH {
                    found = shorten_internal_path(p, &run)?;
                    break;
                }
            }
            found
        }
        Rule::ShortenPendingPath => {
            let mut found = None;
            for path in pending_paths(p) {
                if let Some(r) = shorten_pending_path(p, &path)? {
                    found = Some(r);
                    break;
                }
            }
            found
        }
    })
}

/// Applies the first applicable rule in priority order until none applies.
pub fn reduce_fixpoint(p: &Position, rules: &[Rule]) -> Result<(Position, ReductionTrace)> {
    let mut cur = p.clone();
    let mut trace = ReductionTrace::default();
    // Every step deletes a vertex, claims a vertex, or splits a non-leaf
    // Dominator vertex into leaves; this bound is far above what they allow.
    let limit = 4 * (p.graph.n() + p.graph.edge_count()) + 16;
    'outer: loop {
        for &rule in rules {
            if let Some((next, step)) = first_rewrite(&cur, rule)? {
                cur = next;
                trace.steps.push(step);
                if trace.steps.len() > limit {
                    return Err(Error::Inconsistent("rewriting did not terminate".into()));
                }
                continue 'outer;
            }
        }
        return Ok((cur, trace));
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::graph::{attach_path, attach_pending_path, generate, random_graph, Family};
    use crate::solver::naive;

    fn pos(g: Graph, d: &[usize], s: &[usize], to_move: Player) -> Position {
        Position::new(g, d.iter().copied(), s.iter().copied(), to_move).unwrap()
    }

    fn graph(n: usize, edges: &[(usize, usize)]) -> Graph {
        Graph::new(n, edges).unwrap()
    }

    /// A seeded graph with random claims, both players' claims disjoint.
    fn random_position(seed: u64, n_max: usize) -> Position {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(3..=n_max);
        let g = random_graph(n, rng.gen_range(0.2..0.6), seed).unwrap();
        let (mut d, mut s) = (vec![], vec![]);
        for v in 0..n {
            match rng.gen_range(0..6) {
                0 => d.push(v),
                1 => s.push(v),
                _ => {}
            }
        }
        let to_move = if rng.gen_bool(0.5) { Player::Dominator } else { Player::Staller };
        pos(g, &d, &s, to_move)
    }

    fn same_winner_both_turns(a: &Position, b: &Position) -> bool {
        [Player::Dominator, Player::Staller]
            .into_iter()
            .all(|t| naive::winner(&a.with_to_move(t)) == naive::winner(&b.with_to_move(t)))
    }

    #[test]
    fn remove_dominated_staller_examples() {
        let (q, step) = remove_dominated_staller_vertex(&pos(generate(&Family::Path(3)).unwrap(), &[0], &[1], Player::Dominator)).unwrap();
        assert_eq!(q.graph, Graph::empty(2));
        assert_eq!(q.dominator, [0].into());
        assert!(q.staller.is_empty());
        assert_eq!(step.index_map, vec![Some(0), None, Some(1)]);

        let (q, _) = remove_dominated_staller_vertex(&pos(generate(&Family::Cycle(4)).unwrap(), &[0], &[1], Player::Dominator)).unwrap();
        assert_eq!(q.graph, graph(3, &[(1, 2), (0, 2)]));
        assert_eq!(q.dominator, [0].into());

        let c4 = Position::start(generate(&Family::Cycle(4)).unwrap(), Player::Staller);
        assert!(remove_dominated_staller_vertex(&c4).is_none());
    }

    #[test]
    fn split_examples() {
        // A 6-cycle v0..v5 with chord v1-v4, v0 claimed by Dominator.
        let g = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)]);
        let p = pos(g, &[0], &[], Player::Staller);
        let (q, step) = split_dominator_vertex(&p, 0).unwrap();
        assert_eq!(q.graph, graph(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 3), (0, 5), (4, 6)]));
        assert_eq!(q.dominator, [5, 6].into());
        assert_eq!(step.added, vec![5, 6]);
        assert!(same_winner_both_turns(&p, &q));
        for v in 1..6 {
            assert_eq!(q.graph.degree(step.index_map[v].unwrap()), p.graph.degree(v));
        }

        let (q, _) = split_dominator_vertex(&pos(generate(&Family::Clique(2)).unwrap(), &[0], &[], Player::Staller), 0).unwrap();
        assert_eq!(q.graph, graph(2, &[(0, 1)]));
        assert_eq!(q.dominator, [1].into());

        let (q, _) = split_dominator_vertex(&pos(Graph::empty(2), &[0], &[], Player::Staller), 0).unwrap();
        assert_eq!(q.graph, Graph::empty(1));
        assert!(q.dominator.is_empty());

        assert!(split_dominator_vertex(&pos(Graph::empty(2), &[], &[], Player::Staller), 0).is_err());
    }

    #[test]
    fn force_leaf_examples() {
        let st = |g: Graph| Position::start(g, Player::Staller);
        let (q, _) = force_leaf_support(&st(generate(&Family::Path(2)).unwrap())).unwrap();
        assert_eq!(q.graph.n(), 0);
        assert_eq!(naive::winner(&q), Player::Dominator);
        assert_eq!(naive::winner(&st(generate(&Family::Path(2)).unwrap())), Player::Dominator);

        let (q, step) = force_leaf_support(&st(generate(&Family::Path(4)).unwrap())).unwrap();
        assert_eq!(q.graph, generate(&Family::Path(2)).unwrap());
        assert_eq!(step.matched, vec![0, 1]);

        let (q, _) = force_leaf_support(&st(generate(&Family::Star(3)).unwrap())).unwrap();
        assert_eq!(q.graph, Graph::empty(2));

        let dom = Position::start(generate(&Family::Path(4)).unwrap(), Player::Dominator);
        assert!(force_leaf_support(&dom).is_none());
    }

    #[test]
    fn twin_examples() {
        let c4 = Position::start(generate(&Family::Cycle(4)).unwrap(), Player::Staller);
        let (q, _) = assign_twins(&c4, 0, 2).unwrap();
        assert_eq!((q.dominator.clone(), q.staller.clone()), ([0].into(), [2].into()));
        assert!(same_winner_both_turns(&c4, &q));
        assert_eq!(naive::outcome(&c4.graph), Outcome::D);

        let k2 = Position::start(generate(&Family::Clique(2)).unwrap(), Player::Staller);
        let (q, _) = assign_twins(&k2, 0, 1).unwrap();
        assert_eq!(naive::winner(&q), Player::Dominator);
        assert_eq!(naive::winner(&q.with_to_move(Player::Dominator)), Player::Dominator);

        let p4 = Position::start(generate(&Family::Path(4)).unwrap(), Player::Staller);
        assert!(assign_twins(&p4, 0, 3).is_err());
    }

    #[test]
    fn module_examples() {
        // v1..v7 as 0..6; M = {0,1,2,3} induces a P4, which Dominator wins.
        let mut edges = vec![(0, 2), (2, 1), (1, 3), (4, 5)];
        for m in 0..4 {
            edges.extend([(m, 4), (m, 6)]);
        }
        let p = Position::start(graph(7, &edges), Player::Dominator);
        let (q, _) = replace_module(&p, &[0, 1, 2, 3]).unwrap().unwrap();
        assert_eq!(q.graph, graph(5, &[(0, 1), (3, 4), (0, 3), (0, 4), (2, 3), (2, 4)]));
        assert!(same_winner_both_turns(&p, &q));

        // The leaves of K1,3 form a 3K1 module.
        let star = Position::start(generate(&Family::Star(3)).unwrap(), Player::Dominator);
        let (q, _) = replace_module(&star, &[1, 2, 3]).unwrap().unwrap();
        assert_eq!(q.graph, graph(3, &[(0, 1), (0, 2)]));
        assert!(same_winner_both_turns(&star, &q));

        // A P3 module below a universal vertex keeps its size.
        let g = graph(4, &[(0, 1), (1, 2), (0, 3), (1, 3), (2, 3)]);
        let p = Position::start(g, Player::Dominator);
        let (q, _) = replace_module(&p, &[0, 1, 2]).unwrap().unwrap();
        assert_eq!(q.graph.n(), 4);
        assert_eq!(q.graph.edge_count(), 5);

        assert!(replace_module(&p, &[1, 3]).unwrap().is_none());
        assert!(replace_module(&p, &[0, 3]).is_err());
        assert!(replace_module(&star, &[0, 1, 2]).is_err());
    }

    #[test]
    fn composition_tables() {
        use Outcome::*;
        assert_eq!(compose_outcome(Composite::Union(N, N)).unwrap(), S);
        assert_eq!(compose_outcome(Composite::Union(D, N)).unwrap(), N);
        assert_eq!(compose_outcome(Composite::Union(D, D)).unwrap(), D);
        let join = |l, lk, r, rk| compose_outcome(Composite::Join { left: l, left_is_k1: lk, right: r, right_is_k1: rk }).unwrap();
        assert_eq!(join(N, true, S, false), N);
        assert_eq!(join(N, false, S, false), D);
        let profile = |g: &Graph| g.cluster_profile();
        assert_eq!(compose_outcome(Composite::Cluster(profile(&graph(3, &[(0, 1)])))).unwrap(), N);
        assert!(compose_outcome(Composite::Cluster(profile(&generate(&Family::Path(3)).unwrap()))).is_err());

        for seed in 0..40u64 {
            let a = random_graph(1 + seed as usize % 5, 0.5, seed).unwrap();
            let b = random_graph(1 + (seed as usize / 5) % 5, 0.5, seed + 1000).unwrap();
            let (oa, ob) = (naive::outcome(&a), naive::outcome(&b));
            let union = a.compose(&b, crate::graph::Composition::Union);
            assert_eq!(naive::outcome(&union), compose_outcome(Composite::Union(oa, ob)).unwrap(), "seed {seed}");
            let joined = a.compose(&b, crate::graph::Composition::Join);
            let expected = join(oa, a.n() == 1, ob, b.n() == 1);
            assert_eq!(naive::outcome(&joined), expected, "seed {seed}");
        }
    }

    #[test]
    fn internal_path_examples() {
        let k2 = generate(&Family::Clique(2)).unwrap();
        let g9 = attach_path(&k2, 0, 1, 9).unwrap();
        let p = Position::start(g9, Player::Staller);
        let run = degree_two_runs(&p).remove(0);
        assert_eq!(run.len(), 9);
        let (q, _) = shorten_internal_path(&p, &run).unwrap().unwrap();
        let g7 = attach_path(&k2, 0, 1, 7).unwrap();
        assert_eq!(q.graph.n(), g7.n());
        assert_eq!(q.graph.edge_count(), g7.edge_count());
        assert_eq!(naive::outcome(&q.graph), naive::outcome(&g7));
        assert_eq!(naive::outcome(&p.graph), naive::outcome(&g7));

        // C13 -> C11 -> C9.
        let mut p = Position::start(generate(&Family::Cycle(13)).unwrap(), Player::Staller);
        let expected = crate::solver::outcome_of(&p).unwrap();
        for n in [11, 9] {
            let run = degree_two_runs(&p).remove(0);
            p = shorten_internal_path(&p, &run).unwrap().unwrap().0;
            assert_eq!(p.graph.n(), n);
            assert!((0..n).all(|v| p.graph.degree(v) == 2) && p.graph.components().len() == 1);
            assert_eq!(crate::solver::outcome_of(&p).unwrap(), expected);
        }
        let run = degree_two_runs(&p).remove(0);
        assert_eq!(run.len(), 7);
        assert!(shorten_internal_path(&p, &run).unwrap().is_none());

        let claimed = pos(attach_path(&k2, 0, 1, 9).unwrap(), &[4], &[], Player::Staller);
        assert!(shorten_internal_path(&claimed, &(2..11).collect::<Vec<_>>()).is_err());
    }

    #[test]
    fn pending_path_examples() {
        let mut checked = 0;
        for seed in 0..30u64 {
            let host = random_graph(2 + seed as usize % 4, 0.5, seed).unwrap();
            let n = host.n();
            let with_tip = |k: usize| {
                let g = attach_pending_path(&host, 0, k).unwrap();
                pos(g, &[n + k - 1], &[], Player::Staller)
            };
            let p5 = with_tip(5);
            let (q, _) = shorten_pending_path(&p5, &(n..n + 5).collect::<Vec<_>>()).unwrap().unwrap();
            let p3 = with_tip(3);
            assert_eq!(q, p3);
            for t in [Player::Dominator, Player::Staller] {
                let (w5, w3) = (naive::winner(&p5.with_to_move(t)), naive::winner(&p3.with_to_move(t)));
                assert_eq!(w5, w3, "seed {seed}");
                checked += usize::from(w5 == Player::Dominator);
            }
            assert!(shorten_pending_path(&p3, &(n..n + 3).collect::<Vec<_>>()).unwrap().is_none());
            let untipped = Position::start(p5.graph.clone(), Player::Staller);
            assert!(shorten_pending_path(&untipped, &(n..n + 5).collect::<Vec<_>>()).unwrap().is_none());
        }
        assert!(checked > 0);
    }

    #[test]
    fn fixpoint_examples() {
        let p4 = Position::start(generate(&Family::Path(4)).unwrap(), Player::Staller);
        let (q, trace) = reduce_fixpoint(&p4, &[Rule::ForceLeafSupport]).unwrap();
        assert_eq!(q.graph.n(), 0);
        assert_eq!(trace.steps.len(), 2);

        let c4 = Position::start(generate(&Family::Cycle(4)).unwrap(), Player::Staller);
        let (q, trace) = reduce_fixpoint(&c4, &Rule::DEFAULT_PRIORITY).unwrap();
        assert_eq!(q, c4);
        assert!(trace.steps.is_empty());
        let (q, trace) = reduce_fixpoint(&c4, &[Rule::RemoveDominatedStallerVertex, Rule::AssignTwins]).unwrap();
        assert_eq!(q.graph.n(), 2);
        assert!(same_winner_both_turns(&c4, &q));
        assert_eq!(trace.correspondence(4).iter().flatten().count(), 2);

        let (q, trace) = reduce_fixpoint(&p4, &[]).unwrap();
        assert_eq!(q, p4);
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn rule_names_round_trip() {
        for rule in Rule::ALL {
            assert_eq!(rule.name().parse::<Rule>().unwrap(), rule);
        }
        assert!("nope".parse::<Rule>().is_err());
    }

    /// Applies `rule` to seeded positions until `want` applicable instances
    /// were checked against the oracle.
    fn check_rule(rule: Rule, want: usize, make: impl Fn(u64) -> Position) {
        let mut checked = 0;
        for seed in 0..40 * want as u64 {
            let p = make(seed);
            let Some((q, step)) = first_rewrite(&p, rule).unwrap() else {
                continue;
            };
            assert_eq!(step.rule, rule.name());
            if rule == Rule::ForceLeafSupport {
                assert_eq!(naive::winner(&p), naive::winner(&q), "{rule} seed {seed}");
            } else {
                assert!(same_winner_both_turns(&p, &q), "{rule} seed {seed}");
            }
            checked += 1;
            if checked == want {
                return;
            }
        }
        panic!("{rule}: only {checked} applicable positions");
    }

    #[test]
    fn local_rules_preserve_outcome() {
        check_rule(Rule::RemoveDominatedStallerVertex, 60, |s| random_position(s, 9));
        check_rule(Rule::SplitDominatorVertex, 60, |s| random_position(s, 9));
        check_rule(Rule::ForceLeafSupport, 60, |s| random_position(s, 9).with_to_move(Player::Staller));
        check_rule(Rule::AssignTwins, 60, |s| random_position(s, 9));
    }

    #[test]
    fn module_rule_preserves_outcome() {
        check_rule(Rule::ReplaceModule, 60, |seed| {
            let p = random_position(seed, 6);
            let h = random_graph(3 + seed as usize % 3, 0.5, seed + 1).unwrap();
            let v = (0..p.graph.n()).find(|&v| p.is_free(v)).unwrap_or(0);
            let g = p.graph.substitute(v, &h).unwrap();
            let d: Vec<usize> = p.dominator.iter().copied().filter(|&w| w != v).collect();
            let s: Vec<usize> = p.staller.iter().copied().filter(|&w| w != v).collect();
            pos(g, &d, &s, p.to_move)
        });
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn default_fixpoint_preserves_winner(seed in any::<u64>()) {
            let p = random_position(seed, 8);
            let (q, trace) = reduce_fixpoint(&p, &Rule::DEFAULT_PRIORITY).unwrap();
            prop_assert_eq!(naive::winner(&p), naive::winner(&q));
            prop_assert!(trace.steps.len() <= 4 * (p.graph.n() + p.graph.edge_count()) + 16);
        }

        #[test]
        fn trace_correspondence_keeps_claims(seed in any::<u64>()) {
            let p = random_position(seed, 8);
            let mut rules = Rule::ALL.to_vec();
            rules.retain(|&r| r != Rule::ShortenPendingPath);
            let (q, trace) = reduce_fixpoint(&p, &rules).unwrap();
            let map = trace.correspondence(p.graph.n());
            let images: Vec<usize> = map.iter().flatten().copied().collect();
            let distinct: BTreeSet<usize> = images.iter().copied().collect();
            prop_assert_eq!(images.len(), distinct.len());
            for (v, w) in map.iter().enumerate() {
                if let Some(w) = *w {
                    prop_assert!(w < q.graph.n());
                    prop_assert!(!p.dominator.contains(&v) || q.dominator.contains(&w));
                    prop_assert!(!p.staller.contains(&v) || q.staller.contains(&w));
                }
            }
        }
    }
}
