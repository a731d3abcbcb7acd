use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Player {
    Dominator,
    Staller,
}

impl Player {
    pub fn other(self) -> Player {
        match self {
            Player::Dominator => Player::Staller,
            Player::Staller => Player::Dominator,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::Dominator => "Dominator",
            Player::Staller => "Staller",
        })
    }
}

/// Outcome class of a position: who wins regardless of the first player, or `N`
/// when the first player wins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Outcome {
    D,
    N,
    S,
}

impl Outcome {
    /// Combines the winners with Dominator moving first and Staller moving first.
    pub fn from_winners(dominator_first: Player, staller_first: Player) -> Result<Outcome> {
        match (dominator_first, staller_first) {
            (Player::Dominator, Player::Dominator) => Ok(Outcome::D),
            (Player::Staller, Player::Staller) => Ok(Outcome::S),
            (Player::Dominator, Player::Staller) => Ok(Outcome::N),
            (Player::Staller, Player::Dominator) => Err(Error::Inconsistent(
                "second player wins with both first players".into(),
            )),
        }
    }

    /// Winner when `first` moves first.
    pub fn winner(self, first: Player) -> Player {
        match self {
            Outcome::D => Player::Dominator,
            Outcome::S => Player::Staller,
            Outcome::N => first,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::D => "D",
            Outcome::N => "N",
            Outcome::S => "S",
        })
    }
}

/// A game state: the graph, the vertices each player has claimed, and who moves next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Position {
    pub graph: Graph,
    pub dominator: BTreeSet<usize>,
    pub staller: BTreeSet<usize>,
    pub to_move: Player,
}

impl Position {
    pub fn new(
        graph: Graph,
        dominator: impl IntoIterator<Item = usize>,
        staller: impl IntoIterator<Item = usize>,
        to_move: Player,
    ) -> Result<Position> {
        let dominator: BTreeSet<usize> = dominator.into_iter().collect();
        let staller: BTreeSet<usize> = staller.into_iter().collect();
        let n = graph.n();
        if let Some(v) = dominator.iter().chain(&staller).find(|&&v| v >= n) {
            return Err(Error::input(format!("claimed vertex {v} out of range for n={n}")));
        }
        if let Some(v) = dominator.intersection(&staller).next() {
            return Err(Error::input(format!("vertex {v} claimed by both players")));
        }
        Ok(Position { graph, dominator, staller, to_move })
    }

    /// Starting position with nothing claimed.
    pub fn start(graph: Graph, to_move: Player) -> Position {
        Position { graph, dominator: BTreeSet::new(), staller: BTreeSet::new(), to_move }
    }

    pub fn is_free(&self, v: usize) -> bool {
        !self.dominator.contains(&v) && !self.staller.contains(&v)
    }

    pub fn free_vertices(&self) -> Vec<usize> {
        (0..self.graph.n()).filter(|&v| self.is_free(v)).collect()
    }

    pub fn with_to_move(&self, to_move: Player) -> Position {
        Position { to_move, ..self.clone() }
    }

    /// The position after the player to move claims `v`.
    pub fn play(&self, v: usize) -> Result<Position> {
        if v >= self.graph.n() || !self.is_free(v) {
            return Err(Error::State(format!("vertex {v} is not an unclaimed vertex")));
        }
        let mut next = self.clone();
        match self.to_move {
            Player::Dominator => next.dominator.insert(v),
            Player::Staller => next.staller.insert(v),
        };
        next.to_move = self.to_move.other();
        Ok(next)
    }
}
