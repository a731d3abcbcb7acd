//! Hypergraphs for generic Maker-Breaker games, and the closed-neighborhood
//! encoding of the domination game (Staller plays Maker on `{N[x]}`).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Hyperedges are kept sorted and deduplicated, so equality is syntactic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WinStatus {
    MakerWon,
    BreakerWon,
    Undecided,
}

impl Hypergraph {
    pub fn new(n: usize, edges: &[Vec<usize>]) -> Result<Hypergraph> {
        let mut set = BTreeSet::new();
        for e in edges {
            if e.is_empty() {
                return Err(Error::input("empty hyperedge"));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n) {
                return Err(Error::input(format!("hyperedge member {v} out of range for n={n}")));
            }
            let edge: BTreeSet<usize> = e.iter().copied().collect();
            set.insert(edge.into_iter().collect::<Vec<_>>());
        }
        Ok(Hypergraph { n, edges: set.into_iter().collect() })
    }

    /// One hyperedge `N[x]` per vertex, duplicates collapsed.
    pub fn neighborhoods(g: &Graph) -> Hypergraph {
        let edges: Vec<_> = (0..g.n()).map(|v| g.closed_nbhd(v)).collect();
        Hypergraph::new(g.n(), &edges).expect("closed neighborhoods are non-empty and in range")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn is_transversal(&self, set: &[usize]) -> bool {
        let set: BTreeSet<usize> = set.iter().copied().collect();
        self.edges.iter().all(|e| e.iter().any(|v| set.contains(v)))
    }

    /// Vertices that lie in no hyperedge.
    pub fn isolated_vertices(&self) -> Vec<usize> {
        let mut covered = vec![false; self.n];
        self.edges.iter().flatten().for_each(|&v| covered[v] = true);
        (0..self.n).filter(|&v| !covered[v]).collect()
    }

    pub fn win_check(&self, maker: &[usize], breaker: &[usize]) -> Result<WinStatus> {
        let m: BTreeSet<usize> = maker.iter().copied().collect();
        let b: BTreeSet<usize> = breaker.iter().copied().collect();
        if let Some(&v) = m.iter().chain(&b).find(|&&v| v >= self.n) {
            return Err(Error::input(format!("vertex {v} out of range for n={}", self.n)));
        }
        if let Some(v) = m.intersection(&b).next() {
            return Err(Error::input(format!("vertex {v} claimed by both players")));
        }
        let maker_won = self.edges.iter().any(|e| e.iter().all(|v| m.contains(v)));
        let breaker_won = self.edges.iter().all(|e| e.iter().any(|v| b.contains(v)));
        match (maker_won, breaker_won) {
            (true, true) => Err(Error::Inconsistent(
                "maker filled a hyperedge that breaker also hit".into(),
            )),
            (true, false) => Ok(WinStatus::MakerWon),
            (false, true) => Ok(WinStatus::BreakerWon),
            (false, false) => Ok(WinStatus::Undecided),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&HypergraphJson { n: self.n, edges: self.edges.clone() })
            .expect("hypergraph serializes")
    }

    pub fn from_json(text: &str) -> Result<Hypergraph> {
        let j: HypergraphJson = serde_json::from_str(text)
            .map_err(|e| Error::input(format!("hypergraph JSON: {e}")))?;
        Hypergraph::new(j.n, &j.edges)
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct HypergraphJson {
    n: usize,
    edges: Vec<Vec<usize>>,
}
