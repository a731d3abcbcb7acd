//! Exact solving, kernelization and gadget construction for the Maker-Breaker
//! domination game.

pub mod cli;
pub mod error;
pub mod fpt;
pub mod gadgets;
pub mod graph;
pub mod harness;
pub mod hypergraph;
pub mod position;
pub mod rewrite;
pub mod solver;

pub use error::{Error, Result};
pub use graph::Graph;
pub use hypergraph::{Hypergraph, WinStatus};
pub use position::{Outcome, Player, Position};
