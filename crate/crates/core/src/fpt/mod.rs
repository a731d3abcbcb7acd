//! Parameterized algorithms: kernels and structure-driven solvers.

pub mod dtc;
pub mod fen;
pub mod modular;
pub mod nd;
pub mod p4;

pub use dtc::{cluster_deletion_set, dtc_kernel, surplus_bound, CliqueSignature, DtcOptions, DtcResult, LargeCliqueRule};
pub use fen::{fen_reduce, fen_report, solve_via_fen, FenReport};
pub use modular::{modular_decomposition, solve_via_modular_width, strong_modules, DecompTree};
pub use nd::nd_kernel;
pub use p4::{solve_via_p4_decomposition, spider_detect, Spider};

use crate::graph::Graph;
use crate::position::{Outcome, Player, Position};
use crate::rewrite::replace_module_by;

/// Replaces each disjoint module (local indices) by its `P2` / `2K1` / `P3`
/// stand-in for the given outcome.
pub(crate) fn collapse_modules(h: &Graph, modules: &[(Vec<usize>, Outcome)]) -> Graph {
    let mut pos = Position::start(h.clone(), Player::Dominator);
    let mut map: Vec<Option<usize>> = (0..h.n()).map(Some).collect();
    for (m, o) in modules {
        let cur: Vec<usize> = m.iter().map(|&v| map[v].expect("modules are disjoint")).collect();
        let (next, step) = replace_module_by(&pos, &cur, *o);
        for slot in map.iter_mut() {
            *slot = slot.and_then(|v| step.index_map[v]);
        }
        pos = next;
    }
    pos.graph
}
