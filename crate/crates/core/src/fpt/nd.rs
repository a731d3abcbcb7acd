//! Kernel for neighborhood diversity: every twin class of three or more
//! vertices shrinks to two.

use crate::graph::{Graph, TwinKind};
use crate::position::{Outcome, Player, Position};
use crate::rewrite::{replace_module_by, ReductionTrace};

/// Replaces each twin class of size ≥ 3 by `P2` (clique class, outcome D) or
/// `2K1` (stable class, outcome S). The result has at most two vertices per
/// class.
pub fn nd_kernel(g: &Graph) -> (Graph, ReductionTrace) {
    let mut pos = Position::start(g.clone(), Player::Dominator);
    let mut trace = ReductionTrace::default();
    let mut map: Vec<Option<usize>> = (0..g.n()).map(Some).collect();
    for class in g.twin_partition().classes {
        if class.members.len() < 3 {
            continue;
        }
        let inner = match class.kind {
            TwinKind::True => Outcome::D,
            TwinKind::False => Outcome::S,
            TwinKind::Singleton => unreachable!("singleton classes have one member"),
        };
        let cur: Vec<usize> = class.members.iter().map(|&v| map[v].expect("classes are disjoint")).collect();
        let (next, step) = replace_module_by(&pos, &cur, inner);
        for slot in map.iter_mut() {
            *slot = slot.and_then(|v| step.index_map[v]);
        }
        trace.steps.push(step);
        pos = next;
    }
    (pos.graph, trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, random_graph, Family};
    use crate::solver::naive;

    #[test]
    fn examples() {
        let (k, _) = nd_kernel(&generate(&Family::Clique(5)).unwrap());
        assert_eq!(k, generate(&Family::Clique(2)).unwrap());
        let c4 = generate(&Family::Cycle(4)).unwrap();
        let (k, trace) = nd_kernel(&c4);
        assert_eq!(k, c4);
        assert!(trace.steps.is_empty());
        let star = generate(&Family::Star(4)).unwrap();
        let (k, _) = nd_kernel(&star);
        assert_eq!(k.n(), 3);
        assert_eq!(k.edge_count(), 2);
        assert_eq!(naive::outcome(&k), naive::outcome(&star));
        assert_eq!(naive::outcome(&star), Outcome::N);
    }

    #[test]
    fn kernel_size_and_outcome() {
        for seed in 0..40 {
            // Sparse blow-ups make large twin classes likely.
            let base = random_graph(3 + seed as usize % 3, 0.5, seed).unwrap();
            let mut g = base.clone();
            for v in 0..base.n() {
                for _ in 0..(seed as usize + v) % 3 {
                    let n = g.n();
                    let mut edges = g.edges();
                    edges.extend(g.neighbors(v).iter().map(|&w| (w, n)));
                    if (seed + v as u64) % 2 == 0 {
                        edges.push((v, n));
                    }
                    g = Graph::new(n + 1, &edges).unwrap();
                }
            }
            let w = g.twin_partition().len();
            let (k, trace) = nd_kernel(&g);
            assert!(k.n() <= 2 * w);
            assert_eq!(naive::outcome(&k), naive::outcome(&g), "seed {seed}");
            let surviving = trace.correspondence(g.n()).iter().flatten().count();
            assert_eq!(surviving, k.n() - trace.steps.iter().map(|s| s.added.len()).sum::<usize>());
        }
    }
}
