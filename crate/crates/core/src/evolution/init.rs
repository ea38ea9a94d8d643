use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{CircuitTree, Function, Node};

/// Grow-style random tree.
///
/// At each position a function is chosen with probability 0.5, otherwise a
/// terminal. A terminal is forced at `max_depth` (the root is depth 1) and
/// wherever no allowed function fits in the remaining node budget, counting
/// one node for every sibling subtree still to be generated. Functions and
/// terminals are drawn uniformly.
///
/// Panics if `n_inputs`, `max_depth` or `node_budget` is zero.
pub fn random_tree<R: Rng + ?Sized>(
    rng: &mut R,
    n_inputs: usize,
    functions: &[Function],
    max_depth: usize,
    node_budget: usize,
) -> CircuitTree {
    assert!(n_inputs > 0, "no terminals to choose from");
    assert!(max_depth >= 1 && node_budget >= 1);
    let mut nodes = Vec::new();
    grow(rng, n_inputs, functions, 1, max_depth, node_budget, &mut nodes);
    CircuitTree::from_nodes(nodes)
}

fn grow<R: Rng + ?Sized>(
    rng: &mut R,
    n_inputs: usize,
    functions: &[Function],
    depth: usize,
    max_depth: usize,
    budget: usize,
    out: &mut Vec<Node>,
) -> usize {
    if depth < max_depth && rng.gen_bool(0.5) {
        let fitting: Vec<Function> = functions
            .iter()
            .copied()
            .filter(|f| f.arity() < budget)
            .collect();
        if let Some(&function) = fitting.choose(rng) {
            out.push(Node::Function(function));
            let arity = function.arity();
            let mut remaining = budget - 1;
            for k in 0..arity {
                let reserved = arity - k - 1;
                remaining -= grow(rng, n_inputs, functions, depth + 1, max_depth, remaining - reserved, out);
            }
            return budget - remaining;
        }
    }
    out.push(random_terminal(rng, n_inputs));
    1
}

pub(crate) fn random_terminal<R: Rng + ?Sized>(rng: &mut R, n_inputs: usize) -> Node {
    Node::Terminal(rng.gen_range(0..n_inputs) as u16)
}
