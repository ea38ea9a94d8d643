use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;

use super::init::{random_terminal, random_tree};
use super::ConfigError;
use crate::circuit::{CircuitTree, Function, Node};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Operator {
    OneNode,
    AllNodes,
    Swap,
    Grow,
    Trunc,
}

impl Operator {
    pub const ALL: [Operator; 5] = [
        Operator::OneNode,
        Operator::AllNodes,
        Operator::Swap,
        Operator::Grow,
        Operator::Trunc,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Operator::OneNode => "OneNode",
            Operator::AllNodes => "AllNodes",
            Operator::Swap => "Swap",
            Operator::Grow => "Grow",
            Operator::Trunc => "Trunc",
        }
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Operator {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Operator::ALL
            .into_iter()
            .find(|op| op.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| ConfigError::UnknownOperator(s.to_string()))
    }
}

/// Relative selection weight of each mutation operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OperatorWeights([u32; 5]);

impl OperatorWeights {
    pub fn new(weights: [u32; 5]) -> Result<Self, ConfigError> {
        if weights.iter().all(|&w| w == 0) {
            return Err(ConfigError::ZeroWeights);
        }
        Ok(OperatorWeights(weights))
    }

    pub fn get(&self, op: Operator) -> u32 {
        self.0[op as usize]
    }

    pub fn as_array(&self) -> [u32; 5] {
        self.0
    }

    /// Applies `op=w,...` overrides on top of `self`.
    pub fn with_overrides(&self, spec: &str) -> Result<Self, ConfigError> {
        let mut weights = self.0;
        for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| ConfigError::BadWeight(part.to_string()))?;
            let op: Operator = name.trim().parse()?;
            weights[op as usize] = value
                .trim()
                .parse()
                .map_err(|_| ConfigError::BadWeight(part.to_string()))?;
        }
        OperatorWeights::new(weights)
    }
}

impl Default for OperatorWeights {
    fn default() -> Self {
        OperatorWeights([100; 5])
    }
}

/// Draws an operator with probability proportional to its weight.
pub fn select_operator<R: Rng + ?Sized>(weights: &OperatorWeights, rng: &mut R) -> Operator {
    let dist = WeightedIndex::new(weights.0).expect("at least one positive weight");
    Operator::ALL[dist.sample(rng)]
}

/// What a mutation may draw from and how large the result may grow.
#[derive(Clone, Copy, Debug)]
pub struct MutationContext<'a> {
    pub n_inputs: usize,
    pub functions: &'a [Function],
    pub max_nodes: usize,
    pub max_depth: usize,
}

/// Returns a mutated copy of `tree`.
///
/// * OneNode: one node is redrawn among same-arity alternatives (possibly
///   itself).
/// * AllNodes: every node is redrawn that way.
/// * Swap: the children of one node with two or more children are permuted
///   (never the identity order); no-op without such a node.
/// * Grow: one terminal becomes a random subtree within the remaining node
///   and depth budget; falls back to OneNode when the tree is full.
/// * Trunc: one function node's subtree collapses to a random terminal;
///   no-op on a lone terminal.
pub fn mutate<R: Rng + ?Sized>(
    tree: &CircuitTree,
    op: Operator,
    rng: &mut R,
    ctx: &MutationContext<'_>,
) -> CircuitTree {
    match op {
        Operator::OneNode => one_node(tree, rng, ctx),
        Operator::AllNodes => all_nodes(tree, rng, ctx),
        Operator::Swap => swap(tree, rng),
        Operator::Grow => grow(tree, rng, ctx),
        Operator::Trunc => trunc(tree, rng, ctx),
    }
}

fn same_arity<R: Rng + ?Sized>(node: Node, rng: &mut R, ctx: &MutationContext<'_>) -> Node {
    match node {
        Node::Terminal(_) => random_terminal(rng, ctx.n_inputs),
        Node::Function(f) => {
            let peers: Vec<Function> = ctx
                .functions
                .iter()
                .copied()
                .filter(|g| g.arity() == f.arity())
                .collect();
            peers.choose(rng).map_or(node, |&g| Node::Function(g))
        }
    }
}

fn one_node<R: Rng + ?Sized>(tree: &CircuitTree, rng: &mut R, ctx: &MutationContext<'_>) -> CircuitTree {
    let mut nodes = tree.nodes().to_vec();
    let pos = rng.gen_range(0..nodes.len());
    nodes[pos] = same_arity(nodes[pos], rng, ctx);
    CircuitTree::from_nodes(nodes)
}

fn all_nodes<R: Rng + ?Sized>(tree: &CircuitTree, rng: &mut R, ctx: &MutationContext<'_>) -> CircuitTree {
    let nodes = tree.nodes().iter().map(|&n| same_arity(n, rng, ctx)).collect();
    CircuitTree::from_nodes(nodes)
}

fn swap<R: Rng + ?Sized>(tree: &CircuitTree, rng: &mut R) -> CircuitTree {
    let candidates: Vec<usize> = (0..tree.len())
        .filter(|&i| tree.nodes()[i].arity() >= 2)
        .collect();
    let Some(&pos) = candidates.choose(rng) else {
        return tree.clone();
    };
    let children: Vec<&[Node]> = tree
        .children(pos)
        .into_iter()
        .map(|start| &tree.nodes()[start..tree.subtree_end(start)])
        .collect();
    // uniform over the non-identity permutations
    let mut order: Vec<usize> = (0..children.len()).collect();
    while order.windows(2).all(|w| w[0] < w[1]) {
        order.shuffle(rng);
    }
    let end = tree.subtree_end(pos);
    let mut nodes = Vec::with_capacity(tree.len());
    nodes.extend_from_slice(&tree.nodes()[..=pos]);
    for &k in &order {
        nodes.extend_from_slice(children[k]);
    }
    nodes.extend_from_slice(&tree.nodes()[end..]);
    CircuitTree::from_nodes(nodes)
}

fn grow<R: Rng + ?Sized>(tree: &CircuitTree, rng: &mut R, ctx: &MutationContext<'_>) -> CircuitTree {
    // the replaced terminal frees one node
    let headroom = (ctx.max_nodes + 1).saturating_sub(tree.len());
    if headroom < 2 {
        return one_node(tree, rng, ctx);
    }
    let depths = tree.node_depths();
    let terminals: Vec<usize> = (0..tree.len())
        .filter(|&i| matches!(tree.nodes()[i], Node::Terminal(_)))
        .collect();
    let pos = *terminals.choose(rng).expect("every tree has a terminal");
    let depth_room = (ctx.max_depth + 1).saturating_sub(depths[pos]).max(1);
    let subtree = random_tree(rng, ctx.n_inputs, ctx.functions, depth_room, headroom);
    tree.replace_subtree(pos, &subtree)
}

fn trunc<R: Rng + ?Sized>(tree: &CircuitTree, rng: &mut R, ctx: &MutationContext<'_>) -> CircuitTree {
    let functions: Vec<usize> = (0..tree.len())
        .filter(|&i| matches!(tree.nodes()[i], Node::Function(_)))
        .collect();
    let Some(&pos) = functions.choose(rng) else {
        return tree.clone();
    };
    let leaf = CircuitTree::from_nodes(vec![random_terminal(rng, ctx.n_inputs)]);
    tree.replace_subtree(pos, &leaf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{parse_prefix, to_prefix, validate_tree};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const SET: [Function; 5] = [Function::And, Function::Or, Function::Not, Function::Ha, Function::Fa];

    fn ctx(n_inputs: usize) -> MutationContext<'static> {
        MutationContext {
            n_inputs,
            functions: &SET,
            max_nodes: 50,
            max_depth: 10,
        }
    }

    #[test]
    fn one_node_on_terminal_stays_terminal() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let t = parse_prefix("A0", 2).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let m = mutate(&t, Operator::OneNode, &mut rng, &ctx(2));
            seen.insert(to_prefix(&m));
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec!["A0", "A1"]);
    }

    #[test]
    fn one_node_keeps_arity() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let t = parse_prefix("(FA (NOT A0) (AND A1 A2) A0)", 3).unwrap();
        for _ in 0..500 {
            let m = mutate(&t, Operator::OneNode, &mut rng, &ctx(3));
            let arities: Vec<usize> = m.nodes().iter().map(|n| n.arity()).collect();
            let orig: Vec<usize> = t.nodes().iter().map(|n| n.arity()).collect();
            assert_eq!(arities, orig);
            let changed = m.nodes().iter().zip(t.nodes()).filter(|(a, b)| a != b).count();
            assert!(changed <= 1);
        }
    }

    #[test]
    fn all_nodes_keeps_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let t = parse_prefix("(AND (OR A0 A2) (OR A2 A1))", 3).unwrap();
        let mut any_multi = false;
        for _ in 0..200 {
            let m = mutate(&t, Operator::AllNodes, &mut rng, &ctx(3));
            assert_eq!(m.node_depths(), t.node_depths());
            assert!(validate_tree(&m, 50, 3).is_empty());
            any_multi |= m.nodes().iter().zip(t.nodes()).filter(|(a, b)| a != b).count() > 1;
        }
        assert!(any_multi);
    }

    #[test]
    fn swap_permutes_children() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let t = parse_prefix("(AND (NOT A0) A1)", 2).unwrap();
        for _ in 0..50 {
            assert_eq!(to_prefix(&mutate(&t, Operator::Swap, &mut rng, &ctx(2))), "(AND A1 (NOT A0))");
        }
        let fa = parse_prefix("(FA A0 A1 A2)", 3).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..500 {
            seen.insert(to_prefix(&mutate(&fa, Operator::Swap, &mut rng, &ctx(3))));
        }
        assert_eq!(seen.len(), 5);
        assert!(!seen.contains("(FA A0 A1 A2)"));
        let unary = parse_prefix("(NOT (NOT A1))", 2).unwrap();
        assert_eq!(mutate(&unary, Operator::Swap, &mut rng, &ctx(2)), unary);
    }

    #[test]
    fn trunc_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = parse_prefix("(NOT A1)", 2).unwrap();
        for _ in 0..50 {
            let m = mutate(&t, Operator::Trunc, &mut rng, &ctx(2));
            assert_eq!(m.len(), 1);
            assert!(matches!(m.nodes()[0], Node::Terminal(_)));
        }
        let leaf = parse_prefix("A1", 2).unwrap();
        assert_eq!(mutate(&leaf, Operator::Trunc, &mut rng, &ctx(2)), leaf);
    }

    #[test]
    fn grow_respects_budget_and_falls_back() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut t = parse_prefix("A0", 3).unwrap();
        for _ in 0..2000 {
            t = mutate(&t, Operator::Grow, &mut rng, &ctx(3));
            assert!(validate_tree(&t, 50, 3).is_empty());
            assert!(t.metrics().depth <= 10);
        }
        // full tree: falls back to OneNode, shape unchanged
        let mut nodes = vec![Node::Function(Function::Not); 49];
        nodes.push(Node::Terminal(0));
        let full = CircuitTree::from_nodes(nodes);
        let m = mutate(&full, Operator::Grow, &mut rng, &ctx(3));
        assert_eq!(m.len(), 50);
    }

    #[test]
    fn weights_and_selection() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let only = OperatorWeights::new([1, 0, 0, 0, 0]).unwrap();
        for _ in 0..1000 {
            assert_eq!(select_operator(&only, &mut rng), Operator::OneNode);
        }
        assert_eq!(OperatorWeights::new([0; 5]), Err(ConfigError::ZeroWeights));
        let w = OperatorWeights::default().with_overrides("swap=0, Grow=7").unwrap();
        assert_eq!(w.as_array(), [100, 100, 0, 7, 100]);
        assert!(matches!(
            OperatorWeights::default().with_overrides("Shrink=1"),
            Err(ConfigError::UnknownOperator(_))
        ));
        assert!(matches!(
            OperatorWeights::default().with_overrides("Swap"),
            Err(ConfigError::BadWeight(_))
        ));
    }
}
