//! Function set, parse-tree genome and prefix notation.
//!
//! A [`CircuitTree`] is stored as a flat pre-order sequence of [`Node`]s.
//! Each function node is immediately followed by its children's subtrees,
//! left to right, so a subtree always occupies a contiguous slice and
//! mutation reduces to splicing.

use std::fmt;

use thiserror::Error;

/// Whether a function is a pure gate or a memory element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    Combinational,
    Sequential,
}

/// The available gates and memory elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Function {
    Or,
    And,
    Not,
    Nand,
    Nor,
    /// Half adder, sum bit only.
    Ha,
    /// Full adder, sum bit only.
    Fa,
    Jkff,
    Rsff,
    Tff,
    Dff,
}

/// Static description of one function: name, arity and kind.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FunctionDef {
    pub function: Function,
    pub name: &'static str,
    pub arity: usize,
    pub kind: FunctionKind,
}

impl Function {
    pub const ALL: [Function; 11] = [
        Function::Or,
        Function::And,
        Function::Not,
        Function::Nand,
        Function::Nor,
        Function::Ha,
        Function::Fa,
        Function::Jkff,
        Function::Rsff,
        Function::Tff,
        Function::Dff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Function::Or => "OR",
            Function::And => "AND",
            Function::Not => "NOT",
            Function::Nand => "NAND",
            Function::Nor => "NOR",
            Function::Ha => "HA",
            Function::Fa => "FA",
            Function::Jkff => "JKFF",
            Function::Rsff => "RSFF",
            Function::Tff => "TFF",
            Function::Dff => "DFF",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Function::Not | Function::Tff | Function::Dff => 1,
            Function::Fa => 3,
            _ => 2,
        }
    }

    pub fn kind(self) -> FunctionKind {
        match self {
            Function::Jkff | Function::Rsff | Function::Tff | Function::Dff => {
                FunctionKind::Sequential
            }
            _ => FunctionKind::Combinational,
        }
    }

    pub fn is_sequential(self) -> bool {
        self.kind() == FunctionKind::Sequential
    }

    pub fn def(self) -> FunctionDef {
        FunctionDef {
            function: self,
            name: self.name(),
            arity: self.arity(),
            kind: self.kind(),
        }
    }
}

impl fmt::Display for Function {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Function {
    type Err = CircuitError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        lookup_function(s).map(|def| def.function)
    }
}

/// Looks up a function by its exact (uppercase) name.
pub fn lookup_function(name: &str) -> Result<FunctionDef, CircuitError> {
    Function::ALL
        .iter()
        .find(|f| f.name() == name)
        .map(|f| f.def())
        .ok_or_else(|| CircuitError::UnknownFunction(name.to_string()))
}

/// Evaluates a combinational function on one bit per argument.
///
/// Panics if `function` is sequential or `args.len()` differs from its arity.
pub fn apply_combinational(function: Function, args: &[bool]) -> bool {
    assert_eq!(args.len(), function.arity(), "{function}: wrong argument count");
    match function {
        Function::Or => args[0] | args[1],
        Function::And => args[0] & args[1],
        Function::Not => !args[0],
        Function::Nand => !(args[0] & args[1]),
        Function::Nor => !(args[0] | args[1]),
        Function::Ha => args[0] ^ args[1],
        Function::Fa => args[0] ^ args[1] ^ args[2],
        _ => panic!("{function} is not combinational"),
    }
}

/// Next state of a flip-flop after one clock edge.
///
/// Inputs are ordered as the function name reads: `(J, K)` for JKFF and
/// `(S, R)` for RSFF. RS with S = R = 1 resolves set-dominant. Panics on
/// combinational functions or a wrong input count.
pub fn flipflop_step(function: Function, state: bool, inputs: &[bool]) -> bool {
    assert_eq!(inputs.len(), function.arity(), "{function}: wrong input count");
    match function {
        Function::Jkff => {
            let (j, k) = (inputs[0], inputs[1]);
            (j & !state) | (!k & state)
        }
        Function::Rsff => {
            let (s, r) = (inputs[0], inputs[1]);
            s | (!r & state)
        }
        Function::Tff => inputs[0] ^ state,
        Function::Dff => inputs[0],
        _ => panic!("{function} is not a flip-flop"),
    }
}

/// One tree position: a function applied to the following subtrees, or an
/// input variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Function(Function),
    Terminal(u16),
}

impl Node {
    pub fn arity(self) -> usize {
        match self {
            Node::Function(f) => f.arity(),
            Node::Terminal(_) => 0,
        }
    }
}

/// Parse-tree genome, stored in pre-order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CircuitTree {
    nodes: Vec<Node>,
}

/// Structural problem found by [`validate_tree`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Empty,
    /// A function node has `found` children instead of its arity.
    Arity {
        position: usize,
        function: Function,
        found: usize,
    },
    /// Nodes left over after the root subtree is complete.
    TrailingNodes { count: usize },
    NodeBudget { count: usize, max: usize },
    TerminalOutOfRange { position: usize, index: u16, n_inputs: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "empty tree"),
            Violation::Arity { position, function, found } => write!(
                f,
                "node {position}: {function} expects {} children, found {found}",
                function.arity()
            ),
            Violation::TrailingNodes { count } => {
                write!(f, "{count} nodes after the end of the root subtree")
            }
            Violation::NodeBudget { count, max } => {
                write!(f, "{count} nodes exceed the budget of {max}")
            }
            Violation::TerminalOutOfRange { position, index, n_inputs } => write!(
                f,
                "node {position}: terminal A{index} out of range for {n_inputs} inputs"
            ),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeMetrics {
    pub node_count: usize,
    pub depth: usize,
    pub contains_sequential: bool,
}

impl CircuitTree {
    /// Wraps a pre-order node list without checking it. Use
    /// [`validate_tree`] before evaluating trees built this way.
    pub fn from_nodes(nodes: Vec<Node>) -> Self {
        CircuitTree { nodes }
    }

    pub fn terminal(index: u16) -> Self {
        CircuitTree {
            nodes: vec![Node::Terminal(index)],
        }
    }

    /// Builds `function(children...)`. Panics if the child count is wrong.
    pub fn apply(function: Function, children: Vec<CircuitTree>) -> Self {
        assert_eq!(children.len(), function.arity());
        let mut nodes = vec![Node::Function(function)];
        for child in children {
            nodes.extend(child.nodes);
        }
        CircuitTree { nodes }
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn into_nodes(self) -> Vec<Node> {
        self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Exclusive end of the subtree rooted at `start`.
    pub fn subtree_end(&self, start: usize) -> usize {
        let mut pending = 1usize;
        let mut i = start;
        while pending > 0 {
            pending = pending - 1 + self.nodes[i].arity();
            i += 1;
        }
        i
    }

    /// Start positions of the children of the function node at `pos`.
    pub fn children(&self, pos: usize) -> Vec<usize> {
        let arity = self.nodes[pos].arity();
        let mut out = Vec::with_capacity(arity);
        let mut next = pos + 1;
        for _ in 0..arity {
            out.push(next);
            next = self.subtree_end(next);
        }
        out
    }

    /// Returns a copy with `start..subtree_end(start)` replaced by `subtree`.
    pub fn replace_subtree(&self, start: usize, subtree: &CircuitTree) -> CircuitTree {
        let end = self.subtree_end(start);
        let mut nodes = Vec::with_capacity(self.nodes.len() - (end - start) + subtree.len());
        nodes.extend_from_slice(&self.nodes[..start]);
        nodes.extend_from_slice(&subtree.nodes);
        nodes.extend_from_slice(&self.nodes[end..]);
        CircuitTree { nodes }
    }

    /// Depth of every node (root is 1), in pre-order.
    pub fn node_depths(&self) -> Vec<usize> {
        let mut depths = Vec::with_capacity(self.nodes.len());
        // remaining child slots per open ancestor
        let mut open: Vec<usize> = Vec::new();
        for node in &self.nodes {
            depths.push(open.len() + 1);
            if let Some(top) = open.last_mut() {
                *top -= 1;
            }
            let arity = node.arity();
            if arity > 0 {
                open.push(arity);
            }
            while open.last() == Some(&0) {
                open.pop();
            }
        }
        depths
    }

    pub fn metrics(&self) -> TreeMetrics {
        tree_metrics(self)
    }

    pub fn contains_sequential(&self) -> bool {
        self.nodes
            .iter()
            .any(|n| matches!(n, Node::Function(f) if f.is_sequential()))
    }

    /// Largest terminal index referenced, if any.
    pub fn max_terminal(&self) -> Option<u16> {
        self.nodes
            .iter()
            .filter_map(|n| match n {
                Node::Terminal(i) => Some(*i),
                Node::Function(_) => None,
            })
            .max()
    }
}

impl fmt::Display for CircuitTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&to_prefix(self))
    }
}

/// Reports every structural violation of `tree`. An empty list means valid.
pub fn validate_tree(tree: &CircuitTree, max_nodes: usize, n_inputs: usize) -> Vec<Violation> {
    let mut violations = Vec::new();
    let nodes = tree.nodes();
    if nodes.is_empty() {
        violations.push(Violation::Empty);
        return violations;
    }
    if nodes.len() > max_nodes {
        violations.push(Violation::NodeBudget {
            count: nodes.len(),
            max: max_nodes,
        });
    }
    for (position, node) in nodes.iter().enumerate() {
        if let Node::Terminal(index) = *node {
            if usize::from(index) >= n_inputs {
                violations.push(Violation::TerminalOutOfRange {
                    position,
                    index,
                    n_inputs,
                });
            }
        }
    }

    // Walk the pre-order sequence keeping a stack of (position, children
    // still expected). Anything left open at the end is short of children.
    let mut open: Vec<(usize, usize)> = Vec::new();
    let mut root_closed_at = None;
    for (position, node) in nodes.iter().enumerate() {
        if root_closed_at.is_some() {
            break;
        }
        if let Some(top) = open.last_mut() {
            top.1 -= 1;
        }
        let arity = node.arity();
        if arity > 0 {
            open.push((position, arity));
        }
        while open.last().is_some_and(|&(_, left)| left == 0) {
            open.pop();
        }
        if open.is_empty() {
            root_closed_at = Some(position + 1);
        }
    }
    for (position, left) in open.into_iter().rev() {
        if let Node::Function(function) = nodes[position] {
            violations.push(Violation::Arity {
                position,
                function,
                found: function.arity() - left,
            });
        }
    }
    if let Some(end) = root_closed_at {
        if end < nodes.len() {
            violations.push(Violation::TrailingNodes {
                count: nodes.len() - end,
            });
        }
    }
    violations
}

pub fn tree_metrics(tree: &CircuitTree) -> TreeMetrics {
    TreeMetrics {
        node_count: tree.len(),
        depth: tree.node_depths().into_iter().max().unwrap_or(0),
        contains_sequential: tree.contains_sequential(),
    }
}

/// Default variable names `A0..A{n-1}`, indexed by variable.
pub fn default_names(n_inputs: usize) -> Vec<String> {
    (0..n_inputs).map(|i| format!("A{i}")).collect()
}

/// Renders `tree` in parenthesized prefix notation with `A<i>` terminals.
pub fn to_prefix(tree: &CircuitTree) -> String {
    let n = tree.max_terminal().map_or(0, |m| usize::from(m) + 1);
    to_prefix_with_names(tree, &default_names(n))
}

/// Renders `tree` in prefix notation using `names[i]` for terminal `i`.
pub fn to_prefix_with_names(tree: &CircuitTree, names: &[String]) -> String {
    fn emit(tree: &CircuitTree, pos: usize, names: &[String], out: &mut String) -> usize {
        match tree.nodes()[pos] {
            Node::Terminal(i) => {
                match names.get(usize::from(i)) {
                    Some(name) => out.push_str(name),
                    None => {
                        out.push('A');
                        out.push_str(&i.to_string());
                    }
                }
                pos + 1
            }
            Node::Function(f) => {
                out.push('(');
                out.push_str(f.name());
                let mut next = pos + 1;
                for _ in 0..f.arity() {
                    out.push(' ');
                    next = emit(tree, next, names, out);
                }
                out.push(')');
                next
            }
        }
    }
    let mut out = String::new();
    if !tree.is_empty() {
        emit(tree, 0, names, &mut out);
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CircuitError {
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("{function} expects {expected} arguments, found {found}")]
    Arity {
        function: Function,
        expected: usize,
        found: usize,
    },
}

/// Parses prefix notation over the default variables `A0..A{n-1}`.
pub fn parse_prefix(text: &str, n_inputs: usize) -> Result<CircuitTree, CircuitError> {
    parse_prefix_with_names(text, &default_names(n_inputs))
}

/// Parses prefix notation where terminal `i` is spelled `names[i]`.
pub fn parse_prefix_with_names(text: &str, names: &[String]) -> Result<CircuitTree, CircuitError> {
    let tokens = tokenize(text);
    let mut parser = Parser {
        tokens: &tokens,
        pos: 0,
        names,
        nodes: Vec::new(),
        text_len: text.len(),
    };
    parser.expr()?;
    if let Some(tok) = parser.tokens.get(parser.pos) {
        return Err(CircuitError::Syntax {
            offset: tok.offset,
            message: format!("unexpected `{}` after expression", tok.text),
        });
    }
    Ok(CircuitTree { nodes: parser.nodes })
}

struct Token<'a> {
    text: &'a str,
    offset: usize,
}

fn tokenize(text: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push(Token { text: &text[s..i], offset: s });
            }
            if !c.is_whitespace() {
                tokens.push(Token { text: &text[i..i + 1], offset: i });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push(Token { text: &text[s..], offset: s });
    }
    tokens
}

struct Parser<'a, 'n> {
    tokens: &'a [Token<'a>],
    pos: usize,
    names: &'n [String],
    nodes: Vec<Node>,
    text_len: usize,
}

impl Parser<'_, '_> {
    fn syntax(&self, message: impl Into<String>) -> CircuitError {
        let offset = self
            .tokens
            .get(self.pos)
            .map_or(self.text_len, |t| t.offset);
        CircuitError::Syntax {
            offset,
            message: message.into(),
        }
    }

    fn expr(&mut self) -> Result<(), CircuitError> {
        let Some(tok) = self.tokens.get(self.pos) else {
            return Err(self.syntax("unexpected end of input"));
        };
        match tok.text {
            ")" => Err(self.syntax("unexpected `)`")),
            "(" => {
                self.pos += 1;
                let Some(head) = self.tokens.get(self.pos) else {
                    return Err(self.syntax("unexpected end of input"));
                };
                if head.text == "(" || head.text == ")" {
                    return Err(self.syntax("expected a function name"));
                }
                let function = lookup_function(head.text)?.function;
                self.pos += 1;
                self.nodes.push(Node::Function(function));
                let mut found = 0;
                loop {
                    match self.tokens.get(self.pos).map(|t| t.text) {
                        None => return Err(self.syntax("missing `)`")),
                        Some(")") => {
                            self.pos += 1;
                            break;
                        }
                        Some(_) => {
                            self.expr()?;
                            found += 1;
                        }
                    }
                }
                if found != function.arity() {
                    return Err(CircuitError::Arity {
                        function,
                        expected: function.arity(),
                        found,
                    });
                }
                Ok(())
            }
            word => {
                let index = self
                    .names
                    .iter()
                    .position(|n| n == word)
                    .ok_or_else(|| {
                        if lookup_function(word).is_ok() {
                            self.syntax(format!("function `{word}` must be parenthesized"))
                        } else {
                            CircuitError::UnknownVariable(word.to_string())
                        }
                    })?;
                let index = u16::try_from(index)
                    .map_err(|_| CircuitError::UnknownVariable(word.to_string()))?;
                self.pos += 1;
                self.nodes.push(Node::Terminal(index));
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOLDEN: &str = "(AND (OR A0 A2) (OR A2 A1))";

    #[test]
    fn lookup_matches_function_table() {
        let and = lookup_function("AND").unwrap();
        assert_eq!((and.arity, and.kind), (2, FunctionKind::Combinational));
        let fa = lookup_function("FA").unwrap();
        assert_eq!((fa.arity, fa.kind), (3, FunctionKind::Combinational));
        assert_eq!(
            lookup_function("XOR"),
            Err(CircuitError::UnknownFunction("XOR".into()))
        );
        assert!(lookup_function("and").is_err());

        for f in Function::ALL {
            let expected_arity = match f.name() {
                "NOT" | "TFF" | "DFF" => 1,
                "FA" => 3,
                _ => 2,
            };
            assert_eq!(f.arity(), expected_arity, "{f}");
            let seq = matches!(f.name(), "JKFF" | "RSFF" | "TFF" | "DFF");
            assert_eq!(f.is_sequential(), seq, "{f}");
        }
    }

    #[test]
    fn combinational_examples() {
        assert!(apply_combinational(Function::And, &[true, true]));
        assert!(!apply_combinational(Function::Ha, &[true, true]));
        assert!(apply_combinational(Function::Fa, &[true, true, true]));
    }

    // Truth tables written out by hand, indexed by args as a binary number
    // with the first argument most significant.
    #[test]
    fn combinational_matches_lookup_tables() {
        let tables: [(Function, &[u8]); 7] = [
            (Function::Or, &[0, 1, 1, 1]),
            (Function::And, &[0, 0, 0, 1]),
            (Function::Not, &[1, 0]),
            (Function::Nand, &[1, 1, 1, 0]),
            (Function::Nor, &[1, 0, 0, 0]),
            (Function::Ha, &[0, 1, 1, 0]),
            (Function::Fa, &[0, 1, 1, 0, 1, 0, 0, 1]),
        ];
        for (f, table) in tables {
            let arity = f.arity();
            assert_eq!(table.len(), 1 << arity);
            for (combo, &expected) in table.iter().enumerate() {
                let args: Vec<bool> = (0..arity)
                    .map(|k| combo >> (arity - 1 - k) & 1 == 1)
                    .collect();
                assert_eq!(apply_combinational(f, &args), expected == 1, "{f} {args:?}");
            }
        }
    }

    #[test]
    fn adders_are_modulo_two_sums() {
        for a in 0..2u8 {
            for b in 0..2u8 {
                let bits = [a == 1, b == 1];
                assert_eq!(apply_combinational(Function::Ha, &bits), (a + b) % 2 == 1);
                for c in 0..2u8 {
                    let bits = [a == 1, b == 1, c == 1];
                    assert_eq!(
                        apply_combinational(Function::Fa, &bits),
                        (a + b + c) % 2 == 1
                    );
                }
            }
        }
    }

    #[test]
    fn flipflop_examples() {
        assert!(flipflop_step(Function::Jkff, false, &[true, true]));
        assert!(!flipflop_step(Function::Tff, true, &[true]));
        assert!(!flipflop_step(Function::Dff, true, &[false]));
        // set-dominant RS
        assert!(flipflop_step(Function::Rsff, false, &[true, true]));
        assert!(flipflop_step(Function::Rsff, true, &[true, true]));
    }

    #[test]
    fn flipflops_total_over_all_states() {
        // (state, inputs...) -> next, from the classic excitation tables.
        let jk = |q: bool, j: bool, k: bool| match (j, k) {
            (false, false) => q,
            (false, true) => false,
            (true, false) => true,
            (true, true) => !q,
        };
        let rs = |q: bool, s: bool, r: bool| match (s, r) {
            (false, false) => q,
            (false, true) => false,
            (true, _) => true,
        };
        for q in [false, true] {
            for a in [false, true] {
                assert_eq!(flipflop_step(Function::Dff, q, &[a]), a);
                assert_eq!(flipflop_step(Function::Tff, q, &[a]), if a { !q } else { q });
                for b in [false, true] {
                    assert_eq!(flipflop_step(Function::Jkff, q, &[a, b]), jk(q, a, b));
                    assert_eq!(flipflop_step(Function::Rsff, q, &[a, b]), rs(q, a, b));
                    // repeatable
                    assert_eq!(
                        flipflop_step(Function::Jkff, q, &[a, b]),
                        flipflop_step(Function::Jkff, q, &[a, b])
                    );
                }
            }
        }
    }

    #[test]
    fn validate_examples() {
        assert!(validate_tree(&CircuitTree::terminal(0), 50, 3).is_empty());

        let short = CircuitTree::from_nodes(vec![Node::Function(Function::And), Node::Terminal(0)]);
        assert_eq!(
            validate_tree(&short, 50, 3),
            vec![Violation::Arity {
                position: 0,
                function: Function::And,
                found: 1
            }]
        );

        // 25 NOTs over a terminal plus... make exactly 51 nodes
        let mut nodes = vec![Node::Function(Function::Not); 50];
        nodes.push(Node::Terminal(0));
        let long = CircuitTree::from_nodes(nodes);
        assert_eq!(
            validate_tree(&long, 50, 3),
            vec![Violation::NodeBudget { count: 51, max: 50 }]
        );

        let out_of_range = parse_prefix("(NOT A2)", 3).unwrap();
        assert_eq!(
            validate_tree(&out_of_range, 50, 2),
            vec![Violation::TerminalOutOfRange {
                position: 1,
                index: 2,
                n_inputs: 2
            }]
        );

        let trailing = CircuitTree::from_nodes(vec![Node::Terminal(0), Node::Terminal(1)]);
        assert_eq!(
            validate_tree(&trailing, 50, 3),
            vec![Violation::TrailingNodes { count: 1 }]
        );
        assert_eq!(
            validate_tree(&CircuitTree::from_nodes(vec![]), 50, 3),
            vec![Violation::Empty]
        );
    }

    #[test]
    fn nested_arity_violations_are_all_reported() {
        let tree = CircuitTree::from_nodes(vec![
            Node::Function(Function::And),
            Node::Function(Function::Fa),
            Node::Terminal(0),
        ]);
        let v = validate_tree(&tree, 50, 3);
        assert_eq!(v.len(), 2);
        assert!(v.contains(&Violation::Arity { position: 0, function: Function::And, found: 1 }));
        assert!(v.contains(&Violation::Arity { position: 1, function: Function::Fa, found: 1 }));
    }

    #[test]
    fn prefix_golden() {
        let tree = CircuitTree::apply(
            Function::And,
            vec![
                CircuitTree::apply(Function::Or, vec![CircuitTree::terminal(0), CircuitTree::terminal(2)]),
                CircuitTree::apply(Function::Or, vec![CircuitTree::terminal(2), CircuitTree::terminal(1)]),
            ],
        );
        assert_eq!(to_prefix(&tree), GOLDEN);
        assert_eq!(parse_prefix(GOLDEN, 3).unwrap(), tree);
        assert_eq!(tree.len(), 7);
        assert_eq!(to_prefix(&CircuitTree::terminal(0)), "A0");
        assert_eq!(to_prefix(&parse_prefix("(NOT A1)", 2).unwrap()), "(NOT A1)");
    }

    #[test]
    fn parse_errors() {
        assert_eq!(
            parse_prefix("(AND A0)", 3),
            Err(CircuitError::Arity { function: Function::And, expected: 2, found: 1 })
        );
        assert_eq!(
            parse_prefix("(AND A0 A5)", 3),
            Err(CircuitError::UnknownVariable("A5".into()))
        );
        assert_eq!(
            parse_prefix("(XOR A0 A1)", 3),
            Err(CircuitError::UnknownFunction("XOR".into()))
        );
        for bad in ["", "(", ")", "(AND A0 A1", "(AND A0 A1))", "A0 A1", "((AND) A0)", "AND", "()"] {
            assert!(
                matches!(parse_prefix(bad, 3), Err(CircuitError::Syntax { .. })),
                "{bad:?} -> {:?}",
                parse_prefix(bad, 3)
            );
        }
    }

    #[test]
    fn parse_tolerates_whitespace() {
        let t = parse_prefix("  (AND\n\t(OR A0 A2)(OR   A2 A1) ) ", 3).unwrap();
        assert_eq!(to_prefix(&t), GOLDEN);
    }

    #[test]
    fn custom_names() {
        let names: Vec<String> = ["x", "y"].iter().map(|s| s.to_string()).collect();
        let t = parse_prefix_with_names("(NAND x y)", &names).unwrap();
        assert_eq!(t.nodes(), &[Node::Function(Function::Nand), Node::Terminal(0), Node::Terminal(1)]);
        assert_eq!(to_prefix_with_names(&t, &names), "(NAND x y)");
    }

    #[test]
    fn metrics_examples() {
        let m = tree_metrics(&parse_prefix("A0", 1).unwrap());
        assert_eq!((m.node_count, m.depth, m.contains_sequential), (1, 1, false));
        let m = tree_metrics(&parse_prefix(GOLDEN, 3).unwrap());
        assert_eq!((m.node_count, m.depth, m.contains_sequential), (7, 3, false));
        let m = tree_metrics(&parse_prefix("(DFF A0)", 1).unwrap());
        assert_eq!((m.node_count, m.depth, m.contains_sequential), (2, 2, true));
    }

    #[test]
    fn subtree_helpers() {
        let t = parse_prefix(GOLDEN, 3).unwrap();
        assert_eq!(t.subtree_end(0), 7);
        assert_eq!(t.children(0), vec![1, 4]);
        assert_eq!(t.subtree_end(4), 7);
        let r = t.replace_subtree(1, &CircuitTree::terminal(1));
        assert_eq!(to_prefix(&r), "(AND A1 (OR A2 A1))");
        assert_eq!(t.node_depths(), vec![1, 2, 3, 3, 2, 3, 3]);
    }
}
