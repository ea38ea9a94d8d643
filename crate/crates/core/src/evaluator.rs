//! Fitness evaluation against a truth table.
//!
//! Combinational trees are evaluated bit-parallel: every node produces a whole
//! packed column with word-wide Boolean operations. Trees containing
//! flip-flops are evaluated one row per clock step, in table order, with every
//! flip-flop node starting from state 0.

use thiserror::Error;

use crate::circuit::{apply_combinational, flipflop_step, CircuitTree, Function, Node};
use crate::truth_table::{words_for, PackedColumn, TruthTable};

pub use crate::verifier::SequentialFrame;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("circuit contains flip-flops; use sequential evaluation")]
    SequentialNotAllowed,
}

/// Mismatch count of a circuit against one output column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fitness {
    pub mismatches: u64,
    pub total_rows: u64,
}

impl Fitness {
    pub fn is_correct(&self) -> bool {
        self.mismatches == 0
    }

    pub fn error_percent(&self) -> f64 {
        error_percent(*self)
    }
}

/// `100 * mismatches / total_rows`.
pub fn error_percent(f: Fitness) -> f64 {
    assert!(f.total_rows > 0, "error percent of an empty table");
    100.0 * f.mismatches as f64 / f.total_rows as f64
}

enum Operand<'a> {
    Input(&'a [u64]),
    Owned(Vec<u64>),
}

impl Operand<'_> {
    fn words(&self) -> &[u64] {
        match self {
            Operand::Input(w) => w,
            Operand::Owned(w) => w,
        }
    }
}

/// Bit-parallel evaluation of a combinational tree over every table row.
pub fn eval_packed(tree: &CircuitTree, table: &TruthTable) -> Result<PackedColumn, EvalError> {
    if tree.contains_sequential() {
        return Err(EvalError::SequentialNotAllowed);
    }
    let rows = table.n_rows();
    let n_words = words_for(rows);
    let tail = PackedColumn::tail_mask(rows);
    let inputs = table.input_columns();

    let mut stack: Vec<Operand<'_>> = Vec::new();
    let mut pool: Vec<Vec<u64>> = Vec::new();

    for node in tree.nodes().iter().rev() {
        match *node {
            Node::Terminal(i) => stack.push(Operand::Input(inputs[usize::from(i)].words())),
            Node::Function(function) => {
                let arity = function.arity();
                let mut out = pool.pop().unwrap_or_else(|| vec![0; n_words]);
                {
                    // top of stack is the first child
                    let base = stack.len() - arity;
                    let args: Vec<&[u64]> = stack[base..].iter().rev().map(Operand::words).collect();
                    combine(function, &args, &mut out);
                }
                if let Some(last) = out.last_mut() {
                    *last &= tail;
                }
                for operand in stack.drain(stack.len() - arity..) {
                    if let Operand::Owned(buf) = operand {
                        pool.push(buf);
                    }
                }
                stack.push(Operand::Owned(out));
            }
        }
    }
    let result = match stack.pop().expect("empty tree") {
        Operand::Input(words) => words.to_vec(),
        Operand::Owned(words) => words,
    };
    Ok(PackedColumn::from_words(result, rows))
}

fn combine(function: Function, args: &[&[u64]], out: &mut [u64]) {
    match function {
        Function::Not => {
            for (o, a) in out.iter_mut().zip(args[0]) {
                *o = !a;
            }
        }
        Function::Fa => {
            for ((o, a), (b, c)) in out.iter_mut().zip(args[0]).zip(args[1].iter().zip(args[2])) {
                *o = a ^ b ^ c;
            }
        }
        _ => {
            let op: fn(u64, u64) -> u64 = match function {
                Function::Or => |a, b| a | b,
                Function::And => |a, b| a & b,
                Function::Nand => |a, b| !(a & b),
                Function::Nor => |a, b| !(a | b),
                Function::Ha => |a, b| a ^ b,
                other => unreachable!("{other} has no packed form"),
            };
            for ((o, a), b) in out.iter_mut().zip(args[0]).zip(args[1]) {
                *o = op(*a, *b);
            }
        }
    }
}

/// Row-sequential evaluation: each table row is one clock edge.
pub fn eval_sequential(tree: &CircuitTree, table: &TruthTable) -> PackedColumn {
    let nodes = tree.nodes();
    // flip-flop state per node position
    let mut states = vec![false; nodes.len()];
    let mut out = PackedColumn::zeros(table.n_rows());
    let mut stack: Vec<bool> = Vec::with_capacity(nodes.len());
    let mut args: Vec<bool> = Vec::with_capacity(3);

    for row in 0..table.n_rows() {
        let combo = table.combinations()[row];
        stack.clear();
        for (pos, node) in nodes.iter().enumerate().rev() {
            match *node {
                Node::Terminal(i) => stack.push(combo >> i & 1 == 1),
                Node::Function(function) => {
                    args.clear();
                    for _ in 0..function.arity() {
                        args.push(stack.pop().expect("malformed tree"));
                    }
                    let value = if function.is_sequential() {
                        states[pos] = flipflop_step(function, states[pos], &args);
                        states[pos]
                    } else {
                        apply_combinational(function, &args)
                    };
                    stack.push(value);
                }
            }
        }
        out.set(row, stack.pop().expect("empty tree"));
    }
    out
}

/// Evaluates `tree` on every row, choosing the packed path when possible.
pub fn eval_tree(tree: &CircuitTree, table: &TruthTable) -> PackedColumn {
    match eval_packed(tree, table) {
        Ok(column) => column,
        Err(EvalError::SequentialNotAllowed) => eval_sequential(tree, table),
    }
}

/// Hamming distance between the tree's output and output column `output_index`.
pub fn fitness(tree: &CircuitTree, table: &TruthTable, output_index: usize) -> Fitness {
    let column = eval_tree(tree, table);
    Fitness {
        mismatches: column.hamming(table.output_column(output_index)),
        total_rows: table.n_rows() as u64,
    }
}
