//! Exhaustive circuit verification.
//!
//! This is a direct row-at-a-time interpreter over the tree. It carries its
//! own gate and flip-flop semantics and does not call into [`crate::evaluator`]
//! or the gate helpers in [`crate::circuit`], so it can serve as an oracle for
//! both.

use std::collections::HashMap;
use std::fmt;

use crate::circuit::{CircuitTree, Function, Node};
use crate::truth_table::{format_assignment, TruthTable};

/// Flip-flop states of one evaluation, keyed by node position in the tree.
/// Absent entries read as 0.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SequentialFrame {
    states: HashMap<usize, bool>,
}

impl SequentialFrame {
    pub fn state(&self, node: usize) -> bool {
        self.states.get(&node).copied().unwrap_or(false)
    }

    pub fn set_state(&mut self, node: usize, value: bool) {
        self.states.insert(node, value);
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Correct,
    /// `row` is the first failing table row; `inputs` is its assignment by
    /// variable index.
    Wrong { row: usize, inputs: Vec<bool> },
}

impl Verdict {
    pub fn is_correct(&self) -> bool {
        matches!(self, Verdict::Correct)
    }

    /// First failing combination, most significant input first.
    pub fn failing_combination(&self) -> Option<String> {
        match self {
            Verdict::Correct => None,
            Verdict::Wrong { inputs, .. } => Some(format_assignment(inputs)),
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Correct => f.write_str("Correct"),
            Verdict::Wrong { inputs, .. } => write!(f, "Wrong at {}", format_assignment(inputs)),
        }
    }
}

/// Evaluates `tree` for one input assignment (by variable index), stepping
/// and updating any flip-flops in `frame`.
///
/// Panics if a terminal indexes past `assignment`.
pub fn naive_eval_row(tree: &CircuitTree, assignment: &[bool], frame: &mut SequentialFrame) -> bool {
    let (value, _) = eval_at(tree.nodes(), 0, assignment, frame);
    value
}

fn eval_at(nodes: &[Node], pos: usize, assignment: &[bool], frame: &mut SequentialFrame) -> (bool, usize) {
    match nodes[pos] {
        Node::Terminal(i) => (assignment[usize::from(i)], pos + 1),
        Node::Function(function) => {
            let mut args = [false; 3];
            let mut next = pos + 1;
            for slot in args.iter_mut().take(function.arity()) {
                let (v, after) = eval_at(nodes, next, assignment, frame);
                *slot = v;
                next = after;
            }
            let [a, b, c] = args;
            let out = match function {
                Function::Or => a || b,
                Function::And => a && b,
                Function::Not => !a,
                Function::Nand => !(a && b),
                Function::Nor => !(a || b),
                Function::Ha => a != b,
                Function::Fa => (u8::from(a) + u8::from(b) + u8::from(c)) % 2 == 1,
                Function::Jkff | Function::Rsff | Function::Tff | Function::Dff => {
                    let q = frame.state(pos);
                    let next_q = match function {
                        Function::Jkff => match (a, b) {
                            (false, false) => q,
                            (false, true) => false,
                            (true, false) => true,
                            (true, true) => !q,
                        },
                        Function::Rsff => match (a, b) {
                            (true, _) => true,
                            (false, true) => false,
                            (false, false) => q,
                        },
                        Function::Tff => {
                            if a {
                                !q
                            } else {
                                q
                            }
                        }
                        _ => a,
                    };
                    frame.set_state(pos, next_q);
                    next_q
                }
            };
            (out, next)
        }
    }
}

/// Checks `tree` against output `output_index` on every row of `table`, in
/// row order, from an all-zero flip-flop state.
pub fn verify_circuit(tree: &CircuitTree, table: &TruthTable, output_index: usize) -> Verdict {
    let mut frame = SequentialFrame::default();
    for row in 0..table.n_rows() {
        let inputs = table.row_inputs(row);
        let desired = table.row_outputs(row)[output_index];
        let measured = naive_eval_row(tree, &inputs, &mut frame);
        if measured != desired {
            return Verdict::Wrong { row, inputs };
        }
    }
    Verdict::Correct
}
