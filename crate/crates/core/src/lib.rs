//! Evolutionary synthesis of digital circuits from truth tables.
//!
//! Circuits are parse trees over a small set of gates, adders and
//! flip-flops. A mutation-only genetic program evolves one tree per output
//! column, scoring candidates by the number of truth-table rows they get
//! wrong, and every champion is re-checked by an exhaustive interpreter that
//! shares no code with the fitness evaluator.
//!
//! ```
//! use circuit_gp::circuit::parse_prefix;
//! use circuit_gp::evaluator::fitness;
//! use circuit_gp::truth_table::parse_table;
//! use circuit_gp::verifier::verify_circuit;
//!
//! let table = parse_table("inputs: A1 A0\noutputs: F\n00 0\n01 1\n10 1\n11 0\n").unwrap();
//! let tree = parse_prefix("(HA A0 A1)", 2).unwrap();
//! assert_eq!(fitness(&tree, &table, 0).mismatches, 0);
//! assert!(verify_circuit(&tree, &table, 0).is_correct());
//! ```

pub mod circuit;
pub mod cli;
pub mod evaluator;
pub mod evolution;
pub mod report;
pub mod truth_table;
pub mod verifier;

pub use circuit::{CircuitTree, Function, Node};
pub use evaluator::Fitness;
pub use evolution::{EvolutionConfig, RunResult};
pub use truth_table::TruthTable;
pub use verifier::Verdict;

/// The 3-input sample table shipped with the crate.
pub const SAMPLE_TABLE: &str = include_str!("../data/table3.tt");
