//! Exporters: Graphviz DOT diagrams and convergence CSV.

use std::fmt::Write as _;
use std::io::{self, Write};

use crate::circuit::{CircuitTree, Node};
use crate::evolution::GenerationStats;

pub const CSV_HEADER: &str = "generation,best_error_pct,mean_error_pct,best_mismatches";

/// Renders `tree` as a DOT digraph. Nodes are numbered in pre-order and
/// edges run from each child to its parent.
pub fn export_dot(tree: &CircuitTree, names: &[String]) -> String {
    let mut out = String::from("digraph circuit {\n  rankdir=BT;\n");
    for (i, node) in tree.nodes().iter().enumerate() {
        match *node {
            Node::Function(f) => {
                let _ = writeln!(out, "  n{i} [label=\"{}\", shape=box];", f.name());
            }
            Node::Terminal(t) => {
                let label = names
                    .get(usize::from(t))
                    .cloned()
                    .unwrap_or_else(|| format!("A{t}"));
                let _ = writeln!(out, "  n{i} [label=\"{}\", shape=plaintext];", escape(&label));
            }
        }
    }
    for (i, node) in tree.nodes().iter().enumerate() {
        if let Node::Function(_) = node {
            for child in tree.children(i) {
                let _ = writeln!(out, "  n{child} -> n{i};");
            }
        }
    }
    out.push_str("}\n");
    out
}

fn escape(label: &str) -> String {
    label.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Writes one CSV row per generation under [`CSV_HEADER`].
pub fn write_convergence_csv<W: Write>(history: &[GenerationStats], mut out: W) -> io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for g in history {
        writeln!(
            out,
            "{},{:.4},{:.4},{}",
            g.generation, g.best_error_pct, g.mean_error_pct, g.best_mismatches
        )?;
    }
    Ok(())
}

pub fn convergence_csv(history: &[GenerationStats]) -> String {
    let mut buf = Vec::new();
    write_convergence_csv(history, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("ascii output")
}
