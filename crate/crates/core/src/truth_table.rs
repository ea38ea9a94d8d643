//! Truth tables and their bit-packed columns.
//!
//! Variables are indexed so that variable `i` is bit `i` of a row's
//! combination number. The file header lists inputs most significant first,
//! so for `inputs: A2 A1 A0` the terminal `A0` is variable 0.
//!
//! File format:
//!
//! ```text
//! # comment
//! inputs: A2 A1 A0
//! outputs: F
//! 011 1
//! ```
//!
//! Each row holds the input bits in header order followed by the output bits.
//! Whitespace between bits is optional. Rows may appear in any order; the
//! order is kept because it is the clock sequence for sequential circuits.

use std::fmt;

use thiserror::Error;

use crate::circuit::{default_names, CircuitTree};
use crate::verifier;

/// Largest input count accepted by [`parse_table`].
pub const DEFAULT_MAX_INPUTS: usize = 20;

const WORD_BITS: usize = 64;

/// A column of bits, one per table row, packed into 64-bit words.
/// Bits at positions `>= len` are always zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PackedColumn {
    words: Vec<u64>,
    len: usize,
}

impl PackedColumn {
    pub fn zeros(len: usize) -> Self {
        PackedColumn {
            words: vec![0; words_for(len)],
            len,
        }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % WORD_BITS == 0 {
                words.push(0);
            }
            if bit {
                words[len / WORD_BITS] |= 1 << (len % WORD_BITS);
            }
            len += 1;
        }
        PackedColumn { words, len }
    }

    /// Builds a column from raw words, clearing any bits past `len`.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(words_for(len), 0);
        let mut col = PackedColumn { words, len };
        col.mask_tail();
        col
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for column of {}", self.len);
        self.words[i / WORD_BITS] >> (i % WORD_BITS) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for column of {}", self.len);
        let mask = 1u64 << (i % WORD_BITS);
        if value {
            self.words[i / WORD_BITS] |= mask;
        } else {
            self.words[i / WORD_BITS] &= !mask;
        }
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Number of positions where `self` and `other` differ.
    pub fn hamming(&self, other: &PackedColumn) -> u64 {
        assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| u64::from((a ^ b).count_ones()))
            .sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    /// Mask of valid bits in the last word.
    pub fn tail_mask(len: usize) -> u64 {
        match len % WORD_BITS {
            0 => u64::MAX,
            r => (1u64 << r) - 1,
        }
    }

    fn mask_tail(&mut self) {
        if let Some(last) = self.words.last_mut() {
            *last &= Self::tail_mask(self.len);
        }
    }
}

pub(crate) fn words_for(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

/// Complete truth table over `n` inputs and `m` outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    /// Names by variable index (index 0 = least significant header column).
    input_names: Vec<String>,
    output_names: Vec<String>,
    /// Combination number of each row, in row order.
    combinations: Vec<u32>,
    input_columns: Vec<PackedColumn>,
    output_columns: Vec<PackedColumn>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing input combination {0}")]
    MissingCombination(String),
    #[error("line {line}: duplicate input combination {combination}")]
    DuplicateCombination { line: usize, combination: String },
    #[error("line {line}: expected {expected} bits, found {found}")]
    WidthMismatch {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("{n} inputs exceed the limit of {limit}")]
    TooManyInputs { n: usize, limit: usize },
    #[error("circuit contains flip-flops; a combinational circuit is required")]
    SequentialNotAllowed,
}

impl TruthTable {
    /// Builds a table from rows of `(combination, outputs)`, where
    /// `combination` bit `i` is variable `i`. Validates completeness.
    pub fn from_rows(
        input_names: Vec<String>,
        output_names: Vec<String>,
        rows: Vec<(u32, Vec<bool>)>,
    ) -> Result<Self, TableError> {
        let n = input_names.len();
        let m = output_names.len();
        if n == 0 || m == 0 {
            return Err(TableError::Syntax {
                line: 0,
                message: "a table needs at least one input and one output".into(),
            });
        }
        if n > 31 {
            return Err(TableError::TooManyInputs { n, limit: 31 });
        }
        let total = 1usize << n;
        let mut seen = vec![false; total];
        for (line, (combo, outs)) in rows.iter().enumerate() {
            if *combo as usize >= total {
                return Err(TableError::WidthMismatch { line: line + 1, expected: n, found: 32 - combo.leading_zeros() as usize });
            }
            if outs.len() != m {
                return Err(TableError::WidthMismatch { line: line + 1, expected: m, found: outs.len() });
            }
            if std::mem::replace(&mut seen[*combo as usize], true) {
                return Err(TableError::DuplicateCombination {
                    line: line + 1,
                    combination: format_combination(*combo, n),
                });
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(TableError::MissingCombination(format_combination(missing as u32, n)));
        }
        let combinations: Vec<u32> = rows.iter().map(|(c, _)| *c).collect();
        let output_columns = (0..m)
            .map(|j| PackedColumn::from_bits(rows.iter().map(|(_, o)| o[j])))
            .collect();
        Ok(Self::assemble(input_names, output_names, combinations, output_columns))
    }

    fn assemble(
        input_names: Vec<String>,
        output_names: Vec<String>,
        combinations: Vec<u32>,
        output_columns: Vec<PackedColumn>,
    ) -> Self {
        let mut table = TruthTable {
            input_names,
            output_names,
            combinations,
            input_columns: Vec::new(),
            output_columns,
        };
        table.input_columns = pack_columns(&table);
        table
    }

    pub fn n_inputs(&self) -> usize {
        self.input_names.len()
    }

    pub fn n_outputs(&self) -> usize {
        self.output_names.len()
    }

    pub fn n_rows(&self) -> usize {
        self.combinations.len()
    }

    /// Input names by variable index.
    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    /// Input names in header order, most significant first.
    pub fn header_input_names(&self) -> Vec<&str> {
        self.input_names.iter().rev().map(String::as_str).collect()
    }

    pub fn output_names(&self) -> &[String] {
        &self.output_names
    }

    pub fn output_index(&self, name: &str) -> Option<usize> {
        self.output_names.iter().position(|n| n == name)
    }

    /// Combination number of each row, in row order.
    pub fn combinations(&self) -> &[u32] {
        &self.combinations
    }

    /// Input assignment of `row`, by variable index.
    pub fn row_inputs(&self, row: usize) -> Vec<bool> {
        let combo = self.combinations[row];
        (0..self.n_inputs()).map(|i| combo >> i & 1 == 1).collect()
    }

    pub fn row_outputs(&self, row: usize) -> Vec<bool> {
        self.output_columns.iter().map(|c| c.get(row)).collect()
    }

    /// All rows as `(inputs by variable index, outputs)`.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<bool>, Vec<bool>)> + '_ {
        (0..self.n_rows()).map(|r| (self.row_inputs(r), self.row_outputs(r)))
    }

    pub fn input_column(&self, var: usize) -> &PackedColumn {
        &self.input_columns[var]
    }

    pub fn input_columns(&self) -> &[PackedColumn] {
        &self.input_columns
    }

    pub fn output_column(&self, output: usize) -> &PackedColumn {
        &self.output_columns[output]
    }

    /// Renders the combination of `row` in header order, e.g. `011`.
    pub fn combination_text(&self, row: usize) -> String {
        format_combination(self.combinations[row], self.n_inputs())
    }
}

/// Formats a combination number as `n` bits, most significant first.
pub fn format_combination(combo: u32, n: usize) -> String {
    (0..n)
        .rev()
        .map(|i| if combo >> i & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Formats an assignment (by variable index) most significant first.
pub fn format_assignment(bits: &[bool]) -> String {
    bits.iter().rev().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Builds one packed column per input variable, bit `r` = value in row `r`.
pub fn pack_columns(table: &TruthTable) -> Vec<PackedColumn> {
    (0..table.n_inputs())
        .map(|var| PackedColumn::from_bits(table.combinations.iter().map(|c| c >> var & 1 == 1)))
        .collect()
}

pub fn parse_table(text: &str) -> Result<TruthTable, TableError> {
    parse_table_with_limit(text, DEFAULT_MAX_INPUTS)
}

pub fn parse_table_with_limit(text: &str, max_inputs: usize) -> Result<TruthTable, TableError> {
    let mut inputs: Option<Vec<String>> = None;
    let mut outputs: Option<Vec<String>> = None;
    let mut rows: Vec<(u32, Vec<bool>)> = Vec::new();
    let mut row_lines: Vec<usize> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if inputs.is_none() {
            let names = header(content, "inputs:", line)?;
            if names.len() > max_inputs {
                return Err(TableError::TooManyInputs { n: names.len(), limit: max_inputs });
            }
            inputs = Some(names);
            continue;
        }
        if outputs.is_none() {
            outputs = Some(header(content, "outputs:", line)?);
            continue;
        }
        let n = inputs.as_ref().map_or(0, Vec::len);
        let m = outputs.as_ref().map_or(0, Vec::len);
        let mut bits = Vec::with_capacity(n + m);
        for c in content.chars().filter(|c| !c.is_whitespace()) {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(TableError::Syntax {
                        line,
                        message: format!("unexpected character `{other}` in row"),
                    })
                }
            }
        }
        if bits.len() != n + m {
            return Err(TableError::WidthMismatch { line, expected: n + m, found: bits.len() });
        }
        let combo = bits[..n].iter().fold(0u32, |acc, &b| acc << 1 | u32::from(b));
        rows.push((combo, bits[n..].to_vec()));
        row_lines.push(line);
    }

    let Some(header_inputs) = inputs else {
        return Err(TableError::Syntax { line: 1, message: "missing `inputs:` header".into() });
    };
    let Some(output_names) = outputs else {
        return Err(TableError::Syntax { line: 2, message: "missing `outputs:` header".into() });
    };
    let input_names: Vec<String> = header_inputs.into_iter().rev().collect();
    TruthTable::from_rows(input_names, output_names, rows).map_err(|e| match e {
        // report file lines instead of row positions
        TableError::DuplicateCombination { line, combination } => TableError::DuplicateCombination {
            line: row_lines[line - 1],
            combination,
        },
        TableError::WidthMismatch { line, expected, found } if line > 0 => TableError::WidthMismatch {
            line: row_lines[line - 1],
            expected,
            found,
        },
        other => other,
    })
}

fn header(content: &str, key: &str, line: usize) -> Result<Vec<String>, TableError> {
    let rest = content.strip_prefix(key).ok_or_else(|| TableError::Syntax {
        line,
        message: format!("expected `{key}` header"),
    })?;
    let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    if names.is_empty() {
        return Err(TableError::Syntax { line, message: format!("`{key}` lists no names") });
    }
    for (i, name) in names.iter().enumerate() {
        if names[..i].contains(name) {
            return Err(TableError::Syntax { line, message: format!("duplicate name `{name}`") });
        }
        if name.contains(['(', ')']) {
            return Err(TableError::Syntax { line, message: format!("invalid name `{name}`") });
        }
    }
    Ok(names)
}

/// Writes `table` in the text format accepted by [`parse_table`].
pub fn serialize_table(table: &TruthTable) -> String {
    table.to_string()
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs: {}", self.header_input_names().join(" "))?;
        writeln!(f, "outputs: {}", self.output_names.join(" "))?;
        for row in 0..self.n_rows() {
            let outs: String = self
                .output_columns
                .iter()
                .map(|c| if c.get(row) { '1' } else { '0' })
                .collect();
            writeln!(f, "{} {}", self.combination_text(row), outs)?;
        }
        Ok(())
    }
}

/// Canonical table of `tree` over `n_inputs` variables named `A{n-1}..A0`,
/// rows in ascending binary order, single output `F`.
pub fn table_from_expression(tree: &CircuitTree, n_inputs: usize) -> Result<TruthTable, TableError> {
    if tree.contains_sequential() {
        return Err(TableError::SequentialNotAllowed);
    }
    if n_inputs > 31 {
        return Err(TableError::TooManyInputs { n: n_inputs, limit: 31 });
    }
    let total = 1u32 << n_inputs;
    let rows = (0..total)
        .map(|combo| {
            let assignment: Vec<bool> = (0..n_inputs).map(|i| combo >> i & 1 == 1).collect();
            let mut frame = verifier::SequentialFrame::default();
            let out = verifier::naive_eval_row(tree, &assignment, &mut frame);
            (combo, vec![out])
        })
        .collect();
    TruthTable::from_rows(default_names(n_inputs), vec!["F".to_string()], rows)
}
