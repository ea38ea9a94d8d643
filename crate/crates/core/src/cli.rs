//! Command-line front end.
//!
//! Exit statuses: 0 when every output is solved (or the circuit verifies),
//! 1 when something is unsolved or wrong, 2 on usage, I/O or parse errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::circuit::{
    default_names, parse_prefix_with_names, to_prefix_with_names, CircuitError, CircuitTree, Function,
};
use crate::evolution::{run_trials_with, ConfigError, EvolutionConfig, OperatorWeights};
use crate::report::{convergence_csv, export_dot};
use crate::truth_table::{parse_table, TableError, TruthTable, DEFAULT_MAX_INPUTS};
use crate::verifier::{naive_eval_row, verify_circuit, SequentialFrame, Verdict};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FAILED: u8 = 1;
pub const EXIT_ERROR: u8 = 2;

#[derive(Parser, Debug)]
#[command(name = "circuit-gp", version, about = "Evolve and verify digital circuits from truth tables")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evolve a circuit for every output of a truth table
    Synth(SynthArgs),
    /// Check a prefix-notation circuit against a truth table
    Verify(VerifyArgs),
    /// Evaluate a circuit on one input assignment
    Eval(EvalArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SynthArgs {
    /// Truth table file
    #[arg(long)]
    pub table: PathBuf,
    /// Comma-separated function set
    #[arg(long, default_value = "AND,OR,NOT,HA,FA")]
    pub functions: String,
    #[arg(long, default_value_t = 1000)]
    pub pop: usize,
    #[arg(long, default_value_t = 1000)]
    pub max_generations: usize,
    #[arg(long, default_value_t = 50)]
    pub max_nodes: usize,
    #[arg(long, default_value_t = 10)]
    pub init_depth: usize,
    #[arg(long, default_value_t = 10)]
    pub tournament: usize,
    /// Operator weight overrides, e.g. `Swap=0,Grow=50`
    #[arg(long)]
    pub weights: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    pub mutation_probability: f64,
    #[arg(long, default_value_t = 50)]
    pub max_trials: usize,
    /// RNG seed; derived from the clock when absent
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value = "out")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[arg(long)]
    pub table: PathBuf,
    /// File holding one circuit in prefix notation
    #[arg(long)]
    pub circuit: PathBuf,
    /// Output column to check (defaults to the first)
    #[arg(long)]
    pub output: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct EvalArgs {
    /// File holding one circuit in prefix notation
    #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
    pub circuit: Option<PathBuf>,
    /// Circuit given inline
    #[arg(long)]
    pub expr: Option<String>,
    /// Input count; defaults to the highest variable used plus one
    #[arg(long)]
    pub inputs: Option<usize>,
    /// Input bits, most significant variable first (e.g. `101` is A2=1 A1=0 A0=1)
    pub bits: String,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Table {
        path: PathBuf,
        #[source]
        source: TableError,
    },
    #[error("{}: {source}", path.display())]
    Circuit {
        path: PathBuf,
        #[source]
        source: CircuitError,
    },
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Usage(String),
}

/// Per-output outcome of `synth`.
#[derive(Clone, Debug, PartialEq)]
pub struct OutputReport {
    pub name: String,
    pub prefix: String,
    pub solved: bool,
    pub trial_index: usize,
    pub generations_used: usize,
    pub mismatches: u64,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunReport {
    pub seed: u64,
    pub outputs: Vec<OutputReport>,
    pub artifacts: Vec<PathBuf>,
}

impl RunReport {
    pub fn all_solved(&self) -> bool {
        self.outputs.iter().all(|o| o.solved)
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

pub fn load_table(path: &Path) -> Result<TruthTable, CliError> {
    parse_table(&read(path)?).map_err(|source| CliError::Table { path: path.to_path_buf(), source })
}

pub fn parse_functions(list: &str) -> Result<Vec<Function>, CliError> {
    let mut functions = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let f: Function = name
            .parse()
            .map_err(|e: CircuitError| CliError::Usage(format!("--functions: {e}")))?;
        if !functions.contains(&f) {
            functions.push(f);
        }
    }
    if functions.is_empty() {
        return Err(ConfigError::EmptyFunctions.into());
    }
    Ok(functions)
}

fn time_seed() -> u64 {
    let now = SystemTime::now().duration_since(UNIX_EPOCH).unwrap_or_default();
    now.as_secs() ^ u64::from(now.subsec_nanos()).rotate_left(32)
}

pub fn synth_config(args: &SynthArgs) -> Result<EvolutionConfig, CliError> {
    let weights = match &args.weights {
        Some(spec) => OperatorWeights::default().with_overrides(spec)?,
        None => OperatorWeights::default(),
    };
    let config = EvolutionConfig {
        population_size: args.pop,
        max_generations: args.max_generations,
        max_nodes: args.max_nodes,
        init_depth: args.init_depth,
        tournament_size: args.tournament,
        mutation_probability: args.mutation_probability,
        operator_weights: weights,
        max_trials: args.max_trials,
        seed: args.seed.unwrap_or_else(time_seed),
        functions: parse_functions(&args.functions)?,
    };
    config.validate()?;
    Ok(config)
}

fn file_stem(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '_' || c == '-' { c } else { '_' })
        .collect()
}

/// Runs the whole synthesis: evolve, verify, write artifacts.
pub fn cmd_synth(args: &SynthArgs) -> Result<RunReport, CliError> {
    let table = load_table(&args.table)?;
    let config = synth_config(args)?;
    let names = table.input_names().to_vec();

    // a solved trial whose champion fails verification does not count; the
    // next trial runs instead
    let results = run_trials_with(&table, &config, |r| {
        verify_circuit(&r.champion, &table, r.output_index).is_correct()
    });

    fs::create_dir_all(&args.out_dir)
        .map_err(|source| CliError::Io { path: args.out_dir.clone(), source })?;
    let mut outputs = Vec::new();
    let mut artifacts = Vec::new();
    let single = table.n_outputs() == 1;
    for result in &results {
        let name = table.output_names()[result.output_index].clone();
        let stem = file_stem(&name);
        let prefix = to_prefix_with_names(&result.champion, &names);
        let verdict = verify_circuit(&result.champion, &table, result.output_index);

        let prefix_path = args.out_dir.join(format!("{stem}.prefix"));
        write(&prefix_path, &format!("{prefix}\n"))?;
        let dot_path = args.out_dir.join(format!("{stem}.dot"));
        write(&dot_path, &export_dot(&result.champion, &names))?;
        let csv_name = if single { "convergence.csv".to_string() } else { format!("convergence_{stem}.csv") };
        let csv_path = args.out_dir.join(csv_name);
        write(&csv_path, &convergence_csv(&result.history))?;
        artifacts.extend([prefix_path, dot_path, csv_path]);

        outputs.push(OutputReport {
            name,
            prefix,
            solved: result.solved && verdict.is_correct(),
            trial_index: result.trial_index,
            generations_used: result.generations_used,
            mismatches: result.champion_fitness.mismatches,
            verdict,
        });
    }
    Ok(RunReport { seed: config.seed, outputs, artifacts })
}

pub fn format_report(report: &RunReport) -> String {
    let mut out = format!("seed {}\n", report.seed);
    for o in &report.outputs {
        out.push_str(&format!(
            "{}: {} trial {} generations {} mismatches {} verdict {}\n  {}\n",
            o.name,
            if o.solved { "solved" } else { "unsolved" },
            o.trial_index,
            o.generations_used,
            o.mismatches,
            o.verdict,
            o.prefix
        ));
    }
    out
}

fn read_circuit(path: &Path, names: &[String]) -> Result<CircuitTree, CliError> {
    parse_prefix_with_names(read(path)?.trim(), names)
        .map_err(|source| CliError::Circuit { path: path.to_path_buf(), source })
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Verdict, CliError> {
    let table = load_table(&args.table)?;
    let output = match &args.output {
        Some(name) => table
            .output_index(name)
            .ok_or_else(|| CliError::Usage(format!("table has no output named `{name}`")))?,
        None => 0,
    };
    let tree = read_circuit(&args.circuit, table.input_names())?;
    Ok(verify_circuit(&tree, &table, output))
}

pub fn cmd_eval(args: &EvalArgs) -> Result<bool, CliError> {
    let (text, origin) = match (&args.circuit, &args.expr) {
        (Some(path), _) => (read(path)?, path.clone()),
        (None, Some(expr)) => (expr.clone(), PathBuf::from("<expr>")),
        (None, None) => return Err(CliError::Usage("give --circuit or --expr".into())),
    };
    let limit = args.inputs.unwrap_or(DEFAULT_MAX_INPUTS);
    let tree = parse_prefix_with_names(text.trim(), &default_names(limit))
        .map_err(|source| CliError::Circuit { path: origin, source })?;
    let n = args
        .inputs
        .unwrap_or_else(|| tree.max_terminal().map_or(0, |m| usize::from(m) + 1));
    let bits: Vec<bool> = args
        .bits
        .chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(CliError::Usage(format!("invalid bit `{other}`"))),
        })
        .collect::<Result<_, _>>()?;
    if bits.len() != n {
        return Err(CliError::Usage(format!(
            "expected {n} input bits, got {}",
            bits.len()
        )));
    }
    // given most significant first; variables are indexed from the right
    let assignment: Vec<bool> = bits.into_iter().rev().collect();
    let mut frame = SequentialFrame::default();
    Ok(naive_eval_row(&tree, &assignment, &mut frame))
}

/// Runs a parsed command, writing human output to `out` and errors to
/// `err`, and returns the exit status.
pub fn run<W: Write, E: Write>(cli: &Cli, out: &mut W, err: &mut E) -> u8 {
    let outcome = match &cli.command {
        Command::Synth(args) => cmd_synth(args).map(|report| {
            let _ = write!(out, "{}", format_report(&report));
            if report.all_solved() {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }),
        Command::Verify(args) => cmd_verify(args).map(|verdict| {
            let _ = writeln!(out, "{verdict}");
            if verdict.is_correct() {
                EXIT_OK
            } else {
                EXIT_FAILED
            }
        }),
        Command::Eval(args) => cmd_eval(args).map(|bit| {
            let _ = writeln!(out, "{}", u8::from(bit));
            EXIT_OK
        }),
    };
    outcome.unwrap_or_else(|e| {
        let _ = writeln!(err, "error: {e}");
        EXIT_ERROR
    })
}
