//! Mutation-only genetic programming over circuit trees.
//!
//! Each generation scores EP tournament wins, keeps the better half as
//! parents and gives every parent exactly one mutated offspring. Randomness
//! is split hierarchically (run, generation, individual) so that evaluating
//! or mutating individuals in parallel never changes the result.

mod init;
mod mutation;
mod selection;

pub use init::random_tree;
pub use mutation::{mutate, select_operator, MutationContext, Operator, OperatorWeights};
pub use selection::{select_parents, tournament_wins};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::circuit::{validate_tree, CircuitTree, Function};
use crate::evaluator::{error_percent, fitness, Fitness};
use crate::truth_table::TruthTable;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("population size must be even and at least 2, got {0}")]
    PopulationSize(usize),
    #[error("all mutation operator weights are zero")]
    ZeroWeights,
    #[error("tournament size must be at least 1")]
    ZeroTournament,
    #[error("function set is empty")]
    EmptyFunctions,
    #[error("mutation probability must lie in [0, 1], got {0}")]
    MutationProbability(String),
    #[error("max nodes must be at least 1")]
    ZeroMaxNodes,
    #[error("initial depth must be at least 1")]
    ZeroInitDepth,
    #[error("max trials must be at least 1")]
    ZeroTrials,
    #[error("unknown mutation operator `{0}`")]
    UnknownOperator(String),
    #[error("malformed operator weight `{0}` (expected name=weight)")]
    BadWeight(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolutionConfig {
    pub population_size: usize,
    /// Per-trial generation cap.
    pub max_generations: usize,
    pub max_nodes: usize,
    /// Depth limit for initial trees, also kept as the depth cap for Grow.
    pub init_depth: usize,
    pub tournament_size: usize,
    pub mutation_probability: f64,
    pub operator_weights: OperatorWeights,
    pub max_trials: usize,
    pub seed: u64,
    pub functions: Vec<Function>,
}

/// `AND, OR, NOT, HA, FA`
pub const DEFAULT_FUNCTIONS: [Function; 5] =
    [Function::And, Function::Or, Function::Not, Function::Ha, Function::Fa];

impl Default for EvolutionConfig {
    fn default() -> Self {
        EvolutionConfig {
            population_size: 1000,
            max_generations: 1000,
            max_nodes: 50,
            init_depth: 10,
            tournament_size: 10,
            mutation_probability: 1.0,
            operator_weights: OperatorWeights::default(),
            max_trials: 50,
            seed: 0,
            functions: DEFAULT_FUNCTIONS.to_vec(),
        }
    }
}

impl EvolutionConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
            return Err(ConfigError::PopulationSize(self.population_size));
        }
        if self.tournament_size == 0 {
            return Err(ConfigError::ZeroTournament);
        }
        if self.functions.is_empty() {
            return Err(ConfigError::EmptyFunctions);
        }
        if !(0.0..=1.0).contains(&self.mutation_probability) {
            return Err(ConfigError::MutationProbability(self.mutation_probability.to_string()));
        }
        if self.max_nodes == 0 {
            return Err(ConfigError::ZeroMaxNodes);
        }
        if self.init_depth == 0 {
            return Err(ConfigError::ZeroInitDepth);
        }
        if self.max_trials == 0 {
            return Err(ConfigError::ZeroTrials);
        }
        OperatorWeights::new(self.operator_weights.as_array())?;
        Ok(())
    }

    fn mutation_context(&self, n_inputs: usize) -> MutationContext<'_> {
        MutationContext {
            n_inputs,
            functions: &self.functions,
            max_nodes: self.max_nodes,
            max_depth: self.init_depth,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Individual {
    pub tree: CircuitTree,
    pub fitness: Fitness,
    /// Tournament wins from the most recent selection.
    pub wins: usize,
}

impl Individual {
    pub fn evaluate(tree: CircuitTree, table: &TruthTable, output_index: usize) -> Self {
        let fitness = fitness(&tree, table, output_index);
        Individual { tree, fitness, wins: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GenerationStats {
    pub generation: usize,
    pub best_mismatches: u64,
    pub mean_mismatches: f64,
    pub best_error_pct: f64,
    pub mean_error_pct: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunResult {
    pub output_index: usize,
    pub champion: CircuitTree,
    pub champion_fitness: Fitness,
    pub solved: bool,
    pub generations_used: usize,
    /// 1-based trial number that produced this result.
    pub trial_index: usize,
    pub seed: u64,
    pub history: Vec<GenerationStats>,
}

/// Mixes `label` into `seed` (splitmix64 finalizer over the sum).
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    let mut z = seed
        .wrapping_add(label.wrapping_mul(0x9E37_79B9_7F4A_7C15))
        .wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn debug_check(tree: &CircuitTree, config: &EvolutionConfig, n_inputs: usize) {
    debug_assert!(
        validate_tree(tree, config.max_nodes, n_inputs).is_empty(),
        "invalid tree entered the population: {tree}: {:?}",
        validate_tree(tree, config.max_nodes, n_inputs)
    );
}

/// `config.population_size` random trees, each seeded from `seed` and its
/// position.
pub fn initial_population(
    table: &TruthTable,
    output_index: usize,
    config: &EvolutionConfig,
    seed: u64,
) -> Vec<Individual> {
    let n = table.n_inputs();
    (0..config.population_size)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, i as u64));
            let tree = random_tree(&mut rng, n, &config.functions, config.init_depth, config.max_nodes);
            debug_check(&tree, config, n);
            Individual::evaluate(tree, table, output_index)
        })
        .collect()
}

/// One offspring per parent; returns parents followed by their offspring.
pub fn breed<R: Rng + ?Sized>(
    parents: Vec<Individual>,
    rng: &mut R,
    config: &EvolutionConfig,
    table: &TruthTable,
    output_index: usize,
) -> Vec<Individual> {
    let n = table.n_inputs();
    let ctx = config.mutation_context(n);
    let breed_seed: u64 = rng.gen();
    let offspring: Vec<Individual> = parents
        .par_iter()
        .enumerate()
        .map(|(i, parent)| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(breed_seed, i as u64));
            let tree = if rng.gen_bool(config.mutation_probability) {
                let op = select_operator(&config.operator_weights, &mut rng);
                mutate(&parent.tree, op, &mut rng, &ctx)
            } else {
                parent.tree.clone()
            };
            debug_check(&tree, config, n);
            Individual::evaluate(tree, table, output_index)
        })
        .collect();
    let mut population = parents;
    population.extend(offspring);
    population
}

/// Tournament selection of the better half followed by breeding.
pub fn next_generation<R: Rng + ?Sized>(
    population: Vec<Individual>,
    rng: &mut R,
    config: &EvolutionConfig,
    table: &TruthTable,
    output_index: usize,
) -> Vec<Individual> {
    let parents = select_parents(population, rng, config.tournament_size);
    breed(parents, rng, config, table, output_index)
}

fn stats(population: &[Individual], generation: usize) -> GenerationStats {
    let best = population
        .iter()
        .map(|i| i.fitness)
        .min()
        .expect("non-empty population");
    let total: u64 = population.iter().map(|i| i.fitness.mismatches).sum();
    let mean = total as f64 / population.len() as f64;
    let rows = best.total_rows as f64;
    GenerationStats {
        generation,
        best_mismatches: best.mismatches,
        mean_mismatches: mean,
        best_error_pct: error_percent(best),
        mean_error_pct: 100.0 * mean / rows,
    }
}

/// Best individual: fewest mismatches, then fewest nodes, then earliest.
fn champion(population: &[Individual]) -> &Individual {
    population
        .iter()
        .enumerate()
        .min_by_key(|(i, ind)| (ind.fitness.mismatches, ind.tree.len(), *i))
        .map(|(_, ind)| ind)
        .expect("non-empty population")
}

/// One trial: evolve until a retained parent solves output `output_index`
/// or `config.max_generations` selections have run.
pub fn run_evolution(table: &TruthTable, output_index: usize, config: &EvolutionConfig, seed: u64) -> RunResult {
    assert!(output_index < table.n_outputs());
    let mut population = initial_population(table, output_index, config, derive_seed(seed, 0));
    let mut history = Vec::new();

    let finish = |pool: &[Individual], history: Vec<GenerationStats>, generations_used: usize| {
        let best = champion(pool);
        RunResult {
            output_index,
            champion: best.tree.clone(),
            champion_fitness: best.fitness,
            solved: best.fitness.is_correct(),
            generations_used,
            trial_index: 1,
            seed,
            history,
        }
    };

    if config.max_generations == 0 {
        history.push(stats(&population, 0));
        return finish(&population, history, 0);
    }

    for generation in 1..=config.max_generations {
        let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, generation as u64));
        history.push(stats(&population, generation));
        let parents = select_parents(population, &mut rng, config.tournament_size);
        if parents.iter().any(|p| p.fitness.is_correct()) || generation == config.max_generations {
            return finish(&parents, history, generation);
        }
        population = breed(parents, &mut rng, config, table, output_index);
    }
    unreachable!("loop returns on its last generation")
}

/// Seed of trial `trial` (1-based) for output `output_index`.
pub fn trial_seed(seed: u64, output_index: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(seed, output_index as u64), trial as u64)
}

/// Runs trials for each output independently until one is solved and
/// accepted by `accept`, or `config.max_trials` is exhausted. Unsolved
/// outputs report the best champion over all trials.
pub fn run_trials_with<F>(table: &TruthTable, config: &EvolutionConfig, mut accept: F) -> Vec<RunResult>
where
    F: FnMut(&RunResult) -> bool,
{
    (0..table.n_outputs())
        .map(|output| {
            let mut best: Option<RunResult> = None;
            for trial in 1..=config.max_trials {
                let mut result = run_evolution(table, output, config, trial_seed(config.seed, output, trial));
                result.trial_index = trial;
                if result.solved {
                    if accept(&result) {
                        return result;
                    }
                    // rejected: keep looking, and never report it as solved
                    result.solved = false;
                }
                let better = best.as_ref().is_none_or(|b| {
                    (result.champion_fitness.mismatches, result.champion.len())
                        < (b.champion_fitness.mismatches, b.champion.len())
                });
                if better {
                    best = Some(result);
                }
            }
            best.expect("at least one trial")
        })
        .collect()
}

pub fn run_trials(table: &TruthTable, config: &EvolutionConfig) -> Vec<RunResult> {
    run_trials_with(table, config, |_| true)
}
