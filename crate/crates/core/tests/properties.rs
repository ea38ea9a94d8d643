use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use circuit_gp::circuit::{parse_prefix, to_prefix, tree_metrics, validate_tree, CircuitTree, Function};
use circuit_gp::evaluator::{error_percent, eval_packed, eval_sequential, fitness, Fitness};
use circuit_gp::evolution::{mutate, random_tree, MutationContext, Operator};
use circuit_gp::truth_table::{parse_table, serialize_table, table_from_expression, TruthTable};
use circuit_gp::verifier::{naive_eval_row, verify_circuit, SequentialFrame, Verdict};

const COMBINATIONAL: [Function; 7] = [
    Function::Or,
    Function::And,
    Function::Not,
    Function::Nand,
    Function::Nor,
    Function::Ha,
    Function::Fa,
];

fn tree_from_seed(seed: u64, n: usize, functions: &[Function]) -> CircuitTree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_tree(&mut rng, n, functions, 10, 50)
}

fn shuffled_table(seed: u64, n: usize, m: usize) -> TruthTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut combos: Vec<u32> = (0..1u32 << n).collect();
    combos.shuffle(&mut rng);
    let rows = combos
        .into_iter()
        .map(|c| (c, (0..m).map(|_| rng.gen_bool(0.5)).collect()))
        .collect();
    let names = (0..n).map(|i| format!("v{i}")).collect();
    let outs = (0..m).map(|j| format!("out{j}")).collect();
    TruthTable::from_rows(names, outs, rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn prefix_round_trip(seed in any::<u64>(), n in 1usize..10) {
        let tree = tree_from_seed(seed, n, &Function::ALL);
        let text = to_prefix(&tree);
        prop_assert_eq!(parse_prefix(&text, n).unwrap(), tree);
    }

    #[test]
    fn table_round_trip(seed in any::<u64>(), n in 1usize..8, m in 1usize..4) {
        let table = shuffled_table(seed, n, m);
        prop_assert_eq!(parse_table(&serialize_table(&table)).unwrap(), table);
    }

    #[test]
    fn packed_popcount_matches_rows(seed in any::<u64>(), n in 1usize..9) {
        let table = shuffled_table(seed, n, 2);
        for j in 0..2 {
            let ones = table.rows().filter(|(_, outs)| outs[j]).count() as u64;
            prop_assert_eq!(table.output_column(j).count_ones(), ones);
        }
        for v in 0..n {
            prop_assert_eq!(table.input_column(v).count_ones(), 1u64 << (n - 1));
        }
    }

    #[test]
    fn packed_matches_naive(seed in any::<u64>(), n in 1usize..8) {
        let tree = tree_from_seed(seed, n, &COMBINATIONAL);
        let table = shuffled_table(seed ^ 1, n, 1);
        let packed = eval_packed(&tree, &table).unwrap();
        for r in 0..table.n_rows() {
            let mut frame = SequentialFrame::default();
            prop_assert_eq!(packed.get(r), naive_eval_row(&tree, &table.row_inputs(r), &mut frame));
        }
        prop_assert_eq!(eval_sequential(&tree, &table), packed);
    }

    #[test]
    fn expression_tables_score_zero(seed in any::<u64>(), n in 1usize..8) {
        let tree = tree_from_seed(seed, n, &COMBINATIONAL);
        let table = table_from_expression(&tree, n).unwrap();
        prop_assert_eq!(table.n_rows(), 1 << n);
        prop_assert_eq!(parse_table(&serialize_table(&table)).unwrap(), table.clone());
        prop_assert_eq!(fitness(&tree, &table, 0).mismatches, 0);
        prop_assert_eq!(verify_circuit(&tree, &table, 0), Verdict::Correct);
    }

    #[test]
    fn sequential_evaluation_is_repeatable(seed in any::<u64>(), n in 1usize..6) {
        let tree = tree_from_seed(seed, n, &Function::ALL);
        let table = shuffled_table(seed ^ 2, n, 1);
        prop_assert_eq!(eval_sequential(&tree, &table), eval_sequential(&tree, &table));
        prop_assert_eq!(verify_circuit(&tree, &table, 0), verify_circuit(&tree, &table, 0));
    }

    #[test]
    fn verdict_agrees_with_fitness(seed in any::<u64>(), n in 1usize..6) {
        let tree = tree_from_seed(seed, n, &Function::ALL);
        let table = shuffled_table(seed ^ 3, n, 1);
        let before = table.clone();
        let verdict = verify_circuit(&tree, &table, 0);
        prop_assert_eq!(verdict.is_correct(), fitness(&tree, &table, 0).is_correct());
        prop_assert_eq!(&table, &before);
        if let Verdict::Wrong { row, inputs } = verdict {
            // rerun the clock up to the failing row; for combinational
            // circuits the row alone reproduces it
            let mut frame = SequentialFrame::default();
            let mut last = false;
            for r in 0..=row {
                last = naive_eval_row(&tree, &table.row_inputs(r), &mut frame);
            }
            prop_assert_ne!(last, table.row_outputs(row)[0]);
            if !tree.contains_sequential() {
                let mut fresh = SequentialFrame::default();
                prop_assert_ne!(naive_eval_row(&tree, &inputs, &mut fresh), table.row_outputs(row)[0]);
            }
        }
    }

    #[test]
    fn error_percent_bounded_and_monotone(total in 1u64..1_000_000, a in 0u64..1_000_000, b in 0u64..1_000_000) {
        let (lo, hi) = (a.min(b).min(total), a.max(b).min(total));
        let p = |m| error_percent(Fitness { mismatches: m, total_rows: total });
        prop_assert!(p(lo) <= p(hi));
        prop_assert!((0.0..=100.0).contains(&p(lo)));
        prop_assert!((0.0..=100.0).contains(&p(hi)));
    }

    #[test]
    fn mutations_stay_valid(seed in any::<u64>(), n in 1usize..7, op in 0usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = MutationContext { n_inputs: n, functions: &Function::ALL, max_nodes: 50, max_depth: 10 };
        let mut tree = random_tree(&mut rng, n, &Function::ALL, 10, 50);
        for _ in 0..20 {
            tree = mutate(&tree, Operator::ALL[op], &mut rng, &ctx);
            prop_assert!(validate_tree(&tree, 50, n).is_empty());
            prop_assert!(tree_metrics(&tree).depth <= 10);
        }
    }

    #[test]
    fn trunc_and_swap_change_eligible_trees(seed in any::<u64>(), n in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ctx = MutationContext { n_inputs: n, functions: &COMBINATIONAL, max_nodes: 50, max_depth: 10 };
        let tree = random_tree(&mut rng, n, &COMBINATIONAL, 10, 50);
        if tree.len() > 1 {
            prop_assert!(mutate(&tree, Operator::Trunc, &mut rng, &ctx).len() < tree.len());
        } else {
            prop_assert_eq!(mutate(&tree, Operator::Trunc, &mut rng, &ctx), tree.clone());
        }
        let swapped = mutate(&tree, Operator::Swap, &mut rng, &ctx);
        let has_binary = tree.nodes().iter().any(|node| node.arity() >= 2);
        if !has_binary {
            prop_assert_eq!(swapped, tree);
        } else {
            prop_assert_eq!(swapped.len(), tree.len());
        }
    }
}

#[test]
fn thread_count_does_not_change_results() {
    use circuit_gp::evolution::{run_evolution, EvolutionConfig};
    let table = shuffled_table(99, 5, 1);
    let config = EvolutionConfig { population_size: 200, max_generations: 40, ..EvolutionConfig::default() };
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let many = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
    for seed in [1u64, 2, 3] {
        let a = single.install(|| run_evolution(&table, 0, &config, seed));
        let b = many.install(|| run_evolution(&table, 0, &config, seed));
        assert_eq!(a, b, "seed {seed}");
    }
}

#[test]
fn small_expression_targets_are_solved() {
    use circuit_gp::evolution::{run_trials, EvolutionConfig};
    let target = parse_prefix("(OR (AND A0 A1) (FA A2 A3 A0))", 4).unwrap();
    let table = table_from_expression(&target, 4).unwrap();
    let solved = (1..=10u64)
        .filter(|&seed| {
            let config = EvolutionConfig { seed, max_trials: 5, max_generations: 200, ..EvolutionConfig::default() };
            run_trials(&table, &config)[0].solved
        })
        .count();
    assert!(solved >= 9, "solved {solved}/10");
}
