use rand::Rng;

use super::Individual;

/// EP-style tournament: every individual meets `tournament_size` opponents
/// drawn uniformly with replacement (itself included) and scores a win for
/// each opponent it matches or beats on mismatch count.
pub fn tournament_wins<R: Rng + ?Sized>(
    population: &[Individual],
    rng: &mut R,
    tournament_size: usize,
) -> Vec<usize> {
    assert!(!population.is_empty(), "tournament on an empty population");
    let n = population.len();
    population
        .iter()
        .map(|ind| {
            (0..tournament_size)
                .filter(|_| {
                    let opponent = &population[rng.gen_range(0..n)];
                    ind.fitness.mismatches <= opponent.fitness.mismatches
                })
                .count()
        })
        .collect()
}

/// Scores wins and keeps the better half, ordered by wins (descending), then
/// mismatches, then position in `population`.
pub fn select_parents<R: Rng + ?Sized>(
    mut population: Vec<Individual>,
    rng: &mut R,
    tournament_size: usize,
) -> Vec<Individual> {
    let wins = tournament_wins(&population, rng, tournament_size);
    for (ind, w) in population.iter_mut().zip(wins) {
        ind.wins = w;
    }
    let mut order: Vec<usize> = (0..population.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(population[i].wins), population[i].fitness.mismatches, i));
    order.truncate(population.len() / 2);

    let mut slots: Vec<Option<Individual>> = population.into_iter().map(Some).collect();
    order
        .into_iter()
        .map(|i| slots[i].take().expect("index selected twice"))
        .collect()
}
