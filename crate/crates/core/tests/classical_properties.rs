use proptest::prelude::*;
use qde_core::classical::{
    classical_conditional, classical_information, conditional_expectation_form, embed_diagonal,
    partition_comparison_bound, permutation_entropy_sequence, FiniteSpace, FunctionPartition, Permutation,
    SymbolicShift, DEFAULT_WINDOW_CAP,
};
use qde_core::info::{an_sequence, conditional_information, information};
use qde_core::{sample, Numerics};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn system(m: usize, rng: &mut ChaCha8Rng) -> (FiniteSpace, Permutation) {
    let image = sample::random_permutation(m, rng);
    let mu = sample::invariant_measure(&image, rng);
    (FiniteSpace::new(mu).unwrap(), Permutation::new(image).unwrap())
}

fn indicator(m: usize, k: usize, rng: &mut ChaCha8Rng) -> FunctionPartition {
    let cells: Vec<usize> = (0..m).map(|_| rng.random_range(0..k)).collect();
    FunctionPartition::indicator(&cells, k).unwrap()
}

/// Brute-force `H` of an indicator partition: Shannon entropy of cell masses.
fn cell_entropy(mu: &FiniteSpace, z: &FunctionPartition) -> f64 {
    -(0..z.len())
        .map(|i| mu.integrate(&z.square(i)))
        .filter(|&p| p > 0.0)
        .map(|p| p * p.ln())
        .sum::<f64>()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn refinement_increases_information(seed in any::<u64>(), m in 2usize..=6, k in 2usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mu, _) = system(m, &mut rng);
        let z = sample::random_function_partition(m, k, &mut rng);
        let e = sample::random_function_partition(m, k, &mut rng);
        prop_assert!(classical_information(&mu, &z).unwrap() <= classical_information(&mu, &z.compose(&e, 4096).unwrap()).unwrap() + 1e-8);
        prop_assert!(classical_information(&mu, &z).unwrap() >= -1e-9);
    }

    #[test]
    fn conditioning_reduces(seed in any::<u64>(), m in 2usize..=6) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mu, _) = system(m, &mut rng);
        let z = sample::random_function_partition(m, 2, &mut rng);
        let e = sample::random_function_partition(m, 3, &mut rng);
        let b = sample::random_function_partition(m, 2, &mut rng);
        let fine = classical_conditional(&mu, &z, &e.compose(&b, 4096).unwrap(), &num).unwrap();
        prop_assert!(fine <= classical_conditional(&mu, &z, &e, &num).unwrap() + 1e-8);
    }

    #[test]
    fn shift_invariance(seed in any::<u64>(), m in 2usize..=6, k in 1i64..=3) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mu, t) = system(m, &mut rng);
        let z = sample::random_function_partition(m, 2, &mut rng);
        let b = sample::random_function_partition(m, 3, &mut rng);
        let moved = classical_conditional(&mu, &z.shifted(&t, k), &b.shifted(&t, k), &num).unwrap();
        prop_assert!((moved - classical_conditional(&mu, &z, &b, &num).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn comparison_bound(seed in any::<u64>(), m in 2usize..=6, n in 1usize..=4) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mu, t) = system(m, &mut rng);
        let z = sample::random_function_partition(m, 2, &mut rng);
        let e = sample::random_function_partition(m, 2, &mut rng);
        prop_assert!(partition_comparison_bound(&mu, &t, &z, &e, n, &num).unwrap().holds(1e-8));
    }

    #[test]
    fn quantum_embedding_agrees(seed in any::<u64>(), m in 2usize..=6) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mu, t) = system(m, &mut rng);
        let z = sample::random_function_partition(m, 2, &mut rng);
        let e = sample::random_function_partition(m, 3, &mut rng);
        let (phi, qz) = embed_diagonal(&mu, &z, &num).unwrap();
        let (_, qe) = embed_diagonal(&mu, &e, &num).unwrap();
        let h = information(&phi, &qz, &num).unwrap().value().unwrap();
        prop_assert!((h - classical_information(&mu, &z).unwrap()).abs() <= 1e-8);
        let c = conditional_information(&phi, &qz, &qe, &num).unwrap();
        prop_assert!((c - classical_conditional(&mu, &z, &e, &num).unwrap()).abs() <= 1e-8);
        let classical = permutation_entropy_sequence(&mu, &t, &z, 3, &num).unwrap();
        let quantum = an_sequence(&phi, &t.to_automorphism(), &qz, 3, &num).unwrap();
        for (a, b) in classical.values.iter().zip(&quantum.values) {
            prop_assert!((a - b).abs() <= 1e-8);
        }
    }

    #[test]
    fn indicator_conditioning_matches_expectation_form(seed in any::<u64>(), m in 2usize..=6) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mu, _) = system(m, &mut rng);
        let z = sample::random_function_partition(m, 3, &mut rng);
        let e = indicator(m, 2, &mut rng);
        let a = classical_conditional(&mu, &z, &e, &num).unwrap();
        prop_assert!((a - conditional_expectation_form(&mu, &z, &e).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn indicator_information_is_cell_entropy(seed in any::<u64>(), m in 2usize..=6, k in 2usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mu, _) = system(m, &mut rng);
        let z = indicator(m, k, &mut rng);
        prop_assert!((classical_information(&mu, &z).unwrap() - cell_entropy(&mu, &z)).abs() <= 1e-12);
    }

    #[test]
    fn periodic_permutations_exhaust_indicators(seed in any::<u64>(), m in 2usize..=6) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mu, t) = system(m, &mut rng);
        let z = indicator(m, 2, &mut rng);
        let s = permutation_entropy_sequence(&mu, &t, &z, t.period(), &num).unwrap();
        prop_assert!(s.h_estimate.abs() <= 1e-9);
        prop_assert!(s.monotonicity_residual <= 1e-9);
    }

    /// Stationary two-state chains have `a_n = -Σ π_i P_ij ln P_ij` for every `n`.
    #[test]
    fn markov_estimate_is_window_independent(a in 0.01f64..0.99, b in 0.01f64..0.99) {
        let chain = SymbolicShift::new(vec![vec![1.0 - a, a], vec![b, 1.0 - b]]).unwrap();
        let pi = [b / (a + b), a / (a + b)];
        let h = |p: f64| -(p * p.ln() + (1.0 - p) * (1.0 - p).ln());
        let rate = pi[0] * h(a) + pi[1] * h(b);
        let s = chain.markov_entropy_sequence(6, DEFAULT_WINDOW_CAP).unwrap();
        for v in &s.values {
            prop_assert!((v - rate).abs() <= 1e-10);
        }
    }
}

#[test]
fn window_cap_is_enforced() {
    let chain = SymbolicShift::bernoulli(&[0.5, 0.5]).unwrap();
    assert!(chain.markov_entropy_sequence(DEFAULT_WINDOW_CAP + 1, DEFAULT_WINDOW_CAP).is_err());
}
