use std::f64::consts::LN_2;

use proptest::prelude::*;
use qde_core::capacity::{capacity_rate, capacity_report, OptimizerConfig};
use qde_core::channel::{classical_input, holevo_quantity, Channel};
use qde_core::{sample, Hermitian, Numerics};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn quick(seed: u64) -> OptimizerConfig {
    OptimizerConfig { restarts: 3, iterations: 150, seed, ..OptimizerConfig::default() }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn bounds_are_ordered(seed in any::<u64>(), k in 2usize..=3, d in 2usize..=3) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<Hermitian> = (0..k).map(|_| sample::random_density(d, &mut rng)).collect();
        let ch = Channel::ensemble(&states, &num).unwrap();
        let phi = classical_input(&sample::random_probability(k, &mut rng), &num).unwrap();
        let r = capacity_report(&phi, &ch, 1, None, &quick(seed), &num).unwrap();
        prop_assert!(r.chain_residual <= 1e-8, "{:?}", r);
        prop_assert!(r.h_upper <= (k as f64).ln() + 1e-9);
        let chi = holevo_quantity(&phi, &ch, &num).unwrap();
        prop_assert!(chi.residual <= 1e-8);
        prop_assert!(r.d_lower <= chi.chi + 1e-8);
    }

    #[test]
    fn depolarizing_sweep(p in 0.0f64..=1.0) {
        let num = Numerics::default();
        let ch = Channel::depolarizing(2, p, &num).unwrap();
        let r = capacity_report(&qde_core::entropy::StateFunctional::maximally_mixed(2), &ch, 1, None, &quick(1), &num).unwrap();
        prop_assert!(r.chain_residual <= 1e-8);
    }
}

#[test]
fn reports_are_reproducible() {
    let num = Numerics::default();
    let ch = Channel::dephasing(2, 0.3, &num).unwrap();
    let phi = qde_core::entropy::StateFunctional::maximally_mixed(2);
    let a = capacity_rate(&phi, &ch, 2, &quick(5), &num).unwrap();
    let b = capacity_rate(&phi, &ch, 2, &quick(5), &num).unwrap();
    assert_eq!(a, b);
    assert!(a.superadditivity_residual.unwrap() <= 0.0, "{:?}", a.surplus);
}

#[test]
fn orthogonal_block_rate_is_ln2() {
    let num = Numerics::default();
    let zero = Hermitian::from_real_diag(&[1.0, 0.0]);
    let one = Hermitian::from_real_diag(&[0.0, 1.0]);
    let ch = Channel::ensemble(&[zero, one], &num).unwrap();
    let phi = classical_input(&[0.5, 0.5], &num).unwrap();
    let cfg = OptimizerConfig { restarts: 6, seed: 2, ..OptimizerConfig::default() };
    let rates = capacity_rate(&phi, &ch, 2, &cfg, &num).unwrap();
    for r in rates.c_rates.iter().chain(&rates.d_rates) {
        assert!((r - LN_2).abs() < 1e-4, "{rates:?}");
    }
}
