use proptest::prelude::*;
use qde_core::entropy::StateFunctional;
use qde_core::info::{an_sequence, conditional_information, information, pull_back, refinement};
use qde_core::partition::{Automorphism, Partition};
use qde_core::{sample, Numerics};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn partition(i: usize, o: usize, rng: &mut ChaCha8Rng) -> Partition {
    let outcomes = rng.random_range(2..=3);
    sample::random_partition(i, o, outcomes, rng.random_range(1..=2), rng)
}

fn state(d: usize, rng: &mut ChaCha8Rng) -> StateFunctional {
    let rank = rng.random_range(1..=d);
    StateFunctional::normalized_from(sample::random_density_of_rank(d, rank, rng), &Numerics::default()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn subadditivity_and_its_two_terms(seed in any::<u64>(), a in 2usize..=4, b in 2usize..=4, c in 2usize..=4) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = state(a, &mut rng);
        let (z, e) = (partition(a, b, &mut rng), partition(b, c, &mut rng));
        let joint = information(&phi, &z.compose(&e, &num).unwrap(), &num).unwrap();
        let head = information(&phi, &z, &num).unwrap();
        let tail = information(&pull_back(&phi, &z).unwrap(), &e, &num).unwrap();
        prop_assert!(joint.value().unwrap() <= head.value().unwrap() + tail.value().unwrap() + 1e-8);
        prop_assert!(joint.classical <= head.classical + tail.classical + 1e-8);
        let q = |r: &qde_core::info::InformationReport| r.quantum.finite().unwrap();
        prop_assert!(q(&joint) <= q(&head) + q(&tail) + 1e-8);
    }

    #[test]
    fn conditioning_on_finer_partitions_reduces(seed in any::<u64>(), d in 2usize..=3) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = state(d, &mut rng);
        let (z, e, b) = (partition(d, d, &mut rng), partition(d, d, &mut rng), partition(d, d, &mut rng));
        let coarse = conditional_information(&phi, &z, &e, &num).unwrap();
        let fine = conditional_information(&phi, &z, &e.compose(&b, &num).unwrap(), &num).unwrap();
        prop_assert!(fine <= coarse + 1e-8);
        prop_assert!(coarse >= -1e-8);
    }

    #[test]
    fn invariant_automorphisms_preserve_information(seed in any::<u64>(), d in 2usize..=4) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = state(d, &mut rng);
        let theta = Automorphism::new(sample::fixing_unitary(&phi.full_density(), &mut rng)).unwrap();
        prop_assert!(theta.invariance_residual(&phi) <= 1e-10);
        let z = partition(d, d, &mut rng);
        let a = information(&phi, &z, &num).unwrap().value().unwrap();
        let b = information(&phi, &z.conjugate(&theta).unwrap(), &num).unwrap().value().unwrap();
        prop_assert!((a - b).abs() <= 1e-8);
    }

    #[test]
    fn entropy_sequence_certificates(seed in any::<u64>(), d in 2usize..=3) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = state(d, &mut rng);
        let theta = Automorphism::new(sample::fixing_unitary(&phi.full_density(), &mut rng)).unwrap();
        let z = sample::random_partition(d, d, 2, 1, &mut rng);
        let s = an_sequence(&phi, &theta, &z, 4, &num).unwrap();
        prop_assert!(s.monotonicity_residual <= 1e-8);
        prop_assert!(s.bound_residual <= 1e-8);
        prop_assert!(s.state_is_invariant());
        prop_assert!(s.agreement_residual <= 1e-8, "{:?}", s);
    }

    #[test]
    fn relabeling_outcomes_changes_nothing(seed in any::<u64>(), d in 2usize..=4) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phi = state(d, &mut rng);
        let z = partition(d, d, &mut rng);
        let mut maps = z.maps().to_vec();
        maps.reverse();
        let reversed = Partition::new(maps, &num).unwrap();
        let a = information(&phi, &z, &num).unwrap().value().unwrap();
        let b = information(&phi, &reversed, &num).unwrap().value().unwrap();
        prop_assert!((a - b).abs() <= 1e-10);
        let theta = Automorphism::new(sample::random_unitary(d, &mut rng)).unwrap();
        let h1 = an_sequence(&phi, &theta, &z, 2, &num).unwrap().h_estimate;
        let h2 = an_sequence(&phi, &theta, &reversed, 2, &num).unwrap().h_estimate;
        prop_assert!((h1 - h2).abs() <= 1e-9);
    }

    #[test]
    fn refinement_is_a_partition(seed in any::<u64>(), d in 2usize..=3, n in 1usize..=3) {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = partition(d, d, &mut rng);
        let theta = Automorphism::new(sample::random_unitary(d, &mut rng)).unwrap();
        let r = refinement(&theta, &z, n, &num).unwrap();
        prop_assert_eq!(r.len(), z.len().pow(n as u32));
        prop_assert!(r.unit_sum_residual() <= 1e-8);
    }
}
