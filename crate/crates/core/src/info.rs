//! The information of a partition and the dynamical-entropy sequence.
//!
//! For a state `φ` and a partition `ζ = (ζ_i)`, with branch functionals
//! `ω_i = φ∘ζ_i`, total `ω = Σ_i ω_i` and weights `p_i = ω_i(I)`:
//!
//! ```text
//! H_φ(ζ)   = Σ_i p_i S(ω_i / p_i, ω)
//! H^c_φ(ζ) = -Σ_i p_i ln p_i
//! H^q_φ(ζ) = Σ_i S(ω_i, ω)
//! ```
//!
//! and `H = H^c + H^q` by the scaling identity of the relative entropy. Given an
//! automorphism `θ`, the refinement `ζ⁻_n = θ⁻¹(ζ)∘…∘θ⁻ⁿ(ζ)` yields
//! `a_n = H_φ(ζ∘ζ⁻_n) - H_{φ∘ζ}(ζ⁻_n)`, a nonincreasing sequence bounded by
//! `H_φ(ζ)` whose limit is the dynamical entropy `h_φ(ζ, θ)`.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::entropy::{relative_entropy, LogReference, StateFunctional};
use crate::linalg::Hermitian;
use crate::partition::{Automorphism, Partition};
use crate::{par, Error, ExtReal, Numerics, Result};

/// `|a_N - a_{N-1}|` below this marks the sequence as converged.
pub const CONVERGENCE_TOL: f64 = 1e-6;
/// Default admissibility threshold on `a_N`.
pub const ADMISSIBILITY_TOL: f64 = 1e-6;
/// Invariance residual above which the two forms of `a_n` need not agree.
const INVARIANCE_TOL: f64 = 1e-9;

/// `H_φ(ζ)` with its classical/quantum split.
#[derive(Debug, Clone, PartialEq)]
pub struct InformationReport {
    pub total: ExtReal,
    pub classical: f64,
    pub quantum: ExtReal,
    /// Outcome probabilities `p_i`.
    pub weights: Vec<f64>,
    /// `S(ω_i/p_i, ω)` per outcome; zero for outcomes of negligible weight.
    pub divergences: Vec<ExtReal>,
    pub infinite: bool,
}

impl InformationReport {
    /// Finite value of `H`, or [`Error::InfiniteInformation`].
    pub fn value(&self) -> Result<f64> {
        self.total.finite().ok_or(Error::InfiniteInformation)
    }

    /// `|H - (H^c + H^q)|`, or `None` when `H` is infinite.
    pub fn split_residual(&self) -> Option<f64> {
        Some((self.total.finite()? - self.classical - self.quantum.finite()?).abs())
    }
}

fn branch_densities(phi: &StateFunctional, zeta: &Partition) -> Result<Vec<Hermitian>> {
    let rho = phi.full_density();
    if rho.dim() != zeta.in_dim() {
        return Err(Error::DimensionMismatch { expected: zeta.in_dim(), found: rho.dim() });
    }
    par::map_ordered(zeta.maps(), |m| m.predual(&rho)).into_iter().collect()
}

/// `H_φ(ζ)`, `H^c_φ(ζ)` and `H^q_φ(ζ)`.
///
/// `H` is summed from the normalized branch states and `H^q` from the
/// unnormalized ones, so the split residual is a genuine numerical check.
pub fn information(
    phi: &StateFunctional,
    zeta: &Partition,
    num: &Numerics,
) -> Result<InformationReport> {
    phi.require_normalized(num)?;
    let branches = branch_densities(phi, zeta)?;
    let total_density = Hermitian::sum(branches.iter()).expect("nonempty partition");
    let reference = LogReference::new(&total_density, num)?;
    let per_branch = par::map_ordered(&branches, |b| -> Result<(f64, ExtReal, ExtReal)> {
        let p = b.trace_re();
        if p <= num.zero_weight {
            return Ok((p, ExtReal::ZERO, ExtReal::ZERO));
        }
        let normalized = reference.divergence(&b.scale(1.0 / p), num)?.value;
        let raw = reference.divergence(b, num)?.value;
        Ok((p, normalized, raw))
    });
    let mut weights = Vec::with_capacity(branches.len());
    let mut divergences = Vec::with_capacity(branches.len());
    let mut total = ExtReal::ZERO;
    let mut quantum = ExtReal::ZERO;
    let mut classical = 0.0;
    for r in per_branch {
        let (p, normalized, raw) = r?;
        weights.push(p);
        divergences.push(normalized);
        if p > num.zero_weight {
            total = total + normalized.scale(p);
            quantum = quantum + raw;
            classical -= p * p.ln();
        }
    }
    let weight_sum: f64 = weights.iter().sum();
    if (weight_sum - 1.0).abs() > 1e-9_f64.max(num.unit_sum_tol) {
        return Err(Error::Inconsistent { what: "outcome weights do not sum to one", residual: weight_sum - 1.0 });
    }
    Ok(InformationReport { infinite: total.is_infinite(), total, classical, quantum, weights, divergences })
}

/// `H_φ(ζ)` as a single relative entropy on `⊕_i A` between the block states
/// `(ω_i)_i` and `(p_i ω)_i`.
pub fn information_via_direct_sum(
    phi: &StateFunctional,
    zeta: &Partition,
    num: &Numerics,
) -> Result<ExtReal> {
    phi.require_normalized(num)?;
    let branches = branch_densities(phi, zeta)?;
    let total_density = Hermitian::sum(branches.iter()).expect("nonempty partition");
    let reference: Vec<Hermitian> = branches.iter().map(|b| total_density.scale(b.trace_re())).collect();
    let first = StateFunctional::from_blocks_unchecked(branches);
    let second = StateFunctional::from_blocks_unchecked(reference);
    relative_entropy(&first, &second, num)
}

/// The state `φ∘ζ` on the output algebra of `ζ`, renormalized to absorb the
/// unit-sum tolerance.
pub fn pull_back(phi: &StateFunctional, zeta: &Partition) -> Result<StateFunctional> {
    let out = zeta.predual_total(&phi.full_density())?;
    let w = out.trace_re();
    if w <= 0.0 {
        return Err(Error::NotNormalized(w));
    }
    Ok(StateFunctional::from_density_unchecked(out.scale(1.0 / w)))
}

/// `H_φ(ζ|η) = H_φ(ζ∘η) - H_{φ∘ζ}(η)`.
pub fn conditional_information(
    phi: &StateFunctional,
    zeta: &Partition,
    eta: &Partition,
    num: &Numerics,
) -> Result<f64> {
    let joint = information(phi, &zeta.compose(eta, num)?, num)?.value()?;
    let tail = information(&pull_back(phi, zeta)?, eta, num)?.value()?;
    Ok(joint - tail)
}

fn check_branches(outcomes: usize, factors: usize, num: &Numerics) -> Result<()> {
    let mut branches: usize = 1;
    for _ in 0..factors {
        branches = branches.saturating_mul(outcomes);
    }
    if branches > num.branch_cap {
        return Err(Error::BranchCap { branches, cap: num.branch_cap });
    }
    Ok(())
}

/// `ζ⁻_n = θ⁻¹(ζ)∘θ⁻²(ζ)∘…∘θ⁻ⁿ(ζ)`, outcomes labeled by words `(i_1,…,i_n)`.
pub fn refinement(theta: &Automorphism, zeta: &Partition, n: usize, num: &Numerics) -> Result<Partition> {
    if n == 0 {
        return Err(Error::InvalidArgument("refinement length must be positive".into()));
    }
    check_branches(zeta.len(), n, num)?;
    let mut acc = zeta.conjugate_power(theta, -1)?;
    for k in 2..=n as i64 {
        acc = acc.compose(&zeta.conjugate_power(theta, -k)?, num)?;
    }
    Ok(acc)
}

/// The truncated `a_n` sequence with its certificates.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropySequence {
    /// `a_1, …, a_N`.
    pub values: Vec<f64>,
    /// `H_φ(θⁿ(ζ)|θⁿ⁻¹(ζ)∘…∘ζ)` for the same `n`; equal to `values` for
    /// invariant states.
    pub alternative: Vec<f64>,
    /// `H_φ(ζ)`, the a priori upper bound.
    pub bound: f64,
    /// `a_N`, reported as the estimate of `h_φ(ζ, θ)`.
    pub h_estimate: f64,
    /// `|a_N - a_{N-1}| ≤ 1e-6`.
    pub converged: bool,
    /// `max_n max(a_{n+1} - a_n, 0)`.
    pub monotonicity_residual: f64,
    /// `max_n max(a_n - H_φ(ζ), -a_n, 0)`.
    pub bound_residual: f64,
    /// `max_n |a_n - alternative_n|`.
    pub agreement_residual: f64,
    /// `‖u†ρu - ρ‖_F`; the two forms agree only when this vanishes.
    pub invariance_residual: f64,
}

impl EntropySequence {
    pub(crate) fn from_values(values: Vec<f64>, alternative: Vec<f64>, bound: f64, invariance_residual: f64) -> Self {
        let n = values.len();
        let h_estimate = *values.last().expect("nonempty sequence");
        let converged = n >= 2 && (values[n - 1] - values[n - 2]).abs() <= CONVERGENCE_TOL;
        let monotonicity_residual =
            values.windows(2).map(|w| (w[1] - w[0]).max(0.0)).fold(0.0, f64::max);
        let bound_residual = values.iter().map(|&a| (a - bound).max(-a).max(0.0)).fold(0.0, f64::max);
        let agreement_residual =
            values.iter().zip(&alternative).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Self {
            values,
            alternative,
            bound,
            h_estimate,
            converged,
            monotonicity_residual,
            bound_residual,
            agreement_residual,
            invariance_residual,
        }
    }

    /// Whether both forms are expected to agree.
    pub fn state_is_invariant(&self) -> bool {
        self.invariance_residual <= INVARIANCE_TOL
    }
}

/// `a_n = H_φ(ζ|ζ⁻_n)` for `n = 1..=n_max`.
///
/// A non-invariant `φ` is allowed; the definition still evaluates and the
/// residual is reported.
pub fn an_sequence(
    phi: &StateFunctional,
    theta: &Automorphism,
    zeta: &Partition,
    n_max: usize,
    num: &Numerics,
) -> Result<EntropySequence> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("sequence length must be positive".into()));
    }
    check_branches(zeta.len(), n_max + 1, num)?;
    let bound = information(phi, zeta, num)?.value()?;
    let phi_zeta = pull_back(phi, zeta)?;

    let mut values = Vec::with_capacity(n_max);
    let mut past = zeta.conjugate_power(theta, -1)?;
    for n in 1..=n_max {
        if n > 1 {
            past = past.compose(&zeta.conjugate_power(theta, -(n as i64))?, num)?;
        }
        let joint = information(phi, &zeta.compose(&past, num)?, num)?.value()?;
        let tail = information(&phi_zeta, &past, num)?.value()?;
        values.push(joint - tail);
    }

    let mut alternative = Vec::with_capacity(n_max);
    let mut history = zeta.clone();
    for n in 1..=n_max as i64 {
        if n > 1 {
            history = zeta.conjugate_power(theta, n - 1)?.compose(&history, num)?;
        }
        let head = zeta.conjugate_power(theta, n)?;
        let joint = information(phi, &head.compose(&history, num)?, num)?.value()?;
        let tail = information(&pull_back(phi, &head)?, &history, num)?.value()?;
        alternative.push(joint - tail);
    }

    Ok(EntropySequence::from_values(values, alternative, bound, theta.invariance_residual(phi)))
}

/// Outcome of [`admissibility_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct Admissibility {
    pub admissible: bool,
    pub tolerance: f64,
    pub sequence: EntropySequence,
}

/// Whether `h_φ(I, ζ)` vanishes, judged by `a_N ≤ tolerance` under the trivial
/// dynamics.
pub fn admissibility_check(
    phi: &StateFunctional,
    zeta: &Partition,
    n_max: usize,
    tolerance: f64,
    num: &Numerics,
) -> Result<Admissibility> {
    let sequence = an_sequence(phi, &Automorphism::identity(zeta.in_dim()), zeta, n_max, num)?;
    Ok(Admissibility { admissible: sequence.h_estimate <= tolerance, tolerance, sequence })
}

/// `‖ρ_{φ∘ζ} - ρ_φ‖_F` for a partition of `M_d` into itself.
pub fn invariance_check(phi: &StateFunctional, zeta: &Partition) -> Result<f64> {
    if zeta.in_dim() != zeta.out_dim() {
        return Err(Error::DimensionMismatch { expected: zeta.in_dim(), found: zeta.out_dim() });
    }
    let rho = phi.full_density();
    Ok(zeta.predual_total(&rho)?.distance(&rho))
}

/// Values of `a_N` along a segment of invariant states.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexityReport {
    pub lambdas: Vec<f64>,
    /// `a_N` at `λ φ_1 + (1 - λ) φ_0`.
    pub values: Vec<f64>,
    /// `value - chord` per grid point.
    pub deviations: Vec<f64>,
    /// Largest positive deviation above the chord.
    pub max_deviation: f64,
}

/// Evaluate the entropy estimate along `λ ↦ λφ_1 + (1-λ)φ_0` and compare it with
/// the chord between the endpoints.
pub fn convexity_probe(
    phi0: &StateFunctional,
    phi1: &StateFunctional,
    zeta: &Partition,
    theta: &Automorphism,
    n_max: usize,
    grid: &[f64],
    num: &Numerics,
) -> Result<ConvexityReport> {
    for phi in [phi0, phi1] {
        let r = theta.invariance_residual(phi);
        if r > INVARIANCE_TOL {
            return Err(Error::Inconsistent { what: "state is not invariant under the automorphism", residual: r });
        }
    }
    if grid.iter().any(|l| !(0.0..=1.0).contains(l)) {
        return Err(Error::InvalidArgument("mixing weights must lie in [0, 1]".into()));
    }
    let h = |lambda: f64| -> Result<f64> {
        let mix = StateFunctional::mix(lambda, phi1, phi0)?;
        Ok(an_sequence(&mix, theta, zeta, n_max, num)?.h_estimate)
    };
    let (h0, h1) = (h(0.0)?, h(1.0)?);
    let mut values = Vec::with_capacity(grid.len());
    let mut deviations = Vec::with_capacity(grid.len());
    for &lambda in grid {
        let v = h(lambda)?;
        deviations.push(v - (lambda * h1 + (1.0 - lambda) * h0));
        values.push(v);
    }
    let max_deviation = deviations.iter().copied().fold(0.0, f64::max);
    Ok(ConvexityReport { lambdas: grid.to_vec(), values, deviations, max_deviation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CMatrix;
    use alloc::vec;
    use crate::partition::{basis_measurement, computational_measurement, pinching_invariant_partition, vn_partition, KrausMap};
    use crate::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const LN2: f64 = core::f64::consts::LN_2;

    fn diag_state(d: &[f64]) -> StateFunctional {
        StateFunctional::new(Hermitian::from_real_diag(d), &Numerics::default()).unwrap()
    }

    fn x_measurement() -> Partition {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        basis_measurement(&CMatrix::from_real(2, 2, &[h, h, h, -h]).unwrap(), &Numerics::default()).unwrap()
    }

    fn proportional(lambdas: &[f64], d: usize) -> Partition {
        let maps = lambdas.iter().map(|&l| KrausMap::identity(d).scaled(l)).collect();
        Partition::new(maps, &Numerics::default()).unwrap()
    }

    fn shannon(p: &[f64]) -> f64 {
        -p.iter().filter(|&&x| x > 0.0).map(|x| x * x.ln()).sum::<f64>()
    }

    #[test]
    fn diagonal_state_gives_shannon_entropy() {
        let num = Numerics::default();
        for k in 1..10 {
            let p = k as f64 / 10.0;
            let r = information(&diag_state(&[p, 1.0 - p]), &computational_measurement(2), &num).unwrap();
            assert!((r.value().unwrap() - shannon(&[p, 1.0 - p])).abs() < 1e-12);
            assert!(r.quantum.finite().unwrap().abs() < 1e-12);
        }
        let r = information(&diag_state(&[0.5, 0.5]), &computational_measurement(2), &num).unwrap();
        assert!((r.value().unwrap() - LN2).abs() < 1e-15);
    }

    #[test]
    fn proportional_code_has_no_information() {
        let num = Numerics::default();
        let lambdas = [0.2, 0.3, 0.5];
        let zeta = proportional(&lambdas, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let phi = StateFunctional::new(sample::random_density(2, &mut rng), &num).unwrap();
        let r = information(&phi, &zeta, &num).unwrap();
        assert!(r.value().unwrap().abs() < 1e-12);
        assert!((r.classical - shannon(&lambdas)).abs() < 1e-12);
        assert!((r.quantum.finite().unwrap() + r.classical).abs() < 1e-12);
        assert!(information_via_direct_sum(&phi, &zeta, &num).unwrap().finite().unwrap().abs() < 1e-12);
    }

    #[test]
    fn composed_z_then_x_measurement() {
        let num = Numerics::default();
        let zx = computational_measurement(2).compose(&x_measurement(), &num).unwrap();
        let r = information(&diag_state(&[0.5, 0.5]), &zx, &num).unwrap();
        assert!((r.value().unwrap() - LN2).abs() < 1e-12);
        assert!((r.classical - 4f64.ln()).abs() < 1e-12);
        assert!((r.quantum.finite().unwrap() + LN2).abs() < 1e-12);
        // brute force: branch states are (1/4)|x_j><x_j| against I/2
        let brute: f64 = (0..4).map(|_| 0.25 * (0.0 - (0.5f64).ln())).sum();
        assert!((brute - LN2).abs() < 1e-15);
    }

    #[test]
    fn direct_sum_matches_and_split_holds() {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..60 {
            let d = rng.random_range(2..=4);
            let k = rng.random_range(2..=4);
            let phi = StateFunctional::new(sample::random_density(d, &mut rng), &num).unwrap();
            let zeta = sample::random_partition(d, rng.random_range(2..=4), k, 2, &mut rng);
            let r = information(&phi, &zeta, &num).unwrap();
            let h = r.value().unwrap();
            assert!(h >= -1e-9);
            assert!(r.split_residual().unwrap() < 1e-8);
            assert!((r.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            let ds = information_via_direct_sum(&phi, &zeta, &num).unwrap().finite().unwrap();
            assert!((ds - h).abs() < 1e-8);
        }
        let trivial = Partition::trivial(3);
        let phi = StateFunctional::maximally_mixed(3);
        assert_eq!(information(&phi, &trivial, &num).unwrap().value().unwrap(), 0.0);
        assert!(information_via_direct_sum(&phi, &trivial, &num).unwrap().finite().unwrap().abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized_and_mismatched_states() {
        let num = Numerics::default();
        let z = computational_measurement(2);
        assert!(matches!(information(&diag_state(&[0.5, 0.4]), &z, &num), Err(Error::NotNormalized(_))));
        assert!(matches!(
            information(&StateFunctional::maximally_mixed(3), &z, &num),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn conditional_information_examples() {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z = computational_measurement(2);
        let phi = StateFunctional::new(sample::random_density(2, &mut rng), &num).unwrap();
        let h = information(&phi, &z, &num).unwrap().value().unwrap();
        let c = conditional_information(&phi, &z, &Partition::trivial(2), &num).unwrap();
        assert!((c - h).abs() < 1e-12);
        assert!(conditional_information(&phi, &z, &z, &num).unwrap().abs() < 1e-12);
        let mixed = diag_state(&[0.5, 0.5]);
        assert!(conditional_information(&mixed, &z, &x_measurement(), &num).unwrap().abs() < 1e-12);
    }

    #[test]
    fn refinement_examples() {
        let num = Numerics::default();
        let z = computational_measurement(2);
        let flip = Automorphism::new(CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap();
        let one = refinement(&flip, &z, 1, &num).unwrap();
        assert_eq!(one, z.conjugate_power(&flip, -1).unwrap());
        let id = Automorphism::identity(2);
        let two = refinement(&id, &z, 2, &num).unwrap();
        let w = two.weights(&diag_state(&[0.3, 0.7])).unwrap();
        assert_eq!(w, vec![0.3, 0.0, 0.0, 0.7]);
        let w = refinement(&flip, &z, 2, &num).unwrap().weights(&diag_state(&[0.5, 0.5])).unwrap();
        assert_eq!(w.len(), 4);
        // θ⁻¹(ζ) is the flipped basis and θ⁻²(ζ) = ζ, so only alternating words survive
        assert_eq!(w, vec![0.0, 0.5, 0.5, 0.0]);
        assert_eq!(two.labels()[3], vec![1, 1]);
        let small = Numerics { branch_cap: 7, ..num };
        assert_eq!(refinement(&id, &z, 3, &small), Err(Error::BranchCap { branches: 8, cap: 7 }));
    }

    #[test]
    fn refinement_with_hadamard_mixes_words() {
        let num = Numerics::default();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let had = Automorphism::new(CMatrix::from_real(2, 2, &[h, h, h, -h]).unwrap()).unwrap();
        let w = refinement(&had, &computational_measurement(2), 2, &num)
            .unwrap()
            .weights(&diag_state(&[0.5, 0.5]))
            .unwrap();
        for x in w {
            assert!((x - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_dynamics_give_zero_for_projective() {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let phi = StateFunctional::new(sample::random_density(3, &mut rng), &num).unwrap();
        let u = sample::random_unitary(3, &mut rng);
        let zeta = basis_measurement(&u, &num).unwrap();
        let s = an_sequence(&phi, &Automorphism::identity(3), &zeta, 3, &num).unwrap();
        for a in &s.values {
            assert!(a.abs() < 1e-9);
        }
        assert!(s.converged);
    }

    #[test]
    fn flip_dynamics_collapse() {
        let num = Numerics::default();
        let flip = Automorphism::new(CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap();
        let s = an_sequence(&diag_state(&[0.5, 0.5]), &flip, &computational_measurement(2), 4, &num).unwrap();
        assert!(s.monotonicity_residual <= 1e-8);
        for a in &s.values {
            assert!(a.abs() < 1e-9);
        }
        assert!(s.agreement_residual < 1e-9);
        assert!((s.bound - LN2).abs() < 1e-12);
    }

    #[test]
    fn random_sequences_are_monotone_and_bounded() {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..8 {
            let d = rng.random_range(2..=3);
            let phi = StateFunctional::new(sample::random_density(d, &mut rng), &num).unwrap();
            let theta = Automorphism::new(sample::random_unitary(d, &mut rng)).unwrap();
            let zeta = sample::random_partition(d, d, 2, 1, &mut rng);
            let s = an_sequence(&phi, &theta, &zeta, 4, &num).unwrap();
            assert!(s.monotonicity_residual <= 1e-8, "{:?}", s.values);
            assert!(s.bound_residual <= 1e-8);
            assert!(!s.state_is_invariant());
        }
    }

    #[test]
    fn invariant_state_forms_agree() {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..5 {
            let theta = Automorphism::new(sample::random_unitary(3, &mut rng)).unwrap();
            let zeta = sample::random_partition(3, 3, 2, 2, &mut rng);
            let s = an_sequence(&StateFunctional::maximally_mixed(3), &theta, &zeta, 3, &num).unwrap();
            assert!(s.state_is_invariant());
            assert!(s.agreement_residual <= 1e-8);
        }
    }

    #[test]
    fn admissibility_examples() {
        let num = Numerics::default();
        let phi = diag_state(&[0.6, 0.3, 0.1]);
        let vn = vn_partition(
            vec![Hermitian::from_real_diag(&[1.0, 1.0, 0.0]), Hermitian::from_real_diag(&[0.0, 0.0, 1.0])],
            &num,
        )
        .unwrap();
        let a = admissibility_check(&phi, &vn, 2, ADMISSIBILITY_TOL, &num).unwrap();
        assert!(a.admissible && a.sequence.values[0].abs() < 1e-9);
        let pinch = pinching_invariant_partition(
            vec![Hermitian::from_real_diag(&[1.0, 1.0, 0.0]), Hermitian::from_real_diag(&[0.0, 0.0, 1.0])],
            &phi,
            &num,
        )
        .unwrap();
        assert!(admissibility_check(&phi, &pinch, 3, ADMISSIBILITY_TOL, &num).unwrap().admissible);
        let prop = proportional(&[0.5, 0.5], 3);
        assert!(admissibility_check(&phi, &prop, 3, ADMISSIBILITY_TOL, &num).unwrap().admissible);
    }

    #[test]
    fn non_admissible_measurement_is_flagged() {
        let num = Numerics::default();
        // a noisy, non-projective measurement keeps generating information
        let a = Hermitian::from_real_diag(&[0.8, 0.3]);
        let b = Hermitian::from_real_diag(&[0.6, (1.0f64 - 0.09).sqrt()]);
        let zeta = Partition::new(vec![KrausMap::projection(&a), KrausMap::projection(&b)], &num).unwrap();
        let r = admissibility_check(&diag_state(&[0.5, 0.5]), &zeta, 3, ADMISSIBILITY_TOL, &num).unwrap();
        assert!(!r.admissible);
    }

    #[test]
    fn invariance_examples() {
        let num = Numerics::default();
        let phi = diag_state(&[0.9, 0.1]);
        let pinch = pinching_invariant_partition(
            vec![Hermitian::from_real_diag(&[1.0, 0.0]), Hermitian::from_real_diag(&[0.0, 1.0])],
            &phi,
            &num,
        )
        .unwrap();
        assert!(invariance_check(&phi, &pinch).unwrap() <= 1e-9);
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let c = |x: f64| crate::C64::new(x, 0.0);
        let plus = StateFunctional::new(Hermitian::projector_onto(&[c(h), c(h)]), &num).unwrap();
        let r = invariance_check(&plus, &computational_measurement(2)).unwrap();
        assert!((r - 1.0 / 2f64.sqrt()).abs() < 1e-12);
        assert!(invariance_check(&StateFunctional::maximally_mixed(2), &x_measurement()).unwrap() < 1e-15);
    }

    #[test]
    fn convexity_trivial_cases() {
        let num = Numerics::default();
        let grid = [0.0, 0.25, 0.5, 0.75, 1.0];
        let id = Automorphism::identity(2);
        let z = computational_measurement(2);
        let phi = diag_state(&[0.3, 0.7]);
        let r = convexity_probe(&phi, &phi, &z, &id, 2, &grid, &num).unwrap();
        assert!(r.max_deviation.abs() < 1e-12);
        let r = convexity_probe(&diag_state(&[0.9, 0.1]), &phi, &z, &id, 2, &grid, &num).unwrap();
        assert!(r.values.iter().all(|v| v.abs() < 1e-9));
        let flip = Automorphism::new(CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()).unwrap();
        assert!(matches!(
            convexity_probe(&phi, &phi, &z, &flip, 2, &grid, &num),
            Err(Error::Inconsistent { .. })
        ));
    }
}
