//! Randomized property suites.
//!
//! Each family draws instances from a seeded stream and records the worst
//! residual of one inequality or identity. A residual is the amount by which the
//! property is violated (`lhs - rhs` for `lhs ≤ rhs`, `|lhs - rhs|` for
//! identities), so nonpositive values mean the property holds with room to spare.

use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classical::{
    classical_conditional, classical_information, embed_diagonal, partition_comparison_bound,
    permutation_entropy_sequence, FiniteSpace, FunctionPartition, Permutation,
};
use crate::entropy::{donald_residual, relative_entropy, StateFunctional};
use crate::info::{an_sequence, conditional_information, information, information_via_direct_sum, pull_back};
use crate::partition::{Automorphism, KrausMap, Partition};
use crate::{sample, Error, Numerics, Result};

/// Default tolerance for every family.
pub const DEFAULT_TOLERANCE: f64 = 1e-8;

/// Instances to draw and where.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// Matrix dimensions cycled through by the quantum families.
    pub dims: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub tolerance: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self { dims: vec![2, 3, 4], trials: 200, seed: 0, tolerance: DEFAULT_TOLERANCE }
    }
}

/// Property families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// `‖ρ_ω - ρ_φ‖_1² / 2 ≤ S(ω, φ)`.
    PinskerBound,
    /// Joint convexity of `S`.
    JointConvexity,
    /// `S(τ_*ψ, τ_*φ) ≤ S(ψ, φ)` for unital completely positive `τ`.
    Monotonicity,
    /// Donald's identity.
    DonaldIdentity,
    /// `H` from branch divergences against the direct-sum form.
    DirectSumAgreement,
    /// `H = H^c + H^q`.
    SplitIdentity,
    /// `H_φ(ζ∘η) ≤ H_{φ∘ζ}(η) + H_φ(ζ)`.
    Subadditivity,
    /// `H^c` subadditivity of the composed weights.
    ClassicalTerm,
    /// `H^q` subadditivity of the composed branches.
    QuantumTerm,
    /// `H_φ(ζ|η∘β) ≤ H_φ(ζ|η)`.
    ConditionalMonotonicity,
    /// `H_φ(θ(ζ)) = H_φ(ζ)` when `φ∘θ = φ`.
    AutomorphismInvariance,
    /// `a_n` nonincreasing and inside `[0, H_φ(ζ)]`.
    EntropySequence,
    /// `H(ζ∘η) ≥ H(ζ)` for function partitions.
    ClassicalRefinement,
    /// `H(ζ|η∘β) ≤ H(ζ|η)` for function partitions.
    ClassicalConditioning,
    /// `H(θζ|θβ) = H(ζ|β)` for measure-preserving permutations.
    ClassicalShiftInvariance,
    /// `H(ζ_n) ≤ H(η_n) + n H(ζ|η)`.
    ClassicalComparison,
    /// Classical quantities equal those of the diagonal embedding.
    ClassicalQuantumAgreement,
    /// Indicator partitions under a permutation of period `p` give `a_p = 0`.
    PeriodicCollapse,
}

impl Family {
    pub const ALL: [Family; 18] = [
        Family::PinskerBound,
        Family::JointConvexity,
        Family::Monotonicity,
        Family::DonaldIdentity,
        Family::DirectSumAgreement,
        Family::SplitIdentity,
        Family::Subadditivity,
        Family::ClassicalTerm,
        Family::QuantumTerm,
        Family::ConditionalMonotonicity,
        Family::AutomorphismInvariance,
        Family::EntropySequence,
        Family::ClassicalRefinement,
        Family::ClassicalConditioning,
        Family::ClassicalShiftInvariance,
        Family::ClassicalComparison,
        Family::ClassicalQuantumAgreement,
        Family::PeriodicCollapse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::PinskerBound => "pinsker_bound",
            Family::JointConvexity => "joint_convexity",
            Family::Monotonicity => "monotonicity",
            Family::DonaldIdentity => "donald_identity",
            Family::DirectSumAgreement => "direct_sum_agreement",
            Family::SplitIdentity => "split_identity",
            Family::Subadditivity => "subadditivity",
            Family::ClassicalTerm => "classical_term",
            Family::QuantumTerm => "quantum_term",
            Family::ConditionalMonotonicity => "conditional_monotonicity",
            Family::AutomorphismInvariance => "automorphism_invariance",
            Family::EntropySequence => "entropy_sequence",
            Family::ClassicalRefinement => "classical_refinement",
            Family::ClassicalConditioning => "classical_conditioning",
            Family::ClassicalShiftInvariance => "classical_shift_invariance",
            Family::ClassicalComparison => "classical_comparison",
            Family::ClassicalQuantumAgreement => "classical_quantum_agreement",
            Family::PeriodicCollapse => "periodic_collapse",
        }
    }

    pub fn from_name(name: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.name() == name)
    }
}

/// Worst case of one family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyReport {
    pub family: Family,
    pub trials: usize,
    /// Largest residual observed.
    pub max_residual: f64,
    pub tolerance: f64,
    /// Instances with residual above the tolerance.
    pub violations: usize,
    /// Instances that raised an error (counted as violations).
    pub errors: usize,
}

impl FamilyReport {
    pub fn passed(&self) -> bool {
        self.violations == 0 && self.errors == 0
    }
}

/// Run one family.
pub fn run_family(family: Family, cfg: &SuiteConfig, num: &Numerics) -> Result<FamilyReport> {
    if cfg.dims.is_empty() || cfg.dims.contains(&0) {
        return Err(Error::InvalidArgument("suite dimensions must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(family as u64);
    let mut report =
        FamilyReport { family, trials: cfg.trials, max_residual: f64::NEG_INFINITY, tolerance: cfg.tolerance, violations: 0, errors: 0 };
    for t in 0..cfg.trials {
        let d = cfg.dims[t % cfg.dims.len()];
        match trial(family, d, cfg, &mut rng, num) {
            Ok(r) => {
                report.max_residual = report.max_residual.max(r);
                if r.is_nan() || r > cfg.tolerance {
                    report.violations += 1;
                }
            }
            Err(e) if e.is_resource() => return Err(e),
            Err(_) => report.errors += 1,
        }
    }
    Ok(report)
}

/// Run every family in [`Family::ALL`] order.
pub fn run_all(cfg: &SuiteConfig, num: &Numerics) -> Result<Vec<FamilyReport>> {
    Family::ALL.iter().map(|&f| run_family(f, cfg, num)).collect()
}

fn pick<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> usize {
    dims[rng.random_range(0..dims.len())]
}

/// Full-rank or, one time in four, rank-deficient density.
fn state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> StateFunctional {
    let rank = if d > 1 && rng.random_range(0..4) == 0 { rng.random_range(1..d) } else { d };
    StateFunctional::normalized_from(sample::random_density_of_rank(d, rank, rng), &Numerics::default())
        .expect("sampled densities are states")
}

fn full_rank_state<R: Rng + ?Sized>(d: usize, rng: &mut R) -> StateFunctional {
    StateFunctional::normalized_from(sample::random_density(d, rng), &Numerics::default())
        .expect("sampled densities are states")
}

/// Mix of generic Kraus partitions and absorber-completed families.
fn partition<R: Rng + ?Sized>(in_dim: usize, out_dim: usize, rng: &mut R) -> Partition {
    let outcomes = rng.random_range(2..=3);
    if in_dim == out_dim && rng.random_range(0..3) == 0 {
        sample::random_partition_with_absorber(in_dim, outcomes - 1, rng)
    } else {
        sample::random_partition(in_dim, out_dim, outcomes, rng.random_range(1..=2), rng)
    }
}

fn unital_map<R: Rng + ?Sized>(in_dim: usize, out_dim: usize, rng: &mut R) -> KrausMap {
    // the Gram matrix is invertible only with at least in/out Kraus operators
    let kraus = in_dim.div_ceil(out_dim) + rng.random_range(0..=1);
    sample::random_partition(in_dim, out_dim, 1, kraus, rng).maps()[0].clone()
}

fn finite(x: crate::ExtReal) -> Result<f64> {
    x.finite().ok_or(Error::InfiniteInformation)
}

fn classical_instance<R: Rng + ?Sized>(rng: &mut R) -> (FiniteSpace, Permutation) {
    let m = rng.random_range(3..=6);
    let image = sample::random_permutation(m, rng);
    let mu = sample::invariant_measure(&image, rng);
    (FiniteSpace::new(mu).expect("probability vector"), Permutation::new(image).expect("bijection"))
}

fn function_partition<R: Rng + ?Sized>(m: usize, rng: &mut R) -> FunctionPartition {
    let k = rng.random_range(2..=3);
    if rng.random_range(0..4) == 0 {
        let cells: Vec<usize> = (0..m).map(|_| rng.random_range(0..k)).collect();
        FunctionPartition::indicator(&cells, k).expect("cells in range")
    } else {
        sample::random_function_partition(m, k, rng)
    }
}

fn trial<R: Rng + ?Sized>(family: Family, d: usize, cfg: &SuiteConfig, rng: &mut R, num: &Numerics) -> Result<f64> {
    match family {
        Family::PinskerBound => {
            let (a, b) = (full_rank_state(d, rng), full_rank_state(d, rng));
            let t = a.trace_distance(&b)?;
            Ok(t * t / 2.0 - finite(relative_entropy(&a, &b, num)?)?)
        }
        Family::JointConvexity => {
            let [p1, p2] = [state(d, rng), state(d, rng)];
            let [f1, f2] = [full_rank_state(d, rng), full_rank_state(d, rng)];
            let lambda = rng.random_range(1..=9) as f64 / 10.0;
            let lhs = relative_entropy(&StateFunctional::mix(lambda, &p1, &p2)?, &StateFunctional::mix(lambda, &f1, &f2)?, num)?;
            let rhs = lambda * finite(relative_entropy(&p1, &f1, num)?)?
                + (1.0 - lambda) * finite(relative_entropy(&p2, &f2, num)?)?;
            Ok(finite(lhs)? - rhs)
        }
        Family::Monotonicity => {
            let (psi, phi) = (state(d, rng), full_rank_state(d, rng));
            let tau = unital_map(d, pick(&cfg.dims, rng), rng);
            let before = finite(relative_entropy(&psi, &phi, num)?)?;
            let after = relative_entropy(&tau.predual_state(&psi)?, &tau.predual_state(&phi)?, num)?;
            Ok(finite(after)? - before)
        }
        Family::DonaldIdentity => {
            let phi = full_rank_state(d, rng);
            let weights = sample::random_probability(3, rng);
            let parts: Vec<StateFunctional> = weights.iter().map(|&w| state(d, rng).scaled(w)).collect();
            finite(donald_residual(&parts, &phi, num)?)
        }
        Family::DirectSumAgreement => {
            let phi = state(d, rng);
            let zeta = partition(d, pick(&cfg.dims, rng), rng);
            let a = information(&phi, &zeta, num)?.value()?;
            let b = finite(information_via_direct_sum(&phi, &zeta, num)?)?;
            Ok((a - b).abs())
        }
        Family::SplitIdentity => {
            let phi = state(d, rng);
            let zeta = partition(d, pick(&cfg.dims, rng), rng);
            information(&phi, &zeta, num)?.split_residual().ok_or(Error::InfiniteInformation)
        }
        Family::Subadditivity | Family::ClassicalTerm | Family::QuantumTerm => {
            let phi = state(d, rng);
            let b = pick(&cfg.dims, rng);
            let zeta = partition(d, b, rng);
            let eta = partition(b, pick(&cfg.dims, rng), rng);
            let joint = information(&phi, &zeta.compose(&eta, num)?, num)?;
            let first = information(&phi, &zeta, num)?;
            let second = information(&pull_back(&phi, &zeta)?, &eta, num)?;
            Ok(match family {
                Family::Subadditivity => joint.value()? - second.value()? - first.value()?,
                Family::ClassicalTerm => joint.classical - second.classical - first.classical,
                _ => finite(joint.quantum)? - finite(second.quantum)? - finite(first.quantum)?,
            })
        }
        Family::ConditionalMonotonicity => {
            let phi = state(d, rng);
            let b = pick(&cfg.dims, rng);
            let c = pick(&cfg.dims, rng);
            let zeta = partition(d, b, rng);
            let eta = partition(b, c, rng);
            let beta = partition(c, pick(&cfg.dims, rng), rng);
            let coarse = conditional_information(&phi, &zeta, &eta, num)?;
            let fine = conditional_information(&phi, &zeta, &eta.compose(&beta, num)?, num)?;
            Ok(fine - coarse)
        }
        Family::AutomorphismInvariance => {
            let phi = full_rank_state(d, rng);
            let theta = Automorphism::new(sample::fixing_unitary(&phi.full_density(), rng))?;
            let zeta = partition(d, d, rng);
            let a = information(&phi, &zeta, num)?.value()?;
            let b = information(&phi, &zeta.conjugate(&theta)?, num)?.value()?;
            Ok((a - b).abs())
        }
        Family::EntropySequence => {
            let d = d.min(3);
            let phi = state(d, rng);
            let theta = Automorphism::new(sample::fixing_unitary(&phi.full_density(), rng))?;
            let zeta = sample::random_partition(d, d, 2, rng.random_range(1..=2), rng);
            let s = an_sequence(&phi, &theta, &zeta, 5, num)?;
            Ok(s.monotonicity_residual.max(s.bound_residual))
        }
        Family::ClassicalRefinement => {
            let (mu, _) = classical_instance(rng);
            let zeta = function_partition(mu.len(), rng);
            let eta = function_partition(mu.len(), rng);
            Ok(classical_information(&mu, &zeta)? - classical_information(&mu, &zeta.compose(&eta, num.branch_cap)?)?)
        }
        Family::ClassicalConditioning => {
            let (mu, _) = classical_instance(rng);
            let m = mu.len();
            let (zeta, eta, beta) = (function_partition(m, rng), function_partition(m, rng), function_partition(m, rng));
            let fine = classical_conditional(&mu, &zeta, &eta.compose(&beta, num.branch_cap)?, num)?;
            Ok(fine - classical_conditional(&mu, &zeta, &eta, num)?)
        }
        Family::ClassicalShiftInvariance => {
            let (mu, t) = classical_instance(rng);
            let (zeta, beta) = (function_partition(mu.len(), rng), function_partition(mu.len(), rng));
            let moved = classical_conditional(&mu, &zeta.shifted(&t, 1), &beta.shifted(&t, 1), num)?;
            Ok((moved - classical_conditional(&mu, &zeta, &beta, num)?).abs())
        }
        Family::ClassicalComparison => {
            let (mu, t) = classical_instance(rng);
            let (zeta, eta) = (function_partition(mu.len(), rng), function_partition(mu.len(), rng));
            let n = rng.random_range(1..=4);
            Ok(partition_comparison_bound(&mu, &t, &zeta, &eta, n, num)?.residual)
        }
        Family::ClassicalQuantumAgreement => {
            let (mu, _) = classical_instance(rng);
            let (zeta, eta) = (function_partition(mu.len(), rng), function_partition(mu.len(), rng));
            let (phi, qz) = embed_diagonal(&mu, &zeta, num)?;
            let (_, qe) = embed_diagonal(&mu, &eta, num)?;
            let h = (classical_information(&mu, &zeta)? - information(&phi, &qz, num)?.value()?).abs();
            let c = (classical_conditional(&mu, &zeta, &eta, num)? - conditional_information(&phi, &qz, &qe, num)?).abs();
            Ok(h.max(c))
        }
        Family::PeriodicCollapse => {
            let (mu, t) = classical_instance(rng);
            let cells: Vec<usize> = (0..mu.len()).map(|_| rng.random_range(0..2)).collect();
            let zeta = FunctionPartition::indicator(&cells, 2)?;
            let s = permutation_entropy_sequence(&mu, &t, &zeta, t.period(), num)?;
            Ok(s.h_estimate.abs().max(s.monotonicity_residual))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_family_passes_a_short_run() {
        let cfg = SuiteConfig { trials: 12, seed: 3, ..SuiteConfig::default() };
        for r in run_all(&cfg, &Numerics::default()).unwrap() {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn names_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::from_name(f.name()), Some(f));
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let cfg = SuiteConfig { trials: 6, seed: 11, ..SuiteConfig::default() };
        let num = Numerics::default();
        assert_eq!(run_family(Family::QuantumTerm, &cfg, &num), run_family(Family::QuantumTerm, &cfg, &num));
    }
}
