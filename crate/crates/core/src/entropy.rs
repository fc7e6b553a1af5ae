//! Positive functionals on block algebras and their relative entropy.
//!
//! A functional `ω` is held as its density (one positive block per summand of
//! the algebra), so `ω(x) = Σ_k trace(ρ_k x_kk)`. The relative entropy is the
//! Umegaki formula
//!
//! ```text
//! S(ω, φ) = trace ρ_ω (ln ρ_ω - ln ρ_φ)      if supp ρ_ω ⊆ supp ρ_φ
//!         = +∞                               otherwise
//! ```
//!
//! applied verbatim to sub-normalized functionals, so that
//! `S(λω, φ) = λ ln λ + λ S(ω, φ)`.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::linalg::functions::PsdSpectrum;
use crate::linalg::{spectral_decompose, BlockAlgebra, CMatrix, Hermitian};
use crate::{Error, ExtReal, Numerics, Result};

/// A positive functional on a finite direct sum of matrix algebras.
#[derive(Debug, Clone, PartialEq)]
pub struct StateFunctional {
    algebra: BlockAlgebra,
    blocks: Vec<Hermitian>,
}

impl StateFunctional {
    /// Functional on the full algebra `M_d` with the given density.
    pub fn new(density: Hermitian, num: &Numerics) -> Result<Self> {
        Self::block_diagonal(alloc::vec![density], num)
    }

    /// Functional on `⊕_k M_{d_k}` with one density block per summand.
    pub fn block_diagonal(blocks: Vec<Hermitian>, num: &Numerics) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Empty);
        }
        for b in &blocks {
            PsdSpectrum::new(b, num)?;
        }
        Ok(Self::from_blocks_unchecked(blocks))
    }

    /// Normalized state `ρ / trace ρ`.
    pub fn normalized_from(density: Hermitian, num: &Numerics) -> Result<Self> {
        let t = density.trace_re();
        if t <= 0.0 {
            return Err(Error::NotNormalized(t));
        }
        Self::new(density.scale(1.0 / t), num)
    }

    /// Densities produced by positive maps are positive by construction.
    pub(crate) fn from_density_unchecked(density: Hermitian) -> Self {
        Self::from_blocks_unchecked(alloc::vec![density])
    }

    pub(crate) fn from_blocks_unchecked(blocks: Vec<Hermitian>) -> Self {
        let algebra = BlockAlgebra::new(blocks.iter().map(Hermitian::dim).collect())
            .expect("nonempty blocks of positive dimension");
        Self { algebra, blocks }
    }

    /// The maximally mixed state `I/d`.
    pub fn maximally_mixed(d: usize) -> Self {
        Self::from_density_unchecked(Hermitian::identity(d).scale(1.0 / d as f64))
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn blocks(&self) -> &[Hermitian] {
        &self.blocks
    }

    /// The density, for a functional on a full matrix algebra.
    pub fn density(&self) -> Result<&Hermitian> {
        match self.blocks.as_slice() {
            [only] => Ok(only),
            _ => Err(Error::InvalidArgument("functional lives on a block algebra".into())),
        }
    }

    /// Block-diagonal density on the ambient `M_d`.
    pub fn full_density(&self) -> Hermitian {
        let mut it = self.blocks.iter();
        let first = it.next().expect("nonempty").clone();
        it.fold(first, |acc, b| Hermitian::symmetrized(acc.direct_sum(b)))
    }

    /// Hilbert-space dimension of the underlying algebra.
    pub fn dim(&self) -> usize {
        self.algebra.total_dim()
    }

    /// `ω(I)`.
    pub fn weight(&self) -> f64 {
        self.blocks.iter().map(Hermitian::trace_re).sum()
    }

    pub fn is_normalized(&self, num: &Numerics) -> bool {
        (self.weight() - 1.0).abs() <= num.normalization_tol
    }

    pub(crate) fn require_normalized(&self, num: &Numerics) -> Result<()> {
        if self.is_normalized(num) {
            Ok(())
        } else {
            Err(Error::NotNormalized(self.weight()))
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        assert!(c >= 0.0, "positive functionals scale by nonnegative factors");
        Self {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(c)).collect(),
        }
    }

    pub fn try_add(&self, other: &StateFunctional) -> Result<Self> {
        self.same_algebra(other)?;
        Ok(Self {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a.add(b)).collect(),
        })
    }

    /// `λ·a + (1-λ)·b`.
    pub fn mix(lambda: f64, a: &StateFunctional, b: &StateFunctional) -> Result<Self> {
        a.scaled(lambda).try_add(&b.scaled(1.0 - lambda))
    }

    /// Sum of a nonempty family on one algebra.
    pub fn sum(parts: &[StateFunctional]) -> Result<Self> {
        let (first, rest) = parts.split_first().ok_or(Error::Empty)?;
        rest.iter().try_fold(first.clone(), |acc, p| acc.try_add(p))
    }

    /// Frobenius distance between the densities.
    pub fn distance(&self, other: &StateFunctional) -> Result<f64> {
        self.same_algebra(other)?;
        Ok(self
            .blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| {
                let d = a.distance(b);
                d * d
            })
            .sum::<f64>()
            .sqrt())
    }

    /// Trace norm `‖ρ_a - ρ_b‖_1`.
    pub fn trace_distance(&self, other: &StateFunctional) -> Result<f64> {
        self.same_algebra(other)?;
        let mut acc = 0.0;
        for (a, b) in self.blocks.iter().zip(&other.blocks) {
            let s = spectral_decompose(&a.sub(b))?;
            acc += s.values.iter().map(|l| l.abs()).sum::<f64>();
        }
        Ok(acc)
    }

    /// `φ(x) = trace(ρ x)`. For block algebras `x` is read block-diagonally.
    pub fn evaluate(&self, x: &Hermitian) -> Result<f64> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: x.dim() });
        }
        if let [rho] = self.blocks.as_slice() {
            return Ok(rho.expectation(x));
        }
        let mut offset = 0;
        let mut acc = 0.0;
        for rho in &self.blocks {
            let d = rho.dim();
            let sub = CMatrix::from_fn(d, d, |i, j| x[(offset + i, offset + j)]);
            acc += rho.trace_product_re(&sub);
            offset += d;
        }
        Ok(acc)
    }

    fn same_algebra(&self, other: &StateFunctional) -> Result<()> {
        if self.algebra != other.algebra {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }
}

/// Relative entropy together with the support decision that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Divergence {
    pub value: ExtReal,
    /// Rank of `supp ρ_φ`.
    pub reference_rank: usize,
    /// Rank of `supp ρ_φ ∨ supp ρ_ω`, computed from `ρ_φ + ρ_ω`.
    pub joint_rank: usize,
    /// Smallest eigenvalue of `ρ_φ` kept in its support.
    pub smallest_retained: Option<f64>,
    /// Largest eigenvalue of `ρ_φ + ρ_ω` treated as zero.
    pub largest_discarded: Option<f64>,
}

/// A reference density with its logarithm precomputed, for evaluating many
/// divergences `S(·, φ)` against the same `φ`.
pub struct LogReference {
    density: Hermitian,
    psd: PsdSpectrum,
    log: Hermitian,
}

impl LogReference {
    pub fn new(density: &Hermitian, num: &Numerics) -> Result<Self> {
        let psd = PsdSpectrum::new(density, num)?;
        let log = psd.log();
        Ok(Self { density: density.clone(), psd, log })
    }

    pub fn rank(&self) -> usize {
        self.psd.rank
    }

    /// `S(ω, φ)` for a density `ω` on the same space.
    pub fn divergence(&self, omega: &Hermitian, num: &Numerics) -> Result<Divergence> {
        let spec = PsdSpectrum::new(omega, num)?;
        self.divergence_from_spectrum(omega, &spec, num)
    }

    pub(crate) fn divergence_from_spectrum(
        &self,
        omega: &Hermitian,
        omega_spec: &PsdSpectrum,
        num: &Numerics,
    ) -> Result<Divergence> {
        if omega.dim() != self.density.dim() {
            return Err(Error::DimensionMismatch { expected: self.density.dim(), found: omega.dim() });
        }
        let dim = omega.dim();
        let (joint_rank, largest_discarded) = if self.psd.rank == dim || omega_spec.rank == 0 {
            (self.psd.rank, self.psd.largest_discarded())
        } else {
            let joint = PsdSpectrum::new(&self.density.add(omega), num)?;
            (joint.rank, joint.largest_discarded())
        };
        let value = if joint_rank > self.psd.rank {
            ExtReal::PosInfinity
        } else {
            ExtReal::Finite(omega_spec.trace_x_log_x() - omega.expectation(&self.log))
        };
        Ok(Divergence {
            value,
            reference_rank: self.psd.rank,
            joint_rank,
            smallest_retained: self.psd.smallest_retained(),
            largest_discarded,
        })
    }
}

/// Relative entropy with per-block support diagnostics merged.
pub fn relative_entropy_report(
    omega: &StateFunctional,
    phi: &StateFunctional,
    num: &Numerics,
) -> Result<Divergence> {
    if omega.algebra() != phi.algebra() {
        return Err(Error::DimensionMismatch { expected: phi.dim(), found: omega.dim() });
    }
    let mut total = Divergence {
        value: ExtReal::ZERO,
        reference_rank: 0,
        joint_rank: 0,
        smallest_retained: None,
        largest_discarded: None,
    };
    for (w, f) in omega.blocks().iter().zip(phi.blocks()) {
        let d = LogReference::new(f, num)?.divergence(w, num)?;
        total.value = total.value + d.value;
        total.reference_rank += d.reference_rank;
        total.joint_rank += d.joint_rank;
        total.smallest_retained = min_opt(total.smallest_retained, d.smallest_retained);
        total.largest_discarded = max_opt(total.largest_discarded, d.largest_discarded);
    }
    Ok(total)
}

fn min_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

fn max_opt(a: Option<f64>, b: Option<f64>) -> Option<f64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// `S(ω, φ)`; `+∞` when `ω` is not supported inside `φ`.
pub fn relative_entropy(
    omega: &StateFunctional,
    phi: &StateFunctional,
    num: &Numerics,
) -> Result<ExtReal> {
    Ok(relative_entropy_report(omega, phi, num)?.value)
}

/// `S(φ) = -trace ρ ln ρ` for a normalized state.
pub fn von_neumann_entropy(phi: &StateFunctional, num: &Numerics) -> Result<f64> {
    phi.require_normalized(num)?;
    let mut s = 0.0;
    for b in phi.blocks() {
        s -= PsdSpectrum::new(b, num)?.trace_x_log_x();
    }
    Ok(s.max(0.0))
}

/// `|S(ω,φ) + Σ_i S(ω_i,ω) - Σ_i S(ω_i,φ)|` with `ω = Σ_i ω_i`.
///
/// Returns `+∞` when one of the three quantities is infinite.
pub fn donald_residual(
    parts: &[StateFunctional],
    phi: &StateFunctional,
    num: &Numerics,
) -> Result<ExtReal> {
    let omega = StateFunctional::sum(parts)?;
    let whole = relative_entropy(&omega, phi, num)?;
    let mut to_sum = ExtReal::ZERO;
    let mut to_phi = ExtReal::ZERO;
    for p in parts {
        to_sum = to_sum + relative_entropy(p, &omega, num)?;
        to_phi = to_phi + relative_entropy(p, phi, num)?;
    }
    Ok(match ((whole + to_sum).finite(), to_phi.finite()) {
        (Some(lhs), Some(rhs)) => ExtReal::Finite((lhs - rhs).abs()),
        _ => ExtReal::PosInfinity,
    })
}

/// `S(φ) - Σ_i p_i S(ω_i/p_i, φ)` for a decomposition `φ = Σ_i ω_i`, `p_i = ω_i(I)`.
///
/// Nonnegative, and zero exactly when every normalized part is pure.
pub fn decomposition_entropy_gap(
    parts: &[StateFunctional],
    phi: &StateFunctional,
    num: &Numerics,
) -> Result<f64> {
    phi.require_normalized(num)?;
    let total = StateFunctional::sum(parts)?;
    let residual = total.distance(phi)?;
    if residual > 1e-9 {
        return Err(Error::NotADecomposition(residual));
    }
    let entropy = von_neumann_entropy(phi, num)?;
    let mut holevo = 0.0;
    for part in parts {
        let p = part.weight();
        if p <= num.zero_weight {
            continue;
        }
        let d = relative_entropy(&part.scaled(1.0 / p), phi, num)?
            .finite()
            .ok_or(Error::InfiniteInformation)?;
        holevo += p * d;
    }
    Ok(entropy - holevo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::sample;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const LN2: f64 = core::f64::consts::LN_2;

    fn state(diag: &[f64]) -> StateFunctional {
        StateFunctional::new(Hermitian::from_real_diag(diag), &Numerics::default()).unwrap()
    }

    fn plus() -> Hermitian {
        let h = core::f64::consts::FRAC_1_SQRT_2;
        Hermitian::projector_onto(&[C64::new(h, 0.0), C64::new(h, 0.0)])
    }

    fn pauli(which: char) -> Hermitian {
        let m = match which {
            'x' => CMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap(),
            'z' => CMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap(),
            _ => unreachable!(),
        };
        Hermitian::new(m, 1e-12).unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let num = Numerics::default();
        assert_eq!(state(&[0.5, 0.5]).evaluate(&pauli('z')).unwrap(), 0.0);
        assert_eq!(state(&[1.0, 0.0]).evaluate(&Hermitian::from_real_diag(&[3.0, 7.0])).unwrap(), 3.0);
        let p = StateFunctional::new(plus(), &num).unwrap();
        assert!((p.evaluate(&pauli('x')).unwrap() - 1.0).abs() < 1e-15);
        assert!((p.evaluate(&Hermitian::identity(2)).unwrap() - p.weight()).abs() < 1e-15);
        assert!(matches!(
            p.evaluate(&Hermitian::identity(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn von_neumann_examples() {
        let num = Numerics::default();
        assert_eq!(von_neumann_entropy(&state(&[1.0, 0.0]), &num).unwrap(), 0.0);
        assert!((von_neumann_entropy(&state(&[0.5, 0.5]), &num).unwrap() - LN2).abs() < 1e-15);
        let expect = -0.9 * 0.9f64.ln() - 0.1 * 0.1f64.ln();
        assert!((von_neumann_entropy(&state(&[0.9, 0.1]), &num).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 0.325083).abs() < 1e-6);
        assert!(matches!(
            von_neumann_entropy(&state(&[0.5, 0.4]), &num),
            Err(Error::NotNormalized(_))
        ));
    }

    #[test]
    fn relative_entropy_examples() {
        let num = Numerics::default();
        let half = state(&[0.5, 0.5]);
        let zero = state(&[1.0, 0.0]);
        assert_eq!(relative_entropy(&half, &half, &num).unwrap(), ExtReal::ZERO);
        let v = relative_entropy(&zero, &half, &num).unwrap().finite().unwrap();
        assert!((v - LN2).abs() < 1e-15);
        assert_eq!(relative_entropy(&half, &zero, &num).unwrap(), ExtReal::PosInfinity);
        for lambda in [0.1, 0.37, 0.5, 1.0] {
            let v = relative_entropy(&half.scaled(lambda), &half, &num).unwrap().finite().unwrap();
            assert!((v - lambda * lambda.ln()).abs() < 1e-15);
        }
    }

    #[test]
    fn infinity_report_carries_margin() {
        let num = Numerics::default();
        let d = relative_entropy_report(&state(&[0.5, 0.5]), &state(&[1.0, 0.0]), &num).unwrap();
        assert_eq!(d.reference_rank, 1);
        assert_eq!(d.joint_rank, 2);
        assert_eq!(d.smallest_retained, Some(1.0));
        assert_eq!(d.largest_discarded, None);
        // a leak just above the cutoff is reported with its margin
        let leak = state(&[1.0 - 1e-9, 1e-9]);
        let d = relative_entropy_report(&leak, &state(&[1.0, 0.0]), &num).unwrap();
        assert!(d.value.is_infinite());
        let d = relative_entropy_report(&state(&[1.0, 1e-13]), &state(&[1.0, 0.0]), &num).unwrap();
        assert!(!d.value.is_infinite());
        assert!(d.largest_discarded.unwrap() < 1e-12);
    }

    #[test]
    fn block_algebra_relative_entropy_is_blockwise() {
        let num = Numerics::default();
        let a = StateFunctional::block_diagonal(
            alloc::vec![Hermitian::from_real_diag(&[0.3]), Hermitian::from_real_diag(&[0.2, 0.5])],
            &num,
        )
        .unwrap();
        let b = StateFunctional::block_diagonal(
            alloc::vec![Hermitian::from_real_diag(&[0.5]), Hermitian::from_real_diag(&[0.25, 0.25])],
            &num,
        )
        .unwrap();
        let v = relative_entropy(&a, &b, &num).unwrap().finite().unwrap();
        let expect = 0.3 * (0.3f64 / 0.5).ln() + 0.2 * (0.2f64 / 0.25).ln() + 0.5 * (0.5f64 / 0.25).ln();
        assert!((v - expect).abs() < 1e-15);
    }

    #[test]
    fn scaling_identity_random() {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..50 {
            let d = rng.random_range(2..=5);
            let w = StateFunctional::new(sample::random_density(d, &mut rng), &num).unwrap();
            let f = StateFunctional::new(sample::random_density(d, &mut rng), &num).unwrap();
            let lambda: f64 = rng.random_range(0.01..1.0);
            let lhs = relative_entropy(&w.scaled(lambda), &f, &num).unwrap().finite().unwrap();
            let rhs = lambda * lambda.ln()
                + lambda * relative_entropy(&w, &f, &num).unwrap().finite().unwrap();
            assert!((lhs - rhs).abs() < 1e-9);
        }
    }

    #[test]
    fn donald_examples() {
        let num = Numerics::default();
        let half = state(&[0.5, 0.5]);
        let r = donald_residual(&[half.scaled(0.5), half.scaled(0.5)], &half, &num).unwrap();
        assert!(r.finite().unwrap() < 1e-15);
        let r = donald_residual(&[state(&[0.5, 0.0]), state(&[0.0, 0.5])], &half, &num).unwrap();
        assert!(r.finite().unwrap() <= 1e-10);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let rho = sample::random_density(3, &mut rng);
            let phi = StateFunctional::new(rho.clone(), &num).unwrap();
            // ρ = Σ_i √ρ a_i √ρ for a random partition of unity a_i
            let root = spectral_decompose(&rho).unwrap().map(|l| l.max(0.0).sqrt());
            let parts: Vec<_> = sample::random_partition(3, 3, 3, 1, &mut rng)
                .maps()
                .iter()
                .map(|m| {
                    let a = m.unit_image();
                    StateFunctional::from_density_unchecked(Hermitian::symmetrized(root.sandwich(&a)))
                })
                .collect();
            let other = StateFunctional::new(sample::random_density(3, &mut rng), &num).unwrap();
            assert!(donald_residual(&parts, &phi, &num).unwrap().finite().unwrap() <= 1e-8);
            assert!(donald_residual(&parts, &other, &num).unwrap().finite().unwrap() <= 1e-8);
        }
    }

    #[test]
    fn donald_flags_infinite_terms() {
        let num = Numerics::default();
        let r = donald_residual(&[state(&[0.5, 0.0]), state(&[0.0, 0.5])], &state(&[1.0, 0.0]), &num)
            .unwrap();
        assert!(r.is_infinite());
        assert_eq!(donald_residual(&[], &state(&[1.0, 0.0]), &num), Err(Error::Empty));
    }

    #[test]
    fn decomposition_gap_examples() {
        let num = Numerics::default();
        for p in [0.1, 0.3, 0.5, 0.8] {
            let phi = state(&[p, 1.0 - p]);
            let gap =
                decomposition_entropy_gap(&[state(&[p, 0.0]), state(&[0.0, 1.0 - p])], &phi, &num).unwrap();
            assert!(gap.abs() < 1e-12);
            let single = decomposition_entropy_gap(core::slice::from_ref(&phi), &phi, &num).unwrap();
            assert!((single - von_neumann_entropy(&phi, &num).unwrap()).abs() < 1e-12);
        }
        let err = decomposition_entropy_gap(&[state(&[0.5, 0.0])], &state(&[0.5, 0.5]), &num);
        assert!(matches!(err, Err(Error::NotADecomposition(_))));
    }

    #[test]
    fn decomposition_gap_commutant_style() {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let rho = sample::random_density(2, &mut rng);
            let phi = StateFunctional::new(rho.clone(), &num).unwrap();
            let root = spectral_decompose(&rho).unwrap().map(|l| l.max(0.0).sqrt());
            let k = rng.random_range(2..=4);
            let parts: Vec<_> = sample::random_partition(2, 2, k, 1, &mut rng)
                .maps()
                .iter()
                .map(|m| {
                    StateFunctional::from_density_unchecked(Hermitian::symmetrized(
                        root.sandwich(&m.unit_image()),
                    ))
                })
                .collect();
            assert!(decomposition_entropy_gap(&parts, &phi, &num).unwrap() >= -1e-8);
        }
    }

    #[test]
    fn lower_semicontinuity_along_full_rank_sequence() {
        let num = Numerics::default();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let w = sample::random_density(3, &mut rng);
        let f = sample::random_density(3, &mut rng);
        let target = relative_entropy(
            &StateFunctional::new(w.clone(), &num).unwrap(),
            &StateFunctional::new(f.clone(), &num).unwrap(),
            &num,
        )
        .unwrap()
        .finite()
        .unwrap();
        let mixed = Hermitian::identity(3).scale(1.0 / 3.0);
        let mut last_gap = f64::INFINITY;
        for k in 1..=24 {
            let eps = 0.5f64.powi(k);
            let wn = StateFunctional::new(w.scale(1.0 - eps).add(&mixed.scale(eps)), &num).unwrap();
            let fnn = StateFunctional::new(f.scale(1.0 - eps).add(&mixed.scale(eps)), &num).unwrap();
            let gap = (relative_entropy(&wn, &fnn, &num).unwrap().finite().unwrap() - target).abs();
            assert!(gap <= last_gap + 1e-12);
            last_gap = gap;
        }
        assert!(last_gap < 1e-5);
    }
}
