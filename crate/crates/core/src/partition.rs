//! Completely positive maps in Kraus form and partitions of unity.
//!
//! Maps act on observables (Heisenberg picture). A Kraus operator `K` of shape
//! `out_dim × in_dim` gives
//!
//! ```text
//! ζ(x) = Σ_k K_k† x K_k        x ∈ M_out, ζ(x) ∈ M_in
//! ζ_*(ρ) = Σ_k K_k ρ K_k†      ρ on C^in, so that trace(ζ_*(ρ) x) = trace(ρ ζ(x))
//! ```
//!
//! so a state `φ` on `M_in` pulls back along `ζ` to the functional `φ∘ζ` on
//! `M_out`, whose density is `ζ_*(ρ_φ)`.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::entropy::StateFunctional;
use crate::linalg::{spectral_decompose, CMatrix, Hermitian, C64};
use crate::{sample, Error, Numerics, Result};

/// Kraus operators with Frobenius norm below this are dropped from products.
const NEGLIGIBLE_KRAUS: f64 = 1e-15;
/// Tolerance on `u†u = I` for automorphisms.
const UNITARY_TOL: f64 = 1e-10;
/// Tolerance for idempotence, orthogonality and commutation of projectors.
const PROJECTOR_TOL: f64 = 1e-9;
/// Largest Choi dimension for which validation computes the Choi spectrum.
const CHOI_CHECK_CAP: usize = 256;

/// Completely positive map `x ↦ Σ_k K_k† x K_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausMap {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<CMatrix>,
}

impl KrausMap {
    /// Checked constructor: common shapes, finite entries, sub-unital.
    pub fn new(kraus: Vec<CMatrix>, num: &Numerics) -> Result<Self> {
        let first = kraus.first().ok_or(Error::Empty)?;
        let (out_dim, in_dim) = (first.rows(), first.cols());
        for k in &kraus {
            if k.rows() != out_dim || k.cols() != in_dim {
                return Err(Error::DimensionMismatch { expected: out_dim, found: k.rows() });
            }
            if !k.is_finite() {
                return Err(Error::NonFinite("Kraus operator"));
            }
        }
        let map = Self { in_dim, out_dim, kraus };
        let margin = map.subunital_margin()?;
        if margin < -num.unit_sum_tol {
            return Err(Error::NotSubUnital(-margin));
        }
        Ok(map)
    }

    pub(crate) fn from_kraus_unchecked(kraus: Vec<CMatrix>) -> Self {
        let (out_dim, in_dim) = (kraus[0].rows(), kraus[0].cols());
        Self { in_dim, out_dim, kraus }
    }

    pub fn identity(d: usize) -> Self {
        Self::from_kraus_unchecked(vec![CMatrix::identity(d)])
    }

    /// `x ↦ P x P` for a hermitian `P`.
    pub fn projection(p: &Hermitian) -> Self {
        Self::from_kraus_unchecked(vec![p.as_matrix().clone()])
    }

    /// `x ↦ c·ζ(x)` for `c ≥ 0`.
    pub fn scaled(&self, c: f64) -> Self {
        assert!(c >= 0.0, "CP maps scale by nonnegative factors");
        let s = c.sqrt();
        Self { kraus: self.kraus.iter().map(|k| k.scale(s)).collect(), ..*self }
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    /// `ζ(I) = Σ K†K`.
    pub fn unit_image(&self) -> Hermitian {
        let mut acc = CMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            acc = &acc + &(&k.adjoint() * k);
        }
        Hermitian::symmetrized(acc)
    }

    /// Smallest eigenvalue of `I - ζ(I)`.
    pub fn subunital_margin(&self) -> Result<f64> {
        let gap = Hermitian::identity(self.in_dim).sub(&self.unit_image());
        Ok(*spectral_decompose(&gap)?.values.last().expect("nonempty"))
    }

    /// Heisenberg action on a hermitian observable of `M_out`.
    pub fn apply(&self, x: &Hermitian) -> Result<Hermitian> {
        Ok(Hermitian::symmetrized(self.apply_matrix(x)?))
    }

    /// Heisenberg action on an arbitrary matrix of `M_out`.
    pub fn apply_matrix(&self, x: &CMatrix) -> Result<CMatrix> {
        if x.rows() != self.out_dim || x.cols() != self.out_dim {
            return Err(Error::DimensionMismatch { expected: self.out_dim, found: x.rows() });
        }
        let mut acc = CMatrix::zeros(self.in_dim, self.in_dim);
        for k in &self.kraus {
            acc = &acc + &k.sandwich_adjoint(x);
        }
        Ok(acc)
    }

    /// Predual action `ρ ↦ Σ K ρ K†` (unnormalized).
    pub fn predual(&self, rho: &Hermitian) -> Result<Hermitian> {
        if rho.dim() != self.in_dim {
            return Err(Error::DimensionMismatch { expected: self.in_dim, found: rho.dim() });
        }
        let mut acc = CMatrix::zeros(self.out_dim, self.out_dim);
        for k in &self.kraus {
            acc = &acc + &k.sandwich(rho);
        }
        Ok(Hermitian::symmetrized(acc))
    }

    /// The functional `ω∘ζ` on `M_out`.
    pub fn predual_state(&self, omega: &StateFunctional) -> Result<StateFunctional> {
        Ok(StateFunctional::from_density_unchecked(self.predual(&omega.full_density())?))
    }

    /// Choi matrix `Σ_{ab} E_ab ⊗ ζ(E_ab)` on `C^out ⊗ C^in`.
    pub fn choi(&self) -> Hermitian {
        let n = self.out_dim * self.in_dim;
        let mut acc = CMatrix::zeros(n, n);
        for k in &self.kraus {
            // ζ(E_ab)_ij = Σ_k conj(K[a,i]) K[b,j]
            let w: Vec<C64> = k.as_slice().iter().map(|z| z.conj()).collect();
            acc = &acc + &CMatrix::outer(&w, &w);
        }
        Hermitian::symmetrized(acc)
    }

    /// `self ∘ inner`: `x ↦ self(inner(x))`, Kraus family `{L_l K_k}`.
    pub fn compose(&self, inner: &KrausMap) -> Result<KrausMap> {
        if inner.in_dim != self.out_dim {
            return Err(Error::DimensionMismatch { expected: self.out_dim, found: inner.in_dim });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * inner.kraus.len());
        for l in &inner.kraus {
            for k in &self.kraus {
                let m = l * k;
                if m.frobenius_norm() > NEGLIGIBLE_KRAUS {
                    kraus.push(m);
                }
            }
        }
        if kraus.is_empty() {
            kraus.push(CMatrix::zeros(inner.out_dim, self.in_dim));
        }
        let map = Self { in_dim: self.in_dim, out_dim: inner.out_dim, kraus };
        map.compressed()
    }

    /// Kronecker product `ζ_1 ⊗ ζ_2`.
    pub fn tensor(&self, other: &KrausMap, num: &Numerics) -> Result<KrausMap> {
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.kron(b, num.dim_cap)?);
            }
        }
        Ok(Self {
            in_dim: self.in_dim * other.in_dim,
            out_dim: self.out_dim * other.out_dim,
            kraus,
        })
    }

    /// Minimal Kraus family from the Choi spectrum, used once the family outgrows
    /// `in_dim · out_dim`.
    pub fn compressed(self) -> Result<KrausMap> {
        if self.kraus.len() <= self.in_dim * self.out_dim {
            return Ok(self);
        }
        let spec = spectral_decompose(&self.choi())?;
        let cutoff = spec.values[0].max(0.0) * 1e-14;
        let n = self.in_dim * self.out_dim;
        let mut kraus = Vec::new();
        for (c, &l) in spec.values.iter().enumerate() {
            if l <= cutoff {
                break;
            }
            let s = l.sqrt();
            let data = (0..n).map(|idx| spec.vectors[(idx, c)].conj() * s).collect();
            kraus.push(CMatrix::from_vec(self.out_dim, self.in_dim, data)?);
        }
        if kraus.is_empty() {
            kraus.push(CMatrix::zeros(self.out_dim, self.in_dim));
        }
        Ok(Self { kraus, ..self })
    }

    fn conjugated(&self, left: &CMatrix, right: &CMatrix) -> KrausMap {
        Self { kraus: self.kraus.iter().map(|k| &(left * k) * right).collect(), ..*self }
    }
}

/// Outcome label: a word of elementary outcome indices. Composition and tensor
/// products concatenate words.
pub type Label = Vec<u32>;

/// Finite family of CP maps whose unit images sum to the identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    maps: Vec<KrausMap>,
    labels: Vec<Label>,
}

impl Partition {
    /// Checks common shapes and `‖Σ ζ_i(I) - I‖_F ≤ unit_sum_tol`.
    pub fn new(maps: Vec<KrausMap>, num: &Numerics) -> Result<Self> {
        let labels = (0..maps.len() as u32).map(|i| vec![i]).collect();
        let p = Self::from_parts_unchecked(maps, labels)?;
        let r = p.unit_sum_residual();
        if r > num.unit_sum_tol {
            return Err(Error::NotPartition(r));
        }
        Ok(p)
    }

    fn from_parts_unchecked(maps: Vec<KrausMap>, labels: Vec<Label>) -> Result<Self> {
        let first = maps.first().ok_or(Error::Empty)?;
        for m in &maps {
            if m.in_dim != first.in_dim || m.out_dim != first.out_dim {
                return Err(Error::DimensionMismatch { expected: first.in_dim, found: m.in_dim });
            }
        }
        Ok(Self { maps, labels })
    }

    /// Replace the labels. They must be distinct and one per map.
    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != self.maps.len() {
            return Err(Error::DimensionMismatch { expected: self.maps.len(), found: labels.len() });
        }
        let mut sorted = labels.clone();
        sorted.sort();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidArgument("duplicate outcome labels".into()));
        }
        self.labels = labels;
        Ok(self)
    }

    /// The one-outcome partition `{id}` on `M_d`.
    pub fn trivial(d: usize) -> Self {
        Self { maps: vec![KrausMap::identity(d)], labels: vec![vec![0]] }
    }

    pub fn maps(&self) -> &[KrausMap] {
        &self.maps
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn in_dim(&self) -> usize {
        self.maps[0].in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.maps[0].out_dim
    }

    /// `‖Σ_i ζ_i(I) - I‖_F`.
    pub fn unit_sum_residual(&self) -> f64 {
        let total = Hermitian::sum(self.maps.iter().map(|m| m.unit_image()).collect::<Vec<_>>().iter())
            .expect("nonempty partition");
        total.distance(&CMatrix::identity(self.in_dim()))
    }

    /// The total map `ζ = Σ_i ζ_i`.
    pub fn total_map(&self) -> Result<KrausMap> {
        let kraus = self.maps.iter().flat_map(|m| m.kraus.iter().cloned()).collect();
        KrausMap::from_kraus_unchecked(kraus).compressed()
    }

    /// Density of `φ∘ζ = Σ_i φ∘ζ_i`.
    pub fn predual_total(&self, rho: &Hermitian) -> Result<Hermitian> {
        let parts = self.maps.iter().map(|m| m.predual(rho)).collect::<Result<Vec<_>>>()?;
        Ok(Hermitian::sum(parts.iter()).expect("nonempty partition"))
    }

    /// Outcome probabilities `φ(ζ_i(I))`.
    pub fn weights(&self, phi: &StateFunctional) -> Result<Vec<f64>> {
        let rho = phi.full_density();
        self.maps.iter().map(|m| Ok(m.predual(&rho)?.trace_re())).collect()
    }

    /// `ζ∘η = {ζ_i ∘ η_j}` with labels `(i, j)`; `η` measures the output of `ζ`.
    pub fn compose(&self, eta: &Partition, num: &Numerics) -> Result<Partition> {
        if eta.in_dim() != self.out_dim() {
            return Err(Error::DimensionMismatch { expected: self.out_dim(), found: eta.in_dim() });
        }
        let branches = self.len() * eta.len();
        if branches > num.branch_cap {
            return Err(Error::BranchCap { branches, cap: num.branch_cap });
        }
        let pairs: Vec<(usize, usize)> =
            (0..self.len()).flat_map(|i| (0..eta.len()).map(move |j| (i, j))).collect();
        let maps = crate::par::map_ordered(&pairs, |&(i, j)| self.maps[i].compose(&eta.maps[j]))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let labels = pairs
            .iter()
            .map(|&(i, j)| {
                let mut l = self.labels[i].clone();
                l.extend_from_slice(&eta.labels[j]);
                l
            })
            .collect();
        Self::from_parts_unchecked(maps, labels)
    }

    /// `ζ_1 ⊗ ζ_2` on the tensor product algebra.
    pub fn tensor(&self, other: &Partition, num: &Numerics) -> Result<Partition> {
        let branches = self.len() * other.len();
        if branches > num.branch_cap {
            return Err(Error::BranchCap { branches, cap: num.branch_cap });
        }
        let mut maps = Vec::with_capacity(branches);
        let mut labels = Vec::with_capacity(branches);
        for (a, la) in self.maps.iter().zip(&self.labels) {
            for (b, lb) in other.maps.iter().zip(&other.labels) {
                maps.push(a.tensor(b, num)?);
                let mut l = la.clone();
                l.extend_from_slice(lb);
                labels.push(l);
            }
        }
        Self::from_parts_unchecked(maps, labels)
    }

    /// `θ(ζ) = θ ζ θ⁻¹`, Kraus operators `K ↦ u K u†`.
    pub fn conjugate(&self, theta: &Automorphism) -> Result<Partition> {
        self.conjugate_power(theta, 1)
    }

    /// `θ^k(ζ)` for any integer `k`.
    pub fn conjugate_power(&self, theta: &Automorphism, k: i64) -> Result<Partition> {
        let d = theta.dim();
        if self.in_dim() != d || self.out_dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: self.in_dim() });
        }
        let u = theta.power(k);
        let u_adj = u.adjoint();
        let maps = self.maps.iter().map(|m| m.conjugated(&u, &u_adj)).collect();
        Ok(Self { maps, labels: self.labels.clone() })
    }

    /// Unit-sum, complete-positivity, sub-unitality and sampled Schwartz checks.
    pub fn validate(&self, samples: usize, seed: u64) -> Result<ValidationReport> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut choi_min = Vec::with_capacity(self.len());
        let mut margins = Vec::with_capacity(self.len());
        let mut schwartz_min = f64::INFINITY;
        let xs: Vec<CMatrix> =
            (0..samples).map(|_| sample::ginibre(self.out_dim(), self.out_dim(), &mut rng)).collect();
        for m in &self.maps {
            choi_min.push(if m.in_dim * m.out_dim <= CHOI_CHECK_CAP {
                Some(*spectral_decompose(&m.choi())?.values.last().expect("nonempty"))
            } else {
                None
            });
            margins.push(m.subunital_margin()?);
            for x in &xs {
                let zx = m.apply_matrix(x)?;
                let lhs = m.apply_matrix(&(&x.adjoint() * x))?;
                let gap = Hermitian::symmetrized(&lhs - &(&zx.adjoint() * &zx));
                let scale = 1.0 + x.frobenius_norm().powi(2);
                let low = *spectral_decompose(&gap)?.values.last().expect("nonempty") / scale;
                schwartz_min = schwartz_min.min(low);
            }
        }
        Ok(ValidationReport {
            unit_sum_residual: self.unit_sum_residual(),
            choi_min_eigenvalues: choi_min,
            subunital_margins: margins,
            schwartz_min: if samples == 0 { 0.0 } else { schwartz_min },
            samples,
        })
    }
}

/// Outcome of [`Partition::validate`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub unit_sum_residual: f64,
    /// Smallest Choi eigenvalue per map; `None` when the Choi matrix is too large.
    pub choi_min_eigenvalues: Vec<Option<f64>>,
    /// Smallest eigenvalue of `I - ζ_i(I)` per map.
    pub subunital_margins: Vec<f64>,
    /// Smallest eigenvalue of `ζ_i(x†x) - ζ_i(x)†ζ_i(x)` over samples, relative
    /// to `1 + ‖x‖²`.
    pub schwartz_min: f64,
    pub samples: usize,
}

impl ValidationReport {
    pub fn passes(&self, num: &Numerics) -> bool {
        self.unit_sum_residual <= num.unit_sum_tol
            && self.choi_min_eigenvalues.iter().flatten().all(|&l| l >= -1e-9)
            && self.subunital_margins.iter().all(|&m| m >= -1e-9)
            && self.schwartz_min >= -1e-8
    }
}

/// Inner automorphism `θ(x) = u x u†` of `M_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    u: CMatrix,
}

impl Automorphism {
    pub fn new(u: CMatrix) -> Result<Self> {
        if !u.is_square() {
            return Err(Error::NotSquare { rows: u.rows(), cols: u.cols() });
        }
        if !u.is_finite() {
            return Err(Error::NonFinite("unitary"));
        }
        let defect = (&u.adjoint() * &u).distance(&CMatrix::identity(u.rows()));
        if defect > UNITARY_TOL {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { u })
    }

    pub fn identity(d: usize) -> Self {
        Self { u: CMatrix::identity(d) }
    }

    pub fn dim(&self) -> usize {
        self.u.rows()
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.u
    }

    pub fn inverse(&self) -> Self {
        Self { u: self.u.adjoint() }
    }

    /// `u^k`, with negative powers through `u†`.
    pub fn power(&self, k: i64) -> CMatrix {
        let base = if k < 0 { self.u.adjoint() } else { self.u.clone() };
        let mut acc = CMatrix::identity(self.dim());
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        acc
    }

    pub fn apply(&self, x: &Hermitian) -> Hermitian {
        x.conjugate_by(&self.u)
    }

    /// `‖u†ρu - ρ‖_F`; zero exactly when `φ∘θ = φ`.
    pub fn invariance_residual(&self, phi: &StateFunctional) -> f64 {
        let rho = phi.full_density();
        rho.conjugate_by(&self.u.adjoint()).distance(&rho)
    }
}

/// Von Neumann partition `ζ_i(x) = P_i x P_i`.
pub fn vn_partition(projectors: Vec<Hermitian>, num: &Numerics) -> Result<Partition> {
    check_projectors(&projectors)?;
    Partition::new(projectors.iter().map(KrausMap::projection).collect(), num)
}

fn check_projectors(projectors: &[Hermitian]) -> Result<()> {
    let first = projectors.first().ok_or(Error::Empty)?;
    let d = first.dim();
    let mut total = CMatrix::zeros(d, d);
    for (i, p) in projectors.iter().enumerate() {
        if p.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: p.dim() });
        }
        let idem = (&**p * &**p).distance(p);
        if idem > PROJECTOR_TOL {
            return Err(Error::InvalidProjectors(format!("P{i} is not idempotent ({idem:.3e})")));
        }
        for (j, q) in projectors.iter().enumerate().skip(i + 1) {
            let overlap = (&**p * &**q).frobenius_norm();
            if overlap > PROJECTOR_TOL {
                return Err(Error::InvalidProjectors(format!(
                    "P{i} and P{j} are not orthogonal ({overlap:.3e})"
                )));
            }
        }
        total = &total + &**p;
    }
    let r = total.distance(&CMatrix::identity(d));
    if r > PROJECTOR_TOL {
        return Err(Error::InvalidProjectors(format!("projectors sum to I only within {r:.3e}")));
    }
    Ok(())
}

/// φ-invariant partition `ζ_i(x) = φ(P_i x P_i)/φ(P_i) · P_i` built from the
/// pinching conditional expectation.
///
/// Requires every `P_i` to commute with `ρ_φ`. An outcome with `φ(P_i) = 0` uses
/// the normalized trace on `P_i` instead, which leaves `φ∘ζ = φ` intact.
pub fn pinching_invariant_partition(
    projectors: Vec<Hermitian>,
    phi: &StateFunctional,
    num: &Numerics,
) -> Result<Partition> {
    check_projectors(&projectors)?;
    let rho = phi.full_density();
    if rho.dim() != projectors[0].dim() {
        return Err(Error::DimensionMismatch { expected: projectors[0].dim(), found: rho.dim() });
    }
    let mut maps = Vec::with_capacity(projectors.len());
    for (i, p) in projectors.iter().enumerate() {
        let comm = (&**p * &*rho).distance(&(&*rho * &**p));
        if comm > PROJECTOR_TOL {
            return Err(Error::UnsupportedConditionalExpectation { index: i, residual: comm });
        }
        let w = p.expectation(&rho);
        let sigma = if w > num.zero_weight {
            Hermitian::symmetrized(p.sandwich(&rho)).scale(1.0 / w)
        } else {
            p.scale(1.0 / p.trace_re())
        };
        let sigma_spec = spectral_decompose(&sigma)?;
        let range_spec = spectral_decompose(p)?;
        let cutoff = sigma_spec.values[0] * num.support_cutoff;
        let mut kraus = Vec::new();
        for (a, &lambda) in sigma_spec.values.iter().enumerate() {
            if lambda <= cutoff {
                break;
            }
            let v: Vec<C64> = sigma_spec.vectors.column(a).iter().map(|z| z * lambda.sqrt()).collect();
            for (b, &mu) in range_spec.values.iter().enumerate() {
                if mu < 0.5 {
                    break;
                }
                kraus.push(CMatrix::outer(&v, &range_spec.vectors.column(b)));
            }
        }
        maps.push(KrausMap::from_kraus_unchecked(kraus));
    }
    Partition::new(maps, num)
}

/// Rank-one projective measurement in the columns of a unitary.
pub fn basis_measurement(u: &CMatrix, num: &Numerics) -> Result<Partition> {
    let projectors = (0..u.cols()).map(|j| Hermitian::projector_onto(&u.column(j))).collect();
    vn_partition(projectors, num)
}

/// Computational-basis measurement on `M_d`.
pub fn computational_measurement(d: usize) -> Partition {
    let maps = (0..d)
        .map(|j| {
            let mut diag = vec![0.0; d];
            diag[j] = 1.0;
            KrausMap::projection(&Hermitian::from_real_diag(&diag))
        })
        .collect();
    Partition::new(maps, &Numerics::default()).expect("basis projectors sum to I")
}

/// Describe a label for display, e.g. `0.1.1`.
pub fn label_string(label: &Label) -> String {
    let mut s = String::new();
    for (k, i) in label.iter().enumerate() {
        if k > 0 {
            s.push('.');
        }
        s.push_str(&format!("{i}"));
    }
    s
}
