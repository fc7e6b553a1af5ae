/// Numerical thresholds shared by every kernel.
///
/// Every value here is reported alongside results by the harness; nothing below
/// is hard-coded elsewhere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Numerics {
    /// Eigenvalues at or below `support_cutoff * λ_max` are outside the support.
    pub support_cutoff: f64,
    /// Eigenvalues in `[-negativity_tol, 0)` are clamped to zero; below is an error.
    pub negativity_tol: f64,
    /// Maximum `|A_ij - conj(A_ji)|` accepted when building a hermitian matrix.
    pub hermiticity_tol: f64,
    /// Maximum `|trace - 1|` for a normalized state.
    pub normalization_tol: f64,
    /// Outcomes with probability at or below this contribute zero.
    pub zero_weight: f64,
    /// Frobenius bound on `Σ ζ_i(I) - I`.
    pub unit_sum_tol: f64,
    /// Maximum number of outcomes of a composed partition.
    pub branch_cap: usize,
    /// Maximum matrix dimension produced by tensor products.
    pub dim_cap: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            support_cutoff: 1e-12,
            negativity_tol: 1e-10,
            hermiticity_tol: 1e-10,
            normalization_tol: 1e-10,
            zero_weight: 1e-14,
            unit_sum_tol: 1e-8,
            branch_cap: 4096,
            dim_cap: 4096,
        }
    }
}
