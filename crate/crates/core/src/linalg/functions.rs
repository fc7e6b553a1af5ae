#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use super::eigen::{spectral_decompose, Spectrum};
use super::hermitian::Hermitian;
use super::matrix::{CMatrix, C64};
use crate::{Error, Numerics, Result};

/// Logarithm of a positive semidefinite matrix restricted to its support.
#[derive(Debug, Clone)]
pub struct SupportLog {
    /// `V ln(Λ_+) V†`, zero on the kernel.
    pub log: Hermitian,
    /// Orthogonal projection onto the numerical support.
    pub projection: Hermitian,
    pub rank: usize,
    /// Smallest eigenvalue kept in the support.
    pub smallest_retained: Option<f64>,
    /// Largest eigenvalue treated as zero.
    pub largest_discarded: Option<f64>,
    /// Absolute threshold actually applied (`cutoff · λ_max`).
    pub threshold: f64,
    pub spectrum: Spectrum,
}

/// Spectrum of a positive semidefinite matrix, with the support threshold.
pub(crate) struct PsdSpectrum {
    pub spectrum: Spectrum,
    pub threshold: f64,
    pub rank: usize,
}

impl PsdSpectrum {
    pub fn new(a: &Hermitian, num: &Numerics) -> Result<Self> {
        Self::from_spectrum(spectral_decompose(a)?, num)
    }

    pub fn from_spectrum(mut spectrum: Spectrum, num: &Numerics) -> Result<Self> {
        if let Some(&min) = spectrum.values.last() {
            if min < -num.negativity_tol {
                return Err(Error::NotPositive(min));
            }
        }
        for l in spectrum.values.iter_mut() {
            if *l < 0.0 {
                *l = 0.0;
            }
        }
        let lmax = spectrum.values.first().copied().unwrap_or(0.0);
        let threshold = num.support_cutoff * lmax;
        let rank = spectrum.values.iter().filter(|&&l| l > threshold && l > 0.0).count();
        Ok(Self { spectrum, threshold, rank })
    }

    /// Retained eigenvalues (the first `rank` entries).
    pub fn support_values(&self) -> &[f64] {
        &self.spectrum.values[..self.rank]
    }

    /// `Σ λ ln λ` over the support.
    pub fn trace_x_log_x(&self) -> f64 {
        self.support_values().iter().map(|&l| l * l.ln()).sum()
    }

    pub fn smallest_retained(&self) -> Option<f64> {
        self.support_values().last().copied()
    }

    pub fn largest_discarded(&self) -> Option<f64> {
        self.spectrum.values.get(self.rank).copied()
    }

    pub fn log(&self) -> Hermitian {
        let rank = self.rank;
        let mut k = 0;
        self.spectrum.map(|l| {
            let out = if k < rank { l.ln() } else { 0.0 };
            k += 1;
            out
        })
    }

    pub fn projection(&self) -> Hermitian {
        let rank = self.rank;
        let mut k = 0;
        self.spectrum.map(|_| {
            let out = if k < rank { 1.0 } else { 0.0 };
            k += 1;
            out
        })
    }
}

/// `ln A` on the support of a positive semidefinite `A`.
///
/// Eigenvalues in `[-negativity_tol, 0)` are clamped to zero; eigenvalues at or
/// below `support_cutoff · λ_max` are outside the support and contribute zero.
pub fn matrix_log_on_support(a: &Hermitian, num: &Numerics) -> Result<SupportLog> {
    let psd = PsdSpectrum::new(a, num)?;
    Ok(SupportLog {
        log: psd.log(),
        projection: psd.projection(),
        rank: psd.rank,
        smallest_retained: psd.smallest_retained(),
        largest_discarded: psd.largest_discarded(),
        threshold: psd.threshold,
        spectrum: psd.spectrum,
    })
}

/// Orthogonal projection onto the numerical support of `a ⪰ 0`.
pub fn support_projection(a: &Hermitian, num: &Numerics) -> Result<Hermitian> {
    Ok(PsdSpectrum::new(a, num)?.projection())
}

/// The unitary `exp(i H)`.
pub fn exp_i_hermitian(h: &Hermitian) -> Result<CMatrix> {
    let s = spectral_decompose(h)?;
    let n = h.dim();
    let v = &s.vectors;
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let mut acc = C64::new(0.0, 0.0);
        for (k, &l) in s.values.iter().enumerate() {
            acc += v[(i, k)] * v[(j, k)].conj() * C64::new(l.cos(), l.sin());
        }
        acc
    }))
}

/// `exp(H)` for hermitian `H`; used to build test inputs with known logarithms.
#[cfg(test)]
pub(crate) fn exp_hermitian(h: &Hermitian) -> Result<Hermitian> {
    Ok(spectral_decompose(h)?.map(|l| l.exp()))
}
