use alloc::vec::Vec;
use core::ops::Deref;

use super::matrix::{CMatrix, C64};
use crate::{Error, Result};

/// A square matrix equal to its adjoint, stored symmetrized.
#[derive(Debug, Clone, PartialEq)]
pub struct Hermitian(CMatrix);

impl Hermitian {
    /// Accepts `m` if it is square, finite and hermitian within `tol`; the stored
    /// matrix is `(m + m†)/2`.
    pub fn new(m: CMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare { rows: m.rows(), cols: m.cols() });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite("hermitian matrix"));
        }
        let defect = m.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrize a matrix known to be hermitian up to roundoff.
    pub fn symmetrized(mut m: CMatrix) -> Self {
        debug_assert!(m.is_square());
        let n = m.rows();
        for i in 0..n {
            let d = m[(i, i)].re;
            m[(i, i)] = C64::new(d, 0.0);
            for j in (i + 1)..n {
                let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
                m[(i, j)] = avg;
                m[(j, i)] = avg.conj();
            }
        }
        Hermitian(m)
    }

    pub fn identity(n: usize) -> Self {
        Hermitian(CMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Hermitian(CMatrix::zeros(n, n))
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        Hermitian(CMatrix::from_real_diag(diag))
    }

    /// `|v⟩⟨v|`.
    pub fn projector_onto(v: &[C64]) -> Self {
        Self::symmetrized(CMatrix::outer(v, v))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn as_matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    /// Real trace.
    pub fn trace_re(&self) -> f64 {
        self.0.trace().re
    }

    /// `trace(self · x)`, real because both factors are hermitian.
    pub fn expectation(&self, x: &Hermitian) -> f64 {
        self.0.trace_product_re(&x.0)
    }

    pub fn scale(&self, c: f64) -> Self {
        Hermitian(self.0.scale(c))
    }

    pub fn add(&self, other: &Hermitian) -> Self {
        Hermitian(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Hermitian) -> Self {
        Hermitian(&self.0 - &other.0)
    }

    /// `u · self · u†`.
    pub fn conjugate_by(&self, u: &CMatrix) -> Self {
        Self::symmetrized(u.sandwich(&self.0))
    }

    /// Real diagonal entries.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0[(i, i)].re).collect()
    }

    /// Sum of a nonempty family of equal-size hermitian matrices.
    pub fn sum<'a>(items: impl IntoIterator<Item = &'a Hermitian>) -> Option<Hermitian> {
        let mut it = items.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, h| acc.add(h)))
    }
}

impl Deref for Hermitian {
    type Target = CMatrix;
    fn deref(&self) -> &CMatrix {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_asymmetric_input() {
        let m = CMatrix::from_real(2, 2, &[1.0, 0.5, 0.4, 1.0]).unwrap();
        assert!(matches!(Hermitian::new(m, 1e-10), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn symmetrizes_within_tolerance() {
        let m = CMatrix::from_vec(
            2,
            2,
            alloc::vec![
                C64::new(1.0, 1e-12),
                C64::new(0.0, 1.0),
                C64::new(0.0, -1.0 + 5e-11),
                C64::new(2.0, 0.0)
            ],
        )
        .unwrap();
        let h = Hermitian::new(m, 1e-10).unwrap();
        assert_eq!(h.hermiticity_defect(), 0.0);
        assert_eq!(h[(0, 0)].im, 0.0);
    }
}
