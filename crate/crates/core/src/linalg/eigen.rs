use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use super::hermitian::Hermitian;
use super::matrix::{CMatrix, C64};
use crate::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigen-decomposition `A = V Λ V†` of a hermitian matrix.
#[derive(Debug, Clone)]
pub struct Spectrum {
    /// Eigenvalues, descending.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

impl Spectrum {
    /// `V f(Λ) V†`.
    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Hermitian {
        let n = self.values.len();
        let fv: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let m = CMatrix::from_fn(n, n, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for (k, &w) in fv.iter().enumerate() {
                if w != 0.0 {
                    acc += v[(i, k)] * v[(j, k)].conj() * w;
                }
            }
            acc
        });
        Hermitian::symmetrized(m)
    }

    pub fn reconstruct(&self) -> Hermitian {
        self.map(|l| l)
    }
}

/// Cyclic complex Jacobi eigensolver.
///
/// Each rotation first removes the phase of the pivot `a_pq` and then applies the
/// real symmetric Jacobi rotation, so the pivot is annihilated exactly.
pub fn spectral_decompose(a: &Hermitian) -> Result<Spectrum> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = CMatrix::identity(n);
    let norm = m.frobenius_norm();
    if !norm.is_finite() {
        return Err(Error::NonFinite("eigensolver input"));
    }

    let mut off = off_diagonal_norm(&m);
    let mut sweeps = 0;
    while off > 1e-15 * norm && off > f64::MIN_POSITIVE {
        if sweeps == MAX_SWEEPS {
            if off <= 1e-12 * norm {
                break;
            }
            return Err(Error::NoConvergence { norm, off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
        off = off_diagonal_norm(&m);
        sweeps += 1;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].re.total_cmp(&m[(i, i)].re));
    let values = order.iter().map(|&k| m[(k, k)].re).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(Spectrum { values, vectors })
}

fn off_diagonal_norm(m: &CMatrix) -> f64 {
    let n = m.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = m[(p, q)];
    let b = apq.norm();
    if b == 0.0 {
        return;
    }
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    let phase_conj = (apq / b).conj();

    let theta = (aqq - app) / (2.0 * b);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J restricted to (p, q): [[c, s], [-s e^{-iφ}, c e^{-iφ}]]
    let jpp = C64::new(c, 0.0);
    let jpq = C64::new(s, 0.0);
    let jqp = phase_conj * (-s);
    let jqq = phase_conj * c;

    let n = m.rows();
    for k in 0..n {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * jpp + akq * jqp;
        m[(k, q)] = akp * jpq + akq * jqq;
    }
    for k in 0..n {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        m[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    m[(p, q)] = C64::new(0.0, 0.0);
    m[(q, p)] = C64::new(0.0, 0.0);
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}
