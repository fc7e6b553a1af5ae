//! Random instances for property suites and randomized oracles.
//!
//! All generators take an explicit RNG so every suite is reproducible from a
//! seed.

use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::classical::FunctionPartition;
use crate::linalg::{spectral_decompose, CMatrix, Hermitian, C64};
use crate::partition::{KrausMap, Partition};

/// Standard normal deviate (Box–Muller).
pub fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u1: f64 = 1.0 - rng.random::<f64>();
    let u2: f64 = rng.random::<f64>();
    (-2.0 * u1.ln()).sqrt() * (core::f64::consts::TAU * u2).cos()
}

fn uniform_pm1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    2.0 * rng.random::<f64>() - 1.0
}

/// Hermitian matrix with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_hermitian<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Hermitian {
    let m = CMatrix::from_fn(d, d, |_, _| C64::new(uniform_pm1(rng), uniform_pm1(rng)));
    Hermitian::symmetrized(m)
}

/// Matrix with i.i.d. complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| C64::new(gaussian(rng), gaussian(rng)))
}

/// Full-rank density matrix from the induced (Ginibre) measure.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Hermitian {
    random_density_of_rank(d, d, rng)
}

/// Density matrix of the given rank.
pub fn random_density_of_rank<R: Rng + ?Sized>(d: usize, rank: usize, rng: &mut R) -> Hermitian {
    let g = ginibre(d, rank, rng);
    let w = &g * &g.adjoint();
    let t = w.trace().re;
    Hermitian::symmetrized(w.scale(1.0 / t))
}

/// Unit vector, uniformly distributed on the sphere.
pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<C64> {
    let v: Vec<C64> = (0..d).map(|_| C64::new(gaussian(rng), gaussian(rng))).collect();
    let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / n).collect()
}

/// Haar-distributed unitary (Gram–Schmidt on a Ginibre matrix).
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let g = ginibre(d, d, rng);
    let mut cols: Vec<Vec<C64>> = Vec::with_capacity(d);
    for j in 0..d {
        let mut v = g.column(j);
        for u in &cols {
            let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
            for (x, a) in v.iter_mut().zip(u) {
                *x -= proj * a;
            }
        }
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        cols.push(v.into_iter().map(|z| z / n).collect());
    }
    CMatrix::from_fn(d, d, |i, j| cols[j][i])
}

/// `Σ_k G_k† G_k`-normalized random partition of unity with `outcomes` maps of
/// `kraus_per_map` Kraus operators each.
///
/// Kraus operators are `out_dim × in_dim` and satisfy `Σ K†K = I` exactly up to
/// roundoff. Needs `outcomes · kraus_per_map · out_dim ≥ in_dim`.
pub fn random_partition<R: Rng + ?Sized>(
    in_dim: usize,
    out_dim: usize,
    outcomes: usize,
    kraus_per_map: usize,
    rng: &mut R,
) -> Partition {
    let raw: Vec<Vec<CMatrix>> = (0..outcomes)
        .map(|_| (0..kraus_per_map).map(|_| ginibre(out_dim, in_dim, rng)).collect())
        .collect();
    let mut s = CMatrix::zeros(in_dim, in_dim);
    for g in raw.iter().flatten() {
        s = &s + &(&g.adjoint() * g);
    }
    let inv_sqrt = spectral_decompose(&Hermitian::symmetrized(s))
        .expect("gram matrix decomposes")
        .map(|l| 1.0 / l.sqrt());
    let maps = raw
        .into_iter()
        .map(|ks| {
            let ks = ks.into_iter().map(|g| &g * &inv_sqrt).collect();
            KrausMap::from_kraus_unchecked(ks)
        })
        .collect();
    Partition::new(maps, &crate::Numerics::default()).expect("normalized family is a partition")
}

/// Random unital completely positive map on `M_d` (a one-outcome partition).
pub fn random_unital_channel<R: Rng + ?Sized>(d: usize, kraus: usize, rng: &mut R) -> KrausMap {
    random_partition(d, d, 1, kraus, rng).maps()[0].clone()
}

/// Random sub-unital family completed to a partition by the absorber map
/// `x ↦ A x A` with `A = (I - Σ ζ_i(I))^{1/2}`.
pub fn random_partition_with_absorber<R: Rng + ?Sized>(
    d: usize,
    outcomes: usize,
    rng: &mut R,
) -> Partition {
    let mut maps: Vec<KrausMap> = (0..outcomes)
        .map(|_| KrausMap::from_kraus_unchecked(alloc::vec![ginibre(d, d, rng)]))
        .collect();
    let mut total = CMatrix::zeros(d, d);
    for m in &maps {
        total = &total + m.unit_image().as_matrix();
    }
    let lmax = spectral_decompose(&Hermitian::symmetrized(total.clone()))
        .expect("decomposes")
        .values[0];
    // shrink so that the family is strictly sub-unital
    let shrink = 0.9 / lmax;
    maps = maps.into_iter().map(|m| m.scaled(shrink)).collect();
    let rest = &CMatrix::identity(d) - &total.scale(shrink);
    let absorber = spectral_decompose(&Hermitian::symmetrized(rest))
        .expect("decomposes")
        .map(|l| l.max(0.0).sqrt());
    maps.push(KrausMap::from_kraus_unchecked(alloc::vec![absorber.into_matrix()]));
    Partition::new(maps, &crate::Numerics::default()).expect("completed family is a partition")
}

/// Uniform random permutation image (`x ↦ image[x]`).
pub fn random_permutation<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<usize> {
    let mut image: Vec<usize> = (0..m).collect();
    image.shuffle(rng);
    image
}

/// Random probability vector constant on the cycles of `image`, hence invariant
/// under the permutation.
pub fn invariant_measure<R: Rng + ?Sized>(image: &[usize], rng: &mut R) -> Vec<f64> {
    let raw = random_probability(image.len(), rng);
    let mut out = alloc::vec![0.0; image.len()];
    let mut seen = alloc::vec![false; image.len()];
    for start in 0..image.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cycle.push(x);
            x = image[x];
        }
        let avg = cycle.iter().map(|&c| raw[c]).sum::<f64>() / cycle.len() as f64;
        for c in cycle {
            out[c] = avg;
        }
    }
    out
}

/// Random unitary commuting with `rho`: random phases in its eigenbasis.
pub fn fixing_unitary<R: Rng + ?Sized>(rho: &Hermitian, rng: &mut R) -> CMatrix {
    let s = spectral_decompose(rho).expect("hermitian input decomposes");
    let v = &s.vectors;
    let d = rho.dim();
    let phases: Vec<C64> = (0..d)
        .map(|_| {
            let a = core::f64::consts::TAU * rng.random::<f64>();
            C64::new(a.cos(), a.sin())
        })
        .collect();
    CMatrix::from_fn(d, d, |i, j| (0..d).map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj()).sum())
}

/// Probability vector from normalized exponential draws.
pub fn random_probability<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / s).collect()
}

/// Random member of the class `ℒ`: nonnegative functions with `Σ ζ_i² = 1`.
pub fn random_function_partition<R: Rng + ?Sized>(
    m: usize,
    k: usize,
    rng: &mut R,
) -> FunctionPartition {
    let mut cols: Vec<Vec<f64>> = (0..k).map(|_| Vec::with_capacity(m)).collect();
    for _ in 0..m {
        let p = random_probability(k, rng);
        for (c, w) in cols.iter_mut().zip(p) {
            c.push(w.sqrt());
        }
    }
    FunctionPartition::new(cols).expect("rows are probability vectors")
}
