//! The commutative case on finite probability spaces.
//!
//! A partition in the class `ℒ` is a family of nonnegative functions with
//! `Σ_i ζ_i(x)² = 1`; the map `ζ_i` multiplies by `g_i = ζ_i²`. Its information is
//!
//! ```text
//! H(ζ) = -Σ_i μ(g_i) ln μ(g_i) + Σ_i μ(g_i ln g_i)
//! ```
//!
//! which is the quantum information of the diagonal embedding. Composition is
//! the pointwise product, and a measure-preserving permutation `T` acts by
//! `θ(ζ)_i = ζ_i ∘ T`.
//!
//! Markov shifts are handled exactly through cylinder measures, and circulant
//! chains also admit a finite measure-preserving model on words (see
//! [`SymbolicShift::circulant_embedding`]) that reproduces the `a_n` sequence of
//! the shift for every `n` up to the window length.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::entropy::StateFunctional;
use crate::info::EntropySequence;
use crate::linalg::{CMatrix, Hermitian, C64};
use crate::partition::{Automorphism, KrausMap, Partition};
use crate::{Error, Numerics, Result};

const MEASURE_TOL: f64 = 1e-12;
const UNIT_TOL: f64 = 1e-10;
const STOCHASTIC_TOL: f64 = 1e-10;
const CIRCULANT_TOL: f64 = 1e-12;
/// Default largest window for exact cylinder enumeration.
pub const DEFAULT_WINDOW_CAP: usize = 12;

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

fn shannon(p: &[f64]) -> f64 {
    -p.iter().map(|&x| xlogx(x)).sum::<f64>()
}

/// A finite set of points with a probability measure.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSpace {
    measure: Vec<f64>,
}

impl FiniteSpace {
    pub fn new(measure: Vec<f64>) -> Result<Self> {
        if measure.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(x) = measure.iter().find(|x| !x.is_finite() || **x < 0.0) {
            return Err(Error::NotProbability(format!("entry {x} is not a nonnegative number")));
        }
        let s: f64 = measure.iter().sum();
        if (s - 1.0).abs() > MEASURE_TOL {
            return Err(Error::NotProbability(format!("entries sum to {s}")));
        }
        Ok(Self { measure })
    }

    pub fn uniform(m: usize) -> Self {
        Self { measure: vec![1.0 / m as f64; m] }
    }

    pub fn len(&self) -> usize {
        self.measure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measure.is_empty()
    }

    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    /// `μ(f) = Σ_x μ_x f(x)`.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.measure.iter().zip(f).map(|(m, v)| m * v).sum()
    }

    fn check(&self, zeta: &FunctionPartition) -> Result<()> {
        if zeta.points() != self.len() {
            return Err(Error::DimensionMismatch { expected: self.len(), found: zeta.points() });
        }
        Ok(())
    }
}

/// A partition in `ℒ`, stored as nonnegative representatives `|ζ_i|`.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionPartition {
    functions: Vec<Vec<f64>>,
}

impl FunctionPartition {
    /// Functions are given as one value vector per outcome.
    pub fn new(functions: Vec<Vec<f64>>) -> Result<Self> {
        let m = functions.first().ok_or(Error::Empty)?.len();
        if m == 0 {
            return Err(Error::Empty);
        }
        for f in &functions {
            if f.len() != m {
                return Err(Error::DimensionMismatch { expected: m, found: f.len() });
            }
            if f.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite("partition function"));
            }
        }
        let functions: Vec<Vec<f64>> =
            functions.into_iter().map(|f| f.into_iter().map(f64::abs).collect()).collect();
        for x in 0..m {
            let s: f64 = functions.iter().map(|f| f[x] * f[x]).sum();
            if (s - 1.0).abs() > UNIT_TOL {
                return Err(Error::NotPartition((s - 1.0).abs()));
            }
        }
        Ok(Self { functions })
    }

    /// Indicator partition: point `x` belongs to outcome `cells[x]` of `k`.
    pub fn indicator(cells: &[usize], k: usize) -> Result<Self> {
        if let Some(c) = cells.iter().find(|&&c| c >= k) {
            return Err(Error::InvalidArgument(format!("cell {c} out of range for {k} outcomes")));
        }
        let functions = (0..k)
            .map(|i| cells.iter().map(|&c| if c == i { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(functions)
    }

    pub fn trivial(m: usize) -> Self {
        Self { functions: vec![vec![1.0; m]] }
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn points(&self) -> usize {
        self.functions[0].len()
    }

    pub fn functions(&self) -> &[Vec<f64>] {
        &self.functions
    }

    /// `g_i = ζ_i²`, the image of the constant function 1 under `ζ_i`.
    pub fn square(&self, i: usize) -> Vec<f64> {
        self.functions[i].iter().map(|v| v * v).collect()
    }

    pub fn is_indicator(&self) -> bool {
        self.functions.iter().flatten().all(|&v| v == 0.0 || v == 1.0)
    }

    /// Pointwise products `ζ_i η_j`, ordered with `i` outer.
    pub fn compose(&self, other: &FunctionPartition, branch_cap: usize) -> Result<Self> {
        if self.points() != other.points() {
            return Err(Error::DimensionMismatch { expected: self.points(), found: other.points() });
        }
        let branches = self.len() * other.len();
        if branches > branch_cap {
            return Err(Error::BranchCap { branches, cap: branch_cap });
        }
        let mut functions = Vec::with_capacity(branches);
        for f in &self.functions {
            for g in &other.functions {
                functions.push(f.iter().zip(g).map(|(a, b)| a * b).collect());
            }
        }
        Ok(Self { functions })
    }

    /// `ζ_i ∘ T`.
    pub fn pulled_by(&self, t: &Permutation) -> Self {
        let functions = self
            .functions
            .iter()
            .map(|f| (0..f.len()).map(|x| f[t.apply(x)]).collect())
            .collect();
        Self { functions }
    }

    /// `θ^k(ζ) = ζ ∘ T^k` for any integer `k`.
    pub fn shifted(&self, t: &Permutation, k: i64) -> Self {
        self.pulled_by(&t.power(k))
    }
}

/// A bijection of `{0, …, m-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// `image[x] = T(x)`.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let m = image.len();
        let mut seen = vec![false; m];
        for &y in &image {
            if y >= m || seen[y] {
                return Err(Error::InvalidPermutation(format!("{image:?} is not a bijection")));
            }
            seen[y] = true;
        }
        Ok(Self { image })
    }

    pub fn identity(m: usize) -> Self {
        Self { image: (0..m).collect() }
    }

    /// `x ↦ x + 1 mod m`.
    pub fn cyclic(m: usize) -> Self {
        Self { image: (0..m).map(|x| (x + 1) % m).collect() }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.len()];
        for (x, &y) in self.image.iter().enumerate() {
            inv[y] = x;
        }
        Self { image: inv }
    }

    /// `self ∘ other`.
    pub fn after(&self, other: &Permutation) -> Self {
        Self { image: other.image.iter().map(|&y| self.image[y]).collect() }
    }

    pub fn power(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity(self.len());
        for _ in 0..k.unsigned_abs() {
            acc = base.after(&acc);
        }
        acc
    }

    /// Least `p ≥ 1` with `T^p = id`.
    pub fn period(&self) -> usize {
        let id = Self::identity(self.len());
        let mut acc = self.clone();
        let mut p = 1;
        while acc != id {
            acc = self.after(&acc);
            p += 1;
        }
        p
    }

    /// `max_x |μ(T x) - μ(x)|`; zero exactly when `μ∘T = μ`.
    pub fn invariance_residual(&self, mu: &FiniteSpace) -> f64 {
        let m = mu.measure();
        self.image.iter().enumerate().map(|(x, &y)| (m[y] - m[x]).abs()).fold(0.0, f64::max)
    }

    fn require_preserves(&self, mu: &FiniteSpace) -> Result<()> {
        if self.len() != mu.len() {
            return Err(Error::DimensionMismatch { expected: mu.len(), found: self.len() });
        }
        let r = self.invariance_residual(mu);
        if r > MEASURE_TOL {
            return Err(Error::NotMeasurePreserving(r));
        }
        Ok(())
    }

    /// The unitary with `u_{x, T(x)} = 1`, so that `u diag(f) u† = diag(f ∘ T)`.
    pub fn to_automorphism(&self) -> Automorphism {
        let m = self.len();
        let mut u = CMatrix::zeros(m, m);
        for (x, &y) in self.image.iter().enumerate() {
            u[(x, y)] = C64::new(1.0, 0.0);
        }
        Automorphism::new(u).expect("permutation matrices are unitary")
    }
}

/// `H(ζ)` on a finite space.
pub fn classical_information(mu: &FiniteSpace, zeta: &FunctionPartition) -> Result<f64> {
    mu.check(zeta)?;
    let mut h = 0.0;
    for i in 0..zeta.len() {
        let g = zeta.square(i);
        h -= xlogx(mu.integrate(&g));
        h += mu.measure().iter().zip(&g).map(|(m, &v)| m * xlogx(v)).sum::<f64>();
    }
    Ok(h)
}

/// `H(ζ|η) = H(ζ∘η) - H(η)`.
pub fn classical_conditional(
    mu: &FiniteSpace,
    zeta: &FunctionPartition,
    eta: &FunctionPartition,
    num: &Numerics,
) -> Result<f64> {
    Ok(classical_information(mu, &zeta.compose(eta, num.branch_cap)?)? - classical_information(mu, eta)?)
}

/// `H(ζ|η)` through the conditional expectation onto the σ-field of an
/// indicator partition `η`:
/// `-Σ_i μ(E_η[g_i] ln E_η[g_i]) + Σ_i μ(g_i ln g_i)`.
pub fn conditional_expectation_form(
    mu: &FiniteSpace,
    zeta: &FunctionPartition,
    eta: &FunctionPartition,
) -> Result<f64> {
    mu.check(zeta)?;
    mu.check(eta)?;
    if !eta.is_indicator() {
        return Err(Error::InvalidArgument("conditioning partition must consist of indicators".into()));
    }
    let cells: Vec<Vec<f64>> = (0..eta.len()).map(|j| eta.square(j)).collect();
    let cell_mass: Vec<f64> = cells.iter().map(|c| mu.integrate(c)).collect();
    let mut h = 0.0;
    for i in 0..zeta.len() {
        let g = zeta.square(i);
        let mut cond = vec![0.0; mu.len()];
        for (c, &mass) in cells.iter().zip(&cell_mass) {
            if mass <= 0.0 {
                continue;
            }
            let avg = mu.measure().iter().zip(c).zip(&g).map(|((m, ci), gi)| m * ci * gi).sum::<f64>() / mass;
            for (e, ci) in cond.iter_mut().zip(c) {
                *e += avg * ci;
            }
        }
        h -= mu.measure().iter().zip(&cond).map(|(m, &e)| m * xlogx(e)).sum::<f64>();
        h += mu.measure().iter().zip(&g).map(|(m, &v)| m * xlogx(v)).sum::<f64>();
    }
    Ok(h)
}

/// `ζ⁻_n = θ⁻¹(ζ)∘…∘θ⁻ⁿ(ζ)` with `θ⁻ᵏ(ζ)_i = ζ_i ∘ T⁻ᵏ`.
pub fn classical_refinement(
    zeta: &FunctionPartition,
    t: &Permutation,
    n: usize,
    num: &Numerics,
) -> Result<FunctionPartition> {
    if n == 0 {
        return Err(Error::InvalidArgument("refinement length must be positive".into()));
    }
    let mut acc = zeta.shifted(t, -1);
    for k in 2..=n as i64 {
        acc = acc.compose(&zeta.shifted(t, -k), num.branch_cap)?;
    }
    Ok(acc)
}

/// `ζ_n = θⁿ⁻¹(ζ)∘…∘θ(ζ)∘ζ` (`n` factors).
pub fn classical_history(
    zeta: &FunctionPartition,
    t: &Permutation,
    n: usize,
    num: &Numerics,
) -> Result<FunctionPartition> {
    if n == 0 {
        return Err(Error::InvalidArgument("history length must be positive".into()));
    }
    let mut acc = zeta.clone();
    for k in 1..n as i64 {
        acc = zeta.shifted(t, k).compose(&acc, num.branch_cap)?;
    }
    Ok(acc)
}

/// `a_n = H(ζ|ζ⁻_n)` for a measure-preserving permutation.
pub fn permutation_entropy_sequence(
    mu: &FiniteSpace,
    t: &Permutation,
    zeta: &FunctionPartition,
    n_max: usize,
    num: &Numerics,
) -> Result<EntropySequence> {
    t.require_preserves(mu)?;
    mu.check(zeta)?;
    if n_max == 0 {
        return Err(Error::InvalidArgument("sequence length must be positive".into()));
    }
    let bound = classical_information(mu, zeta)?;
    let mut values = Vec::with_capacity(n_max);
    let mut alternative = Vec::with_capacity(n_max);
    let mut past = zeta.shifted(t, -1);
    let mut history = zeta.clone();
    for n in 1..=n_max as i64 {
        if n > 1 {
            past = past.compose(&zeta.shifted(t, -n), num.branch_cap)?;
            history = zeta.shifted(t, n - 1).compose(&history, num.branch_cap)?;
        }
        values.push(classical_conditional(mu, zeta, &past, num)?);
        alternative.push(classical_conditional(mu, &zeta.shifted(t, n), &history, num)?);
    }
    Ok(EntropySequence::from_values(values, alternative, bound, 0.0))
}

/// Finite-`n` scaffolding of the comparison `h(ζ) ≤ h(η) + H(ζ|η)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub n: usize,
    /// `H(ζ_n)`.
    pub lhs: f64,
    /// `H(η_n) + n H(ζ|η)`.
    pub rhs: f64,
    /// `lhs - rhs`; nonpositive when the bound holds.
    pub residual: f64,
}

impl ComparisonReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.residual <= tol
    }
}

/// `H(ζ_n) ≤ H(η_n) + n·H(ζ|η)` with `ζ_n`, `η_n` the `n`-step histories.
pub fn partition_comparison_bound(
    mu: &FiniteSpace,
    t: &Permutation,
    zeta: &FunctionPartition,
    eta: &FunctionPartition,
    n: usize,
    num: &Numerics,
) -> Result<ComparisonReport> {
    t.require_preserves(mu)?;
    let lhs = classical_information(mu, &classical_history(zeta, t, n, num)?)?;
    let rhs = classical_information(mu, &classical_history(eta, t, n, num)?)?
        + n as f64 * classical_conditional(mu, zeta, eta, num)?;
    Ok(ComparisonReport { n, lhs, rhs, residual: lhs - rhs })
}

/// The diagonal embedding `(diag(μ), {x ↦ diag(ζ_i) x diag(ζ_i)})` into `M_m`.
pub fn embed_diagonal(mu: &FiniteSpace, zeta: &FunctionPartition, num: &Numerics) -> Result<(StateFunctional, Partition)> {
    mu.check(zeta)?;
    let phi = StateFunctional::new(Hermitian::from_real_diag(mu.measure()), num)?;
    let maps = zeta
        .functions()
        .iter()
        .map(|f| KrausMap::from_kraus_unchecked(vec![CMatrix::from_real_diag(f)]))
        .collect();
    Ok((phi, Partition::new(maps, num)?))
}

/// A stationary Markov shift on `s` symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicShift {
    transition: Vec<Vec<f64>>,
    stationary: Vec<f64>,
}

impl SymbolicShift {
    /// Row-stochastic `P`; the stationary vector is solved for and must be unique.
    pub fn new(transition: Vec<Vec<f64>>) -> Result<Self> {
        Self::check_stochastic(&transition)?;
        let stationary = solve_stationary(&transition)?;
        Self::with_stationary(transition, stationary)
    }

    /// Row-stochastic `P` with a caller-supplied stationary vector.
    pub fn with_stationary(transition: Vec<Vec<f64>>, stationary: Vec<f64>) -> Result<Self> {
        Self::check_stochastic(&transition)?;
        let s = transition.len();
        if stationary.len() != s {
            return Err(Error::DimensionMismatch { expected: s, found: stationary.len() });
        }
        FiniteSpace::new(stationary.clone())?;
        for j in 0..s {
            let v: f64 = (0..s).map(|i| stationary[i] * transition[i][j]).sum();
            if (v - stationary[j]).abs() > STOCHASTIC_TOL {
                return Err(Error::NotProbability(format!("vector is not stationary at state {j}")));
            }
        }
        Ok(Self { transition, stationary })
    }

    /// I.i.d. symbols with the given distribution.
    pub fn bernoulli(p: &[f64]) -> Result<Self> {
        FiniteSpace::new(p.to_vec())?;
        Self::with_stationary(vec![p.to_vec(); p.len()], p.to_vec())
    }

    fn check_stochastic(p: &[Vec<f64>]) -> Result<()> {
        let s = p.len();
        if s == 0 {
            return Err(Error::Empty);
        }
        for (row, r) in p.iter().enumerate() {
            if r.len() != s {
                return Err(Error::NotSquare { rows: s, cols: r.len() });
            }
            if r.iter().any(|&x| !x.is_finite() || x < 0.0) {
                return Err(Error::NotProbability(format!("row {row} has a negative entry")));
            }
            let sum: f64 = r.iter().sum();
            if (sum - 1.0).abs() > STOCHASTIC_TOL {
                return Err(Error::NotStochastic { row, sum });
            }
        }
        Ok(())
    }

    pub fn symbols(&self) -> usize {
        self.transition.len()
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// `-Σ_ij π_i P_ij ln P_ij`.
    pub fn entropy_rate(&self) -> f64 {
        let mut h = 0.0;
        for (pi, row) in self.stationary.iter().zip(&self.transition) {
            h -= pi * row.iter().map(|&p| xlogx(p)).sum::<f64>();
        }
        h
    }

    /// `μ[w_0 … w_{n-1}] = π_{w_0} Π_k P_{w_k w_{k+1}}`, multiplied in the log domain.
    pub fn cylinder_measure(&self, word: &[usize]) -> f64 {
        let Some((&first, _)) = word.split_first() else { return 1.0 };
        let mut log = self.stationary[first].ln();
        for w in word.windows(2) {
            log += self.transition[w[0]][w[1]].ln();
        }
        log.exp()
    }

    /// Cylinder measures of every word of the given length, in lexicographic
    /// order with the first symbol most significant.
    pub fn window_distribution(&self, len: usize) -> Vec<f64> {
        let s = self.symbols();
        let count = s.pow(len as u32);
        let mut word = vec![0; len];
        (0..count)
            .map(|idx| {
                decode(idx, s, &mut word);
                self.cylinder_measure(&word)
            })
            .collect()
    }

    fn check_window(&self, len: usize, cap: usize) -> Result<()> {
        if len > cap {
            return Err(Error::BlockLength { requested: len, max: cap });
        }
        Ok(())
    }

    /// `a_n = H(x_0 … x_n) - H(x_1 … x_n)` from exact cylinder measures, with the
    /// forward form `H(x_0 … x_n) - H(x_0 … x_{n-1})` as the alternative.
    pub fn markov_entropy_sequence(&self, n_max: usize, window_cap: usize) -> Result<EntropySequence> {
        if n_max == 0 {
            return Err(Error::InvalidArgument("sequence length must be positive".into()));
        }
        self.check_window(n_max + 1, window_cap + 1)?;
        let s = self.symbols();
        let mut block = vec![shannon(&self.window_distribution(1))];
        let mut values = Vec::with_capacity(n_max);
        let mut alternative = Vec::with_capacity(n_max);
        for n in 1..=n_max {
            let dist = self.window_distribution(n + 1);
            let joint = shannon(&dist);
            // marginal on x_1 … x_n: sum out the most significant symbol
            let stride = dist.len() / s;
            let tail: Vec<f64> = (0..stride).map(|r| (0..s).map(|a| dist[a * stride + r]).sum()).collect();
            values.push(joint - shannon(&tail));
            alternative.push(joint - block[n - 1]);
            block.push(joint);
        }
        Ok(EntropySequence::from_values(values, alternative, block[0], 0.0))
    }

    /// Finite model of a circulant chain with uniform stationary vector on words
    /// of length `n + 1`.
    ///
    /// The map `T⁻¹(w_0, …, w_n) = (w_1, …, w_n, w_n + w_1 - w_0 mod s)` is a
    /// measure-preserving bijection for the cylinder measure, and `ζ ∘ T⁻ᵏ` reads
    /// coordinate `k`, so the embedded `a_k` equal the shift's `a_k` for `k ≤ n`.
    pub fn circulant_embedding(&self, n: usize, window_cap: usize) -> Result<MarkovEmbedding> {
        if n == 0 {
            return Err(Error::InvalidArgument("embedding needs at least one step".into()));
        }
        self.check_window(n, window_cap)?;
        let s = self.symbols();
        let row0 = &self.transition[0];
        for (a, row) in self.transition.iter().enumerate() {
            for (b, &p) in row.iter().enumerate() {
                let dev = (p - row0[(b + s - a) % s]).abs();
                if dev > CIRCULANT_TOL {
                    return Err(Error::InvalidArgument(format!(
                        "transition matrix is not circulant (entry {a},{b} off by {dev:e})"
                    )));
                }
            }
        }
        let dev = self.stationary.iter().map(|p| (p - 1.0 / s as f64).abs()).fold(0.0, f64::max);
        if dev > STOCHASTIC_TOL {
            return Err(Error::InvalidArgument("stationary vector is not uniform".into()));
        }
        let len = n + 1;
        let space = FiniteSpace::new(self.window_distribution(len)).or_else(|_| {
            // renormalize the tiny roundoff of the product measure
            let d = self.window_distribution(len);
            let t: f64 = d.iter().sum();
            FiniteSpace::new(d.into_iter().map(|x| x / t).collect())
        })?;
        let count = space.len();
        let mut word = vec![0; len];
        let mut next = vec![0; len];
        let backward: Vec<usize> = (0..count)
            .map(|idx| {
                decode(idx, s, &mut word);
                next[..len - 1].copy_from_slice(&word[1..]);
                next[len - 1] = (word[len - 1] + word[1] + s - word[0]) % s;
                encode(&next, s)
            })
            .collect();
        let shift = Permutation::new(backward)?.inverse();
        let cells: Vec<usize> = (0..count).map(|idx| idx / s.pow(n as u32)).collect();
        let partition = FunctionPartition::indicator(&cells, s)?;
        Ok(MarkovEmbedding { space, shift, partition })
    }
}

/// Output of [`SymbolicShift::circulant_embedding`].
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovEmbedding {
    pub space: FiniteSpace,
    /// The forward map `T`.
    pub shift: Permutation,
    /// Indicator partition by the first coordinate.
    pub partition: FunctionPartition,
}

fn decode(mut idx: usize, s: usize, word: &mut [usize]) {
    for w in word.iter_mut().rev() {
        *w = idx % s;
        idx /= s;
    }
}

fn encode(word: &[usize], s: usize) -> usize {
    word.iter().fold(0, |acc, &w| acc * s + w)
}

/// Solve `π P = π`, `Σ π = 1` by Gaussian elimination with partial pivoting.
fn solve_stationary(p: &[Vec<f64>]) -> Result<Vec<f64>> {
    let s = p.len();
    // rows: (Pᵀ - I) with the last equation replaced by normalization
    let mut a: Vec<Vec<f64>> = (0..s)
        .map(|i| {
            let mut row: Vec<f64> = (0..s).map(|j| p[j][i] - if i == j { 1.0 } else { 0.0 }).collect();
            row.push(0.0);
            row
        })
        .collect();
    a[s - 1] = vec![1.0; s + 1];
    for col in 0..s {
        let pivot = (col..s)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("nonempty range");
        if a[pivot][col].abs() < 1e-12 {
            return Err(Error::InvalidArgument(
                "stationary vector is not unique; supply it explicitly".into(),
            ));
        }
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != col {
                let f = row[col] / pivot_row[col];
                if f != 0.0 {
                    for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                        *x -= f * p;
                    }
                }
            }
        }
    }
    Ok((0..s).map(|i| (a[i][s] / a[i][i]).max(0.0)).collect())
}
