//! Finite-block capacities `C^n` and `D^n` as certified lower bounds.
//!
//! `C^n_φ(ζ) = sup_η I_{φ^(n)}(ζ^(n)|η)` and `D^n` the same with `I^c`. The
//! supremum runs over a measurement family, by default rank-one projective
//! measurements in a rotated basis `U|j⟩` with `U = exp(i Σ_k θ_k G_k)` over the
//! generalized Gell-Mann matrices `G_k`. A multi-restart simplex search returns
//! the best value found, which is a lower bound on the supremum.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use core::f64::consts::PI;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channel::{classical_gain, information_gain, product_state, Channel};
use crate::entropy::StateFunctional;
use crate::info::information;
use crate::linalg::{exp_i_hermitian, CMatrix, Hermitian, C64};
use crate::optim::{nelder_mead, SimplexConfig};
use crate::partition::{basis_measurement, Partition};
use crate::{par, Error, Numerics, Result};

/// Required slack of `C_2 ≥ 2 C_1` for the superadditivity check.
pub const SUPERADDITIVITY_SLACK: f64 = 2e-4;

/// Search settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
    pub initial_step: f64,
    /// Largest admitted block length `n`.
    pub max_block: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 20, iterations: 500, seed: 0, initial_step: 0.6, max_block: 2 }
    }
}

/// Measurements searched over.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasurementFamily {
    /// Rank-one projective measurements in the basis `U|j⟩` of `C^dim`.
    UnitaryOrbit { dim: usize },
    /// A finite list of candidate partitions, evaluated exhaustively.
    FixedList(Vec<Partition>),
}

impl MeasurementFamily {
    pub fn parameter_count(&self) -> usize {
        match self {
            MeasurementFamily::UnitaryOrbit { dim } => dim * dim - 1,
            MeasurementFamily::FixedList(_) => 0,
        }
    }

    /// The projective measurement for the given angles.
    pub fn realize(&self, params: &[f64], num: &Numerics) -> Result<Partition> {
        match self {
            MeasurementFamily::UnitaryOrbit { dim } => {
                if params.len() != dim * dim - 1 {
                    return Err(Error::DimensionMismatch { expected: dim * dim - 1, found: params.len() });
                }
                basis_measurement(&orbit_unitary(*dim, params)?, num)
            }
            MeasurementFamily::FixedList(list) => {
                Err(Error::InvalidArgument(alloc::format!("fixed list of {} has no parameters", list.len())))
            }
        }
    }
}

/// Generalized Gell-Mann matrices: a basis of traceless hermitian `d × d`
/// matrices (`d² - 1` elements).
pub fn gell_mann(d: usize) -> Vec<Hermitian> {
    let mut out = Vec::with_capacity(d * d - 1);
    let one = C64::new(1.0, 0.0);
    for j in 0..d {
        for k in j + 1..d {
            let mut s = CMatrix::zeros(d, d);
            s[(j, k)] = one;
            s[(k, j)] = one;
            out.push(Hermitian::symmetrized(s));
            let mut a = CMatrix::zeros(d, d);
            a[(j, k)] = C64::new(0.0, -1.0);
            a[(k, j)] = C64::new(0.0, 1.0);
            out.push(Hermitian::symmetrized(a));
        }
    }
    for l in 1..d {
        let norm = (2.0 / (l * (l + 1)) as f64).sqrt();
        let diag: Vec<f64> =
            (0..d).map(|i| if i < l { norm } else if i == l { -(l as f64) * norm } else { 0.0 }).collect();
        out.push(Hermitian::from_real_diag(&diag));
    }
    out
}

/// `exp(i Σ_k θ_k G_k)`.
pub fn orbit_unitary(d: usize, params: &[f64]) -> Result<CMatrix> {
    let mut h = Hermitian::zeros(d);
    for (g, &t) in gell_mann(d).iter().zip(params) {
        h = h.add(&g.scale(t));
    }
    exp_i_hermitian(&h)
}

/// Which functional is maximized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    /// `I`, giving `C^n`.
    Total,
    /// `I^c`, giving `D^n`.
    Classical,
}

/// Best value over the family with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub value: f64,
    /// Parameters of the best measurement (empty for fixed lists).
    pub parameters: Vec<f64>,
    /// Index into the fixed list, when the family is a list.
    pub candidate: Option<usize>,
    /// Best value per restart.
    pub restart_values: Vec<f64>,
    /// Simplex iterations per restart.
    pub restart_iterations: Vec<usize>,
    pub evaluations: usize,
}

fn objective_value(
    phi: &StateFunctional,
    channel: &Channel,
    eta: &Partition,
    objective: Objective,
    num: &Numerics,
) -> Result<f64> {
    match objective {
        Objective::Total => Ok(information_gain(phi, channel, eta, num)?.quantum),
        Objective::Classical => classical_gain(phi, channel, eta, num),
    }
}

/// Seed of restart `r`: the master seed selects the ChaCha key, `r` the stream.
fn restart_rng(seed: u64, r: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(r as u64);
    rng
}

/// Maximize the objective for a fixed block channel and input.
pub fn search(
    phi: &StateFunctional,
    channel: &Channel,
    family: &MeasurementFamily,
    objective: Objective,
    cfg: &OptimizerConfig,
    num: &Numerics,
) -> Result<SearchResult> {
    match family {
        MeasurementFamily::FixedList(list) => {
            let values = list
                .iter()
                .map(|eta| objective_value(phi, channel, eta, objective, num))
                .collect::<Result<Vec<_>>>()?;
            let (best, &value) = values
                .iter()
                .enumerate()
                .fold(None, |acc: Option<(usize, &f64)>, (i, v)| match acc {
                    Some((_, b)) if *b >= *v => acc,
                    _ => Some((i, v)),
                })
                .ok_or(Error::Empty)?;
            Ok(SearchResult {
                value,
                parameters: Vec::new(),
                candidate: Some(best),
                restart_values: values.clone(),
                restart_iterations: vec![0; values.len()],
                evaluations: values.len(),
            })
        }
        MeasurementFamily::UnitaryOrbit { dim } => {
            if *dim != channel.output_dim() {
                return Err(Error::DimensionMismatch { expected: channel.output_dim(), found: *dim });
            }
            let m = family.parameter_count();
            let simplex = SimplexConfig { max_iterations: cfg.iterations, initial_step: cfg.initial_step, value_tol: 1e-12 };
            let restarts: Vec<usize> = (0..cfg.restarts.max(1)).collect();
            let runs = par::map_ordered(&restarts, |&r| {
                let mut rng = restart_rng(cfg.seed, r);
                let start: Vec<f64> = (0..m).map(|_| rng.random_range(-PI..PI)).collect();
                nelder_mead(
                    |x| match family.realize(x, num).and_then(|eta| objective_value(phi, channel, &eta, objective, num)) {
                        Ok(v) => -v,
                        Err(_) => f64::INFINITY,
                    },
                    &start,
                    &simplex,
                )
            });
            let mut best = 0;
            for (i, run) in runs.iter().enumerate() {
                if run.value < runs[best].value {
                    best = i;
                }
            }
            let value = -runs[best].value;
            if !value.is_finite() {
                return Err(Error::Inconsistent { what: "no measurement in the family could be evaluated", residual: value });
            }
            Ok(SearchResult {
                value,
                parameters: runs[best].point.clone(),
                candidate: None,
                restart_values: runs.iter().map(|r| -r.value).collect(),
                restart_iterations: runs.iter().map(|r| r.iterations).collect(),
                evaluations: runs.iter().map(|r| r.evaluations).sum(),
            })
        }
    }
}

/// The block-`n` problem: `φ^(n)`, `ζ^(n)` and the default measurement family.
pub struct Block {
    pub state: StateFunctional,
    pub channel: Channel,
    pub family: MeasurementFamily,
}

pub fn block(phi: &StateFunctional, channel: &Channel, n: usize, cfg: &OptimizerConfig, num: &Numerics) -> Result<Block> {
    if n == 0 || n > cfg.max_block {
        return Err(Error::BlockLength { requested: n, max: cfg.max_block });
    }
    let channel = channel.tensor_power(n, num)?;
    let state = product_state(phi, n, num)?;
    let family = MeasurementFamily::UnitaryOrbit { dim: channel.output_dim() };
    Ok(Block { state, channel, family })
}

/// `C^n` lower bound over the projective family.
pub fn optimize_cn(phi: &StateFunctional, channel: &Channel, n: usize, cfg: &OptimizerConfig, num: &Numerics) -> Result<SearchResult> {
    let b = block(phi, channel, n, cfg, num)?;
    search(&b.state, &b.channel, &b.family, Objective::Total, cfg, num)
}

/// `D^n` lower bound over the projective family.
pub fn optimize_dn(phi: &StateFunctional, channel: &Channel, n: usize, cfg: &OptimizerConfig, num: &Numerics) -> Result<SearchResult> {
    let b = block(phi, channel, n, cfg, num)?;
    search(&b.state, &b.channel, &b.family, Objective::Classical, cfg, num)
}

/// Both bounds for block length `n`, with the chain `0 ≤ D ≤ C ≤ H^(n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityReport {
    pub n: usize,
    pub c_lower: f64,
    pub d_lower: f64,
    /// `H_{φ^(n)}(ζ^(n))`.
    pub h_upper: f64,
    pub c_search: SearchResult,
    pub d_search: SearchResult,
    /// `max(-D, D - C, C - H, 0)`.
    pub chain_residual: f64,
}

/// `C^n` and `D^n` bounds for a given family (default: the projective orbit).
///
/// `C` is reported as the larger of its own search and `I` at the measurement
/// that maximized `I^c`, so that every reported pair is ordered.
pub fn capacity_report(
    phi: &StateFunctional,
    channel: &Channel,
    n: usize,
    family: Option<&MeasurementFamily>,
    cfg: &OptimizerConfig,
    num: &Numerics,
) -> Result<CapacityReport> {
    let b = block(phi, channel, n, cfg, num)?;
    let family = family.unwrap_or(&b.family);
    let c_search = search(&b.state, &b.channel, family, Objective::Total, cfg, num)?;
    let d_search = search(&b.state, &b.channel, family, Objective::Classical, cfg, num)?;
    let d_measurement = match (family, d_search.candidate) {
        (MeasurementFamily::FixedList(list), Some(i)) => list[i].clone(),
        _ => family.realize(&d_search.parameters, num)?,
    };
    let at_d = information_gain(&b.state, &b.channel, &d_measurement, num)?.quantum;
    let c_lower = c_search.value.max(at_d);
    let d_lower = d_search.value;
    let h_upper = information(&b.state, b.channel.code(), num)?.value()?;
    let chain_residual = (-d_lower).max(d_lower - c_lower).max(c_lower - h_upper).max(0.0);
    Ok(CapacityReport { n, c_lower, d_lower, h_upper, c_search, d_search, chain_residual })
}

/// Per-block rates and the superadditivity check.
#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub reports: Vec<CapacityReport>,
    /// `C_n / n`.
    pub c_rates: Vec<f64>,
    /// `D_n / n`.
    pub d_rates: Vec<f64>,
    /// `2 C_1 - C_2 - 2e-4`; nonpositive when the check passes. `None` for `n_max = 1`.
    pub superadditivity_residual: Option<f64>,
    /// `C_2 - 2 C_1`, the observed surplus of the block code.
    pub surplus: Option<f64>,
}

pub fn capacity_rate(
    phi: &StateFunctional,
    channel: &Channel,
    n_max: usize,
    cfg: &OptimizerConfig,
    num: &Numerics,
) -> Result<RateReport> {
    let reports = (1..=n_max)
        .map(|n| capacity_report(phi, channel, n, None, cfg, num))
        .collect::<Result<Vec<_>>>()?;
    let c_rates = reports.iter().map(|r| r.c_lower / r.n as f64).collect();
    let d_rates = reports.iter().map(|r| r.d_lower / r.n as f64).collect();
    let (superadditivity_residual, surplus) = if n_max >= 2 {
        let (c1, c2) = (reports[0].c_lower, reports[1].c_lower);
        (Some(2.0 * c1 - c2 - SUPERADDITIVITY_SLACK), Some(c2 - 2.0 * c1))
    } else {
        (None, None)
    };
    Ok(RateReport { reports, c_rates, d_rates, superadditivity_residual, surplus })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{classical_input, holevo_quantity};

    const LN2: f64 = core::f64::consts::LN_2;

    fn ket(v: &[f64]) -> Hermitian {
        let c: Vec<C64> = v.iter().map(|&x| C64::new(x, 0.0)).collect();
        Hermitian::projector_onto(&c)
    }

    fn quick() -> OptimizerConfig {
        OptimizerConfig { restarts: 4, iterations: 200, ..OptimizerConfig::default() }
    }

    #[test]
    fn gell_mann_basis() {
        for d in 2..=4 {
            let g = gell_mann(d);
            assert_eq!(g.len(), d * d - 1);
            for (i, a) in g.iter().enumerate() {
                assert!(a.trace().norm() < 1e-15);
                for (j, b) in g.iter().enumerate() {
                    let ip = a.trace_product_re(b);
                    let expect = if i == j { 2.0 } else { 0.0 };
                    assert!((ip - expect).abs() < 1e-12);
                }
            }
        }
        let u = orbit_unitary(3, &[0.3; 8]).unwrap();
        assert!((&u.adjoint() * &u).distance(&CMatrix::identity(3)) < 1e-12);
    }

    #[test]
    fn orthogonal_ensemble_reaches_ln2() {
        let num = Numerics::default();
        let ch = Channel::ensemble(&[ket(&[1.0, 0.0]), ket(&[0.0, 1.0])], &num).unwrap();
        let phi = classical_input(&[0.5, 0.5], &num).unwrap();
        let r = capacity_report(&phi, &ch, 1, None, &quick(), &num).unwrap();
        assert!((r.c_lower - LN2).abs() < 1e-4 && (r.d_lower - LN2).abs() < 1e-4);
        assert!(r.chain_residual <= 1e-8);
    }

    #[test]
    fn proportional_code_has_zero_capacity() {
        let num = Numerics::default();
        let ch = Channel::identity_proportional(2, &[0.4, 0.6], &num).unwrap();
        let phi = StateFunctional::maximally_mixed(2);
        let rates = capacity_rate(&phi, &ch, 2, &quick(), &num).unwrap();
        for r in rates.c_rates.iter().chain(&rates.d_rates) {
            assert!(r.abs() < 1e-9);
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let num = Numerics::default();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let ch = Channel::ensemble(&[ket(&[1.0, 0.0]), ket(&[h, h])], &num).unwrap();
        let phi = classical_input(&[0.5, 0.5], &num).unwrap();
        let a = optimize_dn(&phi, &ch, 1, &quick(), &num).unwrap();
        let b = optimize_dn(&phi, &ch, 1, &quick(), &num).unwrap();
        assert_eq!(a, b);
        let c = optimize_cn(&phi, &ch, 1, &quick(), &num).unwrap();
        assert!((c.value - holevo_quantity(&phi, &ch, &num).unwrap().chi).abs() < 1e-9);
    }

    #[test]
    fn block_length_is_capped() {
        let num = Numerics::default();
        let ch = Channel::identity_proportional(2, &[1.0], &num).unwrap();
        let phi = StateFunctional::maximally_mixed(2);
        assert_eq!(
            optimize_cn(&phi, &ch, 3, &quick(), &num).unwrap_err(),
            Error::BlockLength { requested: 3, max: 2 }
        );
    }

    #[test]
    fn fixed_list_family() {
        let num = Numerics::default();
        let ch = Channel::ensemble(&[ket(&[1.0, 0.0]), ket(&[0.0, 1.0])], &num).unwrap();
        let phi = classical_input(&[0.5, 0.5], &num).unwrap();
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let x = basis_measurement(&CMatrix::from_real(2, 2, &[h, h, h, -h]).unwrap(), &num).unwrap();
        let family = MeasurementFamily::FixedList(vec![Partition::trivial(2), x, crate::partition::computational_measurement(2)]);
        let r = capacity_report(&phi, &ch, 1, Some(&family), &quick(), &num).unwrap();
        assert_eq!(r.d_search.candidate, Some(2));
        assert_eq!(r.d_search.restart_values[0], 0.0);
        assert!((r.d_lower - LN2).abs() < 1e-12);
    }
}
