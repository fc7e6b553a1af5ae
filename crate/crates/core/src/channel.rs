//! Channels with codes, information gain of a measurement and the Holevo
//! quantity.
//!
//! A channel is a unital CP map `ζ` from observables of the output algebra to the
//! input algebra, and a code is a decomposition `ζ = Σ_i ζ_i` into letters. For
//! an input state `φ` and a measurement `η` of the output,
//!
//! ```text
//! I_φ(ζ|η)   = H_φ(ζ) + H_{φ∘ζ}(η) - H_φ(ζ∘η)
//! I^c_φ(ζ|η) = H^c_φ(ζ) + H^c_{φ∘ζ}(η) - H^c_φ(ζ∘η)
//! ```
//!
//! `I^c` is the mutual information between letters and outcomes.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // inherent f64 methods shadow these when std is linked
use num_traits::Float;

use crate::entropy::{von_neumann_entropy, StateFunctional};
use crate::info::{information, pull_back};
use crate::linalg::{spectral_decompose, CMatrix, Hermitian, C64};
use crate::partition::{KrausMap, Partition};
use crate::{Error, Numerics, Result};

const CODE_TOL: f64 = 1e-9;

/// A unital channel with a code.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    total: KrausMap,
    code: Partition,
}

impl Channel {
    /// The channel is the sum of the letters.
    pub fn from_code(code: Partition) -> Result<Self> {
        let total = code.total_map()?;
        Ok(Self { total, code })
    }

    /// Checks that `total` is unital and that the letters sum to it.
    pub fn new(total: KrausMap, code: Partition, num: &Numerics) -> Result<Self> {
        let unital = total.unit_image().distance(&CMatrix::identity(total.in_dim()));
        if unital > num.unit_sum_tol {
            return Err(Error::NotUnital(unital));
        }
        if total.in_dim() != code.in_dim() || total.out_dim() != code.out_dim() {
            return Err(Error::DimensionMismatch { expected: total.in_dim(), found: code.in_dim() });
        }
        let letters = Hermitian::sum(code.maps().iter().map(KrausMap::choi).collect::<Vec<_>>().iter())
            .expect("nonempty code");
        let mismatch = letters.distance(&total.choi());
        if mismatch > CODE_TOL {
            return Err(Error::CodeMismatch(mismatch));
        }
        Ok(Self { total, code })
    }

    pub fn total(&self) -> &KrausMap {
        &self.total
    }

    pub fn code(&self) -> &Partition {
        &self.code
    }

    pub fn input_dim(&self) -> usize {
        self.code.in_dim()
    }

    pub fn output_dim(&self) -> usize {
        self.code.out_dim()
    }

    /// Preparation channel from a classical register `M_k` into `M_d`: letter `i`
    /// is `x ↦ trace(ρ_i x)|i⟩⟨i|`, so the input `diag(p)` yields branch outputs
    /// `p_i ρ_i`.
    pub fn ensemble(states: &[Hermitian], num: &Numerics) -> Result<Self> {
        let k = states.len();
        let d = states.first().ok_or(Error::Empty)?.dim();
        let mut maps = Vec::with_capacity(k);
        for (i, rho) in states.iter().enumerate() {
            if rho.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: rho.dim() });
            }
            StateFunctional::new(rho.clone(), num)?.require_normalized(num)?;
            let spec = spectral_decompose(rho)?;
            let cutoff = spec.values[0] * num.support_cutoff;
            let mut kraus = Vec::new();
            for (a, &l) in spec.values.iter().enumerate() {
                if l <= cutoff {
                    break;
                }
                let v: Vec<C64> = spec.vectors.column(a).iter().map(|z| z * l.sqrt()).collect();
                kraus.push(CMatrix::from_fn(d, k, |r, c| if c == i { v[r] } else { C64::new(0.0, 0.0) }));
            }
            maps.push(KrausMap::from_kraus_unchecked(kraus));
        }
        Self::from_code(Partition::new(maps, num)?)
    }

    /// Depolarizing channel `x ↦ (1-p) x + p trace(x)/d · I` on `M_d`, coded by
    /// its Weyl–Kraus operators.
    pub fn depolarizing(d: usize, p: f64, num: &Numerics) -> Result<Self> {
        check_probability(p)?;
        let dd = (d * d) as f64;
        let mut maps = Vec::with_capacity(d * d);
        for a in 0..d {
            for b in 0..d {
                let w = if a == 0 && b == 0 { 1.0 - p + p / dd } else { p / dd };
                maps.push(KrausMap::from_kraus_unchecked(vec![weyl(d, a, b).scale(w.sqrt())]));
            }
        }
        Self::from_code(Partition::new(maps, num)?)
    }

    /// Dephasing channel with Kraus operators `√(1-p) I` and `√p P_j`.
    pub fn dephasing(d: usize, p: f64, num: &Numerics) -> Result<Self> {
        check_probability(p)?;
        let mut maps = vec![KrausMap::from_kraus_unchecked(vec![CMatrix::identity(d).scale((1.0 - p).sqrt())])];
        for j in 0..d {
            let mut diag = vec![0.0; d];
            diag[j] = p.sqrt();
            maps.push(KrausMap::from_kraus_unchecked(vec![CMatrix::from_real_diag(&diag)]));
        }
        Self::from_code(Partition::new(maps, num)?)
    }

    /// Identity channel on `M_d` with the proportional code `{λ_i · id}`.
    pub fn identity_proportional(d: usize, lambdas: &[f64], num: &Numerics) -> Result<Self> {
        for &l in lambdas {
            check_probability(l)?;
        }
        let maps = lambdas.iter().map(|&l| KrausMap::identity(d).scaled(l)).collect();
        Self::from_code(Partition::new(maps, num)?)
    }

    /// `ζ^{(n)} = ζ ⊗ … ⊗ ζ` with the tensor-product code.
    pub fn tensor_power(&self, n: usize, num: &Numerics) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("tensor power must be positive".into()));
        }
        let mut code = self.code.clone();
        for _ in 1..n {
            code = code.tensor(&self.code, num)?;
        }
        Self::from_code(code)
    }
}

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::NotProbability(alloc::format!("{p} is outside [0, 1]")));
    }
    Ok(())
}

/// `X^a Z^b` on `C^d`.
fn weyl(d: usize, a: usize, b: usize) -> CMatrix {
    let omega = core::f64::consts::TAU / d as f64;
    CMatrix::from_fn(d, d, |r, c| {
        if r == (c + a) % d {
            let t = omega * (b * c) as f64;
            C64::new(t.cos(), t.sin())
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

/// The classical input state `diag(p)` for a preparation channel.
pub fn classical_input(p: &[f64], num: &Numerics) -> Result<StateFunctional> {
    StateFunctional::new(Hermitian::from_real_diag(p), num)
}

/// `n`-fold product state `φ ⊗ … ⊗ φ`.
pub fn product_state(phi: &StateFunctional, n: usize, num: &Numerics) -> Result<StateFunctional> {
    if n == 0 {
        return Err(Error::InvalidArgument("tensor power must be positive".into()));
    }
    let rho = phi.full_density();
    let mut acc = rho.clone().into_matrix();
    for _ in 1..n {
        acc = acc.kron(&rho, num.dim_cap)?;
    }
    StateFunctional::new(Hermitian::symmetrized(acc), num)
}

/// `I_φ(ζ|η)` and `I^c_φ(ζ|η)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gain {
    pub quantum: f64,
    pub classical: f64,
}

/// Information gained about the code by measuring `η` on the channel output.
pub fn information_gain(phi: &StateFunctional, channel: &Channel, eta: &Partition, num: &Numerics) -> Result<Gain> {
    let code = channel.code();
    let head = information(phi, code, num)?;
    let tail = information(&pull_back(phi, code)?, eta, num)?;
    let joint = information(phi, &code.compose(eta, num)?, num)?;
    Ok(Gain {
        quantum: head.value()? + tail.value()? - joint.value()?,
        classical: head.classical + tail.classical - joint.classical,
    })
}

/// `I^c_φ(ζ|η)` from outcome weights alone: `H(p) + H(r) - H(q)` with
/// `q_ij = φ(ζ_i(η_j(I)))`.
pub fn classical_gain(phi: &StateFunctional, channel: &Channel, eta: &Partition, num: &Numerics) -> Result<f64> {
    let rho = phi.full_density();
    let effects: Vec<Hermitian> = eta.maps().iter().map(KrausMap::unit_image).collect();
    let mut joint = Vec::with_capacity(channel.code().len() * eta.len());
    let mut letters = Vec::with_capacity(channel.code().len());
    let mut outcomes = vec![0.0; eta.len()];
    for m in channel.code().maps() {
        let out = m.predual(&rho)?;
        if out.dim() != eta.in_dim() {
            return Err(Error::DimensionMismatch { expected: out.dim(), found: eta.in_dim() });
        }
        letters.push(out.trace_re());
        for (j, e) in effects.iter().enumerate() {
            let q = out.expectation(e);
            outcomes[j] += q;
            joint.push(q);
        }
    }
    let h = |p: &[f64]| -> f64 { -p.iter().filter(|&&x| x > num.zero_weight).map(|x| x * x.ln()).sum::<f64>() };
    Ok(h(&letters) + h(&outcomes) - h(&joint))
}

/// `χ = S(ω) - Σ_i p_i S(ω_i/p_i)` with the consistency residual against `H_φ(ζ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Holevo {
    pub chi: f64,
    pub information: f64,
    pub residual: f64,
}

/// The Holevo quantity of the code's output ensemble.
pub fn holevo_quantity(phi: &StateFunctional, channel: &Channel, num: &Numerics) -> Result<Holevo> {
    phi.density()?;
    let rho = phi.full_density();
    let outs = channel.code().maps().iter().map(|m| m.predual(&rho)).collect::<Result<Vec<_>>>()?;
    let avg = Hermitian::sum(outs.iter()).expect("nonempty code");
    let avg_state = StateFunctional::from_density_unchecked(avg.scale(1.0 / avg.trace_re()));
    let mut chi = von_neumann_entropy(&avg_state, num)?;
    for out in &outs {
        let p = out.trace_re();
        if p <= num.zero_weight {
            continue;
        }
        let branch = StateFunctional::from_density_unchecked(out.scale(1.0 / p));
        chi -= p * von_neumann_entropy(&branch, &Numerics { normalization_tol: 1e-8, ..*num })?;
    }
    let info = information(phi, channel.code(), num)?.value()?;
    Ok(Holevo { chi, information: info, residual: (chi - info).abs() })
}
