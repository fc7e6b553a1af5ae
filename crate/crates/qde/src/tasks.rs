//! One function per task kind, each turning a validated spec into a record.

use std::time::Instant;

use qde_core::capacity::capacity_rate;
use qde_core::channel::{holevo_quantity, Channel};
use qde_core::classical::{
    classical_conditional, classical_information, embed_diagonal, partition_comparison_bound,
    permutation_entropy_sequence,
};
use qde_core::entropy::StateFunctional;
use qde_core::info::{an_sequence, conditional_information, information, information_via_direct_sum, EntropySequence};
use qde_core::partition::Automorphism;
use qde_core::suite::{run_all, SuiteConfig};

use crate::error::{QdeError, Result};
use crate::record::{Provenance, ResultRecord, Series};
use crate::spec::{ClassicalSystem, System, SystemSpec, Task};

/// Run the task named in `spec`.
pub fn run_task(spec: &SystemSpec, system: &System, name: &str) -> Result<ResultRecord> {
    let start = Instant::now();
    let mut record = ResultRecord::new(spec.task, name, Provenance::new(spec.params.seed, spec.params.tolerances));
    match spec.task {
        Task::Info => info(spec, system, &mut record),
        Task::Dynent => dynent(spec, system, &mut record),
        Task::Capacity => capacity(spec, system, &mut record),
        Task::Classical => classical(spec, system, &mut record),
        Task::Verify => verify(spec, system, &mut record),
    }
    .map_err(|e| match e {
        QdeError::Core { context, source } => QdeError::core(format!("{name}: {} task: {context}", spec.task.name()), source),
        other => other,
    })?;
    record.wall_time_s = start.elapsed().as_secs_f64();
    Ok(record)
}

fn ctx(what: &'static str) -> impl Fn(qde_core::Error) -> QdeError {
    move |e| QdeError::core(what, e)
}

fn state(system: &System) -> &StateFunctional {
    system.state.as_ref().expect("validated spec has a state")
}

fn info(spec: &SystemSpec, system: &System, r: &mut ResultRecord) -> Result<()> {
    let num = &system.numerics;
    let tol = spec.params.tolerances.check_tol;
    let phi = state(system);
    let zeta = system.partition(spec.params.partition.as_deref())?;
    let report = information(phi, zeta, num).map_err(ctx("information"))?;
    r.scalar("H", report.total);
    r.scalar("Hc", report.classical);
    r.scalar("Hq", report.quantum);
    r.scalar("outcomes", zeta.len());
    let mut outcomes = Series::new(&["outcome", "weight", "divergence"]);
    for (i, (p, d)) in report.weights.iter().zip(&report.divergences).enumerate() {
        outcomes.push(vec![i as f64, *p, d.to_f64()]);
    }
    r.series.insert("outcomes".into(), outcomes);

    r.check("unit_sum", zeta.unit_sum_residual(), num.unit_sum_tol);
    if let Some(split) = report.split_residual() {
        r.check("split_identity", split, tol);
    }
    if let Some(h) = report.total.finite() {
        r.check("nonnegative", -h, tol);
        let direct = information_via_direct_sum(phi, zeta, num).map_err(ctx("direct-sum information"))?;
        r.scalar("H_direct_sum", direct);
        if let Some(d) = direct.finite() {
            r.check("direct_sum_agreement", (h - d).abs(), tol);
        }
    }
    if let Some(eta_name) = &spec.params.eta {
        let eta = system.partition(Some(eta_name))?;
        let cond = conditional_information(phi, zeta, eta, num).map_err(ctx("conditional information"))?;
        r.scalar("H_conditional", cond);
        r.check("conditional_nonnegative", -cond, tol);
        if let Some(h) = report.total.finite() {
            r.check("conditioning_reduces", cond - h, tol);
        }
    }
    Ok(())
}

fn sequence_series(seq: &EntropySequence) -> Series {
    let mut s = Series::new(&["n", "a_n"]);
    for (n, a) in seq.values.iter().enumerate() {
        s.push(vec![(n + 1) as f64, *a]);
    }
    s
}

fn record_sequence(r: &mut ResultRecord, seq: &EntropySequence, tol: f64, prefix: &str) {
    r.scalar(format!("{prefix}h_estimate"), seq.h_estimate);
    r.scalar(format!("{prefix}bound_H"), seq.bound);
    r.scalar(format!("{prefix}converged"), seq.converged);
    r.check(format!("{prefix}monotone"), seq.monotonicity_residual, tol);
    r.check(format!("{prefix}bounded"), seq.bound_residual, tol);
    if seq.state_is_invariant() {
        r.check(format!("{prefix}forward_backward_agreement"), seq.agreement_residual, tol);
    }
}

fn dynent(spec: &SystemSpec, system: &System, r: &mut ResultRecord) -> Result<()> {
    let num = &system.numerics;
    let tol = spec.params.tolerances.check_tol;
    let n = spec.params.n;
    if system.state.is_none() {
        let c = system.classical.as_ref().expect("validated");
        return markov_dynent(spec, c, r);
    }
    let phi = state(system);
    let zeta = system.partition(spec.params.partition.as_deref())?;
    let identity;
    let theta = match &system.automorphism {
        Some(a) => a,
        None => {
            identity = Automorphism::identity(phi.dim());
            &identity
        }
    };
    let seq = an_sequence(phi, theta, zeta, n, num).map_err(ctx("a_n sequence"))?;
    r.scalar("invariance_residual", seq.invariance_residual);
    record_sequence(r, &seq, tol, "");
    r.series.insert("an".into(), sequence_series(&seq));
    Ok(())
}

/// Markov shift: exact cylinder path, and for circulant chains the embedded
/// quantum path on words of length `N + 1`.
fn markov_dynent(spec: &SystemSpec, c: &ClassicalSystem, r: &mut ResultRecord) -> Result<()> {
    let num = &spec.params.tolerances.numerics();
    let tol = spec.params.tolerances.check_tol;
    let (n, cap) = (spec.params.n, spec.params.window_cap);
    let chain = c.markov.as_ref().expect("validated");
    let seq = chain.markov_entropy_sequence(n, cap).map_err(ctx("Markov sequence"))?;
    r.scalar("entropy_rate", chain.entropy_rate());
    record_sequence(r, &seq, tol, "");
    r.check("rate_reached", (seq.h_estimate - chain.entropy_rate()).abs(), tol);
    r.series.insert("an".into(), sequence_series(&seq));
    match chain.circulant_embedding(n, cap) {
        Ok(e) => {
            let (phi, zeta) = embed_diagonal(&e.space, &e.partition, num).map_err(ctx("diagonal embedding"))?;
            let quantum =
                an_sequence(&phi, &e.shift.to_automorphism(), &zeta, n, num).map_err(ctx("embedded a_n sequence"))?;
            let gap = seq.values.iter().zip(&quantum.values).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            r.scalar("embedded", true);
            r.check("embedded_agreement", gap, tol);
            r.series.insert("an_embedded".into(), sequence_series(&quantum));
        }
        Err(e) if e.is_resource() => return Err(QdeError::core("circulant embedding", e)),
        Err(_) => r.scalar("embedded", false),
    }
    Ok(())
}

fn capacity(spec: &SystemSpec, system: &System, r: &mut ResultRecord) -> Result<()> {
    let num = &system.numerics;
    let tol = spec.params.tolerances.check_tol;
    let phi = state(system);
    let code = system.partition(spec.params.partition.as_deref())?.clone();
    let channel = Channel::from_code(code).map_err(ctx("channel"))?;
    let cfg = spec.params.optimizer.config(spec.params.seed);
    r.provenance.optimizer = Some(spec.params.optimizer);
    let rates = capacity_rate(phi, &channel, spec.params.n, &cfg, num).map_err(ctx("capacity search"))?;
    let mut series = Series::new(&["n", "C_n/n", "D_n/n"]);
    for (k, rep) in rates.reports.iter().enumerate() {
        let n = rep.n;
        r.scalar(format!("C_{n}"), rep.c_lower);
        r.scalar(format!("D_{n}"), rep.d_lower);
        r.scalar(format!("H_{n}"), rep.h_upper);
        r.scalar(format!("C_{n}.evaluations"), rep.c_search.evaluations);
        r.scalar(format!("D_{n}.evaluations"), rep.d_search.evaluations);
        r.check(format!("chain_{n}"), rep.chain_residual, tol);
        series.push(vec![n as f64, rates.c_rates[k], rates.d_rates[k]]);
    }
    r.series.insert("rates".into(), series);
    if let Some(res) = rates.superadditivity_residual {
        r.scalar("surplus", rates.surplus.expect("paired with the residual"));
        r.check("superadditivity", res, 0.0);
    }
    let chi = holevo_quantity(phi, &channel, num).map_err(ctx("Holevo quantity"))?;
    r.scalar("chi", chi.chi);
    r.check("holevo_equals_H", chi.residual, tol);
    Ok(())
}

fn classical(spec: &SystemSpec, system: &System, r: &mut ResultRecord) -> Result<()> {
    let num = &system.numerics;
    let tol = spec.params.tolerances.check_tol;
    let n = spec.params.n;
    let c = system.classical.as_ref().expect("validated");
    if let (Some(mu), Some(zeta)) = (&c.space, &c.zeta) {
        let h = classical_information(mu, zeta).map_err(ctx("classical information"))?;
        r.scalar("H", h);
        let (phi, q) = embed_diagonal(mu, zeta, num).map_err(ctx("diagonal embedding"))?;
        let hq = information(&phi, &q, num).map_err(ctx("embedded information"))?;
        if let Some(v) = hq.total.finite() {
            r.check("embedding_agreement", (v - h).abs(), tol);
        }
        if let Some(eta) = &c.eta {
            let cond = classical_conditional(mu, zeta, eta, num).map_err(ctx("conditional information"))?;
            r.scalar("H_conditional", cond);
            r.check("conditional_nonnegative", -cond, tol);
            r.check("conditioning_reduces", cond - h, tol);
            if let Some(t) = &c.permutation {
                let cmp = partition_comparison_bound(mu, t, zeta, eta, n, num).map_err(ctx("comparison bound"))?;
                r.scalar("comparison_lhs", cmp.lhs);
                r.scalar("comparison_rhs", cmp.rhs);
                r.check("comparison_bound", cmp.residual, tol);
            }
        }
        if let Some(t) = &c.permutation {
            let seq = permutation_entropy_sequence(mu, t, zeta, n, num).map_err(ctx("permutation sequence"))?;
            r.scalar("period", t.period());
            record_sequence(r, &seq, tol, "");
            if n >= t.period() {
                r.check("periodic_collapse", seq.h_estimate.abs(), tol);
            }
            r.series.insert("an".into(), sequence_series(&seq));
        }
    }
    if let Some(chain) = &c.markov {
        let seq = chain.markov_entropy_sequence(n, spec.params.window_cap).map_err(ctx("Markov sequence"))?;
        r.scalar("markov.entropy_rate", chain.entropy_rate());
        record_sequence(r, &seq, tol, "markov.");
        r.series.insert("markov_an".into(), sequence_series(&seq));
    }
    Ok(())
}

fn verify(spec: &SystemSpec, system: &System, r: &mut ResultRecord) -> Result<()> {
    let cfg = SuiteConfig {
        dims: spec.params.dims.clone(),
        trials: spec.params.trials,
        seed: spec.params.seed,
        tolerance: spec.params.tolerances.check_tol,
    };
    let reports = run_all(&cfg, &system.numerics).map_err(ctx("property suite"))?;
    r.scalar("trials", cfg.trials);
    for f in &reports {
        let name = f.family.name();
        r.scalar(format!("{name}.violations"), f.violations);
        r.scalar(format!("{name}.errors"), f.errors);
        let mut check = crate::record::Check::new(name, f.max_residual, f.tolerance);
        check.passed = f.passed();
        r.checks.push(check);
    }
    Ok(())
}
