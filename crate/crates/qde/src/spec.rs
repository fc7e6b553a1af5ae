//! JSON system specifications.
//!
//! A spec is parsed in two steps: serde reads the document (type errors carry the
//! JSON path), then [`SystemSpec::build`] checks every mathematical invariant and
//! produces the core objects, reporting the offending field on failure.

use serde::{Deserialize, Serialize};

use qde_core::capacity::OptimizerConfig;
use qde_core::classical::{FiniteSpace, FunctionPartition, Permutation, SymbolicShift, DEFAULT_WINDOW_CAP};
use qde_core::entropy::StateFunctional;
use qde_core::partition::{Automorphism, KrausMap, Partition};
use qde_core::{CMatrix, Hermitian, Numerics, C64};

use crate::error::{QdeError, Result};

pub const SCHEMA_VERSION: &str = "1";

/// A matrix entry: a real number or an `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged, expecting = "a number or an [re, im] pair")]
pub enum Entry {
    Real(f64),
    Complex([f64; 2]),
}

impl Entry {
    fn value(self) -> C64 {
        match self {
            Entry::Real(re) => C64::new(re, 0.0),
            Entry::Complex([re, im]) => C64::new(re, im),
        }
    }
}

/// Row-major matrix.
pub type MatrixSpec = Vec<Vec<Entry>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Task {
    Info,
    Dynent,
    Capacity,
    Classical,
    Verify,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Info => "info",
            Task::Dynent => "dynent",
            Task::Capacity => "capacity",
            Task::Classical => "classical",
            Task::Verify => "verify",
        }
    }
}

/// A named partition: each map is a list of Kraus operators (`out × in`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    pub name: String,
    pub maps: Vec<Vec<MatrixSpec>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassicalSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<Vec<f64>>,
    /// Function partition `ζ`, one row per function.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub functions: Option<Vec<Vec<f64>>>,
    /// Optional second function partition `η`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Vec<Vec<f64>>>,
    /// Image of each point under the map.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<Vec<usize>>,
    /// Row-stochastic transition matrix of a Markov shift.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub markov: Option<Vec<Vec<f64>>>,
}

/// Numerical thresholds. Every field defaults to the core defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub support_cutoff: f64,
    pub negativity_tol: f64,
    pub hermiticity_tol: f64,
    pub normalization_tol: f64,
    pub zero_weight: f64,
    pub unit_sum_tol: f64,
    pub branch_cap: usize,
    pub dim_cap: usize,
    /// Residual above which a reported check fails.
    pub check_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let n = Numerics::default();
        Self {
            support_cutoff: n.support_cutoff,
            negativity_tol: n.negativity_tol,
            hermiticity_tol: n.hermiticity_tol,
            normalization_tol: n.normalization_tol,
            zero_weight: n.zero_weight,
            unit_sum_tol: n.unit_sum_tol,
            branch_cap: n.branch_cap,
            dim_cap: n.dim_cap,
            check_tol: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn numerics(&self) -> Numerics {
        Numerics {
            support_cutoff: self.support_cutoff,
            negativity_tol: self.negativity_tol,
            hermiticity_tol: self.hermiticity_tol,
            normalization_tol: self.normalization_tol,
            zero_weight: self.zero_weight,
            unit_sum_tol: self.unit_sum_tol,
            branch_cap: self.branch_cap,
            dim_cap: self.dim_cap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerSpec {
    pub restarts: usize,
    pub iterations: usize,
    pub initial_step: f64,
    pub max_block: usize,
}

impl Default for OptimizerSpec {
    fn default() -> Self {
        let c = OptimizerConfig::default();
        Self { restarts: c.restarts, iterations: c.iterations, initial_step: c.initial_step, max_block: c.max_block }
    }
}

impl OptimizerSpec {
    pub fn config(&self, seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            restarts: self.restarts,
            iterations: self.iterations,
            seed,
            initial_step: self.initial_step,
            max_block: self.max_block,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Params {
    /// Sequence length `N` (dynent, classical) or block length `n` (capacity).
    pub n: usize,
    pub seed: u64,
    /// Partition used as `ζ` (or the channel code); defaults to the first one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<String>,
    /// Optional second partition `η`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<String>,
    pub window_cap: usize,
    /// Verify task: dimensions and trials per family.
    pub dims: Vec<usize>,
    pub trials: usize,
    pub tolerances: Tolerances,
    pub optimizer: OptimizerSpec,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            n: 1,
            seed: 0,
            partition: None,
            eta: None,
            window_cap: DEFAULT_WINDOW_CAP,
            dims: vec![2, 3, 4],
            trials: 200,
            tolerances: Tolerances::default(),
            optimizer: OptimizerSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub schema_version: String,
    /// Output file stem; defaults to the input file stem.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Block dimensions of the algebra; defaults to one full block.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub algebra: Option<Vec<usize>>,
    /// Density matrix, block-diagonal with respect to `algebra`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub partitions: Vec<PartitionSpec>,
    /// Unitary `u` of the automorphism `x ↦ u x u†`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalSpec>,
    pub task: Task,
    #[serde(default)]
    pub params: Params,
}

/// The core objects described by a spec.
#[derive(Debug, Clone)]
pub struct System {
    pub numerics: Numerics,
    pub state: Option<StateFunctional>,
    pub partitions: Vec<(String, Partition)>,
    pub automorphism: Option<Automorphism>,
    pub classical: Option<ClassicalSystem>,
}

#[derive(Debug, Clone)]
pub struct ClassicalSystem {
    pub space: Option<FiniteSpace>,
    pub zeta: Option<FunctionPartition>,
    pub eta: Option<FunctionPartition>,
    pub permutation: Option<Permutation>,
    pub markov: Option<SymbolicShift>,
}

/// Parse and validate one spec.
pub fn parse_spec(text: &str) -> Result<(SystemSpec, System)> {
    let spec: SystemSpec = from_json(text)?;
    let system = spec.build()?;
    Ok((spec, system))
}

/// Parse a file holding one spec or a list of specs, validating each.
pub fn parse_spec_file(text: &str) -> Result<Vec<(SystemSpec, System)>> {
    if text.trim_start().starts_with('[') {
        let specs: Vec<SystemSpec> = from_json(text)?;
        if specs.is_empty() {
            return Err(QdeError::validation("[]", "empty spec list"));
        }
        specs
            .into_iter()
            .enumerate()
            .map(|(i, spec)| {
                let system = spec.build().map_err(|e| prefix(e, &format!("[{i}]")))?;
                Ok((spec, system))
            })
            .collect()
    } else {
        Ok(vec![parse_spec(text)?])
    }
}

fn from_json<T: serde::de::DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let path = if path == "." { format!("line {} column {}", inner.line(), inner.column()) } else { path };
        QdeError::validation(path, inner.to_string())
    })
}

fn prefix(e: QdeError, p: &str) -> QdeError {
    match e {
        QdeError::Validation { path, message } => QdeError::validation(format!("{p}.{path}"), message),
        other => other,
    }
}

fn matrix(m: &MatrixSpec, path: &str) -> Result<CMatrix> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(QdeError::validation(path, "matrix is empty"));
    }
    if let Some(r) = m.iter().position(|r| r.len() != cols) {
        return Err(QdeError::validation(format!("{path}[{r}]"), format!("row has {} entries, expected {cols}", m[r].len())));
    }
    let data: Vec<C64> = m.iter().flatten().map(|e| e.value()).collect();
    if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(QdeError::validation(path, "non-finite entry"));
    }
    CMatrix::from_vec(rows, cols, data).map_err(|e| QdeError::validation(path, e.to_string()))
}

fn core_err(path: &str) -> impl Fn(qde_core::Error) -> QdeError + '_ {
    move |e| QdeError::validation(path, e.to_string())
}

impl SystemSpec {
    /// Check every invariant and build the core objects.
    pub fn build(&self) -> Result<System> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(QdeError::validation(
                "schema_version",
                format!("unsupported version {:?}, expected {SCHEMA_VERSION:?}", self.schema_version),
            ));
        }
        let num = self.params.tolerances.numerics();
        let state = self.state.as_ref().map(|s| self.build_state(s, &num)).transpose()?;
        let dim = state.as_ref().map(StateFunctional::dim);

        let mut partitions = Vec::with_capacity(self.partitions.len());
        for (i, p) in self.partitions.iter().enumerate() {
            let path = format!("partitions[{i}]");
            if partitions.iter().any(|(n, _): &(String, Partition)| *n == p.name) {
                return Err(QdeError::validation(format!("{path}.name"), format!("duplicate name {:?}", p.name)));
            }
            partitions.push((p.name.clone(), build_partition(p, &path, &num)?));
        }

        let automorphism = match &self.unitary {
            Some(u) => {
                let a = Automorphism::new(matrix(u, "unitary")?).map_err(core_err("unitary"))?;
                if let Some(d) = dim {
                    if a.dim() != d {
                        return Err(QdeError::validation("unitary", format!("dimension {} does not match the state ({d})", a.dim())));
                    }
                }
                Some(a)
            }
            None => None,
        };

        let classical = self.classical.as_ref().map(|c| build_classical(c, &num)).transpose()?;
        let system = System { numerics: num, state, partitions, automorphism, classical };
        self.check_task(&system)?;
        Ok(system)
    }

    fn build_state(&self, s: &MatrixSpec, num: &Numerics) -> Result<StateFunctional> {
        let m = matrix(s, "state")?;
        if !m.is_square() {
            return Err(QdeError::validation("state", format!("matrix is {}x{}", m.rows(), m.cols())));
        }
        let h = Hermitian::new(m, num.hermiticity_tol).map_err(core_err("state"))?;
        let blocks = self.algebra.clone().unwrap_or_else(|| vec![h.dim()]);
        if blocks.iter().sum::<usize>() != h.dim() || blocks.contains(&0) {
            return Err(QdeError::validation("algebra", format!("blocks {blocks:?} do not add up to the state dimension {}", h.dim())));
        }
        let state = if blocks.len() == 1 {
            StateFunctional::new(h, num).map_err(core_err("state"))?
        } else {
            let mut parts = Vec::with_capacity(blocks.len());
            let mut offset = 0;
            for &b in &blocks {
                parts.push(Hermitian::symmetrized(CMatrix::from_fn(b, b, |i, j| h[(offset + i, offset + j)])));
                offset += b;
            }
            let rebuilt = StateFunctional::block_diagonal(parts, num).map_err(core_err("state"))?;
            let off = rebuilt.full_density().distance(&h);
            if off > num.hermiticity_tol {
                return Err(QdeError::validation("state", format!("entries outside the algebra blocks (norm {off:.3e})")));
            }
            rebuilt
        };
        if !state.is_normalized(num) {
            return Err(QdeError::validation("state", format!("trace {} is not 1", state.weight())));
        }
        Ok(state)
    }

    fn check_task(&self, system: &System) -> Result<()> {
        let need = |ok: bool, path: &str, what: &str| {
            if ok {
                Ok(())
            } else {
                Err(QdeError::validation(path, format!("task {} requires {what}", self.task.name())))
            }
        };
        match self.task {
            Task::Info | Task::Dynent | Task::Capacity => {
                let markov = system.classical.as_ref().is_some_and(|c| c.markov.is_some());
                if self.task == Task::Dynent && markov && system.state.is_none() {
                    return need(self.params.n >= 1, "params.n", "n ≥ 1");
                }
                need(system.state.is_some(), "state", "a state")?;
                need(!system.partitions.is_empty(), "partitions", "at least one partition")?;
                let zeta = system.partition(self.params.partition.as_deref())?;
                if zeta.in_dim() != system.state.as_ref().map_or(0, StateFunctional::dim) {
                    return Err(QdeError::validation(
                        "partitions",
                        format!("partition input dimension {} does not match the state", zeta.in_dim()),
                    ));
                }
                if let Some(eta) = &self.params.eta {
                    let e = system.partition(Some(eta))?;
                    if e.in_dim() != zeta.out_dim() {
                        return Err(QdeError::validation("params.eta", "η does not compose with ζ"));
                    }
                }
                need(self.task == Task::Info || self.params.n >= 1, "params.n", "n ≥ 1")
            }
            Task::Classical => {
                let c = system.classical.as_ref();
                need(c.is_some(), "classical", "a classical section")?;
                let c = c.expect("checked");
                need(c.markov.is_some() || (c.space.is_some() && c.zeta.is_some()), "classical", "measure and functions, or markov")
            }
            Task::Verify => need(!self.params.dims.is_empty() && !self.params.dims.contains(&0), "params.dims", "positive dimensions"),
        }
    }
}

impl System {
    /// Partition by name, or the first one.
    pub fn partition(&self, name: Option<&str>) -> Result<&Partition> {
        match name {
            Some(n) => self
                .partitions
                .iter()
                .find(|(k, _)| k == n)
                .map(|(_, p)| p)
                .ok_or_else(|| QdeError::validation("params.partition", format!("no partition named {n:?}"))),
            None => self.partitions.first().map(|(_, p)| p).ok_or_else(|| QdeError::validation("partitions", "empty")),
        }
    }
}

fn build_partition(p: &PartitionSpec, path: &str, num: &Numerics) -> Result<Partition> {
    if p.maps.is_empty() {
        return Err(QdeError::validation(format!("{path}.maps"), "no maps"));
    }
    let mut families = Vec::with_capacity(p.maps.len());
    let mut shape = None;
    for (i, m) in p.maps.iter().enumerate() {
        let mpath = format!("{path}.maps[{i}]");
        if m.is_empty() {
            return Err(QdeError::validation(mpath, "no Kraus operators"));
        }
        let mut kraus = Vec::with_capacity(m.len());
        for (k, op) in m.iter().enumerate() {
            let kpath = format!("{mpath}[{k}]");
            let op = matrix(op, &kpath)?;
            let s = *shape.get_or_insert((op.rows(), op.cols()));
            if (op.rows(), op.cols()) != s {
                return Err(QdeError::validation(kpath, format!("shape {}x{} differs from {}x{}", op.rows(), op.cols(), s.0, s.1)));
            }
            kraus.push(op);
        }
        families.push(kraus);
    }
    // unit sum first, so that an overall scaling is reported as such
    let in_dim = shape.expect("nonempty").1;
    let mut total = CMatrix::zeros(in_dim, in_dim);
    for op in families.iter().flatten() {
        total = &total + &(&op.adjoint() * op);
    }
    let residual = total.distance(&CMatrix::identity(in_dim));
    if residual > num.unit_sum_tol {
        return Err(QdeError::validation(path, format!("not a partition of unity (unit-sum residual {residual:e})")));
    }
    let maps = families
        .into_iter()
        .enumerate()
        .map(|(i, kraus)| KrausMap::new(kraus, num).map_err(core_err(&format!("{path}.maps[{i}]"))))
        .collect::<Result<Vec<_>>>()?;
    Partition::new(maps, num).map_err(core_err(path))
}

fn build_classical(c: &ClassicalSpec, num: &Numerics) -> Result<ClassicalSystem> {
    let space = c
        .measure
        .as_ref()
        .map(|m| FiniteSpace::new(m.clone()).map_err(core_err("classical.measure")))
        .transpose()?;
    let function_partition = |rows: &Vec<Vec<f64>>, path: &str| -> Result<FunctionPartition> {
        let z = FunctionPartition::new(rows.clone()).map_err(core_err(path))?;
        if let Some(s) = &space {
            if z.points() != s.len() {
                return Err(QdeError::validation(path, format!("{} points, measure has {}", z.points(), s.len())));
            }
        }
        Ok(z)
    };
    let zeta = c.functions.as_ref().map(|f| function_partition(f, "classical.functions")).transpose()?;
    let eta = c.eta.as_ref().map(|f| function_partition(f, "classical.eta")).transpose()?;
    let permutation = match &c.permutation {
        Some(image) => {
            let p = Permutation::new(image.clone()).map_err(core_err("classical.permutation"))?;
            if let Some(s) = &space {
                if p.len() != s.len() {
                    return Err(QdeError::validation("classical.permutation", "length differs from the measure"));
                }
                let r = p.invariance_residual(s);
                if r > 1e-12_f64.max(num.normalization_tol) {
                    return Err(QdeError::validation("classical.permutation", format!("does not preserve the measure (residual {r:.3e})")));
                }
            }
            Some(p)
        }
        None => None,
    };
    let markov = match &c.markov {
        Some(rows) => Some(SymbolicShift::new(rows.clone()).map_err(|e| match e {
            qde_core::Error::NotStochastic { row, sum } => {
                QdeError::validation(format!("classical.markov[{row}]"), format!("row sums to {sum}, not 1"))
            }
            other => QdeError::validation("classical.markov", other.to_string()),
        })?),
        None => None,
    };
    Ok(ClassicalSystem { space, zeta, eta, permutation, markov })
}
