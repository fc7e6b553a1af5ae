use alloc::string::String;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is not hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("operator is not positive (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("functional is not normalized (weight {0})")]
    NotNormalized(f64),

    #[error("eigensolver did not converge (matrix norm {norm:e}, off-diagonal {off:e})")]
    NoConvergence { norm: f64, off: f64 },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    SizeCap { dim: usize, cap: usize },

    #[error("{branches} branches exceed the configured cap {cap}")]
    BranchCap { branches: usize, cap: usize },

    #[error("not a partition of unity (unit-sum residual {0:e})")]
    NotPartition(f64),

    #[error("map is not sub-unital (max eigenvalue of image of identity {0})")]
    NotSubUnital(f64),

    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),

    #[error("invalid projector family: {0}")]
    InvalidProjectors(String),

    #[error("state does not commute with projector {index} (residual {residual:e}); only pinching conditional expectations are supported")]
    UnsupportedConditionalExpectation { index: usize, residual: f64 },

    #[error("information is infinite (support violation)")]
    InfiniteInformation,

    #[error("empty family")]
    Empty,

    #[error("decomposition does not sum to the state (residual {0:e})")]
    NotADecomposition(f64),

    #[error("not a probability vector: {0}")]
    NotProbability(String),

    #[error("transition matrix is not row-stochastic (row {row} sums to {sum})")]
    NotStochastic { row: usize, sum: f64 },

    #[error("permutation does not preserve the measure (residual {0:e})")]
    NotMeasurePreserving(f64),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("channel code does not sum to the channel (residual {0:e})")]
    CodeMismatch(f64),

    #[error("channel is not unital (residual {0:e})")]
    NotUnital(f64),

    #[error("block length {requested} exceeds the allowed maximum {max}")]
    BlockLength { requested: usize, max: usize },

    #[error("internal consistency check failed: {what} (residual {residual:e})")]
    Inconsistent { what: &'static str, residual: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for the resource-cap family of errors.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::SizeCap { .. } | Error::BranchCap { .. } | Error::BlockLength { .. }
        )
    }
}

pub type Result<T> = core::result::Result<T, Error>;
