//! Dense complex and hermitian matrices.
//!
//! Storage is row-major `Vec<C64>`. Target sizes are small (single factors up to
//! ~64, tensor products up to the configured cap), so everything is dense and
//! written for clarity rather than blocking.

mod eigen;
pub(crate) mod functions;
mod hermitian;
mod matrix;

pub use eigen::{spectral_decompose, Spectrum};
pub use functions::{
    exp_i_hermitian, matrix_log_on_support, support_projection, SupportLog,
};
pub use hermitian::Hermitian;
pub use matrix::{CMatrix, C64};

use alloc::vec::Vec;

use crate::{Error, Result};

/// A finite direct sum `⊕_k M_{d_k}` of full matrix algebras.
///
/// Commutative algebras are the special case where every block has dimension 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockAlgebra {
    blocks: Vec<usize>,
}

impl BlockAlgebra {
    pub fn new(blocks: Vec<usize>) -> Result<Self> {
        if blocks.is_empty() {
            return Err(Error::Empty);
        }
        if blocks.contains(&0) {
            return Err(Error::InvalidArgument("block dimension must be positive".into()));
        }
        Ok(Self { blocks })
    }

    /// The full matrix algebra `M_d`.
    pub fn full(d: usize) -> Self {
        assert!(d > 0, "algebra dimension must be positive");
        Self { blocks: alloc::vec![d] }
    }

    /// The diagonal (commutative) algebra `C^m`.
    pub fn diagonal(m: usize) -> Self {
        assert!(m > 0, "algebra dimension must be positive");
        Self { blocks: alloc::vec![1; m] }
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Dimension of the Hilbert space the algebra acts on.
    pub fn total_dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    pub fn is_full(&self) -> bool {
        self.blocks.len() == 1
    }
}
