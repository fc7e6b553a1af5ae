//! Relative-entropy information of generalized measurements on finite-dimensional
//! operator algebras.
//!
//! The crate works with finite direct sums of full matrix algebras and provides:
//!
//! - a dense hermitian kernel ([`linalg`]): Jacobi eigensolver, logarithm on the
//!   support, support projections, Kronecker products;
//! - positive functionals and the Umegaki relative entropy ([`entropy`]), with
//!   `+∞` carried as a distinguished extended real ([`ExtReal`]);
//! - completely positive maps in Kraus form and partitions of unity
//!   ([`partition`]);
//! - the information functional `H = H^c + H^q`, conditional information,
//!   refinements under an automorphism and the monotone `a_n` sequence whose limit
//!   is the dynamical entropy ([`info`]);
//! - channel codes, information gain of a measurement, finite-block capacity
//!   lower bounds and the Holevo quantity ([`channel`], [`capacity`]);
//! - the commutative (Kolmogorov–Sinai) shadow on finite spaces and exact
//!   Markov cylinder measures ([`classical`]).
//!
//! All entropies are in nats. The crate is `no_std` and only needs `alloc`.
//! Enabling the `parallel` feature fans out branch enumeration and optimizer
//! restarts over rayon; reductions always run in a fixed order so results are
//! bit-identical regardless of thread count.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(any(test, feature = "parallel"))]
extern crate std;

pub mod capacity;
pub mod channel;
pub mod classical;
pub mod entropy;
mod error;
mod extended;
pub mod info;
pub mod linalg;
mod numerics;
pub mod optim;
mod par;
pub mod partition;
pub mod sample;
pub mod suite;

pub use error::{Error, Result};
pub use extended::ExtReal;
pub use linalg::{BlockAlgebra, CMatrix, Hermitian, C64};
pub use numerics::Numerics;
