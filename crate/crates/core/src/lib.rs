//! Purity speed limits for Markovian open quantum systems.
//!
//! The crate builds Lindblad generators, lifts them to Liouville-space
//! superoperators, evaluates state-independent bounds on the rate of purity
//! (and purity-deviation) change, and propagates density matrices through two
//! independent numerical paths so that every bound can be checked against
//! actual trajectories.
//!
//! Layout:
//! - [`matrix`]: dense complex matrices and elementary operations
//! - [`eigen`]: Hermitian eigensolver (cyclic Jacobi) and spectral norms
//! - [`expm`]: matrix exponential (scaling and squaring, Padé kernel)
//! - [`ops`]: Pauli matrices, ladder operators, multi-site embeddings
//! - [`lindblad`]: density matrices, Lindblad generators, channel helpers
//! - [`liouville`]: vectorization and the Liouville superoperator
//! - [`bounds`]: the purity speed-limit bounds and the dephasing purity floor
//! - [`propagator`]: time evolution (superoperator exponential / RK4)
//! - [`scenarios`]: declarative scenario catalog (dephasing, GHZ erasure,
//!   interacting chains, decorrelation)
//!
//! The crate is `no_std`-compatible (requires `alloc`); the companion `qsl`
//! crate adds file formats and the command-line interface.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod bounds;
pub mod eigen;
mod error;
pub mod expm;
pub mod lindblad;
pub mod liouville;
pub mod matrix;
pub mod ops;
pub mod propagator;
pub mod scenarios;

pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, C64};
