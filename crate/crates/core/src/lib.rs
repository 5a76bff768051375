//! Hypercomplex analytic signals over the commutative Scheffers algebra.
//!
//! The crate computes the hypercomplex Fourier transform of real signals on
//! uniform lattices, the analytic signal obtained by restricting it to the
//! positive orthant, and the quantities derived from it: amplitudes, phases,
//! instantaneous frequencies, holomorphic extensions to the upper space, and
//! closed-form reference fields. A separate module compares orderings of
//! exponential factors in a noncommutative generator algebra.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod error;
pub mod features;
pub mod grid;
pub mod holo;
pub mod noncomm;
pub mod oracle;
pub mod par;
pub mod transform;

pub use algebra::{AlgebraSpec, Direction, ScheffersElement};
pub use error::{Error, ErrorClass, Result};
pub use grid::{AnalyticGrid, GridFile, GridSignal, HyperSpectrum, Lattice};
