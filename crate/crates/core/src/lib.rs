//! Numerical workbench for Grüss-type operator inequalities on matrix algebras.
//!
//! The crate is built around a dense complex matrix kernel ([`matcore`]) and
//! layers on top of it:
//!
//! - [`scalar_center`]: the distance from an operator to the scalars,
//!   `d(A) = inf_α ‖A − αI‖`, with a minimizer γ and independent oracles;
//! - [`posmaps`]: positive linear maps between matrix algebras (Kraus, Choi,
//!   builtins), complete-positivity certification and k-positivity falsification;
//! - [`gruss_core`]: executable checks for the variance/covariance inequality
//!   family satisfied by unital (or invertible-unit) positive linear maps;
//! - [`ncps`]: the finite-dimensional noncommutative probability space
//!   `(M_n, τ)` with normalized trace, Schatten p-norms and trace Grüss bounds;
//! - [`cstar_module`]: a concrete Hilbert C*-module of rectangular matrices
//!   over `M_k` with the inequality checks for projections, lifted projections
//!   and accretive operators.
//!
//! Everything here is pure computation over owned buffers; the crate is
//! `no_std`-compatible (with `alloc`). File formats, scenario dispatch, the
//! fuzz engine and the CLI live in the companion `grusslab` crate.

#![cfg_attr(not(feature = "std"), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod cstar_module;
pub mod gruss_core;
pub mod matcore;
pub mod ncps;
pub mod posmaps;
pub mod report;
pub mod rng;
pub mod scalar_center;

pub use matcore::{ComplexMatrix, HermEigen, MatError, ToleranceConfig};
pub use num_complex::Complex64;
pub use report::{InequalityReport, ReportValue, TierReport};
