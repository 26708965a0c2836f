//! Casimir energy and forces inside a perfectly conducting cylindrical
//! cavity, computed from truncated sums over Bessel-zero modes with a
//! plasma-frequency cutoff.
//!
//! The crate is organized bottom-up:
//!
//! * [`specfun`]: Bessel functions, their zeros (with a binary cache), and
//!   adaptive quadrature.
//! * [`sum_engine`]: deterministic pairwise reductions over the mode box,
//!   including single-pass convergence checkpoints.
//! * [`cavity`]: per-mode energies, the regularized energy, and the radial
//!   and axial forces in physical and dimensionless form.
//! * [`asymptotics`]: long-cylinder and parallel-plate limits.
//! * [`vacuum`]: the frequency-bound regularization of free and plate
//!   vacuum energies.
//!
//! With the default `parallel` feature the heavy loops run on rayon;
//! disabling it gives a purely sequential build with identical results.

pub mod asymptotics;
pub mod cavity;
pub mod constants;
pub mod error;
pub mod par;
pub mod specfun;
pub mod sum_engine;
pub mod vacuum;

pub use error::{Error, Result};
pub use par::Exec;

/// Crate version, embedded in reports.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
