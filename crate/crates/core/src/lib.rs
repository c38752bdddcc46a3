//! Ground-state one-particle density of `N₀` non-interacting fermions in a
//! `d`-dimensional isotropic harmonic trap, with the shell completely filled.
//!
//! The crate computes the density exactly in floating point (Hermite shell
//! sums and a generating-function route), its radial moments in exact rational
//! arithmetic, the coefficients of their large-`M̃` expansion, the Fourier
//! transform, the Thomas–Fermi limit with its first correction, and the
//! Airy-type soft-edge profile. Almost every quantity is reachable by two
//! independent routes; [`verify`] runs those comparisons as a suite.

// Tabulated constants keep their published digits; `!(x > y)` rejects NaN.
#![allow(
    clippy::excessive_precision,
    clippy::neg_cmp_op_on_partial_ord,
    clippy::needless_range_loop
)]

pub mod asymptotics;
pub mod density;
pub mod edge;
pub mod error;
pub mod exact;
pub mod fourier;
pub mod moments;
pub mod mu;
pub mod quadrature;
pub mod series;
pub mod shell;
pub mod special;
pub mod verify;

pub use error::{Error, Result};
pub use exact::ExactRational;
pub use shell::ShellSpec;
