//! Moments, zeros and limit laws of determinantal point processes built from
//! recurrence data.
//!
//! The crate is `no_std` and only needs `alloc`. Everything here is a pure
//! function of its inputs; IO, configuration and threading live in the
//! companion `dppzeros` crate.
//!
//! Layout:
//! - [`measures`]: closed-form limit laws and their moments.
//! - [`recurrence`]: the scheme interface and the classical three-term tables.
//! - [`bandop`]: banded truncations, trace quantities, the lattice-path oracle
//!   and the explicit gap/variance bounds.
//! - [`zeros`]: spectra of principal blocks, i.e. zeros of the average
//!   characteristic polynomial.
//! - [`mop`]: multiple Hermite / Laguerre schemes from nearest-neighbour data.
//! - [`freeprob`]: R/S-transform series and algebraic-curve Cauchy transforms.
//! - [`sampler`]: Monte-Carlo matrix models.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod error;
pub(crate) mod math;

pub mod bandop;
pub mod eigen;
pub mod freeprob;
pub mod measures;
pub mod mop;
pub mod quadrature;
pub mod recurrence;
pub mod roots;
pub mod sampler;
pub mod zeros;

pub use error::{Error, Result};

/// Crate version, recorded in artifact headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use num_complex::Complex64;
