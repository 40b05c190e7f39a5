//! A numerical laboratory for the Beltrami equation `dzbar f = mu dz f` on the plane.
//!
//! * [`grid`]: complex fields on square grids, Wirtinger derivatives, Sobolev norms.
//! * [`transforms`]: the Beurling transform `T` and Cauchy transform `P` as Fourier
//!   multipliers, with direct quadrature oracles.
//! * [`solver`]: Neumann-series solves of `(dzbar - mu dz) u = v`, the normalized
//!   quasiconformal map `f^mu`, and elliptic-estimate probes.
//! * [`variation`]: the derivative `theta^{mu,a}` of `mu -> f^mu`, finite-difference and
//!   Cauchy-Riemann checks of holomorphic dependence.
//! * [`bers`]: simultaneous uniformization of two coefficients glued across the real
//!   axis and the pulled-back Bers metric.
//! * [`presets`]: analytic coefficient families used by tests and the CLI.
//!
//! The guide in `book/` walks through each of these; its code listings are compiled
//! and run as doctests of this crate.

pub mod bers;
pub mod error;
pub mod grid;
pub mod presets;
pub mod solver;
pub mod transforms;
pub mod variation;

pub use error::{Error, Result};

/// Version of this crate, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/grids.md")]
    mod grids {}
    #[doc = include_str!("../../../book/src/transforms.md")]
    mod transforms {}
    #[doc = include_str!("../../../book/src/solver.md")]
    mod solver {}
    #[doc = include_str!("../../../book/src/variation.md")]
    mod variation {}
    #[doc = include_str!("../../../book/src/bers.md")]
    mod bers {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}
