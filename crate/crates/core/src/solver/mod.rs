//! Neumann-series solves of the Beltrami equation.
//!
//! Writing `u = P h` turns `(dzbar - mu dz) u = v` into `h - mu T h = v`. Since
//! `T` is an `L^2` isometry the map `h -> v + mu T h` contracts with factor
//! `sup |mu| < 1`, and the iteration `h_{m+1} = v + mu T h_m` converges
//! geometrically. The canonical map `f^mu = z + P h` uses `v = mu` and is
//! rescaled to fix 1.

mod coefficient;
mod estimate;
mod solve;

pub use coefficient::BeltramiCoefficient;
pub use estimate::{
    default_slope_radii, elliptic_ratio, manufactured_case, remark_fixture_slope, ManufacturedCase,
    EQUATION_TOLERANCE,
};
pub use solve::{BeltramiSolver, CanonicalSolution, SolveReport, SolverOptions};
