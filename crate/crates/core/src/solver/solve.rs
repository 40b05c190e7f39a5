use num_complex::Complex64;
use serde::Serialize;

use super::coefficient::BeltramiCoefficient;
use crate::error::{Error, Result};
use crate::grid::{ComplexField, DiskRegion, GridSpec};
use crate::transforms::{SupportWarning, TransformPlan};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Stopping rule for the Neumann iteration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SolverOptions {
    /// Stop once the relative L2 update `||h_{m+1} - h_m|| / ||v||` drops below this.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 500,
        }
    }
}

/// Result of a Neumann solve.
#[derive(Clone, Debug, Serialize)]
pub struct SolveReport {
    /// `u = P h` (or the normalized map, for canonical solves).
    #[serde(skip)]
    pub solution: ComplexField,
    /// The density `h` solving `h - mu T h = v`.
    #[serde(skip)]
    pub density: ComplexField,
    pub iterations: usize,
    /// Relative update norms, one per iteration.
    pub residual_history: Vec<f64>,
    /// Largest ratio of successive updates from the third iteration on.
    pub contraction_estimate: f64,
    pub converged: bool,
    /// Certified `||h - v - mu T h|| / ||v||` at the returned density.
    pub residual: f64,
    #[serde(skip)]
    pub support_warning: Option<SupportWarning>,
}

/// The normalized solution `f^mu` together with its density.
///
/// With `f_raw = z + P h` and `c = f_raw(1)`, the map is `f = f_raw / c`;
/// its derivatives in the transforms' own calculus are `dzbar f = h / c` and
/// `dz f = (1 + T h) / c`.
#[derive(Clone, Debug)]
pub struct CanonicalSolution {
    pub report: SolveReport,
    pub normalization: Complex64,
    dz: ComplexField,
    dzbar: ComplexField,
}

impl CanonicalSolution {
    pub fn map(&self) -> &ComplexField {
        &self.report.solution
    }

    pub fn dz(&self) -> &ComplexField {
        &self.dz
    }

    pub fn dzbar(&self) -> &ComplexField {
        &self.dzbar
    }

    /// `||dzbar f - mu dz f||_{L2(region)}`, evaluated in the solver calculus.
    pub fn beltrami_residual(&self, mu: &BeltramiCoefficient, region: &DiskRegion) -> f64 {
        let r = self
            .dzbar
            .zip_with(&mu.field().mul_pointwise(&self.dz), |a, b| a - b);
        crate::grid::lp_norm(&r, 2.0, region)
    }
}

/// Neumann-series solver for `(dzbar - mu dz) u = v` on one grid.
pub struct BeltramiSolver {
    plan: TransformPlan,
    options: SolverOptions,
    strict: bool,
}

impl BeltramiSolver {
    /// Solver with the default plan (padding 2, far-field correction) and options.
    pub fn new(spec: GridSpec) -> Result<Self> {
        Ok(Self::with_plan(TransformPlan::default_for(spec)?))
    }

    pub fn with_plan(plan: TransformPlan) -> Self {
        Self {
            plan,
            options: SolverOptions::default(),
            strict: false,
        }
    }

    /// When set, running out of iterations is an [`Error::NotConverged`]
    /// instead of a report with `converged == false`. Useful when the solve
    /// is buried inside a difference quotient.
    pub fn require_convergence(mut self, strict: bool) -> Self {
        self.strict = strict;
        self
    }

    pub fn with_options(mut self, options: SolverOptions) -> Self {
        self.options = options;
        self
    }

    pub fn plan(&self) -> &TransformPlan {
        &self.plan
    }

    pub fn options(&self) -> SolverOptions {
        self.options
    }

    pub fn spec(&self) -> &GridSpec {
        self.plan.spec()
    }

    fn check(&self, f: &ComplexField, what: &str) -> Result<()> {
        if f.spec() != self.spec() {
            return Err(Error::Precondition(format!("{what} lives on a different grid than the solver")));
        }
        Ok(())
    }

    /// Iterates `h <- v + mu T h` from `h = v` and returns the density.
    fn neumann(&self, mu: &BeltramiCoefficient, v: &ComplexField) -> Result<(ComplexField, SolveReport)> {
        self.check(mu.field(), "mu")?;
        self.check(v, "v")?;
        let SolverOptions { tol, max_iter } = self.options;
        if !(tol > 0.0) {
            return Err(Error::Precondition(format!("tolerance {tol} must be positive")));
        }
        if max_iter == 0 {
            return Err(Error::Precondition("max_iter must be positive".into()));
        }
        let vnorm = v.l2_norm();
        let scale = if vnorm > 0.0 { vnorm } else { 1.0 };
        let mu_f = mu.field();
        let mut h = v.clone();
        let mut history = Vec::new();
        let mut converged = false;
        for _ in 0..max_iter {
            let th = self.plan.apply_beurling(&h);
            let next = v.zip_with(&mu_f.mul_pointwise(&th), |a, b| a + b);
            let delta = (&next - &h).l2_norm() / scale;
            history.push(delta);
            h = next;
            if delta < tol {
                converged = true;
                break;
            }
        }
        if self.strict && !converged {
            return Err(Error::NotConverged {
                iterations: history.len(),
                update: history.last().copied().unwrap_or(f64::NAN),
            });
        }
        let th = self.plan.apply_beurling(&h);
        let resid = h
            .zip_with(v, |a, b| a - b)
            .zip_with(&mu_f.mul_pointwise(&th), |a, b| a - b)
            .l2_norm()
            / scale;
        let ratios: Vec<f64> = history
            .windows(2)
            .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
            .collect();
        let late = if ratios.len() > 1 { &ratios[1..] } else { &ratios[..] };
        let contraction_estimate = late.iter().copied().fold(0.0, f64::max);
        let report = SolveReport {
            solution: ComplexField::zeros(*self.spec()),
            density: h,
            iterations: history.len(),
            residual_history: history,
            contraction_estimate,
            converged,
            residual: resid,
            support_warning: self.plan.support_warning(v),
        };
        Ok((th, report))
    }

    /// Solves `(dzbar - mu dz) u = v` as `u = P h` with `h - mu T h = v`.
    ///
    /// A report with `converged == false` means `max_iter` ran out first.
    pub fn solve_inhomogeneous(&self, mu: &BeltramiCoefficient, v: &ComplexField) -> Result<SolveReport> {
        let (_, mut report) = self.neumann(mu, v)?;
        report.solution = self.plan.apply_cauchy(&report.density);
        Ok(report)
    }

    /// The normalized solution `f^mu` fixing 0 and 1.
    pub fn canonical_solution(&self, mu: &BeltramiCoefficient) -> Result<CanonicalSolution> {
        let spec = *self.spec();
        if spec.exact_node(ZERO).is_none() {
            return Err(Error::Precondition("0 must be a grid node".into()));
        }
        if spec.inner_distance(ONE) <= 2.0 * spec.spacing() {
            return Err(Error::Precondition("the point 1 must lie inside the grid".into()));
        }
        let (th, mut report) = self.neumann(mu, mu.field())?;
        let p = self.plan.apply_cauchy(&report.density);
        let raw = ComplexField::identity(spec).zip_with(&p, |a, b| a + b);
        let c = raw.interpolate(ONE).expect("1 lies inside the grid");
        if c.norm() < 1e-8 {
            return Err(Error::DegenerateNormalization(c.norm()));
        }
        let inv = c.inv();
        report.solution = raw.scale(inv);
        let dzbar = report.density.scale(inv);
        let dz = th.map(|t| (ONE + t) * inv);
        Ok(CanonicalSolution {
            report,
            normalization: c,
            dz,
            dzbar,
        })
    }

    /// Right-hand side `a dz f^mu` of the variational equation, in the solver calculus.
    pub(crate) fn forcing(&self, f: &CanonicalSolution, a: &BeltramiCoefficient) -> ComplexField {
        a.field().mul_pointwise(f.dz())
    }
}
