//! The derivative `theta^{mu,a}` of `mu -> f^mu` in the direction `a`, and
//! numerical checks that this dependence is holomorphic.
//!
//! `theta` solves `(dzbar - mu dz) theta = a dz f^mu` with `theta(0) = theta(1) = 0`.
//! The Cauchy transform already fixes 0; subtracting `theta_raw(1) f^mu`
//! fixes 1 without disturbing the equation, because `f^mu` solves the
//! homogeneous one.
//!
//! All norms are Sobolev norms on the disk of radius [`REPORT_RADIUS`].

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{sobolev_norm, ComplexField, DiskRegion, SobolevSpec};
use crate::solver::{BeltramiCoefficient, BeltramiSolver, CanonicalSolution, SolveReport};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Radius of the disk on which variation norms are reported.
pub const REPORT_RADIUS: f64 = 2.0;

/// `||u||_{W^{k,2}}` on the reporting disk.
pub fn report_norm(u: &ComplexField, k: usize) -> Result<f64> {
    sobolev_norm(u, &SobolevSpec::new(k, 2.0, DiskRegion::origin(REPORT_RADIUS)?)?)
}

/// `theta^{mu,a}` together with the solve that produced it.
#[derive(Clone, Debug)]
pub struct Theta {
    pub field: ComplexField,
    pub report: SolveReport,
}

/// `theta^{mu,a}` from an already computed `f^mu`.
///
/// The forcing `a dz f^mu` uses the solver's own derivative of `f^mu`, so
/// `theta` is exactly the derivative of the discrete map `mu -> f^mu`.
pub fn theta_from(solver: &BeltramiSolver, f: &CanonicalSolution, mu: &BeltramiCoefficient, a: &BeltramiCoefficient) -> Result<Theta> {
    let rhs = solver.forcing(f, a);
    let report = solver.solve_inhomogeneous(mu, &rhs)?;
    let at_one = report
        .solution
        .interpolate(ONE)
        .expect("canonical solves check that 1 is inside the grid");
    let field = report
        .solution
        .zip_with(f.map(), |t, m| t - at_one * m);
    Ok(Theta { field, report })
}

/// `theta^{mu,a}`.
pub fn theta(solver: &BeltramiSolver, mu: &BeltramiCoefficient, a: &BeltramiCoefficient) -> Result<ComplexField> {
    let f = solver.canonical_solution(mu)?;
    Ok(theta_from(solver, &f, mu, a)?.field)
}

fn maps(solver: &BeltramiSolver, coefficients: &[BeltramiCoefficient]) -> Result<Vec<ComplexField>> {
    coefficients
        .par_iter()
        .map(|m| solver.canonical_solution(m).map(|f| f.report.solution))
        .collect()
}

/// One-sided quotient `(f^{mu + s a} - f^mu) / s`.
pub fn finite_difference_derivative(
    solver: &BeltramiSolver,
    mu: &BeltramiCoefficient,
    a: &BeltramiCoefficient,
    s: f64,
) -> Result<ComplexField> {
    if s == 0.0 {
        return Err(Error::Precondition("step s must be non-zero".into()));
    }
    let f = maps(solver, &[mu.perturbed(a, Complex64::new(s, 0.0))?, mu.clone()])?;
    Ok((&f[0] - &f[1]).scale(Complex64::new(1.0 / s, 0.0)))
}

/// Central quotient `(f^{mu + s a} - f^{mu - s a}) / (2 s)` for complex `s`.
pub fn central_difference(
    solver: &BeltramiSolver,
    mu: &BeltramiCoefficient,
    a: &BeltramiCoefficient,
    s: Complex64,
) -> Result<ComplexField> {
    if s.norm() == 0.0 {
        return Err(Error::Precondition("step s must be non-zero".into()));
    }
    let f = maps(solver, &[mu.perturbed(a, s)?, mu.perturbed(a, -s)?])?;
    Ok((&f[0] - &f[1]).scale((s * 2.0).inv()))
}

/// Limit estimate for the family `mu + s a + s alpha(s)` with `alpha(s) = s b`.
///
/// With `D(s) = (f^{mu + s a + s^2 b} - f^mu) / s = theta^{mu,a} + O(s)`, the
/// Richardson combination `2 D(s/2) - D(s)` removes the first-order term.
pub fn perturbed_family_limit(
    solver: &BeltramiSolver,
    mu: &BeltramiCoefficient,
    a: &BeltramiCoefficient,
    b: &BeltramiCoefficient,
    s: f64,
) -> Result<ComplexField> {
    if s == 0.0 {
        return Err(Error::Precondition("step s must be non-zero".into()));
    }
    let member = |t: f64| -> Result<BeltramiCoefficient> {
        BeltramiCoefficient::new(&(mu.field() + &(a.field() * Complex64::new(t, 0.0))) + &(b.field() * Complex64::new(t * t, 0.0)))
    };
    let f = maps(solver, &[member(s)?, member(s / 2.0)?, mu.clone()])?;
    let d_full = (&f[0] - &f[2]).scale(Complex64::new(1.0 / s, 0.0));
    let d_half = (&f[1] - &f[2]).scale(Complex64::new(2.0 / s, 0.0));
    Ok(d_half.zip_with(&d_full, |h, f| h * 2.0 - f))
}

/// How the one-parameter family depends on `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `mu + t a`.
    Holomorphic,
    /// `mu + conj(t) a`, a control that is not holomorphic in `t`.
    Conjugate,
}

/// Cauchy-Riemann defect and the size of `theta` it should be compared with.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CrDefect {
    pub s: f64,
    /// `||(D_re + i D_im) / 2||_{W^{1,2}}`.
    pub defect: f64,
    /// `||theta^{mu,a}||_{W^{1,2}}`.
    pub theta_norm: f64,
}

/// Discrete `d/d tbar` of `t -> f^{mu(t)}` at `t = 0`: half of `D_re + i D_im`,
/// where `D_re`, `D_im` are central differences of step `s` along the real and
/// imaginary parameter axes.
pub fn cauchy_riemann_defect(
    solver: &BeltramiSolver,
    mu: &BeltramiCoefficient,
    a: &BeltramiCoefficient,
    s: f64,
    family: Family,
) -> Result<CrDefect> {
    if !(s > 0.0) {
        return Err(Error::Precondition("step s must be positive".into()));
    }
    let im_dir = match family {
        Family::Holomorphic => I,
        Family::Conjugate => -I,
    };
    let steps = [
        Complex64::new(s, 0.0),
        Complex64::new(-s, 0.0),
        im_dir * s,
        -im_dir * s,
    ];
    let mut coeffs = steps
        .iter()
        .map(|&t| mu.perturbed(a, t))
        .collect::<Result<Vec<_>>>()?;
    coeffs.push(mu.clone());
    let solved: Vec<CanonicalSolution> = coeffs
        .par_iter()
        .map(|m| solver.canonical_solution(m))
        .collect::<Result<_>>()?;
    let inv = Complex64::new(1.0 / (2.0 * s), 0.0);
    let d_re = (solved[0].map() - solved[1].map()).scale(inv);
    let d_im = (solved[2].map() - solved[3].map()).scale(inv);
    let dbar = d_re.zip_with(&d_im, |x, y| (x + I * y) * 0.5);
    let th = theta_from(solver, &solved[4], mu, a)?;
    Ok(CrDefect {
        s,
        defect: report_norm(&dbar, 1)?,
        theta_norm: report_norm(&th.field, 1)?,
    })
}

/// `||f^{mu + s a} - f^mu - s theta^{mu,a}||_{W^{k+1,2}} / |s|` for each `s`.
pub fn development_residual(
    solver: &BeltramiSolver,
    mu: &BeltramiCoefficient,
    a: &BeltramiCoefficient,
    s_list: &[f64],
    k: usize,
) -> Result<Vec<(f64, f64)>> {
    if s_list.contains(&0.0) {
        return Err(Error::Precondition("development steps must be non-zero".into()));
    }
    let f = solver.canonical_solution(mu)?;
    let th = theta_from(solver, &f, mu, a)?.field;
    let coeffs = s_list
        .iter()
        .map(|&s| mu.perturbed(a, Complex64::new(s, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    let perturbed = maps(solver, &coeffs)?;
    s_list
        .iter()
        .zip(&perturbed)
        .map(|(&s, fs)| {
            let r = fs
                .zip_with(f.map(), |p, q| p - q)
                .zip_with(&th, |d, t| d - t * s);
            Ok((s, report_norm(&r, k + 1)? / s.abs()))
        })
        .collect()
}

/// `||theta^{mu_n,a_n} - theta^{mu,a}||_{W^{k+1,2}}` along a sequence.
pub fn stability_check(
    solver: &BeltramiSolver,
    mu_seq: &[BeltramiCoefficient],
    a_seq: &[BeltramiCoefficient],
    mu: &BeltramiCoefficient,
    a: &BeltramiCoefficient,
    k: usize,
) -> Result<Vec<f64>> {
    if mu_seq.len() != a_seq.len() {
        return Err(Error::Precondition("mu and a sequences differ in length".into()));
    }
    let limit = theta(solver, mu, a)?;
    mu_seq
        .par_iter()
        .zip(a_seq)
        .map(|(m, d)| {
            let t = theta(solver, m, d)?;
            report_norm(&(&t - &limit), k + 1)
        })
        .collect()
}

/// Summary of a variation run, serializable as JSON (fields are written separately).
#[derive(Clone, Debug, Serialize)]
pub struct VariationReport {
    #[serde(skip)]
    pub theta: ComplexField,
    #[serde(skip)]
    pub fd_derivative: ComplexField,
    pub s: f64,
    /// `||theta - fd_derivative||_{W^{k+1,2}}` with the central difference of step `s`.
    pub agreement_error: f64,
    pub theta_norm: f64,
    pub cr_defect: f64,
    pub development_decays: Vec<(f64, f64)>,
    pub k: usize,
}

/// Runs the `theta`, central-difference, Cauchy-Riemann and development checks at once.
pub fn variation_report(
    solver: &BeltramiSolver,
    mu: &BeltramiCoefficient,
    a: &BeltramiCoefficient,
    s: f64,
    s_list: &[f64],
    k: usize,
) -> Result<VariationReport> {
    let th = theta(solver, mu, a)?;
    let fd = central_difference(solver, mu, a, Complex64::new(s, 0.0))?;
    let cr = cauchy_riemann_defect(solver, mu, a, s, Family::Holomorphic)?;
    let development_decays = development_residual(solver, mu, a, s_list, k)?;
    Ok(VariationReport {
        agreement_error: report_norm(&(&th - &fd), k + 1)?,
        theta_norm: report_norm(&th, k + 1)?,
        theta: th,
        fd_derivative: fd,
        s,
        cr_defect: cr.defect,
        development_decays,
        k,
    })
}
