//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines are always printed, in order,
//! and each criterion is timed on its own. Exits non-zero if any line FAILs.

use std::f64::consts::TAU;
use std::time::{Duration, Instant};

use beltrami::bers::{glue, hyperbolic_defect, simultaneous_uniformize, upper_subgrid};
use beltrami::grid::{sobolev_norm, wirtinger_pair, ComplexField, DiskRegion, GridSpec, SobolevSpec};
use beltrami::presets::{gaussian, remark_mu, shear_map, shear_mu};
use beltrami::solver::{
    elliptic_ratio, manufactured_case, remark_fixture_slope, default_slope_radii, BeltramiCoefficient,
    BeltramiSolver,
};
use beltrami::transforms::TransformPlan;
use beltrami::variation::{
    cauchy_riemann_defect, central_difference, development_residual, perturbed_family_limit,
    stability_check, theta, Family,
};
use beltrami::{Complex64, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn w12(u: &ComplexField) -> f64 {
    let d2 = DiskRegion::origin(2.0).unwrap();
    sobolev_norm(u, &SobolevSpec::new(1, 2.0, d2).unwrap()).unwrap()
}

fn bump(g: GridSpec, z0: Complex64, amp: f64, w: f64) -> BeltramiCoefficient {
    BeltramiCoefficient::direction(ComplexField::from_fn(g, |z| gaussian(z, z0, c(amp, 0.0), w)).unwrap())
        .unwrap()
}

/// mu = 0.4 bump at -0.5, a = unit bump at 0.5i, half width 4.
fn standard(n: usize) -> (BeltramiSolver, BeltramiCoefficient, BeltramiCoefficient) {
    let g = GridSpec::centered(4.0, n).unwrap();
    let mu = BeltramiCoefficient::new(bump(g, c(-0.5, 0.0), 0.4, 0.25).field().clone()).unwrap();
    (BeltramiSolver::new(g).unwrap(), mu, bump(g, c(0.0, 0.5), 1.0, 0.25))
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

/// Mean-free smooth fields: x- and y-derivatives of random Gaussians.
fn dipole_field(g: GridSpec, rng: &mut ChaCha8Rng) -> ComplexField {
    let terms: Vec<(Complex64, Complex64, f64, bool)> = (0..4)
        .map(|_| {
            (
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                rng.gen_range(0.3..0.6),
                rng.gen_bool(0.5),
            )
        })
        .collect();
    ComplexField::from_fn(g, |z| {
        terms
            .iter()
            .map(|&(amp, z0, w, along_x)| {
                let d = z - z0;
                let e = (-d.norm_sqr() / (w * w)).exp();
                amp * e * (-2.0 / (w * w)) * if along_x { d.re } else { d.im }
            })
            .sum()
    })
    .unwrap()
}

fn c1() -> Result<Outcome> {
    let g = GridSpec::centered(4.0, 256)?;
    let plan = TransformPlan::new(g, 1)?.with_far_field(false);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let u = dipole_field(g, &mut rng);
        let t = plan.apply_beurling(&u);
        worst = worst.max((t.l2_norm() / u.l2_norm() - 1.0).abs());
    }
    outcome(worst <= 1e-10, format!("max |ratio - 1| = {worst:.2e} over 50 fields"))
}

fn c2() -> Result<Outcome> {
    let g = GridSpec::centered(4.0, 256)?;
    let plan = TransformPlan::default_for(g)?;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut e1, mut e2): (f64, f64) = (0.0, 0.0);
    for _ in 0..10 {
        let z0 = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let amp = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let w = rng.gen_range(0.3..0.6);
        let u = ComplexField::from_fn(g, |z| gaussian(z, z0, amp, w))?;
        let (dz, dzb) = wirtinger_pair(&plan.apply_cauchy(&u));
        let t = plan.apply_beurling(&u);
        e1 = e1.max((&dzb - &u).l2_norm() / u.l2_norm());
        e2 = e2.max((&dz - &t).l2_norm() / u.l2_norm());
    }
    outcome(
        e1 <= 1e-6 && e2 <= 1e-6,
        format!("dzbar P u - u: {e1:.2e}, dz P u - T u: {e2:.2e}"),
    )
}

fn c3() -> Result<Outcome> {
    let g = GridSpec::centered(4.0, 256)?;
    let solver = BeltramiSolver::new(g)?;
    let v = bump(g, c(0.1, -0.1), 1.0, 0.3);
    let mut pass = true;
    let mut parts = Vec::new();
    for s in [0.2, 0.5, 0.8] {
        let mu = BeltramiCoefficient::new(bump(g, c(0.0, 0.0), s, 0.3).field().clone())?;
        let rep = solver.solve_inhomogeneous(&mu, v.field())?;
        let worst = rep.residual_history[1..]
            .windows(2)
            .map(|w| w[1] / w[0])
            .fold(0.0, f64::max);
        pass &= rep.converged && worst <= s + 0.05;
        parts.push(format!("s={s}: {worst:.3} ({} it)", rep.iterations));
    }
    outcome(pass, parts.join(", "))
}

fn c4() -> Result<Outcome> {
    const AMP: f64 = 0.3;
    let err = |n: usize| -> Result<f64> {
        let g = GridSpec::centered(12.0, n)?;
        let mu = BeltramiCoefficient::from_fn(g, |z| shear_mu(AMP, z))?;
        let f = BeltramiSolver::new(g)?.canonical_solution(&mu)?;
        let at_one = shear_map(AMP, c(1.0, 0.0));
        let exact = ComplexField::from_fn(g, |z| shear_map(AMP, z) / at_one)?;
        Ok(w12(&(f.map() - &exact)))
    };
    let (coarse, fine) = (err(256)?, err(512)?);
    outcome(
        fine <= 1e-3 && fine <= 0.6 * coarse,
        format!("W12 error n=256: {coarse:.2e}, n=512: {fine:.2e}, ratio {:.3}", fine / coarse),
    )
}

fn c5() -> Result<Outcome> {
    let (solver, mu, a) = standard(256);
    let g = *mu.spec();
    let th = theta(&solver, &mu, &a)?;
    let cd = central_difference(&solver, &mu, &a, c(1e-3, 0.0))?;
    let e_cd = w12(&(&cd - &th));
    let b = bump(g, c(0.3, -0.3), 1.0, 0.25);
    let lim = perturbed_family_limit(&solver, &mu, &a, &b, 1e-3)?;
    let e_alpha = w12(&(&lim - &th));
    outcome(
        e_cd <= 1e-4 && e_alpha <= 1e-4,
        format!("central difference: {e_cd:.2e}, alpha-family limit: {e_alpha:.2e}"),
    )
}

fn c6() -> Result<Outcome> {
    let (solver, mu, a) = standard(256);
    let d = cauchy_riemann_defect(&solver, &mu, &a, 1e-2, Family::Holomorphic)?;
    let half = cauchy_riemann_defect(&solver, &mu, &a, 5e-3, Family::Holomorphic)?;
    let conj = cauchy_riemann_defect(&solver, &mu, &a, 1e-2, Family::Conjugate)?;
    let rel = d.defect / d.theta_norm;
    let ratio = half.defect / d.defect;
    let control = conj.defect / conj.theta_norm;
    outcome(
        rel <= 1e-3 && ratio <= 0.35 && control > 0.5,
        format!("defect/||theta|| = {rel:.2e}, halving ratio {ratio:.3}, conjugate control {control:.3}"),
    )
}

fn c7() -> Result<Outcome> {
    let (solver, mu, a) = standard(256);
    let s_list = [1e-1, 3e-2, 1e-2, 3e-3];
    let mut pass = true;
    let mut parts = Vec::new();
    for k in 0..3 {
        let r = development_residual(&solver, &mu, &a, &s_list, k)?;
        pass &= r.windows(2).all(|w| w[1].1 < w[0].1);
        let vals: Vec<String> = r.iter().map(|(_, v)| format!("{v:.2e}")).collect();
        parts.push(format!("k={k}: [{}]", vals.join(" ")));
    }
    outcome(pass, parts.join(", "))
}

fn c8() -> Result<Outcome> {
    let max_ratios = |n: usize| -> Result<Vec<f64>> {
        let g = GridSpec::centered(4.0, n)?;
        let mut worst = vec![0.0f64; 3];
        for id in 0..20 {
            let case = manufactured_case(g, 8, id)?;
            for (slot, (k, p)) in [(0, 2.0), (1, 2.0), (1, 3.0)].into_iter().enumerate() {
                let r = elliptic_ratio(&case.mu, &case.u, &case.v, 1.0, 2.0, k, p)?;
                worst[slot] = worst[slot].max(r);
            }
        }
        Ok(worst)
    };
    let (coarse, fine) = (max_ratios(256)?, max_ratios(512)?);
    let changes: Vec<f64> = coarse.iter().zip(&fine).map(|(a, b)| (b / a - 1.0).abs()).collect();
    let worst = changes.iter().cloned().fold(0.0, f64::max);
    outcome(
        worst <= 0.25,
        format!(
            "max ratios n=256 {:.3?}, n=512 {:.3?}, largest change {:.1}%",
            coarse,
            fine,
            100.0 * worst
        ),
    )
}

fn c9() -> Result<Outcome> {
    let radii = default_slope_radii();
    let mut pass = true;
    let mut parts = Vec::new();
    for q in [4.0, 8.0] {
        let s = remark_fixture_slope(q, &radii)?;
        pass &= (s + 2.0 / q).abs() <= 0.05;
        parts.push(format!("q={q}: {s:.4} (expect {:.4})", -2.0 / q));
    }
    // independent of the library's slope fit: the coefficient itself is
    // bounded near 0, only its gradient blows up
    pass &= (0..16).all(|k| remark_mu(4.0, Complex64::from_polar(1e-6, TAU * k as f64 / 16.0)).norm() < 1.0);
    outcome(pass, parts.join(", "))
}

fn c10() -> Result<Outcome> {
    let defect = |n: usize| -> Result<f64> {
        let g = GridSpec::centered(4.0, n)?;
        let zero = BeltramiCoefficient::zero(g);
        let glued = glue(&zero, &zero)?;
        let u = simultaneous_uniformize(&BeltramiSolver::new(g)?, &glued)?;
        debug_assert_eq!(*u.metric()?.spec(), upper_subgrid(&g)?);
        hyperbolic_defect(&u.metric()?, 0.5)
    };
    let (d256, d512) = (defect(256)?, defect(512)?);
    // both may already sit at the roundoff floor, where halving is vacuous
    let halves = d512 <= 0.5 * d256 || d256.max(d512) <= 1e-12;
    let hyperbolic = d512 <= 1e-3 && halves;

    let (solver, mu, a) = standard(256);
    let g = *mu.spec();
    let extra = bump(g, c(0.3, 0.3), 0.2, 0.25);
    let ns = [2.0, 4.0, 8.0, 16.0];
    let mu_seq = ns
        .iter()
        .map(|&n| mu.perturbed(&extra, c(1.0 / n, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    let a_seq = vec![a.clone(); ns.len()];
    let dist = stability_check(&solver, &mu_seq, &a_seq, &mu, &a, 1)?;
    let ratios: Vec<f64> = dist.windows(2).map(|w| w[1] / w[0]).collect();
    let stable = ratios.iter().all(|r| (0.35..=0.65).contains(r));
    outcome(
        hyperbolic && stable,
        format!(
            "hyperbolic defect n=256 {d256:.2e}, n=512 {d512:.2e}; stability ratios {:.3?}",
            ratios
        ),
    )
}

type Criterion = (&'static str, &'static str, u64, fn() -> Result<Outcome>);

const CRITERIA: [Criterion; 10] = [
    ("C1", "L2 isometry of T", 5, c1),
    ("C2", "dzbar P = id, dz P = T", 5, c2),
    ("C3", "Neumann contraction", 30, c3),
    ("C4", "canonical solution vs shear oracle", 120, c4),
    ("C5", "theta vs difference quotients", 120, c5),
    ("C6", "holomorphy in the parameter", 180, c6),
    ("C7", "development residual decay", 300, c7),
    ("C8", "elliptic ratio grid stability", 300, c8),
    ("C9", "remark fixture slope", 30, c9),
    ("C10", "hyperbolic degeneration and stability", 180, c10),
];

fn main() {
    let mut failed = 0;
    for (id, name, budget, run) in CRITERIA {
        let start = Instant::now();
        let res = run();
        let took = start.elapsed();
        let in_time = took <= Duration::from_secs(budget);
        let (pass, detail) = match res {
            Ok(o) => (o.pass && in_time, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !pass {
            failed += 1;
        }
        println!(
            "{} {id:<3} {name}: {detail} [{:.1} s / {budget} s]",
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", CRITERIA.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
