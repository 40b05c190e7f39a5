//! Subcommand bodies. Each writes its artifacts plus `manifest.json` into the
//! output directory and returns a one-line JSON summary.

use std::fs;
use std::path::{Path, PathBuf};

use beltrami::bers::{glue, hyperbolic_defect, simultaneous_uniformize, CONVENTION};
use beltrami::grid::{save_fld1, wirtinger_pair, ComplexField, DiskRegion, GridSpec};
use beltrami::presets::{gaussian, Preset};
use beltrami::solver::{
    default_slope_radii, elliptic_ratio, manufactured_case, remark_fixture_slope, BeltramiCoefficient,
    BeltramiSolver, SolverOptions,
};
use beltrami::transforms::{beurling_operator_norm_probe, random_test_field, TransformPlan};
use beltrami::variation::{
    cauchy_riemann_defect, central_difference, development_residual, report_norm, theta_from, Family,
};
use beltrami::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::config::{Command, ExperimentConfig};
use crate::error::CliError;

pub const GRID_CONVENTION: &str =
    "node (i, j) = center + ((i - n/2) + i (j - n/2)) * 2 half_width / n; i along Re, j along Im";
pub const FOURIER_CONVENTION: &str = "dz <-> pi i conj(xi), dzbar <-> pi i xi; symbols vanish at xi = 0 and on Nyquist lines";
pub const FLD1_CONVENTION: &str = "FLD1 header, then i,j,re,im per node with i outer; 17 significant digits";

/// Hex SHA-256 of the serialized config without its `out` line, so the same
/// experiment hashes the same wherever it is written.
pub fn config_hash(cfg: &ExperimentConfig) -> String {
    let text: String = cfg
        .serialize()
        .lines()
        .filter(|l| !l.starts_with("out "))
        .map(|l| format!("{l}\n"))
        .collect();
    format!("{:x}", Sha256::digest(text.as_bytes()))
}

struct Artifacts {
    dir: PathBuf,
    files: Vec<String>,
}

impl Artifacts {
    fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Self {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn text(&mut self, name: &str, body: &str) -> Result<(), CliError> {
        fs::write(self.dir.join(name), body)?;
        self.files.push(name.into());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut body = serde_json::to_string_pretty(value)?;
        body.push('\n');
        self.text(name, &body)
    }

    fn field(&mut self, name: &str, field: &ComplexField) -> Result<(), CliError> {
        save_fld1(field, self.dir.join(name))?;
        self.files.push(name.into());
        Ok(())
    }

    fn finish(mut self, cfg: &ExperimentConfig, summary: &Value) -> Result<(), CliError> {
        let manifest = json!({
            "command": cfg.command.name(),
            "config_hash": config_hash(cfg),
            "config": cfg.serialize(),
            "seed": cfg.seed,
            "versions": {
                "beltrami": beltrami::VERSION,
                "beltrami-cli": env!("CARGO_PKG_VERSION"),
            },
            "conventions": {
                "grid": GRID_CONVENTION,
                "fourier": FOURIER_CONVENTION,
                "fld1": FLD1_CONVENTION,
                "metric": CONVENTION,
            },
            "files": self.files.clone(),
            "summary": summary,
        });
        self.json("manifest.json", &manifest)
    }
}

fn grid(cfg: &ExperimentConfig) -> Result<GridSpec, CliError> {
    Ok(GridSpec::centered(cfg.half_width, cfg.n)?)
}

fn solver(cfg: &ExperimentConfig, spec: GridSpec) -> Result<BeltramiSolver, CliError> {
    Ok(BeltramiSolver::new(spec)?
        .with_options(SolverOptions {
            tol: cfg.tol,
            max_iter: cfg.max_iter,
        })
        .require_convergence(true))
}

fn coefficient(key: &str, preset: &Preset, spec: GridSpec) -> Result<BeltramiCoefficient, CliError> {
    BeltramiCoefficient::new(preset.sample(spec)?).map_err(|e| CliError::Config {
        key: Some(key.into()),
        msg: e.to_string(),
    })
}

fn direction(preset: &Preset, spec: GridSpec) -> Result<BeltramiCoefficient, CliError> {
    BeltramiCoefficient::direction(preset.sample(spec)?).map_err(|e| CliError::Config {
        key: Some("a".into()),
        msg: e.to_string(),
    })
}

fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

/// Runs `cfg.command` and returns its summary (also stored in the manifest).
pub fn run(cfg: &ExperimentConfig) -> Result<Value, CliError> {
    cfg.validate()?;
    let mut art = Artifacts::new(&cfg.out)?;
    let summary = match cfg.command {
        Command::Solve => solve(cfg, &mut art)?,
        Command::Theta => theta(cfg, &mut art)?,
        Command::Holomorphy => holomorphy(cfg, &mut art)?,
        Command::Develop => develop(cfg, &mut art)?,
        Command::Estimate => estimate(cfg, &mut art)?,
        Command::Bers => bers(cfg, &mut art)?,
        Command::Fixtures => fixtures(cfg, &mut art)?,
        Command::ProbeNp => probe_np(cfg, &mut art)?,
    };
    art.json("summary.json", &summary)?;
    art.finish(cfg, &summary)?;
    Ok(summary)
}

fn solve(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<Value, CliError> {
    let spec = grid(cfg)?;
    let mu = coefficient("mu", &cfg.mu, spec)?;
    let f = solver(cfg, spec)?.canonical_solution(&mu)?;
    let region = DiskRegion::origin(cfg.r_outer.min(cfg.half_width / 2.0))?;
    art.field("map.fld1", f.map())?;
    art.json("report.json", &f.report)?;
    Ok(json!({
        "iterations": f.report.iterations,
        "converged": f.report.converged,
        "residual": f.report.residual,
        "contraction_estimate": f.report.contraction_estimate,
        "normalization": f.normalization,
        "beltrami_residual": f.beltrami_residual(&mu, &region),
        "support_warning": f.report.support_warning.is_some(),
    }))
}

fn theta(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<Value, CliError> {
    let spec = grid(cfg)?;
    let solver = solver(cfg, spec)?;
    let mu = coefficient("mu", &cfg.mu, spec)?;
    let a = direction(&cfg.a, spec)?;
    let f = solver.canonical_solution(&mu)?;
    let th = theta_from(&solver, &f, &mu, &a)?;
    let cd = central_difference(&solver, &mu, &a, Complex64::new(cfg.s, 0.0))?;
    art.field("theta.fld1", &th.field)?;
    art.json("report.json", &th.report)?;
    Ok(json!({
        "k": cfg.k,
        "theta_norm": report_norm(&th.field, cfg.k + 1)?,
        "s": cfg.s,
        "central_difference_error": report_norm(&(&cd - &th.field), cfg.k + 1)?,
        "iterations": th.report.iterations,
    }))
}

fn holomorphy(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<Value, CliError> {
    let spec = grid(cfg)?;
    let solver = solver(cfg, spec)?;
    let mu = coefficient("mu", &cfg.mu, spec)?;
    let a = direction(&cfg.a, spec)?;
    let rows = cfg
        .s_list
        .iter()
        .map(|&s| {
            Ok((
                cauchy_riemann_defect(&solver, &mu, &a, s, Family::Holomorphic)?,
                cauchy_riemann_defect(&solver, &mu, &a, s, Family::Conjugate)?,
            ))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    art.text(
        "holomorphy.csv",
        &csv(
            "s,defect,theta_norm,relative_defect,conjugate_relative_defect",
            rows.iter().map(|(h, c)| {
                format!(
                    "{:e},{:.10e},{:.10e},{:.10e},{:.10e}",
                    h.s,
                    h.defect,
                    h.theta_norm,
                    h.defect / h.theta_norm,
                    c.defect / c.theta_norm
                )
            }),
        ),
    )?;
    let worst = rows.iter().map(|(h, _)| h.defect / h.theta_norm).fold(0.0, f64::max);
    let control = rows.iter().map(|(_, c)| c.defect / c.theta_norm).fold(f64::INFINITY, f64::min);
    Ok(json!({ "max_relative_defect": worst, "min_conjugate_relative_defect": control }))
}

fn develop(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<Value, CliError> {
    let spec = grid(cfg)?;
    let solver = solver(cfg, spec)?;
    let mu = coefficient("mu", &cfg.mu, spec)?;
    let a = direction(&cfg.a, spec)?;
    let mut steps = cfg.s_list.clone();
    steps.sort_by(|x, y| y.total_cmp(x));
    let rows = development_residual(&solver, &mu, &a, &steps, cfg.k)?;
    art.text(
        "develop.csv",
        &csv("s,residual", rows.iter().map(|(s, r)| format!("{s:e},{r:.10e}"))),
    )?;
    let decreasing = rows.windows(2).all(|w| w[1].1 < w[0].1);
    Ok(json!({ "k": cfg.k, "decreasing": decreasing, "last": rows.last().map(|r| r.1) }))
}

fn estimate(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<Value, CliError> {
    let spec = grid(cfg)?;
    let ratios = (0..cfg.cases)
        .into_par_iter()
        .map(|id| {
            let case = manufactured_case(spec, cfg.seed, id)?;
            let r = elliptic_ratio(&case.mu, &case.u, &case.v, cfg.r_inner, cfg.r_outer, cfg.k, cfg.p)?;
            Ok(r)
        })
        .collect::<Result<Vec<f64>, CliError>>()?;
    art.text(
        "estimate.csv",
        &csv(
            "case_id,k,p,r,R,ratio",
            ratios.iter().enumerate().map(|(id, r)| {
                format!("{id},{},{},{},{},{r:.10e}", cfg.k, cfg.p, cfg.r_inner, cfg.r_outer)
            }),
        ),
    )?;
    let max = ratios.iter().copied().fold(0.0, f64::max);
    Ok(json!({ "cases": cfg.cases, "k": cfg.k, "p": cfg.p, "max_ratio": max }))
}

fn bers(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<Value, CliError> {
    let spec = grid(cfg)?;
    let mu1 = coefficient("mu", &cfg.mu, spec)?;
    let mu2 = coefficient("mu2", &cfg.mu2, spec)?;
    let glued = glue(&mu1, &mu2)?;
    let u = simultaneous_uniformize(&solver(cfg, spec)?, &glued)?;
    let metric = u.metric()?;
    let (r1, r2) = u.equation_residuals(&glued)?;
    art.field("g_zz.fld1", &metric.g_zz)?;
    art.field("g_zzbar.fld1", &metric.g_zzbar)?;
    art.field("g_zbzb.fld1", &metric.g_zbzb)?;
    Ok(json!({
        "convention": CONVENTION,
        "min_im": cfg.min_im,
        "hyperbolic_defect": hyperbolic_defect(&metric, cfg.min_im)?,
        "min_separation": u.min_separation(cfg.min_im),
        "equation_residuals": [r1, r2],
        "iterations": u.canonical.report.iterations,
    }))
}

fn fixtures(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<Value, CliError> {
    let radii = default_slope_radii();
    let slopes = [4.0, 8.0]
        .iter()
        .map(|&q| Ok(json!({ "q": q, "slope": remark_fixture_slope(q, &radii)?, "expected": -2.0 / q })))
        .collect::<Result<Vec<_>, CliError>>()?;

    let spec = grid(cfg)?;
    let plan = TransformPlan::default_for(spec)?;
    let amp = Complex64::new(1.0, 0.5);
    let u = ComplexField::from_fn(spec, |z| gaussian(z, Complex64::new(0.2, -0.1), amp, 0.4))?;
    let (dz, dzb) = wirtinger_pair(&plan.apply_cauchy(&u));
    let t = plan.apply_beurling(&u);
    let raw = TransformPlan::new(spec, 1)?.with_far_field(false);
    let w = random_test_field(spec, &mut ChaCha8Rng::seed_from_u64(cfg.seed));
    let identities = json!({
        "dzbar_cauchy_minus_id": (&dzb - &u).l2_norm() / u.l2_norm(),
        "dz_cauchy_minus_beurling": (&dz - &t).l2_norm() / u.l2_norm(),
        "beurling_isometry_defect": (raw.apply_beurling(&w).l2_norm() / w.l2_norm() - 1.0).abs(),
    });
    let summary = json!({ "remark_slopes": slopes, "transform_identities": identities });
    art.json("fixtures.json", &summary)?;
    Ok(summary)
}

fn probe_np(cfg: &ExperimentConfig, art: &mut Artifacts) -> Result<Value, CliError> {
    let plan = TransformPlan::default_for(grid(cfg)?)?;
    let bound = beurling_operator_norm_probe(&plan, cfg.p, cfg.trials, cfg.seed)?;
    let summary = json!({ "p": cfg.p, "trials": cfg.trials, "seed": cfg.seed, "lower_bound": bound });
    art.json("probe.json", &summary)?;
    Ok(summary)
}
