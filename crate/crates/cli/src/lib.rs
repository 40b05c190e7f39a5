//! Batch runner for the `beltrami` crate: one subcommand per pipeline, flat
//! text configs, deterministic text artifacts.
//!
//! Exit statuses: 0 success, 2 config error, 3 non-convergence, 4 invariant
//! violation. Failures print a single `error exit=.. kind=.. key=.. message=..`
//! line on stderr.

pub mod config;
pub mod error;
pub mod run;

use std::path::PathBuf;

use clap::Parser;

pub use config::{format_preset, parse_preset, Command, ExperimentConfig};
pub use error::CliError;
pub use run::{config_hash, run};

#[derive(Debug, Parser)]
#[command(name = "beltrami", version, about = "Run Beltrami-equation experiments")]
pub struct Args {
    /// Subcommand; overrides `command` in the config file.
    #[arg(value_enum)]
    pub command: Command,
    /// Flat `key = value` config file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: all cores). Does not change any output.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub n: Option<String>,
    #[arg(long)]
    pub half_width: Option<String>,
    #[arg(long)]
    pub tol: Option<String>,
    #[arg(long)]
    pub max_iter: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Coefficient preset, e.g. `gaussian:center=-0.5+0i,amp=0.4,width=0.25`.
    #[arg(long)]
    pub mu: Option<String>,
    /// Lower-half-plane coefficient for `bers`.
    #[arg(long)]
    pub mu2: Option<String>,
    /// Variation direction preset.
    #[arg(long)]
    pub a: Option<String>,
    #[arg(long)]
    pub s: Option<String>,
    /// Comma-separated steps.
    #[arg(long)]
    pub s_list: Option<String>,
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long)]
    pub r_inner: Option<String>,
    #[arg(long)]
    pub r_outer: Option<String>,
    #[arg(long)]
    pub cases: Option<String>,
    #[arg(long)]
    pub trials: Option<String>,
    #[arg(long)]
    pub min_im: Option<String>,
}

impl Args {
    /// Defaults, then the config file, then flags.
    pub fn config(&self) -> Result<ExperimentConfig, CliError> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Config {
                key: Some("config".into()),
                msg: format!("{}: {e}", path.display()),
            })?;
            cfg.apply_text(&text)?;
        }
        cfg.command = self.command;
        let flags = [
            ("n", &self.n),
            ("half_width", &self.half_width),
            ("tol", &self.tol),
            ("max_iter", &self.max_iter),
            ("out", &self.out),
            ("seed", &self.seed),
            ("mu", &self.mu),
            ("mu2", &self.mu2),
            ("a", &self.a),
            ("s", &self.s),
            ("s_list", &self.s_list),
            ("k", &self.k),
            ("p", &self.p),
            ("r_inner", &self.r_inner),
            ("r_outer", &self.r_outer),
            ("cases", &self.cases),
            ("trials", &self.trials),
            ("min_im", &self.min_im),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                cfg.set(key, v)?;
            }
        }
        Ok(cfg)
    }
}

/// Parses, runs on a pool of `--jobs` threads, and returns the summary line.
pub fn main_with(args: &Args) -> Result<String, CliError> {
    let cfg = args.config()?;
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = args.jobs {
        if j == 0 {
            return Err(CliError::Config {
                key: Some("jobs".into()),
                msg: "must be positive".into(),
            });
        }
        pool = pool.num_threads(j);
    }
    let pool = pool.build().map_err(|e| CliError::Config {
        key: Some("jobs".into()),
        msg: e.to_string(),
    })?;
    let summary = pool.install(|| run(&cfg))?;
    Ok(summary.to_string())
}
