//! Flat `key = value` experiment configs.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use beltrami::presets::Preset;
use beltrami::Complex64;
use clap::ValueEnum;

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Solve,
    Theta,
    Holomorphy,
    Develop,
    Estimate,
    Bers,
    Fixtures,
    ProbeNp,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Theta => "theta",
            Command::Holomorphy => "holomorphy",
            Command::Develop => "develop",
            Command::Estimate => "estimate",
            Command::Bers => "bers",
            Command::Fixtures => "fixtures",
            Command::ProbeNp => "probe-np",
        }
    }
}

impl FromStr for Command {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        <Command as ValueEnum>::from_str(s, false)
    }
}

/// Everything a run depends on. Serializes to the same flat text it parses.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n: usize,
    pub half_width: f64,
    /// Coefficient; the upper-half-plane one for `bers`.
    pub mu: Preset,
    /// Lower-half-plane coefficient for `bers`.
    pub mu2: Preset,
    /// Variation direction.
    pub a: Preset,
    pub tol: f64,
    pub max_iter: usize,
    pub out: PathBuf,
    pub seed: u64,
    /// Difference step for `theta`.
    pub s: f64,
    /// Step sweep for `holomorphy` and `develop`.
    pub s_list: Vec<f64>,
    /// Sobolev order.
    pub k: usize,
    /// Integrability exponent for `estimate` and `probe-np`.
    pub p: f64,
    pub r_inner: f64,
    pub r_outer: f64,
    /// Number of manufactured cases for `estimate`.
    pub cases: usize,
    /// Random fields for `probe-np`.
    pub trials: usize,
    /// Lower edge `Im z >= min_im` of the `bers` defect region.
    pub min_im: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            command: Command::Solve,
            n: 256,
            half_width: 4.0,
            mu: Preset::Gaussian {
                center: Complex64::new(-0.5, 0.0),
                amp: Complex64::new(0.4, 0.0),
                width: 0.25,
            },
            mu2: Preset::Zero,
            a: Preset::Gaussian {
                center: Complex64::new(0.0, 0.5),
                amp: Complex64::new(1.0, 0.0),
                width: 0.25,
            },
            tol: 1e-10,
            max_iter: 500,
            out: PathBuf::from("out"),
            seed: 0,
            s: 1e-3,
            s_list: vec![1e-1, 3e-2, 1e-2, 3e-3],
            k: 1,
            p: 2.0,
            r_inner: 1.0,
            r_outer: 2.0,
            cases: 20,
            trials: 10,
            min_im: 0.5,
        }
    }
}

fn bad(key: &str, value: &str, why: impl std::fmt::Display) -> CliError {
    CliError::Config {
        key: Some(key.to_string()),
        msg: format!("bad value {value:?}: {why}"),
    }
}

fn num<T: FromStr>(key: &str, value: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| bad(key, value, e))
}

impl ExperimentConfig {
    /// Sets one key from its text form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let value = value.trim();
        match key {
            "command" => self.command = value.parse().map_err(|e| bad(key, value, e))?,
            "n" => self.n = num(key, value)?,
            "half_width" => self.half_width = num(key, value)?,
            "mu" => self.mu = parse_preset(value).map_err(|e| bad(key, value, e))?,
            "mu2" => self.mu2 = parse_preset(value).map_err(|e| bad(key, value, e))?,
            "a" => self.a = parse_preset(value).map_err(|e| bad(key, value, e))?,
            "tol" => self.tol = num(key, value)?,
            "max_iter" => self.max_iter = num(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "seed" => self.seed = num(key, value)?,
            "s" => self.s = num(key, value)?,
            "s_list" => {
                self.s_list = value
                    .split(',')
                    .map(|v| num(key, v.trim()))
                    .collect::<Result<_, _>>()?
            }
            "k" => self.k = num(key, value)?,
            "p" => self.p = num(key, value)?,
            "r_inner" => self.r_inner = num(key, value)?,
            "r_outer" => self.r_outer = num(key, value)?,
            "cases" => self.cases = num(key, value)?,
            "trials" => self.trials = num(key, value)?,
            "min_im" => self.min_im = num(key, value)?,
            _ => {
                return Err(CliError::Config {
                    key: Some(key.to_string()),
                    msg: "unknown key".into(),
                })
            }
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`. Blank lines and `#`
    /// comments are skipped.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::Config {
                key: None,
                msg: format!("line {}: expected `key = value`", lineno + 1),
            })?;
            self.set(key.trim(), value)?;
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg = Self::default();
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// One `key = value` line per field, in a fixed order.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let mut line = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        line("command", self.command.name().into());
        line("n", self.n.to_string());
        line("half_width", self.half_width.to_string());
        line("mu", format_preset(&self.mu));
        line("mu2", format_preset(&self.mu2));
        line("a", format_preset(&self.a));
        line("tol", format!("{:e}", self.tol));
        line("max_iter", self.max_iter.to_string());
        line("out", self.out.display().to_string());
        line("seed", self.seed.to_string());
        line("s", format!("{:e}", self.s));
        line(
            "s_list",
            self.s_list.iter().map(|s| format!("{s:e}")).collect::<Vec<_>>().join(","),
        );
        line("k", self.k.to_string());
        line("p", self.p.to_string());
        line("r_inner", self.r_inner.to_string());
        line("r_outer", self.r_outer.to_string());
        line("cases", self.cases.to_string());
        line("trials", self.trials.to_string());
        line("min_im", self.min_im.to_string());
        out
    }

    /// Rejects values no subcommand can use. Coefficient bounds are checked
    /// again by the library when the presets are sampled.
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |key: &str, msg: String| {
            Err(CliError::Config {
                key: Some(key.into()),
                msg,
            })
        };
        if self.n < 16 || !self.n.is_power_of_two() {
            return fail("n", format!("{} is not a power of two >= 16", self.n));
        }
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return fail("half_width", format!("{} must be positive", self.half_width));
        }
        for (key, preset) in [("mu", &self.mu), ("mu2", &self.mu2)] {
            if preset.sup_bound() >= 1.0 {
                return fail(key, format!("amplitude {} must be below 1", preset.sup_bound()));
            }
        }
        if !(self.tol > 0.0) {
            return fail("tol", format!("{} must be positive", self.tol));
        }
        if self.max_iter == 0 {
            return fail("max_iter", "must be positive".into());
        }
        if self.s == 0.0 || !self.s.is_finite() {
            return fail("s", format!("{} must be non-zero", self.s));
        }
        if self.s_list.is_empty() || self.s_list.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
            return fail("s_list", "steps must be positive".into());
        }
        if !(self.p >= 1.0 && self.p.is_finite()) {
            return fail("p", format!("{} must be at least 1", self.p));
        }
        if !(self.r_inner > 0.0 && self.r_inner < self.r_outer) {
            return fail("r_inner", format!("need 0 < r_inner < r_outer = {}", self.r_outer));
        }
        if !(self.min_im > 0.0) {
            return fail("min_im", format!("{} must be positive", self.min_im));
        }
        Ok(())
    }
}

/// `re+imi`, with both parts written in shortest round-trip form.
pub fn format_complex(z: Complex64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    Complex64::from_str(s.trim()).map_err(|e| format!("not a complex number: {e}"))
}

/// `zero`, `gaussian:center=<c>,amp=<c>,width=<x>`, `radial:alpha=<x>` or
/// `remark_q:q=<x>`. `gaussian_bump` and `amplitude` are accepted as aliases.
pub fn parse_preset(s: &str) -> Result<Preset, String> {
    let (name, args) = s.split_once(':').unwrap_or((s, ""));
    let mut fields = Vec::new();
    for part in args.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| format!("expected name=value, got {part:?}"))?;
        fields.push((k.trim(), v.trim()));
    }
    let mut take = |names: &[&str]| -> Result<&str, String> {
        let pos = fields
            .iter()
            .position(|(k, _)| names.contains(k))
            .ok_or_else(|| format!("missing parameter {}", names[0]))?;
        Ok(fields.remove(pos).1)
    };
    let real = |v: &str| v.parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    let preset = match name.trim() {
        "zero" => Preset::Zero,
        "gaussian" | "gaussian_bump" => Preset::Gaussian {
            center: parse_complex(take(&["center"])?)?,
            amp: parse_complex(take(&["amp", "amplitude"])?)?,
            width: real(take(&["width"])?)?,
        },
        "radial" => Preset::Radial {
            alpha: real(take(&["alpha"])?)?,
        },
        "remark_q" => Preset::RemarkQ {
            q: real(take(&["q"])?)?,
        },
        other => return Err(format!("unknown preset {other:?}")),
    };
    if let Some((k, _)) = fields.first() {
        return Err(format!("unexpected parameter {k:?}"));
    }
    if let Preset::Gaussian { width, .. } = preset {
        if !(width > 0.0) {
            return Err(format!("width {width} must be positive"));
        }
    }
    Ok(preset)
}

pub fn format_preset(p: &Preset) -> String {
    match *p {
        Preset::Zero => "zero".into(),
        Preset::Gaussian { center, amp, width } => format!(
            "gaussian:center={},amp={},width={}",
            format_complex(center),
            format_complex(amp),
            width
        ),
        Preset::Radial { alpha } => format!("radial:alpha={alpha}"),
        Preset::RemarkQ { q } => format!("remark_q:q={q}"),
    }
}
