//! Analytic coefficient families and closed-form maps.
//!
//! Presets are evaluated pointwise and sampled on demand, so they are
//! resolution independent.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::grid::{ComplexField, GridSpec};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A named analytic coefficient family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Preset {
    Zero,
    /// `amp * exp(-|z - center|^2 / width^2)`.
    Gaussian {
        center: Complex64,
        amp: Complex64,
        width: f64,
    },
    /// Coefficient of `z |z|^alpha` on the unit disk, capped smoothly to a
    /// scaled identity outside `|z| = 2`; see [`radial_mu`].
    Radial { alpha: f64 },
    /// Coefficient of `z + |z|^(2 - 2/q)` near 0, cut off smoothly; see [`remark_mu_cut`].
    RemarkQ { q: f64 },
}

impl Preset {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match *self {
            Preset::Zero => ZERO,
            Preset::Gaussian { center, amp, width } => gaussian(z, center, amp, width),
            Preset::Radial { alpha } => radial_mu(alpha, z),
            Preset::RemarkQ { q } => remark_mu_cut(q, z),
        }
    }

    pub fn sample(&self, spec: GridSpec) -> Result<ComplexField> {
        ComplexField::from_fn(spec, |z| self.eval(z))
    }

    /// Upper bound for `sup |preset|`.
    pub fn sup_bound(&self) -> f64 {
        match *self {
            Preset::Zero => 0.0,
            Preset::Gaussian { amp, .. } => amp.norm(),
            Preset::Radial { alpha } => alpha.abs() / (2.0 - alpha.abs()),
            Preset::RemarkQ { .. } => 0.25,
        }
    }
}

pub fn gaussian(z: Complex64, center: Complex64, amp: Complex64, width: f64) -> Complex64 {
    amp * (-(z - center).norm_sqr() / (width * width)).exp()
}

fn smooth_step_kernel(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

/// `C^inf` cutoff: 1 on `r <= 1`, 0 on `r >= 2`.
pub fn cutoff(r: f64) -> f64 {
    let a = smooth_step_kernel(2.0 - r);
    let b = smooth_step_kernel(r - 1.0);
    a / (a + b)
}

/// Coefficient of the radial fixture `f(z) = z exp(alpha L(|z|))` with
/// `r L'(r) = cutoff(r)`, `L(1) = 0`:
/// `mu = (z / zbar) * alpha chi / (2 + alpha chi)`, zero at the origin.
pub fn radial_mu(alpha: f64, z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return ZERO;
    }
    let chi = cutoff(r);
    if chi == 0.0 {
        return ZERO;
    }
    let phase = z / z.conj();
    phase * (alpha * chi / (2.0 + alpha * chi))
}

/// `L(r) = ln r` for `r <= 1`, `int_1^r cutoff(s)/s ds` beyond.
fn radial_log(r: f64) -> f64 {
    if r <= 1.0 {
        return r.ln();
    }
    // composite Simpson on [1, min(r, 2)]; the integrand is smooth
    let b = r.min(2.0);
    let m = 2000;
    let h = (b - 1.0) / m as f64;
    let g = |s: f64| cutoff(s) / s;
    let mut acc = g(1.0) + g(b);
    for k in 1..m {
        let s = 1.0 + k as f64 * h;
        acc += g(s) * if k % 2 == 1 { 4.0 } else { 2.0 };
    }
    acc * h / 3.0
}

/// The radial fixture map itself: `z |z|^alpha` on the unit disk.
pub fn radial_map(alpha: f64, z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return ZERO;
    }
    z * (alpha * radial_log(r)).exp()
}

fn remark_beta(q: f64) -> f64 {
    2.0 - 2.0 / q
}

/// Exact coefficient of `f(z) = z + |z|^beta`, `beta = 2 - 2/q`:
/// `mu = (beta/2) z |z|^(beta-2) / (1 + (beta/2) zbar |z|^(beta-2))`.
pub fn remark_mu(q: f64, z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        return ZERO;
    }
    let beta = remark_beta(q);
    let c = 0.5 * beta * r.powf(beta - 2.0);
    z * c / (ONE + z.conj() * c)
}

/// Radius where `(beta/2) r^(beta-1) = 0.2`, inside which `|remark_mu| <= 1/4`.
pub fn remark_radius(q: f64) -> f64 {
    let beta = remark_beta(q);
    (0.4 / beta).powf(1.0 / (beta - 1.0))
}

/// [`remark_mu`] times `cutoff(2 |z| / remark_radius(q))`, a valid compactly
/// supported coefficient with the same behaviour at 0.
pub fn remark_mu_cut(q: f64, z: Complex64) -> Complex64 {
    let rc = remark_radius(q);
    let chi = cutoff(2.0 * z.norm() / rc);
    if chi == 0.0 {
        return ZERO;
    }
    remark_mu(q, z) * chi
}

/// The smooth shear `g(z) = z + amp exp(-|z|^2) zbar`, a diffeomorphism for `amp < 1/2`.
pub fn shear_map(amp: f64, z: Complex64) -> Complex64 {
    z + z.conj() * (amp * (-z.norm_sqr()).exp())
}

/// Coefficient of [`shear_map`]:
/// `amp e^{-|z|^2} (1 - |z|^2) / (1 - amp zbar^2 e^{-|z|^2})`.
pub fn shear_mu(amp: f64, z: Complex64) -> Complex64 {
    let e = (-z.norm_sqr()).exp();
    let num = amp * e * (1.0 - z.norm_sqr());
    Complex64::new(num, 0.0) / (ONE - z.conj() * z.conj() * (amp * e))
}
