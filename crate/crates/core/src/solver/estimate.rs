use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::coefficient::BeltramiCoefficient;
use crate::error::{Error, Result};
use crate::grid::{
    lp_norm, sobolev_norm, sup_sobolev_norm, wirtinger_pair, ComplexField, DiskRegion, GridSpec,
    SobolevSpec,
};
use crate::presets::remark_mu;

/// Relative FD residual above which [`elliptic_ratio`] refuses its inputs.
pub const EQUATION_TOLERANCE: f64 = 1e-6;

/// `||u||_{W^{k+1,p}(D_r)} / (||u||_{W^{k,p}(D_R)} + ||v||_{W^{k,p}(D_R)})`
/// for a solution of `(dzbar - mu dz) u = v`, both disks centered at 0.
///
/// The equation is checked first: the finite-difference residual on `D_R` must
/// be at most [`EQUATION_TOLERANCE`] relative to `||u||_{W^{1,2}} + ||v||_{L^2}`.
pub fn elliptic_ratio(
    mu: &BeltramiCoefficient,
    u: &ComplexField,
    v: &ComplexField,
    r: f64,
    big_r: f64,
    k: usize,
    p: f64,
) -> Result<f64> {
    if !(r > 0.0 && r < big_r) {
        return Err(Error::InvalidRegion(format!("need 0 < r < R, got r = {r}, R = {big_r}")));
    }
    let inner = DiskRegion::origin(r)?;
    let outer = DiskRegion::origin(big_r)?;
    let num = sobolev_norm(u, &SobolevSpec::new(k + 1, p, inner)?)?;
    let low = SobolevSpec::new(k, p, outer)?;
    let den = sobolev_norm(u, &low)? + sobolev_norm(v, &low)?;
    if den == 0.0 {
        return Err(Error::ZeroDenominator("elliptic_ratio"));
    }
    let (dz, dzb) = wirtinger_pair(u);
    let resid = dzb
        .zip_with(&mu.field().mul_pointwise(&dz), |a, b| a - b)
        .zip_with(v, |a, b| a - b);
    let resid = lp_norm(&resid, 2.0, &outer);
    let scale = sobolev_norm(u, &SobolevSpec::new(1, 2.0, outer)?)? + lp_norm(v, 2.0, &outer);
    if resid > EQUATION_TOLERANCE * scale {
        return Err(Error::Precondition(format!(
            "(u, v) do not solve the equation: relative residual {:.3e}",
            resid / scale
        )));
    }
    Ok(num / den)
}

/// A manufactured solution `(mu, u, v)` with `v = dzbar u - mu dz u` in closed form.
#[derive(Clone, Debug)]
pub struct ManufacturedCase {
    pub id: usize,
    pub mu: BeltramiCoefficient,
    pub u: ComplexField,
    pub v: ComplexField,
}

#[derive(Clone, Copy)]
struct Gauss {
    c: Complex64,
    z0: Complex64,
    w: f64,
}

impl Gauss {
    fn random<R: Rng>(rng: &mut R, spread: f64, widths: (f64, f64)) -> Self {
        Self {
            c: Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            z0: Complex64::new(rng.gen_range(-spread..spread), rng.gen_range(-spread..spread)),
            w: rng.gen_range(widths.0..widths.1),
        }
    }

    /// `(value, dz, dzbar)` at `z`.
    fn eval(&self, z: Complex64) -> [Complex64; 3] {
        let d = z - self.z0;
        let g = self.c * (-d.norm_sqr() / (self.w * self.w)).exp();
        let s = -1.0 / (self.w * self.w);
        [g, g * d.conj() * s, g * d * s]
    }
}

/// Case `id` of the seeded manufactured family on `spec` (centered at 0, half
/// width at least 4): `u` is a sum of three random Gaussians of width 0.35–0.7,
/// `mu` a sum of two Gaussians of width 0.2–0.25 rescaled so that
/// `||mu||_{W^{1,inf}(D_2)}` lies in `[1, 2]` with `sup |mu| <= 0.9`.
pub fn manufactured_case(spec: GridSpec, seed: u64, id: usize) -> Result<ManufacturedCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ id as u64);
    let us: Vec<Gauss> = (0..3).map(|_| Gauss::random(&mut rng, 0.6, (0.35, 0.7))).collect();
    let ms: Vec<Gauss> = (0..2).map(|_| Gauss::random(&mut rng, 0.4, (0.2, 0.25))).collect();
    let target = rng.gen_range(1.0..2.0);

    let raw_mu = ComplexField::from_fn(spec, |z| ms.iter().map(|g| g.eval(z)[0]).sum())?;
    let w1 = sup_sobolev_norm(&raw_mu, 1, &DiskRegion::origin(2.0)?)?;
    let scale = (target / w1).min(0.9 / raw_mu.max_abs());
    let mu = BeltramiCoefficient::new(raw_mu.scale(Complex64::new(scale, 0.0)))?;

    let mut u = Vec::with_capacity(spec.len());
    let mut v = Vec::with_capacity(spec.len());
    for z in spec.nodes() {
        let [mut val, mut dz, mut dzb] = [Complex64::new(0.0, 0.0); 3];
        for g in &us {
            let [a, b, c] = g.eval(z);
            val += a;
            dz += b;
            dzb += c;
        }
        let m: Complex64 = ms.iter().map(|g| g.eval(z)[0]).sum::<Complex64>() * scale;
        u.push(val);
        v.push(dzb - m * dz);
    }
    Ok(ManufacturedCase {
        id,
        mu,
        u: ComplexField::from_samples(spec, u)?,
        v: ComplexField::from_samples(spec, v)?,
    })
}

/// Default radii for [`remark_fixture_slope`]: eight points from `1e-3` down to `1e-6`.
pub fn default_slope_radii() -> Vec<f64> {
    (0..8).map(|k| 1e-3 * 10f64.powf(-3.0 * k as f64 / 7.0)).collect()
}

/// Least-squares slope of `log max_{|z| = rho} |grad mu_f|` against `log rho`,
/// where `mu_f` is the exact coefficient of `z + |z|^(2 - 2/q)`.
///
/// The gradient is taken by central differences of the closed form with step
/// `1e-5 * rho`, on 64 points per circle.
pub fn remark_fixture_slope(q: f64, radii: &[f64]) -> Result<f64> {
    if !(q > 2.0) || !q.is_finite() {
        return Err(Error::Precondition(format!("q = {q} must exceed 2")));
    }
    if radii.len() < 2 {
        return Err(Error::Precondition("need at least two radii".into()));
    }
    if radii.iter().any(|&r| !(r > 0.0 && r < 1.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition("radii must decrease within (0, 1)".into()));
    }
    let pts: Vec<(f64, f64)> = radii
        .iter()
        .map(|&rho| {
            let d = 1e-5 * rho;
            let g = (0..64)
                .map(|k| {
                    let z = Complex64::from_polar(rho, std::f64::consts::TAU * k as f64 / 64.0);
                    let mx = (remark_mu(q, z + d) - remark_mu(q, z - d)) / (2.0 * d);
                    let dy = Complex64::new(0.0, d);
                    let my = (remark_mu(q, z + dy) - remark_mu(q, z - dy)) / (2.0 * d);
                    (mx.norm_sqr() + my.norm_sqr()).sqrt()
                })
                .fold(0.0, f64::max);
            (rho.ln(), g.ln())
        })
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), &(x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(n, d), &(x, y)| {
        (n + (x - mx) * (y - my), d + (x - mx) * (x - mx))
    });
    Ok(num / den)
}
