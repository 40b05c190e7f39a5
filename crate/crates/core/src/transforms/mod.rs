//! The Beurling transform `T` and the Cauchy transform `P`.
//!
//! `T u = -(1/π) PV ∫ u(ζ) / (ζ - z)^2 dA(ζ)` and
//! `P u = -(1/π) ∫ u(ζ) (1/(ζ - z) - 1/ζ) dA(ζ)`, so that `dzbar P u = u`,
//! `dz P u = T u` and `P u (0) = 0`. The fast versions are Fourier multipliers
//! on a zero-padded grid ([`TransformPlan`]); [`beurling_quadrature`] and
//! [`cauchy_quadrature`] evaluate the integrals directly and serve as oracles.

mod farfield;
mod plan;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use plan::{SupportWarning, TransformPlan, Transformed, SUPPORT_THRESHOLD};

use crate::error::{Error, Result};
use crate::grid::{ComplexField, GridSpec};

/// `T u` with its support diagnostic.
pub fn beurling(plan: &TransformPlan, u: &ComplexField) -> Transformed {
    plan.beurling(u)
}

/// `P u` with its support diagnostic.
pub fn cauchy(plan: &TransformPlan, u: &ComplexField) -> Transformed {
    plan.cauchy(u)
}

fn in_cell(zeta: Complex64, z: Complex64, h: f64) -> bool {
    let d = zeta - z;
    d.re.abs() < 0.5 * h * (1.0 + 1e-12) && d.im.abs() < 0.5 * h * (1.0 + 1e-12)
}

/// Principal-value Riemann sum for `T u` at each point, skipping the cell that
/// contains it. Costs `O(n^2)` per point.
pub fn beurling_quadrature(u: &ComplexField, points: &[Complex64]) -> Vec<Complex64> {
    let spec = *u.spec();
    let h = spec.spacing();
    let w = -spec.cell_area() / PI;
    points
        .par_iter()
        .map(|&z| {
            u.iter_nodes()
                .filter(|&(zeta, v)| v != Complex64::new(0.0, 0.0) && !in_cell(zeta, z, h))
                .map(|(zeta, v)| {
                    let d = zeta - z;
                    v / (d * d)
                })
                .sum::<Complex64>()
                * w
        })
        .collect()
}

/// Riemann sum for `P u` with the kernel `1/(ζ - z) - 1/ζ`; each term skips
/// the cell containing its own singularity.
pub fn cauchy_quadrature(u: &ComplexField, points: &[Complex64]) -> Vec<Complex64> {
    let spec = *u.spec();
    let h = spec.spacing();
    let w = -spec.cell_area() / PI;
    let zero = Complex64::new(0.0, 0.0);
    points
        .par_iter()
        .map(|&z| {
            u.iter_nodes()
                .filter(|&(_, v)| v != zero)
                .map(|(zeta, v)| {
                    let mut k = zero;
                    if !in_cell(zeta, z, h) {
                        k += (zeta - z).inv();
                    }
                    if !in_cell(zeta, zero, h) {
                        k -= zeta.inv();
                    }
                    v * k
                })
                .sum::<Complex64>()
                * w
        })
        .collect()
}

/// A random smooth, compactly supported, mean-free test field: a sum of one to
/// three terms `c * d[(z - z0)^m exp(-|z - z0|^2 / w^2)]` with `d` one of `dz`,
/// `dzbar`, `m` in `0..=2`, centers within a quarter width of the grid center
/// and widths between `half_width/24` and `half_width/12`.
///
/// Being derivatives of rapidly decaying functions, these fields have no mean
/// to lose to the zero Fourier mode.
pub fn random_test_field<R: Rng>(spec: GridSpec, rng: &mut R) -> ComplexField {
    let hw = spec.half_width();
    let terms = rng.gen_range(1..=3);
    let params: Vec<_> = (0..terms)
        .map(|_| {
            let z0 = spec.center()
                + Complex64::new(rng.gen_range(-0.25..0.25), rng.gen_range(-0.25..0.25)) * hw;
            let w = hw * rng.gen_range(1.0 / 24.0..1.0 / 12.0);
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            let m: u32 = rng.gen_range(0..=2);
            let holo = rng.gen_bool(0.5);
            (z0, w, c, m, holo)
        })
        .collect();
    ComplexField::from_fn(spec, |z| {
        params
            .iter()
            .map(|&(z0, w, c, m, holo)| {
                let d = z - z0;
                let g = (-d.norm_sqr() / (w * w)).exp();
                let pm = if m == 0 { Complex64::new(1.0, 0.0) } else { d.powu(m) };
                // dz / dzbar of d^m g
                let v = if holo {
                    let lower = if m == 0 { Complex64::new(0.0, 0.0) } else { d.powu(m - 1) * m as f64 };
                    (lower - pm * d.conj() / (w * w)) * g
                } else {
                    -pm * d * g / (w * w)
                };
                c * v
            })
            .sum()
    })
    .expect("test fields are finite")
}

/// Empirical lower bound for the `L^p` operator norm `N_p` of `T`:
/// the largest `||T u||_p / ||u||_p` over `trials` random test fields.
///
/// The raw periodic multiplier is applied on the padded grid and both norms
/// are taken there, so the ratio measures the discrete operator itself. At
/// `p = 2` every ratio is 1 up to roundoff.
pub fn beurling_operator_norm_probe(plan: &TransformPlan, p: f64, trials: usize, seed: u64) -> Result<f64> {
    if trials < 10 {
        return Err(Error::Precondition(format!("probe needs at least 10 trials, got {trials}")));
    }
    if !(p >= 1.0 + 1e-6) || !p.is_finite() {
        return Err(Error::Precondition(format!("probe exponent {p} not in (1, inf)")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fields: Vec<ComplexField> = (0..trials)
        .map(|_| random_test_field(*plan.spec(), &mut rng))
        .collect();
    let pnorm = |buf: &[Complex64]| buf.iter().map(|v| v.norm().powf(p)).sum::<f64>().powf(1.0 / p);
    let ratios: Vec<f64> = fields
        .par_iter()
        .map(|u| {
            let mut buf = plan.embed(u.samples());
            let before = pnorm(&buf);
            plan.periodic_beurling(&mut buf);
            pnorm(&buf) / before
        })
        .collect();
    Ok(ratios.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{lp_norm, wirtinger_dz, wirtinger_dzbar, DiskRegion};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn bump(spec: GridSpec, z0: Complex64, w: f64) -> ComplexField {
        ComplexField::from_fn(spec, |z| (-(z - z0).norm_sqr() / (w * w)).exp().into()).unwrap()
    }

    fn rel(a: &ComplexField, b: &ComplexField) -> f64 {
        (a - b).l2_norm() / b.l2_norm()
    }

    #[test]
    fn zero_maps_to_zero() {
        let spec = GridSpec::centered(4.0, 64).unwrap();
        let plan = TransformPlan::default_for(spec).unwrap();
        let z = ComplexField::zeros(spec);
        assert_eq!(plan.apply_beurling(&z).max_abs(), 0.0);
        assert_eq!(plan.apply_cauchy(&z).max_abs(), 0.0);
        assert!(beurling_quadrature(&z, &[c(1.0, 1.0)])[0].norm() == 0.0);
    }

    #[test]
    fn rejects_bad_padding() {
        let spec = GridSpec::centered(4.0, 64).unwrap();
        assert!(TransformPlan::new(spec, 3).is_err());
    }

    #[test]
    fn raw_multiplier_is_an_isometry() {
        let spec = GridSpec::centered(4.0, 128).unwrap();
        let plan = TransformPlan::new(spec, 1).unwrap().with_far_field(false);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let u = random_test_field(spec, &mut rng);
            let t = plan.apply_beurling(&u);
            assert!((t.l2_norm() / u.l2_norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn probe_at_two_is_one() {
        let spec = GridSpec::centered(4.0, 64).unwrap();
        let plan = TransformPlan::new(spec, 2).unwrap();
        let v = beurling_operator_norm_probe(&plan, 2.0, 10, 1).unwrap();
        assert!((v - 1.0).abs() < 1e-6, "{v}");
        assert!(beurling_operator_norm_probe(&plan, 2.0, 9, 1).is_err());
        let v4 = beurling_operator_norm_probe(&plan, 4.0, 10, 1).unwrap();
        assert!((1.0..=5.0).contains(&v4), "{v4}");
    }

    #[test]
    fn derivative_pair_on_smooth_bump() {
        let spec = GridSpec::centered(4.0, 256).unwrap();
        let plan = TransformPlan::default_for(spec).unwrap();
        let u = bump(spec, c(0.3, -0.2), 0.4);
        let p = plan.apply_cauchy(&u);
        let t = plan.apply_beurling(&u);
        assert!(rel(&wirtinger_dzbar(&p), &u) < 1e-6);
        assert!((&wirtinger_dz(&p) - &t).l2_norm() / u.l2_norm() < 1e-6);
    }

    #[test]
    fn beurling_of_dzbar_is_dz() {
        // u = dzbar phi, T u = dz phi for phi = exp(-|z - z0|^2 / w^2)
        let spec = GridSpec::centered(4.0, 256).unwrap();
        let plan = TransformPlan::default_for(spec).unwrap();
        let (z0, w) = (c(-0.2, 0.1), 0.35);
        let phi = |z: Complex64| (-(z - z0).norm_sqr() / (w * w)).exp();
        let u = ComplexField::from_fn(spec, |z| -(z - z0) * phi(z) / (w * w)).unwrap();
        let expect = ComplexField::from_fn(spec, |z| -(z - z0).conj() * phi(z) / (w * w)).unwrap();
        assert!(rel(&plan.apply_beurling(&u), &expect) < 1e-6);
    }

    #[test]
    fn cauchy_is_normalized_at_origin() {
        let spec = GridSpec::centered(4.0, 64).unwrap();
        let plan = TransformPlan::default_for(spec).unwrap();
        let u = bump(spec, c(0.5, 0.5), 0.5);
        let p = plan.apply_cauchy(&u);
        let (i, j) = plan.origin_node();
        assert!(p.get(i, j).norm() <= 1e-14 * u.l2_norm());
    }

    #[test]
    fn disk_indicator_closed_forms() {
        let spec = GridSpec::centered(4.0, 512).unwrap();
        let plan = TransformPlan::new(spec, 2).unwrap();
        let u = ComplexField::from_fn(spec, |z| {
            if z.norm() < 1.0 { c(1.0, 0.0) } else { c(0.0, 0.0) }
        })
        .unwrap();
        let t = plan.beurling(&u);
        assert!(t.support_warning.is_none());
        let t = t.field;
        let inner = DiskRegion::origin(0.5).unwrap();
        assert!(lp_norm(&t, 2.0, &inner) < 1e-2);
        let (mut num, mut den) = (0.0, 0.0);
        for (z, v) in t.iter_nodes() {
            if z.norm() > 1.5 && z.norm() < 2.5 {
                let e = -(z * z).inv();
                num += (v - e).norm_sqr();
                den += e.norm_sqr();
            }
        }
        assert!((num / den).sqrt() < 1e-2);

        // P of the indicator: zbar inside; 1/z outside (the 1/ζ term integrates to 0)
        let p = plan.apply_cauchy(&u);
        let (mut num, mut den) = (0.0, 0.0);
        for (z, v) in p.iter_nodes() {
            let r = z.norm();
            let e = if r < 0.8 {
                z.conj()
            } else if r > 1.2 && r < 3.0 {
                z.inv()
            } else {
                continue;
            };
            num += (v - e).norm_sqr();
            den += e.norm_sqr();
        }
        assert!((num / den).sqrt() < 1e-2);
    }

    #[test]
    fn quadrature_disk_value_at_two() {
        let spec = GridSpec::centered(2.0, 256).unwrap();
        let u = ComplexField::from_fn(spec, |z| {
            if z.norm() < 1.0 { c(1.0, 0.0) } else { c(0.0, 0.0) }
        })
        .unwrap();
        let v = beurling_quadrature(&u, &[c(2.0, 0.0)])[0];
        assert!((v - c(-0.25, 0.0)).norm() < 5e-3, "{v}");
        let p = cauchy_quadrature(&u, &[c(2.0, 0.0), c(0.25, 0.25)]);
        assert!((p[0] - c(0.5, 0.0)).norm() < 5e-3, "{}", p[0]);
        assert!((p[1] - c(0.25, -0.25)).norm() < 5e-3, "{}", p[1]);
    }

    #[test]
    fn spectral_and_quadrature_converge() {
        let points = [c(0.25, 0.5), c(-0.5, 0.0), c(1.0, -0.75)];
        let err = |n: usize| {
            let spec = GridSpec::centered(4.0, n).unwrap();
            let plan = TransformPlan::default_for(spec).unwrap();
            let u = bump(spec, c(0.1, -0.2), 0.5);
            let t = plan.apply_beurling(&u);
            let p = plan.apply_cauchy(&u);
            let tq = beurling_quadrature(&u, &points);
            let pq = cauchy_quadrature(&u, &points);
            let mut et = 0.0f64;
            let mut ep = 0.0f64;
            for (k, &z) in points.iter().enumerate() {
                let (i, j) = spec.exact_node(z).unwrap();
                et = et.max((t.get(i, j) - tq[k]).norm() / tq[k].norm());
                ep = ep.max((p.get(i, j) - pq[k]).norm() / pq[k].norm());
            }
            (et, ep)
        };
        let (t128, p128) = err(128);
        let (t256, p256) = err(256);
        assert!(t128 < 2e-2 && p128 < 2e-2, "{t128} {p128}");
        assert!(t256 <= 0.5 * t128, "{t128} -> {t256}");
        assert!(p256 <= 0.5 * p128, "{p128} -> {p256}");
    }
}
