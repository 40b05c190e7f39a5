//! Simultaneous uniformization of two coefficients glued across the real axis,
//! and the pulled-back Bers metric.
//!
//! `mu1` lives in the upper half-plane, `mu2` in the lower one. One canonical
//! solve of the glued coefficient gives `f = f^mu`; `f1 = f` on the upper
//! half-plane and `f2bar(z) = f(conj z)` read back on the upper half-plane.
//! The metric `-4 / (f1 - f2bar)^2 df1 . df2bar` expands as
//!
//! ```text
//! h = g_zz dz^2 + 2 g_zzbar dz.dzbar + g_zbzb dzbar^2
//! ```
//!
//! and for `mu1 = mu2 = 0` reduces to the hyperbolic metric `|dz|^2 / y^2`,
//! i.e. `g_zzbar = 1 / (2 y^2)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{wirtinger_pair, ComplexField, GridSpec};
use crate::solver::{BeltramiCoefficient, BeltramiSolver, CanonicalSolution};
use crate::transforms::SUPPORT_THRESHOLD;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// The component convention, as recorded in manifests.
pub const CONVENTION: &str = "h = g_zz dz^2 + 2 g_zzbar dz.dzbar + g_zbzb dzbar^2";

/// Smallest admissible `|f1 - f2bar|`.
pub const SEPARATION_GUARD: f64 = 1e-8;

/// Two half-plane coefficients and their gluing.
#[derive(Clone, Debug)]
pub struct GluedCoefficient {
    pub mu1: BeltramiCoefficient,
    pub mu2: BeltramiCoefficient,
    pub glued: BeltramiCoefficient,
}

/// Glues `mu1` (upper) and `mu2` (lower) node by node; nodes with
/// `|Im z| < spacing` get 0.
///
/// `mu1` must vanish below `Im z = 2 h` and `mu2` above `Im z = -2 h`.
pub fn glue(mu1: &BeltramiCoefficient, mu2: &BeltramiCoefficient) -> Result<GluedCoefficient> {
    let spec = *mu1.spec();
    if mu2.spec() != &spec {
        return Err(Error::Precondition("mu1 and mu2 live on different grids".into()));
    }
    let h = spec.spacing();
    let margin = |field: &ComplexField, bad: &dyn Fn(f64) -> bool, name: &str| -> Result<()> {
        match field
            .iter_nodes()
            .find(|&(z, v)| bad(z.im) && v.norm() >= SUPPORT_THRESHOLD)
        {
            Some((z, _)) => Err(Error::InvalidCoefficient(format!(
                "{name} is non-zero at {z}, within 2 spacings of (or across) the real axis"
            ))),
            None => Ok(()),
        }
    };
    margin(mu1.field(), &|y| y < 2.0 * h, "mu1")?;
    margin(mu2.field(), &|y| y > -2.0 * h, "mu2")?;
    let glued = mu1.field().zip_with(mu2.field(), |a, _| a);
    let glued = ComplexField::from_samples(
        spec,
        glued
            .iter_nodes()
            .zip(mu2.field().samples())
            .map(|((z, a), &b)| {
                if z.im >= h {
                    a
                } else if z.im <= -h {
                    b
                } else {
                    ZERO
                }
            })
            .collect(),
    )?;
    Ok(GluedCoefficient {
        mu1: mu1.clone(),
        mu2: mu2.clone(),
        glued: BeltramiCoefficient::new(glued)?,
    })
}

/// The `n/4 x n/4` upper-half-plane sub-grid: `x in [-w/4, w/4)`,
/// `y in [w/8, 5w/8)` for half width `w`. Its mirror image lies inside the
/// grid and it stays clear of the real axis.
pub fn upper_subgrid(spec: &GridSpec) -> Result<GridSpec> {
    if spec.center() != ZERO {
        return Err(Error::Precondition("the Bers pipeline needs a grid centered at 0".into()));
    }
    if spec.n() < 64 {
        return Err(Error::InvalidGrid("the Bers pipeline needs n >= 64".into()));
    }
    let w = spec.half_width();
    GridSpec::new(Complex64::new(0.0, 3.0 * w / 8.0), w / 4.0, spec.n() / 4)
}

/// Reads `field(conj z)` on the upper sub-grid.
fn reflect_onto(field: &ComplexField, sub: &GridSpec) -> Result<ComplexField> {
    let (i0, j0) = field.block_offset(sub)?;
    let n = field.spec().n();
    let m = sub.n();
    let mut data = Vec::with_capacity(sub.len());
    for i in 0..m {
        for j in 0..m {
            // node (i0 + i, j0 + j) has y = (j0 + j - n/2) h; its mirror row is n - j0 - j
            data.push(field.get(i0 + i, n - j0 - j));
        }
    }
    ComplexField::from_samples(*sub, data)
}

/// `f1`, `f2bar` and their derivatives on the upper sub-grid.
#[derive(Clone, Debug)]
pub struct Uniformization {
    pub f1: ComplexField,
    pub f2bar: ComplexField,
    pub f1_dz: ComplexField,
    pub f1_dzbar: ComplexField,
    pub f2bar_dz: ComplexField,
    pub f2bar_dzbar: ComplexField,
    pub canonical: CanonicalSolution,
}

impl Uniformization {
    /// Metric from the solver's own derivatives of `f` (no finite differences).
    pub fn metric(&self) -> Result<MetricComponents> {
        metric_from_derivatives(
            &self.f1,
            (&self.f1_dz, &self.f1_dzbar),
            &self.f2bar,
            (&self.f2bar_dz, &self.f2bar_dzbar),
        )
    }

    /// `min |f1 - f2bar|` over sub-grid nodes with `Im z >= min_im`.
    pub fn min_separation(&self, min_im: f64) -> f64 {
        self.f1
            .iter_nodes()
            .zip(self.f2bar.samples())
            .filter(|((z, _), _)| z.im >= min_im)
            .map(|((_, a), b)| (a - b).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Relative L2 residuals of `dzbar f1 = mu1 dz f1` and
    /// `dz f2bar = mu2(conj z) dzbar f2bar` on the sub-grid, with
    /// finite-difference derivatives.
    pub fn equation_residuals(&self, glued: &GluedCoefficient) -> Result<(f64, f64)> {
        let sub = *self.f1.spec();
        let mu1 = glued.mu1.field().restrict(sub)?;
        let mu2 = reflect_onto(glued.mu2.field(), &sub)?;
        let (dz1, dzb1) = wirtinger_pair(&self.f1);
        let (dz2, dzb2) = wirtinger_pair(&self.f2bar);
        let r1 = (&dzb1 - &mu1.mul_pointwise(&dz1)).l2_norm() / dz1.l2_norm();
        let r2 = (&dz2 - &mu2.mul_pointwise(&dzb2)).l2_norm() / dzb2.l2_norm();
        Ok((r1, r2))
    }
}

/// One canonical solve of the glued coefficient, read back on the upper sub-grid.
pub fn simultaneous_uniformize(solver: &BeltramiSolver, glued: &GluedCoefficient) -> Result<Uniformization> {
    let sub = upper_subgrid(solver.spec())?;
    let f = solver.canonical_solution(&glued.glued)?;
    Ok(Uniformization {
        f1: f.map().restrict(sub)?,
        f2bar: reflect_onto(f.map(), &sub)?,
        f1_dz: f.dz().restrict(sub)?,
        f1_dzbar: f.dzbar().restrict(sub)?,
        // d/dz [f(conj z)] = (dzbar f)(conj z) and vice versa
        f2bar_dz: reflect_onto(f.dzbar(), &sub)?,
        f2bar_dzbar: reflect_onto(f.dz(), &sub)?,
        canonical: f,
    })
}

/// The three components of a symmetric complex bilinear form.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricComponents {
    pub g_zz: ComplexField,
    pub g_zzbar: ComplexField,
    pub g_zbzb: ComplexField,
}

impl MetricComponents {
    pub fn spec(&self) -> &GridSpec {
        self.g_zz.spec()
    }

    pub fn restrict(&self, sub: GridSpec) -> Result<Self> {
        Ok(Self {
            g_zz: self.g_zz.restrict(sub)?,
            g_zzbar: self.g_zzbar.restrict(sub)?,
            g_zbzb: self.g_zbzb.restrict(sub)?,
        })
    }
}

/// Bers metric of `(f1, f2bar)` with finite-difference derivatives.
pub fn bers_metric(f1: &ComplexField, f2bar: &ComplexField) -> Result<MetricComponents> {
    let (a, b) = wirtinger_pair(f1);
    let (c, d) = wirtinger_pair(f2bar);
    metric_from_derivatives(f1, (&a, &b), f2bar, (&c, &d))
}

/// Pointwise assembly with `lambda = -4 / (f1 - f2bar)^2`:
/// `g_zz = lambda f1_z f2_z`, `g_zbzb = lambda f1_zbar f2_zbar`,
/// `g_zzbar = lambda (f1_z f2_zbar + f1_zbar f2_z) / 2`.
pub fn metric_from_derivatives(
    f1: &ComplexField,
    (f1_dz, f1_dzbar): (&ComplexField, &ComplexField),
    f2bar: &ComplexField,
    (f2_dz, f2_dzbar): (&ComplexField, &ComplexField),
) -> Result<MetricComponents> {
    let spec = *f1.spec();
    for g in [f1_dz, f1_dzbar, f2bar, f2_dz, f2_dzbar] {
        if g.spec() != &spec {
            return Err(Error::Precondition("metric inputs live on different grids".into()));
        }
    }
    let n = spec.n();
    if let Some(k) = f1
        .samples()
        .iter()
        .zip(f2bar.samples())
        .position(|(a, b)| !((a - b).norm() >= SEPARATION_GUARD))
    {
        let (i, j) = (k / n, k % n);
        return Err(Error::Singularity {
            i,
            j,
            z: spec.node(i, j),
            separation: (f1.get(i, j) - f2bar.get(i, j)).norm(),
        });
    }
    let comps: Vec<[Complex64; 3]> = (0..spec.len())
        .into_par_iter()
        .map(|k| {
            let d = f1.samples()[k] - f2bar.samples()[k];
            let lambda = -4.0 / (d * d);
            let (a, b) = (f1_dz.samples()[k], f1_dzbar.samples()[k]);
            let (c, e) = (f2_dz.samples()[k], f2_dzbar.samples()[k]);
            [lambda * a * c, lambda * (a * e + b * c) * 0.5, lambda * b * e]
        })
        .collect();
    let pick = |m: usize| ComplexField::from_samples(spec, comps.iter().map(|c| c[m]).collect());
    Ok(MetricComponents {
        g_zz: pick(0)?,
        g_zzbar: pick(1)?,
        g_zbzb: pick(2)?,
    })
}

/// L2 norm over nodes with `Im z >= min_im` of `(g_zz, g_zbzb, g_zzbar - 1/(2 y^2))`,
/// which vanishes exactly for the hyperbolic metric.
pub fn hyperbolic_defect(components: &MetricComponents, min_im: f64) -> Result<f64> {
    if !(min_im > 0.0) {
        return Err(Error::InvalidRegion(format!("min_im = {min_im} must be positive")));
    }
    let spec = components.spec();
    let mut sum = 0.0;
    let mut count = 0;
    for (k, z) in spec.nodes().enumerate() {
        if z.im < min_im {
            continue;
        }
        count += 1;
        let hyp = 0.5 / (z.im * z.im);
        sum += components.g_zz.samples()[k].norm_sqr()
            + components.g_zbzb.samples()[k].norm_sqr()
            + (components.g_zzbar.samples()[k] - hyp).norm_sqr();
    }
    if count == 0 {
        return Err(Error::InvalidRegion(format!("no sub-grid nodes with Im z >= {min_im}")));
    }
    Ok((sum * spec.cell_area()).sqrt())
}
