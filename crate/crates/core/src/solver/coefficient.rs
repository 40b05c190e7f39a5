use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{ComplexField, GridSpec};
use crate::transforms::SUPPORT_THRESHOLD;

/// A sampled Beltrami coefficient with certified sup norm and support radius.
///
/// Coefficients built with [`BeltramiCoefficient::new`] satisfy `sup |mu| < 1`;
/// directions and perturbations built with [`BeltramiCoefficient::direction`]
/// only need to be bounded. Both keep their support (samples above
/// [`SUPPORT_THRESHOLD`]) within half the half width of the grid center, which
/// is where the transforms' padding assumptions hold.
#[derive(Clone, Debug, PartialEq)]
pub struct BeltramiCoefficient {
    field: ComplexField,
    sup_norm: f64,
    support_radius: f64,
}

impl BeltramiCoefficient {
    pub fn new(field: ComplexField) -> Result<Self> {
        let c = Self::direction(field)?;
        if c.sup_norm >= 1.0 {
            return Err(Error::InvalidCoefficient(format!(
                "sup norm {} is not below 1",
                c.sup_norm
            )));
        }
        Ok(c)
    }

    /// A bounded direction field (`a`, or a perturbation `alpha(s)`); no sup-norm limit.
    pub fn direction(field: ComplexField) -> Result<Self> {
        if !field.all_finite() {
            return Err(Error::InvalidCoefficient("non-finite samples".into()));
        }
        let spec = *field.spec();
        let sup_norm = field.max_abs();
        let support_radius = field
            .iter_nodes()
            .filter(|(_, v)| v.norm() >= SUPPORT_THRESHOLD)
            .map(|(z, _)| (z - spec.center()).norm())
            .fold(0.0, f64::max);
        if support_radius > spec.half_width() / 2.0 {
            return Err(Error::InvalidCoefficient(format!(
                "support radius {support_radius:.4} exceeds half_width/2 = {}",
                spec.half_width() / 2.0
            )));
        }
        Ok(Self {
            field,
            sup_norm,
            support_radius,
        })
    }

    pub fn from_fn<F: Fn(Complex64) -> Complex64>(spec: GridSpec, f: F) -> Result<Self> {
        Self::new(ComplexField::from_fn(spec, f)?)
    }

    pub fn zero(spec: GridSpec) -> Self {
        Self {
            field: ComplexField::zeros(spec),
            sup_norm: 0.0,
            support_radius: 0.0,
        }
    }

    pub fn field(&self) -> &ComplexField {
        &self.field
    }

    pub fn spec(&self) -> &GridSpec {
        self.field.spec()
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn support_radius(&self) -> f64 {
        self.support_radius
    }

    /// `self + s * a`, validated as a coefficient (`sup < 1`).
    pub fn perturbed(&self, a: &BeltramiCoefficient, s: Complex64) -> Result<Self> {
        Self::new(&self.field + &(a.field() * s))
    }

    /// `self + s * a` as a direction (no sup-norm limit).
    pub fn perturbed_direction(&self, a: &BeltramiCoefficient, s: Complex64) -> Result<Self> {
        Self::direction(&self.field + &(a.field() * s))
    }

    pub fn scaled_direction(&self, s: Complex64) -> Result<Self> {
        Self::direction(self.field() * s)
    }
}
