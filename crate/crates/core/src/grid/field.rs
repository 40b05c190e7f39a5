use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use super::spec::GridSpec;
use crate::error::{Error, Result};

/// Complex samples of a function on a [`GridSpec`], stored with `i` (real axis) outer.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexField {
    spec: GridSpec,
    data: Vec<Complex64>,
}

/// Samples `f` at every node; fails on the first non-finite value.
pub fn sample_function<F>(spec: GridSpec, f: F) -> Result<ComplexField>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut data = Vec::with_capacity(spec.len());
    for i in 0..spec.n() {
        for j in 0..spec.n() {
            let z = spec.node(i, j);
            let v = f(z);
            if !is_finite(v) {
                return Err(Error::NonFinite { i, j, z });
            }
            data.push(v);
        }
    }
    Ok(ComplexField { spec, data })
}

#[inline]
pub(crate) fn is_finite(v: Complex64) -> bool {
    v.re.is_finite() && v.im.is_finite()
}

impl ComplexField {
    pub fn zeros(spec: GridSpec) -> Self {
        Self {
            spec,
            data: vec![Complex64::new(0.0, 0.0); spec.len()],
        }
    }

    pub fn constant(spec: GridSpec, value: Complex64) -> Self {
        Self {
            spec,
            data: vec![value; spec.len()],
        }
    }

    /// The identity map `z` sampled on the grid.
    pub fn identity(spec: GridSpec) -> Self {
        Self {
            spec,
            data: spec.nodes().collect(),
        }
    }

    pub fn from_fn<F: Fn(Complex64) -> Complex64>(spec: GridSpec, f: F) -> Result<Self> {
        sample_function(spec, f)
    }

    /// Wraps raw samples; checks the length and finiteness.
    pub fn from_samples(spec: GridSpec, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != spec.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                spec.len(),
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !is_finite(*v)) {
            let (i, j) = (pos / spec.n(), pos % spec.n());
            return Err(Error::NonFinite {
                i,
                j,
                z: spec.node(i, j),
            });
        }
        Ok(Self { spec, data })
    }

    pub(crate) fn from_raw(spec: GridSpec, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), spec.len());
        Self { spec, data }
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn samples_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[self.spec.index(i, j)]
    }

    /// Iterates `(z, value)` pairs in storage order.
    pub fn iter_nodes(&self) -> impl Iterator<Item = (Complex64, Complex64)> + '_ {
        self.spec.nodes().zip(self.data.iter().copied())
    }

    pub fn map<F: Fn(Complex64) -> Complex64>(&self, f: F) -> Self {
        Self::from_raw(self.spec, self.data.iter().map(|&v| f(v)).collect())
    }

    /// Applies `f(z, value)` node-wise.
    pub fn map_nodes<F: Fn(Complex64, Complex64) -> Complex64>(&self, f: F) -> Self {
        Self::from_raw(self.spec, self.iter_nodes().map(|(z, v)| f(z, v)).collect())
    }

    pub fn zip_with<F>(&self, other: &Self, f: F) -> Self
    where
        F: Fn(Complex64, Complex64) -> Complex64,
    {
        assert_eq!(self.spec, other.spec, "fields live on different grids");
        Self::from_raw(
            self.spec,
            self.data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// Pointwise product.
    pub fn mul_pointwise(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map(|v| v * c)
    }

    pub fn conj(&self) -> Self {
        self.map(|v| v.conj())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Plain discrete L2 norm over the whole grid: `(sum |u|^2 h^2)^(1/2)`.
    pub fn l2_norm(&self) -> f64 {
        (self.data.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.spec.cell_area()).sqrt()
    }

    /// Riemann sum of the field over the grid.
    pub fn integral(&self) -> Complex64 {
        self.data.iter().sum::<Complex64>() * self.spec.cell_area()
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| is_finite(*v))
    }

    /// Bilinear interpolation from the four surrounding nodes.
    pub fn interpolate(&self, z: Complex64) -> Option<Complex64> {
        let (x, y) = self.spec.coords(z);
        let n = self.spec.n();
        if !(x >= 0.0 && y >= 0.0 && x <= (n - 1) as f64 && y <= (n - 1) as f64) {
            return None;
        }
        let i0 = (x.floor() as usize).min(n - 2);
        let j0 = (y.floor() as usize).min(n - 2);
        let tx = x - i0 as f64;
        let ty = y - j0 as f64;
        Some(
            self.get(i0, j0) * ((1.0 - tx) * (1.0 - ty))
                + self.get(i0 + 1, j0) * (tx * (1.0 - ty))
                + self.get(i0, j0 + 1) * ((1.0 - tx) * ty)
                + self.get(i0 + 1, j0 + 1) * (tx * ty),
        )
    }

    /// Copies the `sub`-grid block out of this field; `sub` nodes must be nodes of `self`.
    pub fn restrict(&self, sub: GridSpec) -> Result<Self> {
        let (i0, j0) = self.block_offset(&sub)?;
        let m = sub.n();
        let mut data = Vec::with_capacity(sub.len());
        for i in 0..m {
            let row = self.spec.index(i0 + i, j0);
            data.extend_from_slice(&self.data[row..row + m]);
        }
        Ok(Self::from_raw(sub, data))
    }

    /// Offset of `sub`'s node (0, 0) inside this grid.
    pub(crate) fn block_offset(&self, sub: &GridSpec) -> Result<(usize, usize)> {
        if (sub.spacing() - self.spec.spacing()).abs() > 1e-12 * self.spec.spacing() {
            return Err(Error::InvalidGrid("sub-grid spacing differs".into()));
        }
        let (i0, j0) = self
            .spec
            .exact_node(sub.node(0, 0))
            .ok_or_else(|| Error::InvalidGrid("sub-grid is not node-aligned".into()))?;
        if i0 + sub.n() > self.spec.n() || j0 + sub.n() > self.spec.n() {
            return Err(Error::InvalidGrid("sub-grid extends past the grid".into()));
        }
        Ok((i0, j0))
    }
}

impl Add for &ComplexField {
    type Output = ComplexField;
    fn add(self, rhs: Self) -> ComplexField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexField {
    type Output = ComplexField;
    fn sub(self, rhs: Self) -> ComplexField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &ComplexField {
    type Output = ComplexField;
    fn neg(self) -> ComplexField {
        self.map(|v| -v)
    }
}

impl Mul<Complex64> for &ComplexField {
    type Output = ComplexField;
    fn mul(self, rhs: Complex64) -> ComplexField {
        self.scale(rhs)
    }
}

impl Mul<f64> for &ComplexField {
    type Output = ComplexField;
    fn mul(self, rhs: f64) -> ComplexField {
        self.map(|v| v * rhs)
    }
}
