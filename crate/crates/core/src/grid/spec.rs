use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Uniform `n x n` sampling of the square of side `2 * half_width` around `center`.
///
/// Node `(i, j)` sits at `center + ((i - n/2) + i*(j - n/2)) * spacing`, so the
/// first index runs along the real axis and the second along the imaginary axis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    center: Complex64,
    half_width: f64,
    n: usize,
}

impl GridSpec {
    pub fn new(center: Complex64, half_width: f64, n: usize) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n = {n} must be a power of two >= 16"
            )));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half_width = {half_width} must be positive and finite"
            )));
        }
        if !(center.re.is_finite() && center.im.is_finite()) {
            return Err(Error::InvalidGrid("center must be finite".into()));
        }
        Ok(Self {
            center,
            half_width,
            n,
        })
    }

    /// Grid centered at the origin.
    pub fn centered(half_width: f64, n: usize) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), half_width, n)
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// Area element `spacing^2` used by every Riemann sum.
    pub fn cell_area(&self) -> f64 {
        let h = self.spacing();
        h * h
    }

    #[inline]
    pub fn index(&self, i: usize, j: usize) -> usize {
        i * self.n + j
    }

    #[inline]
    pub fn node(&self, i: usize, j: usize) -> Complex64 {
        let h = self.spacing();
        let half = (self.n / 2) as f64;
        self.center + Complex64::new((i as f64 - half) * h, (j as f64 - half) * h)
    }

    /// Node coordinates in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.n).flat_map(move |i| (0..self.n).map(move |j| self.node(i, j)))
    }

    /// Continuous grid coordinates of `z`: `(x, y)` such that node `(x, y)` would be `z`.
    pub fn coords(&self, z: Complex64) -> (f64, f64) {
        let w = (z - self.center) / self.spacing();
        let half = (self.n / 2) as f64;
        (w.re + half, w.im + half)
    }

    /// Node closest to `z`, if `z` lies within half a cell of the node block.
    pub fn nearest_node(&self, z: Complex64) -> Option<(usize, usize)> {
        let (x, y) = self.coords(z);
        let (i, j) = (x.round(), y.round());
        let last = (self.n - 1) as f64;
        if (-0.5..=last + 0.5).contains(&x) && (-0.5..=last + 0.5).contains(&y) {
            Some((i.clamp(0.0, last) as usize, j.clamp(0.0, last) as usize))
        } else {
            None
        }
    }

    /// Node exactly at `z`, if there is one (up to 1e-9 of a cell).
    pub fn exact_node(&self, z: Complex64) -> Option<(usize, usize)> {
        let (x, y) = self.coords(z);
        let (i, j) = self.nearest_node(z)?;
        ((x - i as f64).abs() < 1e-9 && (y - j as f64).abs() < 1e-9).then_some((i, j))
    }

    /// Lower-left and upper-right node positions.
    pub fn extent(&self) -> (Complex64, Complex64) {
        (self.node(0, 0), self.node(self.n - 1, self.n - 1))
    }

    /// Distance from `z` to the boundary of the node block; negative outside.
    pub fn inner_distance(&self, z: Complex64) -> f64 {
        let (lo, hi) = self.extent();
        (z.re - lo.re)
            .min(hi.re - z.re)
            .min(z.im - lo.im)
            .min(hi.im - z.im)
    }

    /// Same center and spacing, `factor` times as many nodes per axis.
    pub fn padded(&self, factor: usize) -> Result<Self> {
        Self::new(
            self.center,
            self.half_width * factor as f64,
            self.n * factor,
        )
    }
}

/// Open disk used as the integration region of norms.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiskRegion {
    pub center: Complex64,
    pub radius: f64,
}

impl DiskRegion {
    pub fn new(center: Complex64, radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidRegion(format!(
                "radius = {radius} must be positive"
            )));
        }
        Ok(Self { center, radius })
    }

    /// `D_r`, the disk of radius `r` about the origin.
    pub fn origin(radius: f64) -> Result<Self> {
        Self::new(Complex64::new(0.0, 0.0), radius)
    }

    #[inline]
    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Checks that the closed disk stays more than `margin` inside the node block.
    pub fn check_inside(&self, spec: &GridSpec, margin: f64) -> Result<()> {
        if spec.inner_distance(self.center) - self.radius > margin {
            Ok(())
        } else {
            Err(Error::RegionOutsideGrid {
                what: format!("disk |z - {}| < {}", self.center, self.radius),
                margin,
            })
        }
    }
}

/// A discrete `W^{k,p}` norm over a disk.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SobolevSpec {
    pub k: usize,
    pub p: f64,
    pub region: DiskRegion,
}

impl SobolevSpec {
    /// Deepest supported derivative order.
    pub const MAX_ORDER: usize = 4;

    pub fn new(k: usize, p: f64, region: DiskRegion) -> Result<Self> {
        if k > Self::MAX_ORDER {
            return Err(Error::InvalidSobolev(format!(
                "k = {k} exceeds the supported depth {}",
                Self::MAX_ORDER
            )));
        }
        if !(p.is_finite() && p >= 1.0 + 1e-6) {
            return Err(Error::InvalidSobolev(format!("p = {p} must lie in (1, inf)")));
        }
        Ok(Self { k, p, region })
    }
}
