use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::farfield::FarField;
use crate::error::{Error, Result};
use crate::grid::{ComplexField, GridSpec};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Samples above this modulus count as support.
pub const SUPPORT_THRESHOLD: f64 = 1e-13;

/// Precomputed FFTs and symbols for the Beurling and Cauchy multipliers on one grid.
///
/// Inputs are zero-embedded into a `(padding * n)^2` grid with the same spacing,
/// transformed there as periodic functions, and cropped back. Under the
/// convention `u^(xi) = ∫ u(z) exp(-2πi(x xi1 + y xi2)) dA` with `xi = xi1 + i xi2`,
/// `dz <-> πi conj(xi)` and `dzbar <-> πi xi`, so `T <-> conj(xi)/xi` and
/// `P <-> 1/(πi xi)`; both symbols vanish at `xi = 0` and on the Nyquist lines.
///
/// With the far-field correction enabled (the default), the mass and first
/// moments of the input are first transferred to a Gaussian and its two
/// Wirtinger derivatives, whose transforms are added in closed form. Only the
/// moment-free remainder passes through the periodic multiplier.
pub struct TransformPlan {
    spec: GridSpec,
    padding: usize,
    big_n: usize,
    offset: usize,
    fft: Arc<dyn Fft<f64>>,
    ifft: Arc<dyn Fft<f64>>,
    beurling_symbol: Vec<Complex64>,
    cauchy_symbol: Vec<Complex64>,
    far_field: Option<FarField>,
}

/// Support diagnostic attached to a transform whose input reaches outside the
/// central half of the padded grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportWarning {
    pub nodes_outside: usize,
    pub max_outside: f64,
}

/// A transform output with its support diagnostic.
#[derive(Clone, Debug)]
pub struct Transformed {
    pub field: ComplexField,
    pub support_warning: Option<SupportWarning>,
}

impl TransformPlan {
    /// Plan with the far-field correction enabled.
    pub fn new(spec: GridSpec, padding: usize) -> Result<Self> {
        if ![1, 2, 4].contains(&padding) {
            return Err(Error::InvalidGrid(format!(
                "padding factor {padding} not in {{1, 2, 4}}"
            )));
        }
        let big_n = spec.n() * padding;
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_forward(big_n);
        let ifft = planner.plan_fft_inverse(big_n);
        let side = big_n as f64 * spec.spacing();
        let norm = 1.0 / (big_n * big_n) as f64;
        let freq = |k: usize| {
            let k = if k < big_n / 2 { k as f64 } else { k as f64 - big_n as f64 };
            k / side
        };
        let mut beurling_symbol = vec![ZERO; big_n * big_n];
        let mut cauchy_symbol = vec![ZERO; big_n * big_n];
        // transposed layout: index [kj * N + ki]
        for kj in 0..big_n {
            for ki in 0..big_n {
                let xi = Complex64::new(freq(ki), freq(kj));
                let idx = kj * big_n + ki;
                // the Nyquist lines have no mirror partner; zeroing them keeps
                // both operators exactly equivariant under z -> conj z
                if xi.norm_sqr() > 0.0 && ki != big_n / 2 && kj != big_n / 2 {
                    beurling_symbol[idx] = xi.conj() / xi * norm;
                    cauchy_symbol[idx] = (Complex64::new(0.0, PI) * xi).inv() * norm;
                }
            }
        }
        Ok(Self {
            spec,
            padding,
            big_n,
            offset: (padding - 1) * spec.n() / 2,
            fft,
            ifft,
            beurling_symbol,
            cauchy_symbol,
            far_field: Some(FarField::new(spec)),
        })
    }

    /// Default plan: padding factor 2, far-field correction on.
    pub fn default_for(spec: GridSpec) -> Result<Self> {
        Self::new(spec, 2)
    }

    /// Enables or disables the analytic far-field correction.
    pub fn with_far_field(mut self, enabled: bool) -> Self {
        self.far_field = enabled.then(|| FarField::new(self.spec));
        self
    }

    pub fn spec(&self) -> &GridSpec {
        &self.spec
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    pub fn far_field_enabled(&self) -> bool {
        self.far_field.is_some()
    }

    pub fn padded_spec(&self) -> GridSpec {
        self.spec
            .padded(self.padding)
            .expect("padding a valid grid stays valid")
    }

    /// Beurling transform with support diagnostics.
    pub fn beurling(&self, u: &ComplexField) -> Transformed {
        Transformed {
            support_warning: self.support_warning(u),
            field: self.apply_beurling(u),
        }
    }

    /// Cauchy transform with support diagnostics.
    pub fn cauchy(&self, u: &ComplexField) -> Transformed {
        Transformed {
            support_warning: self.support_warning(u),
            field: self.apply_cauchy(u),
        }
    }

    /// Beurling transform `T u`.
    pub fn apply_beurling(&self, u: &ComplexField) -> ComplexField {
        self.check_spec(u);
        match &self.far_field {
            None => self.multiplier_cropped(u.samples(), &self.beurling_symbol),
            Some(ff) => {
                let split = ff.split(u.samples());
                let mut out = self.multiplier_cropped(&split.remainder, &self.beurling_symbol);
                ff.add_beurling(&split.coefficients, out.samples_mut());
                out
            }
        }
    }

    /// Cauchy transform `P u`, normalized to vanish at the node nearest 0.
    pub fn apply_cauchy(&self, u: &ComplexField) -> ComplexField {
        self.check_spec(u);
        let mut out = match &self.far_field {
            None => self.multiplier_cropped(u.samples(), &self.cauchy_symbol),
            Some(ff) => {
                let split = ff.split(u.samples());
                let mut out = self.multiplier_cropped(&split.remainder, &self.cauchy_symbol);
                ff.add_cauchy(&split.coefficients, out.samples_mut());
                out
            }
        };
        let (i0, j0) = self.origin_node();
        let at_origin = out.get(i0, j0);
        for v in out.samples_mut() {
            *v -= at_origin;
        }
        out
    }

    /// Node nearest to 0, clamped into the grid.
    pub fn origin_node(&self) -> (usize, usize) {
        let (x, y) = self.spec.coords(ZERO);
        let last = (self.spec.n() - 1) as f64;
        (x.round().clamp(0.0, last) as usize, y.round().clamp(0.0, last) as usize)
    }

    /// Applies the raw periodic Beurling multiplier to a padded-grid buffer in place.
    pub fn periodic_beurling(&self, padded: &mut [Complex64]) {
        assert_eq!(padded.len(), self.big_n * self.big_n);
        self.apply_symbol(padded, &self.beurling_symbol);
    }

    /// Applies the raw periodic Cauchy multiplier (no normalization) in place.
    pub fn periodic_cauchy(&self, padded: &mut [Complex64]) {
        assert_eq!(padded.len(), self.big_n * self.big_n);
        self.apply_symbol(padded, &self.cauchy_symbol);
    }

    /// Zero-embeds grid samples into the padded grid.
    pub fn embed(&self, samples: &[Complex64]) -> Vec<Complex64> {
        let (n, big, o) = (self.spec.n(), self.big_n, self.offset);
        let mut buf = vec![ZERO; big * big];
        for (i, row) in samples.chunks_exact(n).enumerate() {
            let start = (i + o) * big + o;
            buf[start..start + n].copy_from_slice(row);
        }
        buf
    }

    fn crop(&self, buf: &[Complex64]) -> Vec<Complex64> {
        let (n, big, o) = (self.spec.n(), self.big_n, self.offset);
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            let start = (i + o) * big + o;
            out.extend_from_slice(&buf[start..start + n]);
        }
        out
    }

    fn multiplier_cropped(&self, samples: &[Complex64], symbol: &[Complex64]) -> ComplexField {
        let mut buf = self.embed(samples);
        self.apply_symbol(&mut buf, symbol);
        ComplexField::from_raw(self.spec, self.crop(&buf))
    }

    fn apply_symbol(&self, buf: &mut [Complex64], symbol: &[Complex64]) {
        let big = self.big_n;
        let mut scratch = vec![ZERO; self.fft.get_inplace_scratch_len()];
        let mut tmp = vec![ZERO; big * big];
        // rows, transpose, rows: spectrum lands in transposed layout
        self.fft.process_with_scratch(buf, &mut scratch);
        transpose(buf, &mut tmp, big);
        self.fft.process_with_scratch(&mut tmp, &mut scratch);
        for (v, s) in tmp.iter_mut().zip(symbol) {
            *v *= s;
        }
        self.ifft.process_with_scratch(&mut tmp, &mut scratch);
        transpose(&tmp, buf, big);
        self.ifft.process_with_scratch(buf, &mut scratch);
    }

    /// Reports samples of `u` above [`SUPPORT_THRESHOLD`] outside the central
    /// half of the padded grid.
    pub fn support_warning(&self, u: &ComplexField) -> Option<SupportWarning> {
        let (big, o, n) = (self.big_n, self.offset, self.spec.n());
        let (lo, hi) = (big / 4, 3 * big / 4);
        let mut count = 0;
        let mut max: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let (pi, pj) = (i + o, j + o);
                if (lo..hi).contains(&pi) && (lo..hi).contains(&pj) {
                    continue;
                }
                let a = u.get(i, j).norm();
                if a > SUPPORT_THRESHOLD {
                    count += 1;
                    max = max.max(a);
                }
            }
        }
        (count > 0).then_some(SupportWarning {
            nodes_outside: count,
            max_outside: max,
        })
    }

    fn check_spec(&self, u: &ComplexField) {
        assert_eq!(u.spec(), &self.spec, "field and plan live on different grids");
    }
}

fn transpose(src: &[Complex64], dst: &mut [Complex64], n: usize) {
    const B: usize = 32;
    for ib in (0..n).step_by(B) {
        for jb in (0..n).step_by(B) {
            for i in ib..(ib + B).min(n) {
                for j in jb..(jb + B).min(n) {
                    dst[j * n + i] = src[i * n + j];
                }
            }
        }
    }
}
