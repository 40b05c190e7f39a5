//! Closed-form transforms of a Gaussian and its Wirtinger derivatives.
//!
//! For `g(w) = exp(-|w|^2/s^2) / (π s^2)` the decaying solution of
//! `dzbar F = g` is `F(w) = (1 - exp(-|w|^2/s^2)) / (π w)`, so
//!
//! | input      | Cauchy part | Beurling part |
//! |------------|-------------|---------------|
//! | `g`        | `F`         | `F_w`         |
//! | `g_w`      | `F_w`       | `F_ww`        |
//! | `g_wbar`   | `g`         | `g_w`         |
//!
//! Subtracting the right combination of the three basis functions removes the
//! discrete mass and both first moments of an input, leaving a remainder whose
//! periodic images interact only at quadrupole order.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::grid::GridSpec;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub(crate) struct FarField {
    area: f64,
    /// `[g, g_w, g_wbar]` sampled on the grid.
    basis: [Vec<Complex64>; 3],
    /// Moment functionals `[1, w, wbar]` sampled on the grid.
    weights: [Vec<Complex64>; 3],
    cauchy: [Vec<Complex64>; 3],
    beurling: [Vec<Complex64>; 3],
    /// Inverse of the 3x3 moment matrix of the basis.
    moment_inverse: [[Complex64; 3]; 3],
}

pub(crate) struct Split {
    pub remainder: Vec<Complex64>,
    pub coefficients: [Complex64; 3],
}

/// Values `(g, g_w, F, F_w, F_ww)` at offset `w` for width `s`.
fn closed_forms(w: Complex64, s: f64) -> [Complex64; 5] {
    let s2 = s * s;
    let t = w.norm_sqr() / s2;
    let e = (-t).exp();
    let g = Complex64::new(e / (PI * s2), 0.0);
    let g_w = -w.conj() * g / s2;
    let wb = w.conj();
    if t < 0.5 {
        // series in t: F = (1/π) sum_{k>=1} (-1)^{k+1} w^{k-1} wbar^k / (s^{2k} k!)
        let (mut f, mut fw, mut fww) = (ZERO, ZERO, ZERO);
        let mut fact = 1.0;
        let mut sk = 1.0;
        for k in 1..=18u32 {
            fact *= k as f64;
            sk *= s2;
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            let base = wb.powu(k) * (sign / (sk * fact * PI));
            f += base * w.powu(k - 1);
            if k >= 2 {
                fw += base * w.powu(k - 2) * (k - 1) as f64;
            }
            if k >= 3 {
                fww += base * w.powu(k - 3) * ((k - 1) * (k - 2)) as f64;
            }
        }
        return [g, g_w, f, fw, fww];
    }
    let one_minus_e = -(-t).exp_m1();
    let f = one_minus_e / (PI * w);
    let fw = wb * e / (PI * s2 * w) - one_minus_e / (PI * w * w);
    let fww = -wb * wb * e / (PI * s2 * s2 * w) - wb * e * 2.0 / (PI * s2 * w * w)
        + one_minus_e * 2.0 / (PI * w * w * w);
    [g, g_w, f, fw, fww]
}

impl FarField {
    pub fn new(spec: GridSpec) -> Self {
        let s = spec.half_width() / 8.0;
        let c0 = spec.center();
        let len = spec.len();
        let mut basis = [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]];
        let mut weights = [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]];
        let mut cauchy = [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]];
        let mut beurling = [vec![ZERO; len], vec![ZERO; len], vec![ZERO; len]];
        for (k, z) in spec.nodes().enumerate() {
            let w = z - c0;
            let [g, g_w, f, fw, fww] = closed_forms(w, s);
            let g_wb = -w * g / (s * s);
            basis[0][k] = g;
            basis[1][k] = g_w;
            basis[2][k] = g_wb;
            weights[0][k] = Complex64::new(1.0, 0.0);
            weights[1][k] = w;
            weights[2][k] = w.conj();
            cauchy[0][k] = f;
            cauchy[1][k] = fw;
            cauchy[2][k] = g;
            beurling[0][k] = fw;
            beurling[1][k] = fww;
            beurling[2][k] = g_w;
        }
        let area = spec.cell_area();
        let mut m = [[ZERO; 3]; 3];
        for (r, wr) in weights.iter().enumerate() {
            for (c, bc) in basis.iter().enumerate() {
                m[r][c] = wr.iter().zip(bc).map(|(a, b)| a * b).sum::<Complex64>() * area;
            }
        }
        Self {
            area,
            basis,
            weights,
            cauchy,
            beurling,
            moment_inverse: invert3(m),
        }
    }

    /// Splits `u` into basis coefficients and a remainder with zero discrete moments.
    pub fn split(&self, u: &[Complex64]) -> Split {
        let moments: [Complex64; 3] = std::array::from_fn(|r| {
            self.weights[r]
                .iter()
                .zip(u)
                .map(|(a, b)| a * b)
                .sum::<Complex64>()
                * self.area
        });
        let coefficients: [Complex64; 3] = std::array::from_fn(|r| {
            (0..3).map(|c| self.moment_inverse[r][c] * moments[c]).sum()
        });
        let mut remainder = u.to_vec();
        for (c, b) in coefficients.iter().zip(&self.basis) {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (r, bv) in remainder.iter_mut().zip(b) {
                *r -= c * bv;
            }
        }
        Split {
            remainder,
            coefficients,
        }
    }

    pub fn add_cauchy(&self, coefficients: &[Complex64; 3], out: &mut [Complex64]) {
        add_pieces(coefficients, &self.cauchy, out);
    }

    pub fn add_beurling(&self, coefficients: &[Complex64; 3], out: &mut [Complex64]) {
        add_pieces(coefficients, &self.beurling, out);
    }
}

fn add_pieces(coefficients: &[Complex64; 3], pieces: &[Vec<Complex64>; 3], out: &mut [Complex64]) {
    for (c, p) in coefficients.iter().zip(pieces) {
        if c.norm_sqr() == 0.0 {
            continue;
        }
        for (o, v) in out.iter_mut().zip(p) {
            *o += c * v;
        }
    }
}

fn invert3(m: [[Complex64; 3]; 3]) -> [[Complex64; 3]; 3] {
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
    let det = m[0][0] * cof(1, 2, 1, 2) - m[0][1] * cof(1, 2, 0, 2) + m[0][2] * cof(1, 2, 0, 1);
    let adj = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    adj.map(|row| row.map(|v| v / det))
}
