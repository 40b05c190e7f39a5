//! Wirtinger derivatives on the grid.
//!
//! Eighth-order central differences in the interior; the four nodes nearest
//! each edge use one-sided nine-point stencils of the same order. Stencils are
//! applied separably along the two axes, then combined as
//! `dz = (dx - i dy) / 2` and `dzbar = (dx + i dy) / 2`.

use std::sync::OnceLock;

use num_complex::Complex64;

use super::field::ComplexField;

const RADIUS: usize = 4;
const WIDTH: usize = 2 * RADIUS + 1;
/// Central weights for offsets 1..=4 (antisymmetric).
const CENTRAL: [f64; RADIUS] = [4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0];

/// Finite-difference weights (Fornberg) for derivatives up to `max_order` at `x0`.
///
/// Returns `w[m][k]`, the weight of sample `xs[k]` in the `m`-th derivative.
pub fn fornberg_weights(x0: f64, xs: &[f64], max_order: usize) -> Vec<Vec<f64>> {
    let n = xs.len();
    let mut c = vec![vec![0.0; n]; max_order + 1];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(max_order);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (k as f64 * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - k as f64 * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c
}

/// One-sided first-derivative weights for the nodes `0..RADIUS` next to the low edge.
fn edge_weights() -> &'static [[f64; WIDTH]; RADIUS] {
    static W: OnceLock<[[f64; WIDTH]; RADIUS]> = OnceLock::new();
    W.get_or_init(|| {
        let xs: Vec<f64> = (0..WIDTH).map(|k| k as f64).collect();
        let mut out = [[0.0; WIDTH]; RADIUS];
        for (p, row) in out.iter_mut().enumerate() {
            let w = fornberg_weights(p as f64, &xs, 1);
            row.copy_from_slice(&w[1]);
        }
        out
    })
}

/// First derivative along a line of samples `get(0..n)`, written to `out`.
#[inline]
fn line_derivative(n: usize, get: impl Fn(usize) -> Complex64, out: &mut [Complex64], inv_h: f64) {
    let edge = edge_weights();
    for p in 0..RADIUS {
        let mut lo = Complex64::new(0.0, 0.0);
        let mut hi = Complex64::new(0.0, 0.0);
        for k in 0..WIDTH {
            lo += get(k) * edge[p][k];
            // mirror: the high edge reuses the low-edge weights with a sign flip
            hi -= get(n - 1 - k) * edge[p][k];
        }
        out[p] = lo * inv_h;
        out[n - 1 - p] = hi * inv_h;
    }
    for i in RADIUS..n - RADIUS {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, w) in CENTRAL.iter().enumerate() {
            acc += (get(i + k + 1) - get(i - k - 1)) * *w;
        }
        out[i] = acc * inv_h;
    }
}

/// Partial derivative along the real axis (first index).
pub fn partial_x(field: &ComplexField) -> ComplexField {
    let spec = *field.spec();
    let n = spec.n();
    let inv_h = 1.0 / spec.spacing();
    let u = field.samples();
    let mut out = vec![Complex64::new(0.0, 0.0); spec.len()];
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        line_derivative(n, |i| u[i * n + j], &mut line, inv_h);
        for (i, v) in line.iter().enumerate() {
            out[i * n + j] = *v;
        }
    }
    ComplexField::from_raw(spec, out)
}

/// Partial derivative along the imaginary axis (second index).
pub fn partial_y(field: &ComplexField) -> ComplexField {
    let spec = *field.spec();
    let n = spec.n();
    let inv_h = 1.0 / spec.spacing();
    let u = field.samples();
    let mut out = vec![Complex64::new(0.0, 0.0); spec.len()];
    for (row_in, row_out) in u.chunks_exact(n).zip(out.chunks_exact_mut(n)) {
        line_derivative(n, |j| row_in[j], row_out, inv_h);
    }
    ComplexField::from_raw(spec, out)
}

/// `dz = (dx - i dy) / 2`.
pub fn wirtinger_dz(field: &ComplexField) -> ComplexField {
    let dx = partial_x(field);
    let dy = partial_y(field);
    dx.zip_with(&dy, |a, b| (a - Complex64::i() * b) * 0.5)
}

/// `dzbar = (dx + i dy) / 2`.
pub fn wirtinger_dzbar(field: &ComplexField) -> ComplexField {
    let dx = partial_x(field);
    let dy = partial_y(field);
    dx.zip_with(&dy, |a, b| (a + Complex64::i() * b) * 0.5)
}

/// Both Wirtinger derivatives from one pair of axis passes.
pub fn wirtinger_pair(field: &ComplexField) -> (ComplexField, ComplexField) {
    let dx = partial_x(field);
    let dy = partial_y(field);
    let dz = dx.zip_with(&dy, |a, b| (a - Complex64::i() * b) * 0.5);
    let dzb = dx.zip_with(&dy, |a, b| (a + Complex64::i() * b) * 0.5);
    (dz, dzb)
}

/// All mixed derivatives `dz^a dzbar^b` with `a + b <= order`.
///
/// Entry `[m]` holds the `m + 1` derivatives of order `m`, indexed by `b`
/// (number of `dzbar` factors).
pub fn wirtinger_tower(field: &ComplexField, order: usize) -> Vec<Vec<ComplexField>> {
    let mut tower = vec![vec![field.clone()]];
    for m in 1..=order {
        let prev = &tower[m - 1];
        let mut level = Vec::with_capacity(m + 1);
        // dz of every previous entry gives b = 0..m-1; dzbar of the last gives b = m
        for (b, g) in prev.iter().enumerate() {
            if b + 1 == prev.len() {
                let (dz, dzb) = wirtinger_pair(g);
                level.push(dz);
                level.push(dzb);
            } else {
                level.push(wirtinger_dz(g));
            }
        }
        tower.push(level);
    }
    tower
}
