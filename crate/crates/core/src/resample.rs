//! Resampling of phase-space fields under linear maps: `g(z) = f(Mz)`.
//!
//! The spectral method splits `M` into one-dimensional passes. Shears along
//! an axis are FFT phase shifts of each row or column; rescalings evaluate
//! the band-limited (sinc) interpolant at the mapped points. Both are exact
//! for fields that are band-limited on the grid and negligible at its
//! edges. Bilinear interpolation is kept for comparison.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::fft::Fft;
use crate::field::{PhaseField, ValueKind};
use crate::linalg::RMatrix;
use crate::tfdist::transpose;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Resampling {
    Bilinear,
    #[default]
    Spectral,
}

/// `g(x, p) = f(M·(x, p))`; points mapped outside the grid read zero.
pub fn resample_linear(field: &PhaseField, m: &RMatrix, method: Resampling) -> Result<PhaseField> {
    if m.shape() != (2, 2) {
        return Err(invalid!("resampling needs a 2x2 matrix"));
    }
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let out = match method {
        Resampling::Bilinear => bilinear(field, [a, b, c, d]),
        Resampling::Spectral => {
            let mut work = field.values().to_vec();
            for pass in passes([a, b, c, d], field.grid().dx(), field.grid().dp()) {
                apply_pass(field, &mut work, pass);
            }
            work
        }
    };
    let out = field.with_values(out, ValueKind::Complex);
    if field.kind() == ValueKind::Real {
        let values = out.values().iter().map(|v| Complex64::new(v.re, 0.0)).collect();
        return Ok(field.with_values(values, ValueKind::Real));
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Pass {
    /// `g(x, p) = f(x + s·p, p)`.
    ShearX(f64),
    /// `g(x, p) = f(x, p + s·x)`.
    ShearP(f64),
    /// `g(x, p) = f(a·x, p/a)`.
    Squeeze(f64),
}

impl Pass {
    fn matrix(self) -> [f64; 4] {
        match self {
            Pass::ShearX(s) => [1.0, s, 0.0, 1.0],
            Pass::ShearP(s) => [1.0, 0.0, s, 1.0],
            Pass::Squeeze(a) => [a, 0.0, 0.0, 1.0 / a],
        }
    }
}

fn mul([a, b, c, d]: [f64; 4], [e, f, g, h]: [f64; 4]) -> [f64; 4] {
    [a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h]
}

/// Largest fraction of the Nyquist band reached by a unit physical
/// frequency along the chain of partial products. Pulling a field back
/// by `P` sends frequency `k` to `Pᵀk`.
fn stretch(passes: &[Pass], dx: f64, dp: f64) -> f64 {
    let mut acc = [1.0, 0.0, 0.0, 1.0];
    let mut worst: f64 = 0.0;
    for pass in passes {
        acc = mul(acc, pass.matrix());
        let col_x = libm::hypot(acc[0], acc[2]);
        let col_p = libm::hypot(acc[1], acc[3]);
        worst = worst.max(dx * col_x).max(dp * col_p);
    }
    worst
}

/// Passes applied left to right, composing to `z ↦ Mz`. Of the available
/// splittings, the one whose intermediate fields need the least bandwidth
/// on this grid wins.
fn passes([a, b, c, d]: [f64; 4], dx: f64, dp: f64) -> Vec<Pass> {
    let mut candidates: Vec<Vec<Pass>> = Vec::new();
    if a != 0.0 {
        // M = diag(a, 1/a)·[[1, 0], [ac, 1]]·[[1, b/a], [0, 1]]
        let mut out = Vec::new();
        if a != 1.0 {
            out.push(Pass::Squeeze(a));
        }
        if a * c != 0.0 {
            out.push(Pass::ShearP(a * c));
        }
        if b != 0.0 {
            out.push(Pass::ShearX(b / a));
        }
        candidates.push(out);
    }
    if c != 0.0 {
        // M = [[1, (a−1)/c], [0, 1]]·[[1, 0], [c, 1]]·[[1, (d−1)/c], [0, 1]]
        candidates.push(vec![Pass::ShearX((a - 1.0) / c), Pass::ShearP(c), Pass::ShearX((d - 1.0) / c)]);
    }
    if b != 0.0 {
        // M = [[1, 0], [(d−1)/b, 1]]·[[1, b], [0, 1]]·[[1, 0], [(a−1)/b, 1]]
        candidates.push(vec![Pass::ShearP((d - 1.0) / b), Pass::ShearX(b), Pass::ShearP((a - 1.0) / b)]);
    }
    let mut best = Vec::new();
    let mut best_cost = f64::INFINITY;
    for cand in candidates {
        let cost = stretch(&cand, dx, dp);
        if cost < best_cost * (1.0 - 1e-9) {
            best_cost = cost;
            best = cand;
        }
    }
    best
}

fn apply_pass(field: &PhaseField, work: &mut Vec<Complex64>, pass: Pass) {
    let g = field.grid();
    let n = g.n();
    match pass {
        Pass::ShearX(s) => {
            let shifts: Vec<f64> = (0..n).map(|k| s * g.p(k) / g.dx()).collect();
            shift_rows(work, n, &shifts);
        }
        Pass::ShearP(s) => {
            let shifts: Vec<f64> = (0..n).map(|j| s * g.x(j) / g.dp()).collect();
            let mut t = transpose(work, n);
            shift_rows(&mut t, n, &shifts);
            *work = transpose(&t, n);
        }
        Pass::Squeeze(a) => {
            let weights = sinc_weights(n, a);
            resample_rows(work, n, &weights);
            let mut t = transpose(work, n);
            resample_rows(&mut t, n, &sinc_weights(n, 1.0 / a));
            *work = transpose(&t, n);
        }
    }
}

/// Row `r` becomes `row(· + shifts[r])`, shifts in samples.
fn shift_rows(values: &mut [Complex64], n: usize, shifts: &[f64]) {
    let fft = Fft::new(n);
    let scale = 1.0 / n as f64;
    for (row, &shift) in values.chunks_exact_mut(n).zip(shifts) {
        if shift == 0.0 {
            continue;
        }
        fft.forward(row);
        for (q, v) in row.iter_mut().enumerate() {
            let freq = if q < n / 2 { q as i64 } else { q as i64 - n as i64 };
            let factor = if 2 * q == n {
                Complex64::new(libm::cos(PI * shift), 0.0)
            } else {
                Complex64::from_polar(1.0, 2.0 * PI * freq as f64 * shift / n as f64)
            };
            *v *= factor * scale;
        }
        fft.inverse(row);
    }
}

/// Weights `w[j][m] = sinc(u_j − m)` for the points `u_j = c + a·(j − c)`,
/// zero rows for points outside the grid.
fn sinc_weights(n: usize, a: f64) -> Vec<f64> {
    let c = (n / 2) as f64;
    let mut w = vec![0.0; n * n];
    for j in 0..n {
        let u = c + a * (j as f64 - c);
        if u < -0.5 || u > n as f64 - 0.5 {
            continue;
        }
        let row = &mut w[j * n..(j + 1) * n];
        let nearest = libm::round(u);
        if (u - nearest).abs() < 1e-13 {
            if nearest >= 0.0 && (nearest as usize) < n {
                row[nearest as usize] = 1.0;
            }
            continue;
        }
        let fl = libm::floor(u);
        let s = libm::sin(PI * (u - fl)) / PI;
        let base_even = (fl as i64).rem_euclid(2) == 0;
        for (m, v) in row.iter_mut().enumerate() {
            let sign = if (m % 2 == 0) == base_even { 1.0 } else { -1.0 };
            *v = sign * s / (u - m as f64);
        }
    }
    w
}

fn resample_rows(values: &mut [Complex64], n: usize, weights: &[f64]) {
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for row in values.chunks_exact_mut(n) {
        if row.iter().all(|v| v.norm_sqr() == 0.0) {
            continue;
        }
        for (j, o) in out.iter_mut().enumerate() {
            let w = &weights[j * n..(j + 1) * n];
            let mut acc = Complex64::new(0.0, 0.0);
            for (wm, v) in w.iter().zip(row.iter()) {
                acc += v * *wm;
            }
            *o = acc;
        }
        row.copy_from_slice(&out);
    }
}

fn bilinear(field: &PhaseField, [a, b, c, d]: [f64; 4]) -> Vec<Complex64> {
    let g = field.grid();
    let n = g.n();
    let center = (n / 2) as f64;
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        let p = g.p(k);
        for j in 0..n {
            let x = g.x(j);
            let u = (a * x + b * p) / g.dx() + center;
            let v = (c * x + d * p) / g.dp() + center;
            if !(u >= 0.0 && v >= 0.0 && u <= (n - 1) as f64 && v <= (n - 1) as f64) {
                continue;
            }
            let (j0, k0) = ((u as usize).min(n - 2), (v as usize).min(n - 2));
            let (fu, fv) = (u - j0 as f64, v - k0 as f64);
            out[k * n + j] = field.at(j0, k0) * ((1.0 - fu) * (1.0 - fv))
                + field.at(j0 + 1, k0) * (fu * (1.0 - fv))
                + field.at(j0, k0 + 1) * ((1.0 - fu) * fv)
                + field.at(j0 + 1, k0 + 1) * (fu * fv);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_spatial_grid, HBarConfig, PhaseGrid};

    fn grid() -> PhaseGrid {
        make_spatial_grid(256, 8.0, HBarConfig::default()).unwrap().into()
    }

    fn blob(x0: f64, p0: f64) -> impl Fn(f64, f64) -> f64 {
        move |x, p| libm::exp(-((x - x0) * (x - x0) + 2.0 * (p - p0) * (p - p0)) / 0.3) * libm::cos(3.0 * x - p)
    }

    fn check(m: [f64; 4], method: Resampling, tol: f64) {
        let g = grid();
        let f = blob(0.5, -0.3);
        let field = PhaseField::from_fn(g, |x, p| Complex64::new(f(x, p), 0.0)).into_real(0.0).unwrap();
        let mm = RMatrix::from_row_slice(2, 2, &m);
        let out = resample_linear(&field, &mm, method).unwrap();
        let mut err: f64 = 0.0;
        for k in 0..g.n() {
            for j in 0..g.n() {
                let (x, p) = (g.x(j), g.p(k));
                let expect = f(m[0] * x + m[1] * p, m[2] * x + m[3] * p);
                err = err.max((out.at(j, k).re - expect).abs());
            }
        }
        assert!(err < tol, "{m:?} {method:?}: {err}");
    }

    #[test]
    fn spectral_passes_are_exact() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        for m in [
            [1.0, 0.0, 0.0, 1.0],
            [s, -s, s, s],
            [0.0, -1.0, 1.0, 0.0],
            [1.0, 0.0, -1.0, 1.0],
            [1.5, 0.0, 0.0, 1.0 / 1.5],
            [0.2, -1.0, 1.0, 0.0],
            [0.1, 1.2, -1.0 / 1.2, 0.0],
        ] {
            check(m, Resampling::Spectral, 1e-10);
        }
    }

    #[test]
    fn bilinear_is_approximate() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        check([s, -s, s, s], Resampling::Bilinear, 0.05);
    }
}
