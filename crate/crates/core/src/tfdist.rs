//! Discrete Wigner and cross-Wigner transforms, the symplectic Fourier
//! transform and Cohen-class distributions.
//!
//! The Wigner lag integral is sampled with integer lag pairs `f[j+m]·g*[j−m]`,
//! i.e. at even multiples of `Δx`. The resulting momentum axis is periodic
//! with half the grid period, so only `|p| < NΔp/4` is resolved; values
//! outside that band are set to zero. Signals must therefore be band-limited
//! to the inner half of the spectrum. Lags running past the grid edge are
//! dropped rather than wrapped.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fft::Fft;
use crate::field::{PhaseField, ValueKind};
use crate::grid::PhaseGrid;
use crate::kernel::CohenKernel;
use crate::signal::Signal;

/// Spectral energy fraction above `N/4` bins that triggers a warning.
pub const BAND_TAIL_WARNING: f64 = 1e-10;

/// Tolerance on `max |Im|` (relative to `max(1, max |Re|)`) for real outputs.
pub const REAL_TOLERANCE: f64 = 1e-10;

pub fn wigner_discrete(f: &Signal) -> Result<PhaseField> {
    cross_wigner_discrete(f, f)?.into_real(REAL_TOLERANCE)
}

/// `W(f, g)` on the phase grid of the signals' common grid.
pub fn cross_wigner_discrete(f: &Signal, g: &Signal) -> Result<PhaseField> {
    f.check_same_grid(g)?;
    for s in [f, g] {
        let tail = s.band_tail_fraction();
        if tail > BAND_TAIL_WARNING {
            log::warn!("signal is not band-limited to the inner half spectrum (tail fraction {tail:e})");
        }
    }
    let grid = *f.grid();
    let n = grid.n_points();
    let c = n / 2;
    let quarter = n / 4;
    let fft = Fft::new(n);
    let scale = grid.dx() / (core::f64::consts::PI * grid.hbar());
    let fv = f.values();
    let gv = g.values();

    let mut values = vec![Complex64::new(0.0, 0.0); n * n];
    let mut lag = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        lag.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        let reach = j.min(n - 1 - j).min(c);
        for m in 0..=reach {
            lag[m] = fv[j + m] * gv[j - m].conj();
            if m > 0 && m < c {
                lag[n - m] = fv[j - m] * gv[j + m].conj();
            }
        }
        fft.forward(&mut lag);
        for k in (c - quarter + 1)..(c + quarter) {
            let q = (2 * (k as i64 - c as i64)).rem_euclid(n as i64) as usize;
            values[k * n + j] = lag[q] * scale;
        }
    }
    PhaseField::new(PhaseGrid::new(grid), values)
}

/// Samples of `F_σ(Wf)` on the lag grid (same spacing as the phase grid),
/// row index = momentum lag, column index = position lag.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbiguityField {
    grid: PhaseGrid,
    values: Vec<Complex64>,
}

impl AmbiguityField {
    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn at(&self, j: usize, k: usize) -> Complex64 {
        self.values[k * self.grid.n() + j]
    }

    /// Multiplies every lag sample by `kernel.multiplier(x_lag, p_lag)`.
    pub fn apply_multiplier(&mut self, kernel: &CohenKernel) -> Result<()> {
        let n = self.grid.n();
        for k in 0..n {
            let p = self.grid.p(k);
            for j in 0..n {
                let m = kernel.multiplier(self.grid.x(j), p);
                if !(m.re.is_finite() && m.im.is_finite()) {
                    return Err(Error::Numeric(alloc::format!(
                        "kernel '{}' is not finite at lag ({}, {})",
                        kernel.name(),
                        self.grid.x(j),
                        p
                    )));
                }
                self.values[k * n + j] *= m;
            }
        }
        Ok(())
    }
}

/// Discrete `F_σ a(z) = (1/2πħ) ∫ e^{−(i/ħ)σ(z,z')} a(z') dz'`, which is
/// exactly involutive on the grid.
pub fn symplectic_ft(field: &PhaseField) -> Result<AmbiguityField> {
    let values = symplectic_ft_values(field.grid(), field.values())?;
    Ok(AmbiguityField { grid: *field.grid(), values })
}

/// Back to phase space; the same kernel as [`symplectic_ft`].
pub fn inverse_symplectic_ft(amb: &AmbiguityField) -> Result<PhaseField> {
    let values = symplectic_ft_values(&amb.grid, &amb.values)?;
    PhaseField::new(amb.grid, values)
}

pub fn ambiguity_function(f: &Signal) -> Result<AmbiguityField> {
    symplectic_ft(&wigner_discrete(f)?)
}

fn symplectic_ft_values(grid: &PhaseGrid, input: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = grid.n();
    if input.len() != n * n {
        return Err(invalid!("field is not square: {} values for N = {n}", input.len()));
    }
    let fft = Fft::new(n);
    let mut work = input.to_vec();
    for row in work.chunks_exact_mut(n) {
        fft.centered_forward(row);
    }
    let mut out = transpose(&work, n);
    let scale = 1.0 / n as f64;
    for row in out.chunks_exact_mut(n) {
        fft.centered_inverse(row);
        for v in row.iter_mut() {
            *v *= scale;
        }
    }
    Ok(out)
}

pub(crate) fn transpose(values: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); n * n];
    const B: usize = 32;
    for kb in (0..n).step_by(B) {
        for jb in (0..n).step_by(B) {
            for k in kb..(kb + B).min(n) {
                for j in jb..(jb + B).min(n) {
                    out[j * n + k] = values[k * n + j];
                }
            }
        }
    }
    out
}

/// `Qf = F_σ[F_σ(Wf)·multiplier]`.
pub fn cohen_apply(wf: &PhaseField, kernel: &CohenKernel) -> Result<PhaseField> {
    let mut amb = symplectic_ft(wf)?;
    amb.apply_multiplier(kernel)?;
    let out = inverse_symplectic_ft(&amb)?;
    if wf.kind() == ValueKind::Real {
        match out.clone().into_real(REAL_TOLERANCE) {
            Ok(real) => return Ok(real),
            Err(_) => return Ok(out),
        }
    }
    Ok(out)
}

/// `(∫ Q dp, ∫ Q dx)` as functions of `x_j` and `p_k`.
pub fn marginals(field: &PhaseField) -> Result<(Vec<f64>, Vec<f64>)> {
    if field.kind() != ValueKind::Real {
        return Err(invalid!("marginals need a real field"));
    }
    let n = field.n();
    let g = field.grid();
    let mut position = vec![0.0; n];
    let mut momentum = vec![0.0; n];
    for k in 0..n {
        for (j, v) in field.row(k).iter().enumerate() {
            position[j] += v.re;
            momentum[k] += v.re;
        }
    }
    position.iter_mut().for_each(|v| *v *= g.dp());
    momentum.iter_mut().for_each(|v| *v *= g.dx());
    Ok((position, momentum))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_spatial_grid, HBarConfig, SpatialGrid};
    use crate::kernel::born_jordan_kernel;
    use core::f64::consts::PI;

    fn grid(n: usize) -> SpatialGrid {
        make_spatial_grid(n, 8.0, HBarConfig::default()).unwrap()
    }

    fn packet(g: SpatialGrid, x0: f64, p0: f64) -> Signal {
        let h = g.hbar();
        Signal::from_fn(g, |x| {
            let a = libm::pow(PI * h, -0.25) * libm::exp(-(x - x0) * (x - x0) / (2.0 * h));
            Complex64::from_polar(a, p0 * x / h)
        })
    }

    #[test]
    fn coherent_state_peak() {
        let g = grid(256);
        let w = wigner_discrete(&packet(g, 0.0, 0.0)).unwrap();
        let peak = w.at(128, 128).re;
        let expect = 1.0 / (PI * g.hbar());
        assert!(((peak - expect) / expect).abs() < 1e-6);
    }

    #[test]
    fn zero_signal_gives_zero_field() {
        let g = grid(64);
        let w = wigner_discrete(&Signal::zeros(g)).unwrap();
        assert_eq!(w.max_abs(), 0.0);
    }

    #[test]
    fn cross_wigner_is_hermitian() {
        let g = grid(128);
        let f = packet(g, 1.0, 0.5);
        let h = packet(g, -0.5, -1.0);
        let a = cross_wigner_discrete(&f, &h).unwrap();
        let b = cross_wigner_discrete(&h, &f).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            assert!((x - y.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn cross_wigner_integrates_to_inner_product() {
        let g = grid(256);
        let f = packet(g, 1.0, 0.5);
        let h = packet(g, -0.5, 0.25);
        let w = cross_wigner_discrete(&f, &h).unwrap();
        let ip = h.inner(&f).unwrap();
        assert!((w.integral() - ip).norm() < 1e-10);
    }

    #[test]
    fn delta_transforms_to_constant() {
        let g: PhaseGrid = grid(16).into();
        let mut field = PhaseField::zeros(g);
        field.values_mut()[8 * 16 + 8] = Complex64::new(1.0 / g.cell_area(), 0.0);
        let amb = symplectic_ft(&field).unwrap();
        let expect = 1.0 / (2.0 * PI * g.hbar());
        for v in amb.values() {
            assert!((v - Complex64::new(expect, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn symplectic_ft_matches_direct_sum() {
        let g: PhaseGrid = grid(8).into();
        let n = 8;
        let field = PhaseField::from_fn(g, |x, p| Complex64::new(libm::sin(x + 0.3 * p), libm::cos(2.0 * x * p)));
        let amb = symplectic_ft(&field).unwrap();
        let h = g.hbar();
        for k in 0..n {
            for j in 0..n {
                let (x, p) = (g.x(j), g.p(k));
                let mut s = Complex64::new(0.0, 0.0);
                for k2 in 0..n {
                    for j2 in 0..n {
                        let sigma = p * g.x(j2) - x * g.p(k2);
                        s += Complex64::from_polar(1.0, -sigma / h) * field.at(j2, k2);
                    }
                }
                s *= g.cell_area() / (2.0 * PI * h);
                assert!((amb.at(j, k) - s).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn gaussian_maps_to_gaussian() {
        // F_σ of e^{−|z|²/ħ} is ½ e^{−|z|²/4ħ}
        let g: PhaseGrid = grid(256).into();
        let h = g.hbar();
        let field = PhaseField::from_fn(g, |x, p| Complex64::new(libm::exp(-(x * x + p * p) / h), 0.0));
        let amb = symplectic_ft(&field).unwrap();
        for k in (0..256).step_by(7) {
            for j in (0..256).step_by(5) {
                let (x, p) = (g.x(j), g.p(k));
                let expect = 0.5 * libm::exp(-(x * x + p * p) / (4.0 * h));
                assert!((amb.at(j, k) - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn born_jordan_preserves_marginals() {
        let g = grid(256);
        let f = packet(g, 1.0, 0.5).add(&packet(g, -1.0, -0.5)).unwrap();
        let w = wigner_discrete(&f).unwrap();
        let q = cohen_apply(&w, &born_jordan_kernel(HBarConfig::default())).unwrap();
        assert_eq!(q.kind(), ValueKind::Real);
        let (wx, wp) = marginals(&w).unwrap();
        let (qx, qp) = marginals(&q).unwrap();
        for (a, b) in wx.iter().zip(&qx).chain(wp.iter().zip(&qp)) {
            assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn wigner_kernel_is_identity() {
        let g = grid(128);
        let w = wigner_discrete(&packet(g, 0.5, 0.5)).unwrap();
        let q = cohen_apply(&w, &CohenKernel::wigner()).unwrap();
        let err = w.sub(&q).unwrap().max_abs();
        assert!(err < 1e-12, "{err}");
    }
}
