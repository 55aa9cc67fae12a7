//! Sampled signals on a [`SpatialGrid`].

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Result};
use crate::fft::Fft;
use crate::grid::SpatialGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    grid: SpatialGrid,
    values: Vec<Complex64>,
}

impl Signal {
    pub fn new(grid: SpatialGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.n_points() {
            return Err(invalid!(
                "signal has {} samples but the grid has {}",
                values.len(),
                grid.n_points()
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn zeros(grid: SpatialGrid) -> Self {
        Self { grid, values: vec![Complex64::new(0.0, 0.0); grid.n_points()] }
    }

    pub fn from_fn(grid: SpatialGrid, f: impl Fn(f64) -> Complex64) -> Self {
        let values = grid.positions().map(f).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// `‖f‖² = Δx Σ |f_j|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.grid.dx() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    /// `⟨self, other⟩ = Δx Σ conj(self_j)·other_j`.
    pub fn inner(&self, other: &Signal) -> Result<Complex64> {
        self.check_same_grid(other)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(s * self.grid.dx())
    }

    pub fn check_same_grid(&self, other: &Signal) -> Result<()> {
        if self.grid != other.grid {
            return Err(invalid!("signals live on different grids"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Signal) -> Result<Signal> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(Signal { grid: self.grid, values })
    }

    pub fn scaled(&self, factor: Complex64) -> Signal {
        Signal { grid: self.grid, values: self.values.iter().map(|v| v * factor).collect() }
    }

    /// Samples of the ħ-scaled Fourier transform at the momentum grid,
    /// `(Δx/√(2πħ)) Σ_j e^{−i p_k x_j/ħ} f_j`.
    pub fn momentum_samples(&self) -> Vec<Complex64> {
        let mut buf = self.values.clone();
        Fft::new(buf.len()).centered_forward(&mut buf);
        let scale = self.grid.dx() / libm::sqrt(2.0 * PI * self.grid.hbar());
        for v in &mut buf {
            *v *= scale;
        }
        buf
    }

    /// Fraction of spectral energy in frequency bins with `|k − N/2| ≥ N/4`.
    pub fn band_tail_fraction(&self) -> f64 {
        let spectrum = self.momentum_samples();
        let n = spectrum.len();
        let c = n / 2;
        let total: f64 = spectrum.iter().map(|v| v.norm_sqr()).sum();
        if total == 0.0 {
            return 0.0;
        }
        let tail: f64 = spectrum
            .iter()
            .enumerate()
            .filter(|(k, _)| k.abs_diff(c) >= n / 4)
            .map(|(_, v)| v.norm_sqr())
            .sum();
        tail / total
    }

    /// Heisenberg shift `e^{(i/ħ)(p₀x − ½p₀x₀)} f(x − x₀)` with `x₀` rounded to
    /// the nearest grid point. Samples shifted in from outside are zero.
    pub fn heisenberg_shift(&self, z0: [f64; 2]) -> Signal {
        let n = self.grid.n_points();
        let dx = self.grid.dx();
        let shift = libm::round(z0[0] / dx) as i64;
        let x0 = shift as f64 * dx;
        let p0 = z0[1];
        let hbar = self.grid.hbar();
        let values = (0..n)
            .map(|j| {
                let src = j as i64 - shift;
                if src < 0 || src >= n as i64 {
                    return Complex64::new(0.0, 0.0);
                }
                let x = self.grid.x(j);
                let phase = (p0 * x - 0.5 * p0 * x0) / hbar;
                self.values[src as usize] * Complex64::from_polar(1.0, phase)
            })
            .collect();
        Signal { grid: self.grid, values }
    }
}
