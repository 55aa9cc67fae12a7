//! Uniform origin-centred sampling grids.

use core::f64::consts::PI;

use crate::error::{invalid, Result};

/// Planck constant used by every ħ-dependent formula.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HBarConfig {
    hbar: f64,
}

impl HBarConfig {
    pub fn new(hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(invalid!("hbar must be positive and finite, got {hbar}"));
        }
        Ok(Self { hbar })
    }

    pub fn value(self) -> f64 {
        self.hbar
    }
}

impl Default for HBarConfig {
    /// `1/(2π)`: the ħ-scaled Fourier transform becomes the unitary
    /// transform with kernel `e^{−2πi p·y}`.
    fn default() -> Self {
        Self { hbar: 1.0 / (2.0 * PI) }
    }
}

/// `N` samples `x_j = (j − N/2)·Δx` on `[−x_max, x_max)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpatialGrid {
    n_points: usize,
    step: f64,
    hbar: HBarConfig,
}

pub fn make_spatial_grid(n_points: usize, x_max: f64, hbar: HBarConfig) -> Result<SpatialGrid> {
    SpatialGrid::new(n_points, x_max, hbar)
}

impl SpatialGrid {
    pub fn new(n_points: usize, x_max: f64, hbar: HBarConfig) -> Result<Self> {
        if !n_points.is_multiple_of(2) {
            return Err(invalid!("n_points must be even, got {n_points}"));
        }
        if n_points < 8 {
            return Err(invalid!("n_points must be at least 8, got {n_points}"));
        }
        if !(x_max.is_finite() && x_max > 0.0) {
            return Err(invalid!("x_max must be positive, got {x_max}"));
        }
        Ok(Self { n_points, step: 2.0 * x_max / n_points as f64, hbar })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    /// Index of the origin sample, `N/2`.
    pub fn center(&self) -> usize {
        self.n_points / 2
    }

    pub fn dx(&self) -> f64 {
        self.step
    }

    pub fn x_max(&self) -> f64 {
        self.step * self.n_points as f64 / 2.0
    }

    pub fn hbar(&self) -> f64 {
        self.hbar.value()
    }

    pub fn hbar_config(&self) -> HBarConfig {
        self.hbar
    }

    /// Conjugate momentum step `2πħ/(NΔx)`.
    pub fn dp(&self) -> f64 {
        2.0 * PI * self.hbar() / (self.n_points as f64 * self.step)
    }

    /// Half the momentum period, `NΔp/2`.
    pub fn p_max(&self) -> f64 {
        self.dp() * self.n_points as f64 / 2.0
    }

    pub fn x(&self, j: usize) -> f64 {
        (j as f64 - self.center() as f64) * self.step
    }

    pub fn p(&self, k: usize) -> f64 {
        (k as f64 - self.center() as f64) * self.dp()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.x(j))
    }

    pub fn momenta(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |k| self.p(k))
    }
}

/// Phase-space grid: the spatial axis and its conjugate momentum axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    x_axis: SpatialGrid,
}

impl PhaseGrid {
    pub fn new(x_axis: SpatialGrid) -> Self {
        Self { x_axis }
    }

    pub fn x_axis(&self) -> &SpatialGrid {
        &self.x_axis
    }

    pub fn n(&self) -> usize {
        self.x_axis.n_points()
    }

    pub fn dx(&self) -> f64 {
        self.x_axis.dx()
    }

    pub fn dp(&self) -> f64 {
        self.x_axis.dp()
    }

    pub fn hbar(&self) -> f64 {
        self.x_axis.hbar()
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dp()
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_axis.x(j)
    }

    pub fn p(&self, k: usize) -> f64 {
        self.x_axis.p(k)
    }
}

impl From<SpatialGrid> for PhaseGrid {
    fn from(g: SpatialGrid) -> Self {
        Self::new(g)
    }
}
