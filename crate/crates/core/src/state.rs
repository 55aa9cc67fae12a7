//! Squeezed coherent states `λ·T̂(z₀)ψ_M`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid::{HBarConfig, SpatialGrid};
use crate::linalg::{asymmetry, is_positive_definite, CMatrix, RMatrix};
use crate::signal::Signal;

/// Asymmetry up to this size is removed by symmetrization; larger is rejected.
pub const SYMMETRY_TOLERANCE: f64 = 1e-13;

/// `λ·T̂(z₀)ψ_M` with `ψ_M(x) = (πħ)^{−n/4} (det X)^{1/4} e^{−x·Mx/2ħ}`, `M = X + iY`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    m: CMatrix,
    center: Vec<f64>,
    weight: Complex64,
    hbar: HBarConfig,
}

impl GaussianState {
    pub fn new(m: CMatrix, center: Vec<f64>, weight: Complex64, hbar: HBarConfig) -> Result<Self> {
        let m = validate_width_matrix(&m)?;
        if center.len() != 2 * m.nrows() {
            return Err(invalid!("center has length {}, expected {}", center.len(), 2 * m.nrows()));
        }
        if center.iter().any(|c| !c.is_finite()) || !(weight.re.is_finite() && weight.im.is_finite()) {
            return Err(invalid!("center and weight must be finite"));
        }
        Ok(Self { m, center, weight, hbar })
    }

    /// One-dimensional state with scalar width parameter `m`.
    pub fn scalar(m: Complex64, center: [f64; 2], weight: Complex64, hbar: HBarConfig) -> Result<Self> {
        Self::new(CMatrix::from_element(1, 1, m), center.to_vec(), weight, hbar)
    }

    /// `T̂(z₀)ψ₀` with `M = 1` and unit weight.
    pub fn standard(center: [f64; 2], hbar: HBarConfig) -> Self {
        Self::scalar(Complex64::new(1.0, 0.0), center, Complex64::new(1.0, 0.0), hbar)
            .expect("standard state parameters are valid")
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn width_matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn real_part(&self) -> RMatrix {
        self.m.map(|v| v.re)
    }

    pub fn imag_part(&self) -> RMatrix {
        self.m.map(|v| v.im)
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn weight(&self) -> Complex64 {
        self.weight
    }

    pub fn hbar(&self) -> f64 {
        self.hbar.value()
    }

    pub fn hbar_config(&self) -> HBarConfig {
        self.hbar
    }

    pub fn with_center(&self, center: Vec<f64>) -> Result<Self> {
        Self::new(self.m.clone(), center, self.weight, self.hbar)
    }

    pub fn with_weight(&self, weight: Complex64) -> Self {
        Self { weight, ..self.clone() }
    }

    /// `ψ_M(x)` without translation or weight.
    pub fn base_value(&self, x: &[f64]) -> Complex64 {
        let n = self.dim();
        let h = self.hbar();
        let det_x = self.real_part().determinant();
        let norm = libm::pow(PI * h, -(n as f64) / 4.0) * libm::pow(det_x, 0.25);
        let mut q = Complex64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                q += self.m[(i, j)] * x[i] * x[j];
            }
        }
        (-q / (2.0 * h)).exp() * norm
    }

    /// `λ e^{(i/ħ)(p₀·x − ½p₀·x₀)} ψ_M(x − x₀)`.
    pub fn value(&self, x: &[f64]) -> Complex64 {
        let n = self.dim();
        let (x0, p0) = self.center.split_at(n);
        let shifted: Vec<f64> = x.iter().zip(x0).map(|(a, b)| a - b).collect();
        let phase: f64 = (0..n).map(|i| p0[i] * x[i] - 0.5 * p0[i] * x0[i]).sum::<f64>() / self.hbar();
        self.weight * Complex64::from_polar(1.0, phase) * self.base_value(&shifted)
    }

    /// Exact samples on a one-dimensional grid sharing this state's ħ.
    pub fn sample(&self, grid: &SpatialGrid) -> Result<Signal> {
        if self.dim() != 1 {
            return Err(invalid!("only one-dimensional states can be sampled, dim = {}", self.dim()));
        }
        let (h1, h2) = (grid.hbar(), self.hbar());
        if ((h1 - h2) / h2).abs() > 1e-12 {
            return Err(invalid!("grid hbar {h1} differs from state hbar {h2}"));
        }
        Ok(Signal::from_fn(*grid, |x| self.value(&[x])))
    }
}

/// Checks symmetry (symmetrizing tiny asymmetry) and that `Re M` is positive definite.
pub(crate) fn validate_width_matrix(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(invalid!("width matrix must be square and nonempty"));
    }
    if m.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(invalid!("width matrix has non-finite entries"));
    }
    let a = asymmetry(m);
    if a > SYMMETRY_TOLERANCE {
        return Err(Error::ConstraintViolation { what: "width matrix is not symmetric", residual: a });
    }
    let m = (m + m.transpose()) * Complex64::new(0.5, 0.0);
    if !is_positive_definite(&m.map(|v| v.re)) {
        return Err(Error::Domain("real part of width matrix is not positive definite".into()));
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_spatial_grid;

    #[test]
    fn rejects_invalid_width_matrices() {
        let h = HBarConfig::default();
        let c = |a: f64, b: f64| Complex64::new(a, b);
        let asym = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.1, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(GaussianState::new(asym, alloc::vec![0.0; 4], c(1.0, 0.0), h).is_err());
        let not_pd = CMatrix::from_row_slice(1, 1, &[c(-1.0, 2.0)]);
        assert!(matches!(GaussianState::new(not_pd, alloc::vec![0.0; 2], c(1.0, 0.0), h), Err(Error::Domain(_))));
        let tiny = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.1, 1e-14), c(0.1, 0.0), c(1.0, 0.0)]);
        let s = GaussianState::new(tiny, alloc::vec![0.0; 4], c(1.0, 0.0), h).unwrap();
        assert_eq!(s.width_matrix()[(0, 1)], s.width_matrix()[(1, 0)]);
    }

    #[test]
    fn samples_are_normalized() {
        let g = make_spatial_grid(512, 8.0, HBarConfig::default()).unwrap();
        for m in [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 1.0)] {
            let s = GaussianState::scalar(m, [0.5, -1.0], Complex64::new(1.0, 0.0), HBarConfig::default()).unwrap();
            let f = s.sample(&g).unwrap();
            assert!((f.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }
}
