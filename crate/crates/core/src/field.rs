//! Values on the 2-D phase-space grid, row index = momentum, column index = position.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid::PhaseGrid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValueKind {
    Real,
    Complex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseField {
    grid: PhaseGrid,
    values: Vec<Complex64>,
    kind: ValueKind,
}

impl PhaseField {
    /// Complex field from row-major values (`values[k * N + j]` at `(x_j, p_k)`).
    pub fn new(grid: PhaseGrid, values: Vec<Complex64>) -> Result<Self> {
        let n = grid.n();
        if values.len() != n * n {
            return Err(invalid!("field needs {} values, got {}", n * n, values.len()));
        }
        Ok(Self { grid, values, kind: ValueKind::Complex })
    }

    pub fn from_real(grid: PhaseGrid, values: Vec<f64>) -> Result<Self> {
        let values = values.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
        let mut field = Self::new(grid, values)?;
        field.kind = ValueKind::Real;
        Ok(field)
    }

    pub fn zeros(grid: PhaseGrid) -> Self {
        let n = grid.n();
        Self { grid, values: vec![Complex64::new(0.0, 0.0); n * n], kind: ValueKind::Real }
    }

    /// Samples `f(x_j, p_k)`.
    pub fn from_fn(grid: PhaseGrid, f: impl Fn(f64, f64) -> Complex64) -> Self {
        let n = grid.n();
        let mut values = Vec::with_capacity(n * n);
        for k in 0..n {
            let p = grid.p(k);
            for j in 0..n {
                values.push(f(grid.x(j), p));
            }
        }
        Self { grid, values, kind: ValueKind::Complex }
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn kind(&self) -> ValueKind {
        self.kind
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

    /// Value at position index `j`, momentum index `k`.
    pub fn at(&self, j: usize, k: usize) -> Complex64 {
        self.values[k * self.n() + j]
    }

    pub fn row(&self, k: usize) -> &[Complex64] {
        let n = self.n();
        &self.values[k * n..(k + 1) * n]
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    /// Tags the field real after checking `max |Im| ≤ tol·max(1, max |Re|)`,
    /// then drops the imaginary parts.
    pub fn into_real(mut self, tol: f64) -> Result<Self> {
        let scale = self.values.iter().map(|v| v.re.abs()).fold(1.0, f64::max);
        let residual = self.max_imag();
        if residual > tol * scale {
            return Err(Error::ConstraintViolation { what: "imaginary part above real-tag tolerance", residual });
        }
        for v in &mut self.values {
            v.im = 0.0;
        }
        self.kind = ValueKind::Real;
        Ok(self)
    }

    /// `Δx Δp Σ values`.
    pub fn integral(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() * self.grid.cell_area()
    }

    /// `(Δx Δp Σ |v|²)^{1/2}`.
    pub fn l2_norm(&self) -> f64 {
        libm::sqrt(self.grid.cell_area() * self.values.iter().map(|v| v.norm_sqr()).sum::<f64>())
    }

    pub fn sub(&self, other: &PhaseField) -> Result<PhaseField> {
        self.check_same_grid(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        let kind = if self.kind == ValueKind::Real && other.kind == ValueKind::Real {
            ValueKind::Real
        } else {
            ValueKind::Complex
        };
        Ok(PhaseField { grid: self.grid, values, kind })
    }

    pub fn check_same_grid(&self, other: &PhaseField) -> Result<()> {
        if self.grid != other.grid {
            return Err(invalid!("fields live on different grids"));
        }
        Ok(())
    }

    /// `‖self − other‖₂ / ‖other‖₂`.
    pub fn relative_l2_distance(&self, other: &PhaseField) -> Result<f64> {
        let diff = self.sub(other)?.l2_norm();
        let base = other.l2_norm();
        Ok(if base == 0.0 { diff } else { diff / base })
    }

    /// Circular shift: the value at `(j, k)` moves to `(j + dj, k + dk)` mod N.
    pub fn circular_shift(&self, dj: i64, dk: i64) -> PhaseField {
        let n = self.n() as i64;
        let mut values = vec![Complex64::new(0.0, 0.0); self.values.len()];
        for k in 0..n {
            let tk = (k + dk).rem_euclid(n);
            for j in 0..n {
                let tj = (j + dj).rem_euclid(n);
                values[(tk * n + tj) as usize] = self.values[(k * n + j) as usize];
            }
        }
        PhaseField { grid: self.grid, values, kind: self.kind }
    }

    pub(crate) fn with_values(&self, values: Vec<Complex64>, kind: ValueKind) -> PhaseField {
        PhaseField { grid: self.grid, values, kind }
    }
}
