//! Small dense matrix helpers over nalgebra.

use alloc::format;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type RMatrix = DMatrix<f64>;

/// Matrices with a larger 2-norm condition number are treated as singular.
pub const MAX_CONDITION: f64 = 1e12;

pub fn to_complex(m: &RMatrix) -> CMatrix {
    m.map(|v| Complex64::new(v, 0.0))
}

/// Inverse with a condition-number guard.
pub fn guarded_inverse(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::InvalidArgument(format!("matrix is {}x{}, not square", m.nrows(), m.ncols())));
    }
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) || max / min > MAX_CONDITION {
        return Err(Error::Numeric(format!("matrix condition number {:e} exceeds {:e}", max / min, MAX_CONDITION)));
    }
    m.clone().try_inverse().ok_or_else(|| Error::Numeric("matrix inversion failed".into()))
}

pub fn guarded_inverse_real(m: &RMatrix) -> Result<RMatrix> {
    Ok(guarded_inverse(&to_complex(m))?.map(|v| v.re))
}

pub fn is_positive_definite(m: &RMatrix) -> bool {
    let sym = (m + m.transpose()) * 0.5;
    sym.cholesky().is_some()
}

pub fn complex_eigenvalues(m: &CMatrix) -> nalgebra::DVector<Complex64> {
    Schur::new(m.clone()).eigenvalues().expect("complex Schur form is triangular")
}

/// `Π_i √(λ_i)` over the eigenvalues of `m`, each root taken with positive
/// real part (the principal root when `Re λ_i > 0`).
pub fn sqrt_det_positive_branch(m: &CMatrix) -> Complex64 {
    complex_eigenvalues(m).iter().map(|l| l.sqrt()).product()
}

/// Symplectic form matrix `[[0, I], [−I, 0]]` of size `2n`.
pub fn j_matrix(n: usize) -> RMatrix {
    let mut j = RMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        j[(i, n + i)] = 1.0;
        j[(n + i, i)] = -1.0;
    }
    j
}

/// `(‖SᵀJS − J‖_F, max |entry|)`.
pub fn symplectic_residual(s: &RMatrix) -> (f64, f64) {
    let n = s.nrows() / 2;
    let j = j_matrix(n);
    let d = s.transpose() * &j * s - j;
    (d.norm(), d.amax())
}

pub fn asymmetry(m: &CMatrix) -> f64 {
    (m - m.transpose()).iter().map(|v| v.norm()).fold(0.0, f64::max)
}
