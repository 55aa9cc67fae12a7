//! Closed-form Wigner and cross-Wigner transforms of squeezed coherent
//! states and of their superpositions.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::field::PhaseField;
use crate::grid::PhaseGrid;
use crate::linalg::{
    guarded_inverse, is_positive_definite, sqrt_det_positive_branch, symplectic_residual, CMatrix, RMatrix,
};
use crate::state::{validate_width_matrix, GaussianState};

/// A complex-valued function on phase space `ℝ²ⁿ`.
pub trait PhaseSpaceFunction {
    /// Phase-space dimension `2n`.
    fn phase_dim(&self) -> usize;

    fn eval(&self, z: &[f64]) -> Complex64;

    /// Samples on a two-dimensional phase grid.
    fn sample(&self, grid: &PhaseGrid) -> Result<PhaseField> {
        if self.phase_dim() != 2 {
            return Err(invalid!("sampling needs a two-dimensional phase space"));
        }
        Ok(PhaseField::from_fn(*grid, |x, p| self.eval(&[x, p])))
    }
}

/// `(det M)^{−1/2}` on the positive-real-part branch together with `M⁻¹`,
/// the data of the Fourier transform of `e^{−x·Mx/2ħ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FresnelForm {
    pub scale: Complex64,
    pub inverse: CMatrix,
}

pub fn fresnel_fourier_form(m: &CMatrix) -> Result<FresnelForm> {
    let m = validate_width_matrix(m)?;
    let inverse = guarded_inverse(&m)?;
    // eigenvalues of M⁻¹ have positive real part; take their positive-real roots
    let scale = sqrt_det_positive_branch(&inverse);
    Ok(FresnelForm { scale, inverse })
}

/// `z ↦ amplitude·e^{−(z−z₀)·G(z−z₀)/ħ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianWignerForm {
    g: RMatrix,
    amplitude: f64,
    center: Vec<f64>,
    hbar: f64,
}

impl GaussianWignerForm {
    pub fn matrix(&self) -> &RMatrix {
        &self.g
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn eval_real(&self, z: &[f64]) -> f64 {
        let d = self.g.nrows();
        let mut q = 0.0;
        for i in 0..d {
            let zi = z[i] - self.center[i];
            for j in 0..d {
                q += self.g[(i, j)] * zi * (z[j] - self.center[j]);
            }
        }
        self.amplitude * libm::exp(-q / self.hbar)
    }
}

impl PhaseSpaceFunction for GaussianWignerForm {
    fn phase_dim(&self) -> usize {
        self.g.nrows()
    }

    fn eval(&self, z: &[f64]) -> Complex64 {
        Complex64::new(self.eval_real(z), 0.0)
    }
}

/// `G = [[X + YX⁻¹Y, YX⁻¹], [X⁻¹Y, X⁻¹]]`.
pub fn wigner_matrix(m: &CMatrix) -> Result<RMatrix> {
    let m = validate_width_matrix(m)?;
    let n = m.nrows();
    let x = m.map(|v| v.re);
    let y = m.map(|v| v.im);
    let x_inv = guarded_inverse(&crate::linalg::to_complex(&x))?.map(|v| v.re);
    let mut g = RMatrix::zeros(2 * n, 2 * n);
    g.view_mut((0, 0), (n, n)).copy_from(&(&x + &y * &x_inv * &y));
    g.view_mut((0, n), (n, n)).copy_from(&(&y * &x_inv));
    g.view_mut((n, 0), (n, n)).copy_from(&(&x_inv * &y));
    g.view_mut((n, n), (n, n)).copy_from(&x_inv);
    Ok((&g + g.transpose()) * 0.5)
}

pub fn wigner_of_gaussian(state: &GaussianState) -> Result<GaussianWignerForm> {
    let g = wigner_matrix(state.width_matrix())?;
    if !is_positive_definite(&g) {
        return Err(Error::Numeric("Wigner matrix is not positive definite".into()));
    }
    let (residual, _) = symplectic_residual(&g);
    if residual > 1e-10 {
        return Err(Error::ConstraintViolation { what: "Wigner matrix is not symplectic", residual });
    }
    let det = g.determinant();
    if (det - 1.0).abs() > 1e-10 {
        return Err(Error::ConstraintViolation { what: "Wigner matrix determinant differs from 1", residual: (det - 1.0).abs() });
    }
    let n = state.dim() as i32;
    let h = state.hbar();
    Ok(GaussianWignerForm {
        g,
        amplitude: state.weight().norm_sqr() * libm::pow(1.0 / (PI * h), n as f64),
        center: state.center().to_vec(),
        hbar: h,
    })
}

/// `W(ψ_M, ψ_M')(z) = (πħ)^{−n} C e^{−z·Fz/ħ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossWignerForm {
    f: CMatrix,
    constant: Complex64,
    hbar: f64,
}

impl CrossWignerForm {
    pub fn matrix(&self) -> &CMatrix {
        &self.f
    }

    pub fn constant(&self) -> Complex64 {
        self.constant
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    fn dim(&self) -> usize {
        self.f.nrows() / 2
    }

    /// Value at `z − center`.
    fn eval_about(&self, z: &[f64], center: &[f64]) -> Complex64 {
        let d = self.f.nrows();
        let mut q = Complex64::new(0.0, 0.0);
        for i in 0..d {
            let zi = z[i] - center[i];
            for j in 0..d {
                q += self.f[(i, j)] * (zi * (z[j] - center[j]));
            }
        }
        let pref = libm::pow(1.0 / (PI * self.hbar), self.dim() as f64);
        self.constant * pref * (-q / self.hbar).exp()
    }
}

impl PhaseSpaceFunction for CrossWignerForm {
    fn phase_dim(&self) -> usize {
        self.f.nrows()
    }

    fn eval(&self, z: &[f64]) -> Complex64 {
        let origin = [0.0; 16];
        if z.len() <= origin.len() {
            self.eval_about(z, &origin[..z.len()])
        } else {
            self.eval_about(z, &alloc::vec![0.0; z.len()])
        }
    }
}

pub fn cross_wigner_of_gaussians(m: &CMatrix, m_prime: &CMatrix, hbar: f64) -> Result<CrossWignerForm> {
    let m = validate_width_matrix(m)?;
    let mp = validate_width_matrix(m_prime)?;
    if m.nrows() != mp.nrows() {
        return Err(invalid!("width matrices have different sizes"));
    }
    let n = m.nrows();
    let mp_bar = mp.map(|v| v.conj());
    let sum = &m + &mp_bar;
    if !is_positive_definite(&sum.map(|v| v.re)) {
        return Err(Error::Domain("Re(M + conj M') is not positive definite".into()));
    }
    let diff = &m - &mp_bar;
    let sum_inv = guarded_inverse(&sum)?;
    let two = Complex64::new(2.0, 0.0);
    let minus_i = Complex64::new(0.0, -1.0);
    let mut f = CMatrix::zeros(2 * n, 2 * n);
    f.view_mut((0, 0), (n, n)).copy_from(&(&mp_bar * &sum_inv * &m * two));
    f.view_mut((0, n), (n, n)).copy_from(&(&diff * &sum_inv * minus_i));
    f.view_mut((n, 0), (n, n)).copy_from(&(&sum_inv * &diff * minus_i));
    f.view_mut((n, n), (n, n)).copy_from(&(&sum_inv * two));

    let det_xx = m.map(|v| v.re).determinant() * mp.map(|v| v.re).determinant();
    let half_sum_inv = &sum_inv * two;
    let constant = libm::pow(det_xx, 0.25) * sqrt_det_positive_branch(&half_sum_inv);
    Ok(CrossWignerForm { f, constant, hbar })
}

/// Largest entry of `M + M̄' − (M − M̄')(M + M̄')⁻¹(M − M̄') − 4M̄'(M + M̄')⁻¹M`.
pub fn cross_form_identity_residual(m: &CMatrix, m_prime: &CMatrix) -> Result<f64> {
    let mp_bar = m_prime.map(|v| v.conj());
    let sum = m + &mp_bar;
    let diff = m - &mp_bar;
    let inv = guarded_inverse(&sum)?;
    let lhs = &sum - &diff * &inv * &diff;
    let rhs = &mp_bar * &inv * m * Complex64::new(4.0, 0.0);
    Ok((lhs - rhs).iter().map(|v| v.norm()).fold(0.0, f64::max))
}

/// `σ(z, z') = p·x' − x·p'`.
pub fn symplectic_form(z: &[f64], w: &[f64]) -> f64 {
    let n = z.len() / 2;
    (0..n).map(|i| z[n + i] * w[i] - z[i] * w[n + i]).sum()
}

/// `W(T̂(z₀)f, T̂(z₁)g)` from the untranslated form:
/// `e^{−(i/ħ)[σ(z, z₀−z₁) + ½σ(z₀,z₁)]}·W(f,g)(z − (z₀+z₁)/2)`, times `weight`.
#[derive(Debug, Clone, PartialEq)]
pub struct TranslatedCrossWigner {
    form: CrossWignerForm,
    delta: Vec<f64>,
    midpoint: Vec<f64>,
    base_phase: f64,
    weight: Complex64,
}

pub fn translated_cross_wigner(form: &CrossWignerForm, z0: &[f64], z1: &[f64]) -> Result<TranslatedCrossWigner> {
    let d = form.phase_dim();
    if z0.len() != d || z1.len() != d {
        return Err(invalid!("translation vectors must have length {d}"));
    }
    Ok(TranslatedCrossWigner {
        form: form.clone(),
        delta: z0.iter().zip(z1).map(|(a, b)| a - b).collect(),
        midpoint: z0.iter().zip(z1).map(|(a, b)| 0.5 * (a + b)).collect(),
        base_phase: 0.5 * symplectic_form(z0, z1),
        weight: Complex64::new(1.0, 0.0),
    })
}

impl TranslatedCrossWigner {
    pub fn with_weight(mut self, weight: Complex64) -> Self {
        self.weight = weight;
        self
    }
}

impl PhaseSpaceFunction for TranslatedCrossWigner {
    fn phase_dim(&self) -> usize {
        self.form.phase_dim()
    }

    fn eval(&self, z: &[f64]) -> Complex64 {
        let phase = -(symplectic_form(z, &self.delta) + self.base_phase) / self.form.hbar;
        self.weight * Complex64::from_polar(1.0, phase) * self.form.eval_about(z, &self.midpoint)
    }
}

/// Wigner transform of `Σ_k λ_k T̂(z_k)ψ_{M_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionWigner {
    diagonal: Vec<GaussianWignerForm>,
    /// `(k, ℓ)` with `k > ℓ`: `λ_k λ̄_ℓ W(f_k, f_ℓ)` and `λ_ℓ λ̄_k W(f_ℓ, f_k)`.
    cross: Vec<(TranslatedCrossWigner, TranslatedCrossWigner)>,
    phase_dim: usize,
}

pub fn superposition_wigner(states: &[GaussianState]) -> Result<SuperpositionWigner> {
    let first = states.first().ok_or_else(|| invalid!("superposition needs at least one state"))?;
    for s in states {
        if s.dim() != first.dim() || s.hbar_config() != first.hbar_config() {
            return Err(invalid!("states must share dimension and hbar"));
        }
    }
    let hbar = first.hbar();
    let diagonal = states.iter().map(wigner_of_gaussian).collect::<Result<Vec<_>>>()?;
    let mut cross = Vec::new();
    for k in 0..states.len() {
        for l in 0..k {
            let (a, b) = (&states[k], &states[l]);
            let kl = cross_wigner_of_gaussians(a.width_matrix(), b.width_matrix(), hbar)?;
            let lk = cross_wigner_of_gaussians(b.width_matrix(), a.width_matrix(), hbar)?;
            let t_kl = translated_cross_wigner(&kl, a.center(), b.center())?.with_weight(a.weight() * b.weight().conj());
            let t_lk = translated_cross_wigner(&lk, b.center(), a.center())?.with_weight(b.weight() * a.weight().conj());
            cross.push((t_kl, t_lk));
        }
    }
    Ok(SuperpositionWigner { diagonal, cross, phase_dim: 2 * first.dim() })
}

impl PhaseSpaceFunction for SuperpositionWigner {
    fn phase_dim(&self) -> usize {
        self.phase_dim
    }

    /// Diagonal terms plus each cross pair evaluated in both orders; the
    /// imaginary parts cancel up to rounding.
    fn eval(&self, z: &[f64]) -> Complex64 {
        let diag: f64 = self.diagonal.iter().map(|d| d.eval_real(z)).sum();
        let cross: Complex64 = self.cross.iter().map(|(a, b)| a.eval(z) + b.eval(z)).sum();
        cross + diag
    }
}
