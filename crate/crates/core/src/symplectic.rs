//! Symplectic matrices, their generators, and the `SL(2, ℝ)` factorization.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::linalg::{guarded_inverse_real, j_matrix, symplectic_residual, RMatrix};

/// Tolerance of the `SᵀJS = J` check (Frobenius norm).
pub const SYMPLECTIC_TOLERANCE: f64 = 1e-12;

/// Elementary symplectic matrices.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// `J = [[0, I], [−I, 0]]`.
    FourierJ,
    /// `diag(L⁻¹, Lᵀ)`.
    Scale(RMatrix),
    /// `[[I, 0], [P, I]]`, `P` symmetric.
    Chirp(RMatrix),
}

impl Generator {
    pub fn matrix(&self, n: usize) -> RMatrix {
        match self {
            Generator::FourierJ => j_matrix(n),
            Generator::Scale(l) => scale_matrix(l).expect("scale generator holds an invertible matrix"),
            Generator::Chirp(p) => shear_matrix(p),
        }
    }
}

/// A validated symplectic matrix together with a generator factorization
/// (product order: `S = G₁·G₂·…·G_k`). Only `2×2` maps are factored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMap {
    s: RMatrix,
    factorization: Option<Vec<Generator>>,
}

impl SymplecticMap {
    pub fn matrix(&self) -> &RMatrix {
        &self.s
    }

    pub fn dim(&self) -> usize {
        self.s.nrows() / 2
    }

    pub fn factorization(&self) -> Option<&[Generator]> {
        self.factorization.as_deref()
    }

    pub fn inverse(&self) -> SymplecticMap {
        // S⁻¹ = −J Sᵀ J
        let j = j_matrix(self.dim());
        let inv = -(&j * self.s.transpose() * &j);
        validate_symplectic(&inv).expect("inverse of a symplectic matrix is symplectic")
    }

    pub fn compose(&self, other: &SymplecticMap) -> Result<SymplecticMap> {
        validate_symplectic(&(&self.s * &other.s))
    }

    /// `[[a, b], [c, d]]` of a `2×2` map.
    pub fn entries(&self) -> Result<[f64; 4]> {
        if self.dim() != 1 {
            return Err(invalid!("map is {}x{}, not 2x2", self.s.nrows(), self.s.ncols()));
        }
        Ok([self.s[(0, 0)], self.s[(0, 1)], self.s[(1, 0)], self.s[(1, 1)]])
    }
}

pub fn validate_symplectic(s: &RMatrix) -> Result<SymplecticMap> {
    if !s.is_square() || s.nrows() == 0 || !s.nrows().is_multiple_of(2) {
        return Err(invalid!("symplectic matrix must be square with even size, got {}x{}", s.nrows(), s.ncols()));
    }
    if s.iter().any(|v| !v.is_finite()) {
        return Err(invalid!("matrix has non-finite entries"));
    }
    let (residual, max_entry) = symplectic_residual(s);
    if residual > SYMPLECTIC_TOLERANCE {
        return Err(Error::NotSymplectic { residual, max_entry });
    }
    let det = s.determinant();
    if (det - 1.0).abs() > SYMPLECTIC_TOLERANCE {
        return Err(Error::ConstraintViolation { what: "determinant differs from 1", residual: (det - 1.0).abs() });
    }
    let factorization = if s.nrows() == 2 { Some(factor_2x2(s)) } else { None };
    Ok(SymplecticMap { s: s.clone(), factorization })
}

/// `[[cos θ, sin θ], [−sin θ, cos θ]]`.
pub fn rotation(theta: f64) -> SymplecticMap {
    let (s, c) = (libm::sin(theta), libm::cos(theta));
    validate_symplectic(&RMatrix::from_row_slice(2, 2, &[c, s, -s, c])).expect("rotations are symplectic")
}

pub fn fourier_j(n: usize) -> SymplecticMap {
    validate_symplectic(&j_matrix(n)).expect("J is symplectic")
}

/// `diag(L⁻¹, Lᵀ)`.
pub fn scale(l: &RMatrix) -> Result<SymplecticMap> {
    validate_symplectic(&scale_matrix(l)?)
}

pub fn scale1(l: f64) -> Result<SymplecticMap> {
    scale(&RMatrix::from_element(1, 1, l))
}

/// `[[I, 0], [P, I]]`.
pub fn shear(p: &RMatrix) -> Result<SymplecticMap> {
    if !p.is_square() {
        return Err(invalid!("shear matrix must be square"));
    }
    let asym = (p - p.transpose()).amax();
    if asym > 0.0 {
        return Err(invalid!("shear matrix must be symmetric (asymmetry {asym:e})"));
    }
    validate_symplectic(&shear_matrix(p))
}

pub fn shear1(p: f64) -> Result<SymplecticMap> {
    shear(&RMatrix::from_element(1, 1, p))
}

fn scale_matrix(l: &RMatrix) -> Result<RMatrix> {
    if !l.is_square() {
        return Err(invalid!("scale matrix must be square"));
    }
    let det = l.determinant();
    if !(det.abs() > 1e-12) {
        return Err(invalid!("scale matrix is singular (det = {det:e})"));
    }
    let n = l.nrows();
    let mut out = RMatrix::zeros(2 * n, 2 * n);
    out.view_mut((0, 0), (n, n)).copy_from(&guarded_inverse_real(l)?);
    out.view_mut((n, n), (n, n)).copy_from(&l.transpose());
    Ok(out)
}

fn shear_matrix(p: &RMatrix) -> RMatrix {
    let n = p.nrows();
    let mut out = RMatrix::identity(2 * n, 2 * n);
    out.view_mut((n, 0), (n, n)).copy_from(p);
    out
}

/// Generator list of a `2×2` symplectic map in product order.
pub fn factor_sl2(map: &SymplecticMap) -> Result<Vec<Generator>> {
    if map.dim() != 1 {
        return Err(invalid!("factor_sl2 needs a 2x2 map"));
    }
    Ok(factor_2x2(map.matrix()))
}

/// Product of the generator matrices.
pub fn generator_product(gens: &[Generator], n: usize) -> RMatrix {
    gens.iter().fold(RMatrix::identity(2 * n, 2 * n), |acc, g| acc * g.matrix(n))
}

const TRIVIAL: f64 = 1e-14;

fn factor_2x2(s: &RMatrix) -> Vec<Generator> {
    let (a, b, c, d) = (s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]);
    let one = |v: f64| RMatrix::from_element(1, 1, v);
    if b == 0.0 {
        return vec![Generator::Chirp(one(c * d)), Generator::Scale(one(d))];
    }
    if b.abs() >= d.abs() * (1.0 - 1e-12) {
        return factor_with_fourier(a, b, d);
    }
    // S = J·(J⁻¹S) keeps the intermediate rescaling moderate when |b| < |d|
    let mut out = vec![Generator::FourierJ];
    out.extend(factor_with_fourier(-c, -d, b));
    out
}

/// `S = Chirp(d/b)·J·Chirp(ab)·Scale(b)`, omitting identity factors.
fn factor_with_fourier(a: f64, b: f64, d: f64) -> Vec<Generator> {
    let one = |v: f64| RMatrix::from_element(1, 1, v);
    let mut out = Vec::with_capacity(4);
    if (d / b).abs() > TRIVIAL {
        out.push(Generator::Chirp(one(d / b)));
    }
    out.push(Generator::FourierJ);
    if (a * b).abs() > TRIVIAL {
        out.push(Generator::Chirp(one(a * b)));
    }
    if (b - 1.0).abs() > TRIVIAL {
        out.push(Generator::Scale(one(b)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

    #[test]
    fn validation_examples() {
        assert!(validate_symplectic(&RMatrix::identity(2, 2)).is_ok());
        assert!(validate_symplectic(&j_matrix(1)).is_ok());
        assert!(validate_symplectic(&j_matrix(3)).is_ok());
        match validate_symplectic(&RMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0])) {
            Err(Error::NotSymplectic { residual, max_entry }) => {
                assert_eq!(max_entry, 3.0);
                assert!((residual - 3.0 * core::f64::consts::SQRT_2).abs() < 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rotation_examples() {
        assert_eq!(rotation(0.0).matrix(), &RMatrix::identity(2, 2));
        assert!((rotation(FRAC_PI_2).matrix() - j_matrix(1)).amax() < 1e-16);
        let r = rotation(FRAC_PI_4);
        assert!(symplectic_residual(r.matrix()).0 <= 1e-15);
        assert!((r.matrix()[(0, 1)] - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn scale_and_shear_examples() {
        assert_eq!(scale1(1.0).unwrap().matrix(), &RMatrix::identity(2, 2));
        assert_eq!(scale1(2.0).unwrap().matrix(), &RMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, 2.0]));
        assert_eq!(scale1(-1.0).unwrap().matrix(), &RMatrix::from_row_slice(2, 2, &[-1.0, 0.0, 0.0, -1.0]));
        assert!(scale1(0.0).is_err());
        assert_eq!(shear1(0.0).unwrap().matrix(), &RMatrix::identity(2, 2));
        assert_eq!(shear1(1.0).unwrap().matrix(), &RMatrix::from_row_slice(2, 2, &[1.0, 0.0, 1.0, 1.0]));
        assert_eq!(shear1(-3.0).unwrap().matrix(), &RMatrix::from_row_slice(2, 2, &[1.0, 0.0, -3.0, 1.0]));
        assert!(shear(&RMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0])).is_err());
        let l = RMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.5, 3.0]);
        assert!(scale(&l).is_ok());
    }

    #[test]
    fn factorization_examples() {
        let f = factor_sl2(&fourier_j(1)).unwrap();
        assert_eq!(f, vec![Generator::FourierJ]);
        let r = rotation(FRAC_PI_4);
        let f = factor_sl2(&r).unwrap();
        assert_eq!(f.len(), 4);
        assert!((generator_product(&f, 1) - r.matrix()).amax() < 1e-10);
        let sh = shear1(1.0).unwrap();
        let f = factor_sl2(&sh).unwrap();
        assert_eq!(f.len(), 2);
        assert!((generator_product(&f, 1) - sh.matrix()).amax() < 1e-10);
    }

    #[test]
    fn factorization_reproduces_many_maps() {
        let maps = [
            rotation(FRAC_PI_8),
            rotation(-2.0),
            rotation(PI),
            scale1(1.5).unwrap(),
            scale1(-0.5).unwrap(),
            shear1(-3.0).unwrap(),
            rotation(0.3).compose(&shear1(0.7).unwrap()).unwrap(),
        ];
        for m in &maps {
            let f = m.factorization().unwrap();
            assert!((generator_product(f, 1) - m.matrix()).amax() < 1e-10, "{:?}", m.matrix());
        }
    }

    #[test]
    fn inverse_and_composition() {
        let r = rotation(0.4).compose(&shear1(2.0).unwrap()).unwrap();
        let i = r.compose(&r.inverse()).unwrap();
        assert!((i.matrix() - RMatrix::identity(2, 2)).amax() < 1e-14);
    }
}
