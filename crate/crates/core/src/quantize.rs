//! Weyl and Born–Jordan operators as dense matrices acting on grid samples.
//!
//! The Weyl kernel `K(x, y) = (2πħ)^{-1} ∫ e^{ip(x−y)/ħ} a((x+y)/2, p) dp` is
//! evaluated over the full momentum band of the grid. Midpoints that fall
//! between grid columns use an 8-point Lagrange stencil along `x`. The
//! momentum operator is spectral: multiplication by `p_k` in the centred
//! DFT basis.
//!
//! Operator comparisons act on band-limited probe packets and look only at
//! the central half of the grid, away from truncation effects at the edges.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::fft::Fft;
use crate::field::{PhaseField, ValueKind};
use crate::grid::{PhaseGrid, SpatialGrid};
use crate::kernel::born_jordan_kernel;
use crate::linalg::CMatrix;
use crate::signal::Signal;
use crate::tfdist::{cohen_apply, cross_wigner_discrete};

/// Largest total degree `s + r` accepted by [`bj_monomial_matrix`].
pub const MAX_MONOMIAL_ORDER: u32 = 4;

/// A finite symbol `a(x, p)` sampled on the phase grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolField(PhaseField);

impl SymbolField {
    pub fn new(field: PhaseField) -> Result<Self> {
        if field.values().iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(invalid!("symbol has non-finite values"));
        }
        Ok(Self(field))
    }

    pub fn from_fn(grid: PhaseGrid, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let field = PhaseField::from_fn(grid, |x, p| Complex64::new(f(x, p), 0.0));
        Self::new(field.into_real(0.0)?)
    }

    pub fn field(&self) -> &PhaseField {
        &self.0
    }

    pub fn grid(&self) -> &PhaseGrid {
        self.0.grid()
    }
}

/// Smooth plateau window: 1 for `|u| ≤ plateau`, 0 for `|u| ≥ edge`,
/// infinitely differentiable in between.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Plateau {
    pub plateau: f64,
    pub edge: f64,
}

impl Plateau {
    pub fn eval(&self, u: f64) -> f64 {
        let a = u.abs();
        if a <= self.plateau {
            return 1.0;
        }
        if a >= self.edge {
            return 0.0;
        }
        let t = (a - self.plateau) / (self.edge - self.plateau);
        let bump = |s: f64| if s <= 0.0 { 0.0 } else { libm::exp(-1.0 / s) };
        let (l, r) = (bump(1.0 - t), bump(t));
        l / (l + r)
    }
}

/// Windows in `x` and `p` applied to polynomial symbols so that they vanish
/// near the grid boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolTaper {
    pub x: Plateau,
    pub p: Plateau,
}

impl SymbolTaper {
    /// Plateau over 60% of each half-axis, decaying to zero at 95%.
    pub fn for_grid(grid: &PhaseGrid) -> Self {
        let xm = grid.x_axis().x_max();
        let pm = grid.x_axis().p_max();
        Self {
            x: Plateau { plateau: 0.6 * xm, edge: 0.95 * xm },
            p: Plateau { plateau: 0.6 * pm, edge: 0.95 * pm },
        }
    }
}

/// Samples `pˢ xʳ`, optionally tapered.
pub fn monomial_symbol(grid: &PhaseGrid, s: u32, r: u32, taper: Option<SymbolTaper>) -> Result<SymbolField> {
    SymbolField::from_fn(*grid, |x, p| {
        let w = taper.map_or(1.0, |t| t.x.eval(x) * t.p.eval(p));
        libm::pow(p, s as f64) * libm::pow(x, r as f64) * w
    })
}

/// Operator on grid samples: `(Âf)_j = Σ_{j'} A[j, j'] f_{j'}` (the `Δx`
/// quadrature weight is folded into the entries).
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    grid: SpatialGrid,
    matrix: CMatrix,
}

impl OperatorMatrix {
    pub fn new(grid: SpatialGrid, matrix: CMatrix) -> Result<Self> {
        let n = grid.n_points();
        if matrix.shape() != (n, n) {
            return Err(invalid!("operator must be {n}x{n}"));
        }
        Ok(Self { grid, matrix })
    }

    pub fn identity(grid: SpatialGrid) -> Self {
        let n = grid.n_points();
        Self { grid, matrix: CMatrix::identity(n, n) }
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn apply(&self, f: &Signal) -> Result<Signal> {
        if f.grid() != &self.grid {
            return Err(invalid!("signal and operator live on different grids"));
        }
        let n = self.grid.n_points();
        let v = f.values();
        let out = (0..n)
            .map(|j| (0..n).map(|jp| self.matrix[(j, jp)] * v[jp]).sum())
            .collect();
        Signal::new(self.grid, out)
    }

    pub fn compose(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.grid != other.grid {
            return Err(invalid!("operators live on different grids"));
        }
        Ok(Self { grid: self.grid, matrix: &self.matrix * &other.matrix })
    }

    /// Largest entry of `A − A^H`.
    pub fn hermitian_residual(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entry of `A − B`.
    pub fn max_entry_distance(&self, other: &OperatorMatrix) -> f64 {
        (&self.matrix - &other.matrix).iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// `A[j, j'] = (1/N) Σ_k e^{2πi(k−c)(j−j')/N} a((x_j + x_{j'})/2, p_k)`.
pub fn weyl_matrix(a: &SymbolField) -> Result<OperatorMatrix> {
    let grid = a.grid();
    let n = grid.n();
    let field = a.field();
    let fft = Fft::new(n);
    let mut matrix = CMatrix::zeros(n, n);
    let mut column = vec![Complex64::new(0.0, 0.0); n];
    for s in 0..(2 * n - 1) {
        if s % 2 == 0 {
            for (k, v) in column.iter_mut().enumerate() {
                *v = field.at(s / 2, k);
            }
        } else {
            let (start, weights) = half_point_stencil(s / 2, n);
            for (k, v) in column.iter_mut().enumerate() {
                *v = weights.iter().enumerate().map(|(i, w)| field.at(start + i, k) * *w).sum();
            }
        }
        let kernel = spectral_kernel(&fft, &column);
        // pairs (j, j') with j + j' = s
        let lo = s.saturating_sub(n - 1);
        let hi = s.min(n - 1);
        for j in lo..=hi {
            let jp = s - j;
            let d = (j as i64 - jp as i64).rem_euclid(n as i64) as usize;
            matrix[(j, jp)] = kernel[d];
        }
    }
    OperatorMatrix::new(*grid.x_axis(), matrix)
}

/// `t(d) = (1/N) Σ_k e^{2πi(k−c)d/N} values_k` for `d = 0..N`.
fn spectral_kernel(fft: &Fft, values: &[Complex64]) -> Vec<Complex64> {
    let n = values.len();
    let mut buf = values.to_vec();
    fft.inverse(&mut buf);
    let scale = 1.0 / n as f64;
    for (d, v) in buf.iter_mut().enumerate() {
        // e^{−2πi c d/N} = (−1)^d
        *v *= if d % 2 == 0 { scale } else { -scale };
    }
    buf
}

/// Eight-point Lagrange weights for the point `left + ½`, shifted inward
/// near the edges.
fn half_point_stencil(left: usize, n: usize) -> (usize, [f64; 8]) {
    let start = (left as i64 - 3).clamp(0, n as i64 - 8) as usize;
    let t = left as f64 + 0.5;
    let mut w = [0.0; 8];
    for (i, wi) in w.iter_mut().enumerate() {
        let xi = (start + i) as f64;
        *wi = (0..8)
            .filter(|&m| m != i)
            .map(|m| {
                let xm = (start + m) as f64;
                (t - xm) / (xi - xm)
            })
            .product();
    }
    (start, w)
}

/// Born–Jordan symbol: the spectral convolution of `a` with the
/// Born–Jordan kernel.
pub fn bj_symbol(a: &SymbolField) -> Result<SymbolField> {
    let kernel = born_jordan_kernel(a.grid().x_axis().hbar_config());
    SymbolField::new(cohen_apply(a.field(), &kernel)?)
}

/// `x̂` on the grid: multiplication by `x_j`.
pub fn position_operator(grid: &SpatialGrid) -> OperatorMatrix {
    let n = grid.n_points();
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = Complex64::new(grid.x(j), 0.0);
    }
    OperatorMatrix { grid: *grid, matrix: m }
}

/// `p̂` on the grid: `−iħ∂ₓ` realized spectrally.
pub fn momentum_operator(grid: &SpatialGrid) -> OperatorMatrix {
    let n = grid.n_points();
    let spectrum: Vec<Complex64> = grid.momenta().map(|p| Complex64::new(p, 0.0)).collect();
    let t = spectral_kernel(&Fft::new(n), &spectrum);
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        for jp in 0..n {
            m[(j, jp)] = t[(j as i64 - jp as i64).rem_euclid(n as i64) as usize];
        }
    }
    OperatorMatrix { grid: *grid, matrix: m }
}

/// `(1/(s+1)) Σ_{ℓ=0}^{s} p̂^{s−ℓ} x̂ʳ p̂^ℓ`.
pub fn bj_monomial_matrix(grid: &SpatialGrid, s: u32, r: u32) -> Result<OperatorMatrix> {
    if s + r > MAX_MONOMIAL_ORDER {
        return Err(Error::UnsupportedOrder { order: s + r, max: MAX_MONOMIAL_ORDER });
    }
    let n = grid.n_points();
    let d = momentum_operator(grid).matrix;
    let mut xr = CMatrix::identity(n, n);
    for j in 0..n {
        xr[(j, j)] = Complex64::new(libm::pow(grid.x(j), r as f64), 0.0);
    }
    let mut d_pows = vec![CMatrix::identity(n, n)];
    for i in 1..=s as usize {
        let next = &d_pows[i - 1] * &d;
        d_pows.push(next);
    }
    let mut acc = CMatrix::zeros(n, n);
    for l in 0..=s as usize {
        acc += &d_pows[s as usize - l] * &xr * &d_pows[l];
    }
    acc /= Complex64::new((s + 1) as f64, 0.0);
    OperatorMatrix::new(*grid, acc)
}

/// `|⟨Âf, g⟩ − ΔxΔp Σ ā·W(g, f)| / (‖f‖‖g‖)` with `⟨u, v⟩ = Δx Σ ū v`.
pub fn operator_vs_distribution_check(a: &SymbolField, f: &Signal, g: &Signal) -> Result<f64> {
    if a.grid().x_axis() != f.grid() {
        return Err(invalid!("symbol and signals live on different grids"));
    }
    let af = weyl_matrix(a)?.apply(f)?;
    let lhs = af.inner(g)?;
    let w = cross_wigner_discrete(g, f)?;
    let rhs: Complex64 =
        a.field().values().iter().zip(w.values()).map(|(s, v)| s.conj() * v).sum::<Complex64>() * a.grid().cell_area();
    let scale = f.norm() * g.norm();
    let diff = (lhs - rhs).norm();
    Ok(if scale > 0.0 { diff / scale } else { diff })
}

/// Band-limited coherent-state probes centred in the middle half of the
/// grid, with momenta inside the inner eighth of the momentum band.
pub fn probe_signals(grid: &SpatialGrid) -> Vec<Signal> {
    let h = grid.hbar();
    let xq = grid.x_max() / 4.0;
    let pq = grid.p_max() / 8.0;
    let centers = [
        (0.0, 0.0),
        (xq, 0.0),
        (-xq, 0.0),
        (0.0, pq),
        (0.0, -pq),
        (0.5 * xq, -0.5 * pq),
        (-0.7 * xq, 0.3 * pq),
    ];
    centers
        .iter()
        .map(|&(x0, p0)| {
            Signal::from_fn(*grid, |x| {
                let d = x - x0;
                Complex64::from_polar(libm::pow(PI * h, -0.25) * libm::exp(-d * d / (2.0 * h)), p0 * x / h)
            })
        })
        .collect()
}

/// `max_φ max_{|x_j| < x_max/2} |((A − B)φ)_j| / max(1, max_{|x_j| < x_max/2} |(Bφ)_j|)`
/// over the given probes.
pub fn central_action_distance(a: &OperatorMatrix, b: &OperatorMatrix, probes: &[Signal]) -> Result<f64> {
    let grid = *a.grid();
    let half = grid.x_max() / 2.0;
    let mut worst: f64 = 0.0;
    for phi in probes {
        let fa = a.apply(phi)?;
        let fb = b.apply(phi)?;
        let mut diff: f64 = 0.0;
        let mut size: f64 = 1.0;
        for j in 0..grid.n_points() {
            if grid.x(j).abs() < half {
                diff = diff.max((fa.values()[j] - fb.values()[j]).norm());
                size = size.max(fb.values()[j].norm());
            }
        }
        worst = worst.max(diff / size);
    }
    Ok(worst)
}

/// `max_φ ‖([x̂, p̂] − iħ)φ‖_∞ / ‖φ‖_∞` over the probes, on the central half.
pub fn commutator_residual(grid: &SpatialGrid, probes: &[Signal]) -> Result<f64> {
    let x = position_operator(grid);
    let p = momentum_operator(grid);
    let comm = OperatorMatrix { grid: *grid, matrix: &x.matrix * &p.matrix - &p.matrix * &x.matrix };
    let target = OperatorMatrix { grid: *grid, matrix: CMatrix::identity(grid.n_points(), grid.n_points()) * Complex64::new(0.0, grid.hbar()) };
    central_action_distance(&comm, &target, probes)
}

impl From<SymbolField> for PhaseField {
    fn from(s: SymbolField) -> Self {
        s.0
    }
}

impl SymbolField {
    pub fn is_real(&self) -> bool {
        self.0.kind() == ValueKind::Real
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_spatial_grid, HBarConfig};

    fn grid(n: usize) -> SpatialGrid {
        make_spatial_grid(n, 8.0, HBarConfig::default()).unwrap()
    }

    #[test]
    fn constant_symbol_gives_identity() {
        let g = grid(64);
        let a = SymbolField::from_fn(g.into(), |_, _| 1.0).unwrap();
        let m = weyl_matrix(&a).unwrap();
        assert!(m.max_entry_distance(&OperatorMatrix::identity(g)) < 1e-12);
    }

    #[test]
    fn position_symbol_is_diagonal() {
        let g = grid(64);
        let a = SymbolField::from_fn(g.into(), |x, _| x).unwrap();
        let m = weyl_matrix(&a).unwrap();
        assert!(m.max_entry_distance(&position_operator(&g)) < 1e-12);
    }

    #[test]
    fn momentum_symbol_is_spectral_derivative() {
        let g = grid(256);
        let a = SymbolField::from_fn(g.into(), |_, p| p).unwrap();
        let m = weyl_matrix(&a).unwrap();
        assert!(m.max_entry_distance(&momentum_operator(&g)) < 1e-12);
        // −iħ ψ' for ψ = e^{−x²/2ħ + i p0 x/ħ}
        let h = g.hbar();
        let p0 = 1.0;
        let psi = Signal::from_fn(g, |x| Complex64::from_polar(libm::exp(-x * x / (2.0 * h)), p0 * x / h));
        let out = m.apply(&psi).unwrap();
        for (j, v) in out.values().iter().enumerate() {
            let x = g.x(j);
            let expect = psi.values()[j] * Complex64::new(p0, x);
            assert!((v - expect).norm() < 1e-6);
        }
    }

    #[test]
    fn real_symbols_give_self_adjoint_matrices() {
        let g = grid(64);
        let a = SymbolField::from_fn(g.into(), |x, p| libm::sin(x) * libm::exp(-p * p) + x * p).unwrap();
        assert!(weyl_matrix(&a).unwrap().hermitian_residual() < 1e-12);
    }

    #[test]
    fn monomial_rule_examples() {
        let g = grid(64);
        let x = position_operator(&g);
        let p = momentum_operator(&g);
        let xp = x.compose(&p).unwrap();
        let px = p.compose(&x).unwrap();
        let m = bj_monomial_matrix(&g, 1, 1).unwrap();
        let expect = (px.matrix() + xp.matrix()) * Complex64::new(0.5, 0.0);
        assert!((m.matrix() - expect).camax() < 1e-10);
        let m = bj_monomial_matrix(&g, 0, 2).unwrap();
        assert!(m.max_entry_distance(&x.compose(&x).unwrap()) < 1e-12);
        let m = bj_monomial_matrix(&g, 2, 1).unwrap();
        let ppx = p.compose(&px).unwrap();
        let pxp = px.compose(&p).unwrap();
        let xpp = xp.compose(&p).unwrap();
        let expect = (ppx.matrix() + pxp.matrix() + xpp.matrix()) / Complex64::new(3.0, 0.0);
        assert!((m.matrix() - expect).camax() < 1e-9);
        assert!(matches!(bj_monomial_matrix(&g, 3, 2), Err(Error::UnsupportedOrder { order: 5, .. })));
    }

    /// Largest difference on the central half, relative to `max(1, max |a|)` there.
    fn central_error(a: &SymbolField, b: &SymbolField) -> f64 {
        let g = a.grid();
        let xm = g.x_axis().x_max() / 2.0;
        let pm = g.x_axis().p_max() / 2.0;
        let mut err: f64 = 0.0;
        let mut size: f64 = 1.0;
        for k in 0..g.n() {
            for j in 0..g.n() {
                if g.x(j).abs() < xm && g.p(k).abs() < pm {
                    err = err.max((a.field().at(j, k) - b.field().at(j, k)).norm());
                    size = size.max(a.field().at(j, k).norm());
                }
            }
        }
        err / size
    }

    #[test]
    fn bj_symbol_keeps_constants_and_single_axis_symbols() {
        let g: PhaseGrid = grid(256).into();
        let taper = SymbolTaper::for_grid(&g);
        let one = SymbolField::from_fn(g, |_, _| 1.0).unwrap();
        let b = bj_symbol(&one).unwrap();
        assert!(b.field().sub(one.field()).unwrap().max_abs() < 1e-12);
        for (s, r) in [(1, 0), (0, 1), (2, 0), (0, 3), (1, 1), (2, 1)] {
            let a = monomial_symbol(&g, s, r, Some(taper)).unwrap();
            let err = central_error(&a, &bj_symbol(&a).unwrap());
            assert!(err < 1e-8, "({s}, {r}): {err}");
        }
    }

    #[test]
    fn bj_symbol_changes_mixed_symbols() {
        // BJ(p²x²) = p²x² − ħ²/6 away from the taper
        let g: PhaseGrid = grid(256).into();
        let a = monomial_symbol(&g, 2, 2, Some(SymbolTaper::for_grid(&g))).unwrap();
        let b = bj_symbol(&a).unwrap();
        let h = g.hbar();
        let shifted = SymbolField::new(
            PhaseField::from_fn(g, |x, p| Complex64::new(p * p * x * x - h * h / 6.0, 0.0)).into_real(0.0).unwrap(),
        )
        .unwrap();
        let err = central_error(&b, &shifted);
        assert!(err < 1e-8, "{err}");
        assert!(central_error(&a, &b) > 1e-5);
    }

    #[test]
    fn commutator_is_canonical_on_probes() {
        let g = grid(256);
        let r = commutator_residual(&g, &probe_signals(&g)).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    #[test]
    fn overlap_identity_for_simple_symbols() {
        let g = grid(256);
        let probes = probe_signals(&g);
        let one = SymbolField::from_fn(g.into(), |_, _| 1.0).unwrap();
        assert!(operator_vs_distribution_check(&one, &probes[1], &probes[3]).unwrap() < 1e-8);
        let x = SymbolField::from_fn(g.into(), |x, _| x).unwrap();
        assert!(operator_vs_distribution_check(&x, &probes[5], &probes[5]).unwrap() < 1e-8);
    }
}
