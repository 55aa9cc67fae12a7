//! Covariance and interference measurements, and the four-state diamond
//! experiment.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::field::PhaseField;
use crate::grid::{make_spatial_grid, HBarConfig, PhaseGrid, SpatialGrid};
use crate::kernel::{born_jordan_kernel, CohenKernel};
use crate::metaplectic::{ActionBudget, MetaplecticAction};
use crate::resample::{resample_linear, Resampling};
use crate::signal::Signal;
use crate::state::GaussianState;
use crate::symplectic::SymplecticMap;
use crate::tfdist::{cohen_apply, wigner_discrete};

/// `Qf` for the given kernel.
pub fn cohen_distribution(f: &Signal, kernel: &CohenKernel) -> Result<PhaseField> {
    cohen_apply(&wigner_discrete(f)?, kernel)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceReport {
    pub map: SymplecticMap,
    pub distribution: String,
    /// `‖Q(Ŝf) − Qf∘S⁻¹‖₂ / ‖Qf‖₂`.
    pub residual: f64,
    pub grid: PhaseGrid,
    pub budget: ActionBudget,
}

/// Covariance residual with spectral resampling of `Qf∘S⁻¹`.
pub fn covariance_residual(kernel: &CohenKernel, map: &SymplecticMap, f: &Signal) -> Result<CovarianceReport> {
    covariance_residual_with(kernel, map, f, Resampling::Spectral)
}

pub fn covariance_residual_with(
    kernel: &CohenKernel,
    map: &SymplecticMap,
    f: &Signal,
    method: Resampling,
) -> Result<CovarianceReport> {
    let (sf, budget) = MetaplecticAction::new(map)?.apply(f)?;
    let q_sf = cohen_distribution(&sf, kernel)?;
    let qf = cohen_distribution(f, kernel)?;
    let expected = resample_linear(&qf, map.inverse().matrix(), method)?;
    let residual = q_sf.sub(&expected)?.l2_norm() / qf.l2_norm();
    Ok(CovarianceReport {
        map: map.clone(),
        distribution: String::from(kernel.name()),
        residual,
        grid: *qf.grid(),
        budget,
    })
}

/// Grid offsets `(Δj, Δk)` of an on-grid phase-space shift.
pub fn grid_offsets(grid: &SpatialGrid, z0: [f64; 2]) -> Result<(i64, i64)> {
    let u = z0[0] / grid.dx();
    let v = z0[1] / grid.dp();
    let (ur, vr) = (libm::round(u), libm::round(v));
    if (u - ur).abs() > 1e-9 || (v - vr).abs() > 1e-9 {
        return Err(invalid!("shift ({}, {}) is not on the grid", z0[0], z0[1]));
    }
    Ok((ur as i64, vr as i64))
}

/// `‖Q(T̂(z₀)f) − Qf(· − z₀)‖₂ / ‖Qf‖₂` with the field shifted circularly.
pub fn translation_residual(kernel: &CohenKernel, z0: [f64; 2], f: &Signal) -> Result<f64> {
    let (dj, dk) = grid_offsets(f.grid(), z0)?;
    let qf = cohen_distribution(f, kernel)?;
    let shifted = cohen_distribution(&f.heisenberg_shift(z0), kernel)?;
    shifted.relative_l2_distance(&qf.circular_shift(dj, dk))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferenceReport {
    pub angle: f64,
    /// `∫|Q|` over the disks around the state centers.
    pub signal_mass: f64,
    /// `∫|Q|` over the disks around the pairwise midpoints.
    pub cross_mass: f64,
    /// `cross / (signal + cross)`.
    pub ratio: f64,
}

/// Pairwise midpoints, without repeats.
pub fn midpoints(centers: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let scale = centers.iter().map(|c| c[0].abs().max(c[1].abs())).fold(1.0, f64::max);
    let mut out: Vec<[f64; 2]> = Vec::new();
    for k in 0..centers.len() {
        for l in 0..k {
            let m = [0.5 * (centers[k][0] + centers[l][0]), 0.5 * (centers[k][1] + centers[l][1])];
            if !out.iter().any(|o| (o[0] - m[0]).abs().max((o[1] - m[1]).abs()) <= 1e-9 * scale) {
                out.push(m);
            }
        }
    }
    out
}

/// `|Q|` masses in disks of radius `rho` around the centers and their
/// midpoints. The angle field is left at zero.
pub fn interference_mass(field: &PhaseField, centers: &[[f64; 2]], rho: f64) -> Result<InterferenceReport> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(invalid!("disk radius must be positive, got {rho}"));
    }
    let mids = midpoints(centers);
    let all: Vec<[f64; 2]> = centers.iter().chain(mids.iter()).copied().collect();
    for (i, a) in all.iter().enumerate() {
        for b in &all[..i] {
            let d = libm::hypot(a[0] - b[0], a[1] - b[1]);
            if d < 2.0 * rho {
                return Err(Error::Configuration(format!(
                    "disks around ({}, {}) and ({}, {}) overlap (distance {d} < {})",
                    a[0], a[1], b[0], b[1], 2.0 * rho
                )));
            }
        }
    }
    let axis = field.grid().x_axis();
    for c in &all {
        if c[0].abs() + rho > axis.x_max() || c[1].abs() + rho > axis.p_max() {
            return Err(Error::Configuration(format!("disk around ({}, {}) leaves the grid", c[0], c[1])));
        }
    }
    let signal_mass: f64 = centers.iter().map(|c| disk_mass(field, *c, rho)).sum();
    let cross_mass: f64 = mids.iter().map(|c| disk_mass(field, *c, rho)).sum();
    let total = signal_mass + cross_mass;
    Ok(InterferenceReport {
        angle: 0.0,
        signal_mass,
        cross_mass,
        ratio: if total > 0.0 { cross_mass / total } else { 0.0 },
    })
}

const COVERAGE_SUBSAMPLES: usize = 8;

/// `Σ |Q|·ΔxΔp·coverage` with each cell's disk coverage estimated on a
/// sub-grid when the cell straddles the boundary.
fn disk_mass(field: &PhaseField, center: [f64; 2], rho: f64) -> f64 {
    let g = field.grid();
    let (dx, dp) = (g.dx(), g.dp());
    let n = g.n();
    let c = (n / 2) as f64;
    let half_diag = 0.5 * libm::hypot(dx, dp);
    let j_lo = (libm::floor((center[0] - rho) / dx + c) as i64 - 1).max(0) as usize;
    let j_hi = ((libm::ceil((center[0] + rho) / dx + c) as i64 + 1).max(0) as usize).min(n - 1);
    let k_lo = (libm::floor((center[1] - rho) / dp + c) as i64 - 1).max(0) as usize;
    let k_hi = ((libm::ceil((center[1] + rho) / dp + c) as i64 + 1).max(0) as usize).min(n - 1);
    let mut mass = 0.0;
    for k in k_lo..=k_hi {
        for j in j_lo..=j_hi {
            let (x, p) = (g.x(j), g.p(k));
            let d = libm::hypot(x - center[0], p - center[1]);
            let coverage = if d + half_diag <= rho {
                1.0
            } else if d - half_diag >= rho {
                0.0
            } else {
                let s = COVERAGE_SUBSAMPLES;
                let mut inside = 0usize;
                for a in 0..s {
                    for b in 0..s {
                        let xs = x + dx * ((a as f64 + 0.5) / s as f64 - 0.5);
                        let ps = p + dp * ((b as f64 + 0.5) / s as f64 - 0.5);
                        if libm::hypot(xs - center[0], ps - center[1]) <= rho {
                            inside += 1;
                        }
                    }
                }
                inside as f64 / (s * s) as f64
            };
            if coverage > 0.0 {
                mass += field.at(j, k).norm() * coverage;
            }
        }
    }
    mass * dx * dp
}

/// Distributions the diamond experiment can compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Distribution {
    Wigner,
    BornJordan,
}

impl Distribution {
    pub fn name(self) -> &'static str {
        match self {
            Distribution::Wigner => "wigner",
            Distribution::BornJordan => "born-jordan",
        }
    }

    pub fn kernel(self, hbar: HBarConfig) -> CohenKernel {
        match self {
            Distribution::Wigner => CohenKernel::wigner(),
            Distribution::BornJordan => born_jordan_kernel(hbar),
        }
    }
}

/// Four standard coherent states at `a·(cos(θ + jπ/2), sin(θ + jπ/2))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiamondConfig {
    pub radius: f64,
    pub base_angle: f64,
    pub final_angle: f64,
    pub n_steps: usize,
    pub n_points: usize,
    pub x_max: f64,
    pub hbar: HBarConfig,
    pub rho: f64,
    pub distributions: Vec<Distribution>,
}

impl Default for DiamondConfig {
    fn default() -> Self {
        Self {
            radius: 2.0,
            base_angle: 0.0,
            final_angle: FRAC_PI_4,
            n_steps: 9,
            n_points: 512,
            x_max: 8.0,
            hbar: HBarConfig::default(),
            rho: 0.6,
            distributions: alloc::vec![Distribution::Wigner, Distribution::BornJordan],
        }
    }
}

impl DiamondConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_steps < 1 {
            return Err(Error::Configuration("n_steps must be at least 1".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::Configuration(format!("radius must be positive, got {}", self.radius)));
        }
        if !(self.base_angle.is_finite() && self.final_angle.is_finite()) {
            return Err(Error::Configuration("angles must be finite".into()));
        }
        if self.distributions.is_empty() {
            return Err(Error::Configuration("no distributions requested".into()));
        }
        self.grid()?;
        Ok(())
    }

    pub fn grid(&self) -> Result<SpatialGrid> {
        make_spatial_grid(self.n_points, self.x_max, self.hbar)
    }

    /// `n_steps` angles spaced evenly from `base_angle` to `final_angle`.
    pub fn angles(&self) -> Vec<f64> {
        if self.n_steps == 1 {
            return alloc::vec![self.base_angle];
        }
        let span = self.final_angle - self.base_angle;
        (0..self.n_steps).map(|i| self.base_angle + span * i as f64 / (self.n_steps - 1) as f64).collect()
    }
}

pub fn diamond_centers(radius: f64, angle: f64) -> [[f64; 2]; 4] {
    core::array::from_fn(|j| {
        let t = angle + j as f64 * FRAC_PI_2;
        [radius * libm::cos(t), radius * libm::sin(t)]
    })
}

pub fn diamond_states(cfg: &DiamondConfig, angle: f64) -> Vec<GaussianState> {
    diamond_centers(cfg.radius, angle).iter().map(|c| GaussianState::standard(*c, cfg.hbar)).collect()
}

/// Exact samples of `Σ_j T̂(z_j)ψ₀`.
pub fn diamond_signal(cfg: &DiamondConfig, angle: f64) -> Result<Signal> {
    let grid = cfg.grid()?;
    let mut acc = Signal::zeros(grid);
    for s in diamond_states(cfg, angle) {
        acc = acc.add(&s.sample(&grid)?)?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiamondEntry {
    pub distribution: Distribution,
    pub field: PhaseField,
    pub report: InterferenceReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiamondStep {
    pub angle: f64,
    pub entries: Vec<DiamondEntry>,
}

pub fn diamond_step(cfg: &DiamondConfig, angle: f64) -> Result<DiamondStep> {
    let f = diamond_signal(cfg, angle)?;
    let w = wigner_discrete(&f)?;
    let centers = diamond_centers(cfg.radius, angle);
    let mut entries = Vec::with_capacity(cfg.distributions.len());
    for &d in &cfg.distributions {
        let field = match d {
            Distribution::Wigner => w.clone(),
            other => cohen_apply(&w, &other.kernel(cfg.hbar))?,
        };
        let mut report = interference_mass(&field, &centers, cfg.rho)?;
        report.angle = angle;
        entries.push(DiamondEntry { distribution: d, field, report });
    }
    Ok(DiamondStep { angle, entries })
}

/// Runs every angle in sequence.
pub fn diamond_experiment(cfg: &DiamondConfig) -> Result<Vec<DiamondStep>> {
    cfg.validate()?;
    cfg.angles().into_iter().map(|a| diamond_step(cfg, a)).collect()
}

/// `log10(|Q| + ε)` with `ε = 1e-12·max |Q|` (`ε = 1e-300` for a zero field).
pub fn log_amplitude(field: &PhaseField) -> Vec<f64> {
    let eps = (1e-12 * field.max_abs()).max(1e-300);
    field.values().iter().map(|v: &Complex64| libm::log10(v.norm() + eps)).collect()
}
