//! Metaplectic action of `2×2` symplectic maps on sampled signals.
//!
//! A map is applied through its generator factorization. Each step is
//! evaluated so that it is exact for signals that are band-limited and
//! supported well inside the grid: chirps pointwise, the Fourier step as a
//! direct quadrature at the grid points, rescalings by sinc interpolation.
//! Energy that a step would move off the grid (in position or momentum) is
//! estimated and reported. The global `±` sign of the metaplectic operator
//! is not tracked.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::grid::SpatialGrid;
use crate::signal::Signal;
use crate::symplectic::{Generator, SymplecticMap};

/// Largest tolerated fraction of energy pushed off the grid by one step.
pub const RANGE_TAIL_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MetaplecticStep {
    /// `f ↦ (2πħ)^{−1/2} ∫ e^{−ixy/ħ} f(y) dy`.
    Fourier,
    /// `f ↦ √|L| f(L·)`.
    Scale(f64),
    /// `f ↦ e^{(i/2ħ)Px²} f`.
    Chirp(f64),
}

/// Per-step estimates of the energy fraction lost off the grid.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ActionBudget {
    pub step_tails: Vec<f64>,
    /// Sum of the step tails.
    pub total_tail: f64,
    /// Number of steps that resample the signal.
    pub interpolation_steps: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetaplecticAction {
    source: SymplecticMap,
    /// In application order.
    steps: Vec<MetaplecticStep>,
}

impl MetaplecticAction {
    pub fn new(source: &SymplecticMap) -> Result<Self> {
        let gens = source
            .factorization()
            .ok_or_else(|| invalid!("metaplectic action needs a factored 2x2 map"))?;
        let steps = gens
            .iter()
            .rev()
            .map(|g| match g {
                Generator::FourierJ => MetaplecticStep::Fourier,
                Generator::Scale(l) => MetaplecticStep::Scale(l[(0, 0)]),
                Generator::Chirp(p) => MetaplecticStep::Chirp(p[(0, 0)]),
            })
            .collect();
        Ok(Self { source: source.clone(), steps })
    }

    pub fn source(&self) -> &SymplecticMap {
        &self.source
    }

    pub fn steps(&self) -> &[MetaplecticStep] {
        &self.steps
    }

    pub fn apply(&self, f: &Signal) -> Result<(Signal, ActionBudget)> {
        let mut budget = ActionBudget::default();
        let mut current = f.clone();
        for step in &self.steps {
            let (next, tail) = apply_step(*step, &current)?;
            if tail > RANGE_TAIL_TOLERANCE {
                return Err(Error::Range { what: format!("{step:?} moves energy off the grid"), tail_energy: tail });
            }
            if matches!(step, MetaplecticStep::Scale(_) | MetaplecticStep::Fourier) {
                budget.interpolation_steps += 1;
            }
            budget.step_tails.push(tail);
            budget.total_tail += tail;
            current = next;
        }
        Ok((current, budget))
    }
}

pub fn metaplectic_apply(map: &SymplecticMap, f: &Signal) -> Result<Signal> {
    Ok(MetaplecticAction::new(map)?.apply(f)?.0)
}

/// One step and its off-grid energy fraction.
pub fn apply_step(step: MetaplecticStep, f: &Signal) -> Result<(Signal, f64)> {
    match step {
        MetaplecticStep::Chirp(p) => {
            let out = chirp(f, p);
            let tail = spectral_fraction_beyond(&out, 0.9 * f.grid().p_max());
            Ok((out, tail))
        }
        MetaplecticStep::Fourier => {
            let g = f.grid();
            let tail = spectral_fraction_beyond(f, g.x_max()).max(spatial_fraction_beyond(f, g.p_max()));
            Ok((fourier(f), tail))
        }
        MetaplecticStep::Scale(l) => {
            if !(l.is_finite() && l != 0.0) {
                return Err(invalid!("scale factor must be finite and nonzero, got {l}"));
            }
            let g = f.grid();
            let tail = spatial_fraction_beyond(f, l.abs() * g.x_max()).max(spectral_fraction_beyond(f, g.p_max() / l.abs()));
            Ok((rescale(f, l), tail))
        }
    }
}

fn chirp(f: &Signal, p: f64) -> Signal {
    let g = f.grid();
    let h = g.hbar();
    let values = f
        .values()
        .iter()
        .enumerate()
        .map(|(j, v)| {
            let x = g.x(j);
            v * Complex64::from_polar(1.0, p * x * x / (2.0 * h))
        })
        .collect();
    Signal::new(*g, values).expect("same length")
}

fn fourier(f: &Signal) -> Signal {
    let g = f.grid();
    let n = g.n_points();
    let c = g.center() as i64;
    let rate = g.dx() * g.dx() / g.hbar();
    let scale = g.dx() / libm::sqrt(2.0 * PI * g.hbar());
    let fv = f.values();
    let values = (0..n)
        .map(|j| {
            let a = j as i64 - c;
            let mut s = Complex64::new(0.0, 0.0);
            for (jp, v) in fv.iter().enumerate() {
                if *v != Complex64::new(0.0, 0.0) {
                    s += v * Complex64::from_polar(1.0, -rate * (a * (jp as i64 - c)) as f64);
                }
            }
            s * scale
        })
        .collect();
    Signal::new(*g, values).expect("same length")
}

fn rescale(f: &Signal, l: f64) -> Signal {
    let g = f.grid();
    let amp = libm::sqrt(l.abs());
    let values = g.positions().map(|x| sinc_interpolate(f, l * x) * amp).collect();
    Signal::new(*g, values).expect("same length")
}

/// Band-limited interpolation `Σ_m f_m sinc((y − x_m)/Δx)`.
pub fn sinc_interpolate(f: &Signal, y: f64) -> Complex64 {
    let g = f.grid();
    let u = y / g.dx() + g.center() as f64;
    sinc_interpolate_index(f.values(), u)
}

/// `Σ_m v_m sinc(u − m)` with `sinc(t) = sin(πt)/(πt)`.
pub fn sinc_interpolate_index(values: &[Complex64], u: f64) -> Complex64 {
    let nearest = libm::round(u);
    if (u - nearest).abs() < 1e-13 {
        let i = nearest as i64;
        return if i >= 0 && (i as usize) < values.len() { values[i as usize] } else { Complex64::new(0.0, 0.0) };
    }
    let s = libm::sin(PI * (u - libm::floor(u)));
    // sin(π(u − m)) = (−1)^{m − ⌊u⌋} sin(π(u − ⌊u⌋))
    let base_even = (libm::floor(u) as i64).rem_euclid(2) == 0;
    let mut acc = Complex64::new(0.0, 0.0);
    for (m, v) in values.iter().enumerate() {
        let sign = if (m % 2 == 0) == base_even { 1.0 } else { -1.0 };
        acc += v * (sign / (u - m as f64));
    }
    acc * (s / PI)
}

fn spatial_fraction_beyond(f: &Signal, limit: f64) -> f64 {
    let g = f.grid();
    let total: f64 = f.values().iter().map(|v| v.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let tail: f64 = f
        .values()
        .iter()
        .enumerate()
        .filter(|(j, _)| g.x(*j).abs() >= limit)
        .map(|(_, v)| v.norm_sqr())
        .sum();
    tail / total
}

fn spectral_fraction_beyond(f: &Signal, limit: f64) -> f64 {
    let g = f.grid();
    let spec = f.momentum_samples();
    let total: f64 = spec.iter().map(|v| v.norm_sqr()).sum();
    if total == 0.0 {
        return 0.0;
    }
    let tail: f64 = spec
        .iter()
        .enumerate()
        .filter(|(k, _)| g.p(*k).abs() >= limit)
        .map(|(_, v)| v.norm_sqr())
        .sum();
    tail / total
}

/// Random band-limited test signal: a sum of Gaussian packets with centers,
/// widths and weights drawn from `next` (uniform in `[0, 1)`).
pub fn random_packets(grid: &SpatialGrid, count: usize, reach: f64, mut next: impl FnMut() -> f64) -> Signal {
    let h = grid.hbar();
    let mut params = vec![];
    for _ in 0..count {
        let x0 = (2.0 * next() - 1.0) * reach;
        let p0 = (2.0 * next() - 1.0) * reach;
        let width = 0.6 + 0.8 * next();
        let w = Complex64::from_polar(0.5 + next(), 2.0 * PI * next());
        params.push((x0, p0, width, w));
    }
    Signal::from_fn(*grid, |x| {
        params
            .iter()
            .map(|&(x0, p0, width, w)| {
                let d = x - x0;
                w * Complex64::from_polar(libm::exp(-width * d * d / (2.0 * h)), p0 * x / h)
            })
            .sum()
    })
}
