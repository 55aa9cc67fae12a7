//! Executes a [`RunConfig`]: computes fields, writes files and reports, and
//! evaluates the `--assert` checks.

use std::path::PathBuf;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use tfq_core::grid::{HBarConfig, PhaseGrid, SpatialGrid};
use tfq_core::harness::{
    cohen_distribution, covariance_residual, diamond_step, DiamondConfig, DiamondStep, Distribution,
};
use tfq_core::kernel::{born_jordan_kernel, CohenKernel};
use tfq_core::metaplectic::random_packets;
use tfq_core::quantize::{
    bj_monomial_matrix, bj_symbol, central_action_distance, monomial_symbol, operator_vs_distribution_check,
    probe_signals, weyl_matrix, OperatorMatrix, SymbolField, SymbolTaper,
};
use tfq_core::resample::{resample_linear, Resampling};
use tfq_core::symplectic::rotation;
use tfq_core::tfdist::marginals;
use tfq_core::{PhaseField, Signal};

use crate::config::{Command, KernelChoice, RunConfig};
use crate::error::{Error, Result};
use crate::io::write_field;
use crate::report::{write_report, Report};

/// Bound for the Moyal normalization and marginal checks.
pub const MOMENT_TOLERANCE: f64 = 1e-8;
/// Bound for BJ monomials against the quantized BJ symbol.
pub const MONOMIAL_TOLERANCE: f64 = 1e-5;
pub const IDENTITY_TOLERANCE: f64 = 1e-8;
pub const PAIRING_TOLERANCE: f64 = 1e-6;
/// Diamond: Wigner ratio spread, relative to its maximum.
pub const WIGNER_RATIO_SPREAD: f64 = 0.01;
/// Diamond: minimum BJ ratio spread, relative to its maximum.
pub const BJ_RATIO_SPREAD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub passed: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, passed: value <= bound }
    }

    fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self { name: name.into(), value, passed: value >= bound }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub reports: Vec<Report>,
    pub files: Vec<PathBuf>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Worker count from `TFQ_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("TFQ_THREADS").ok()?.trim().parse().ok().filter(|&n: &usize| n > 0)
}

pub fn thread_pool() -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        b = b.num_threads(n);
    }
    b.build().map_err(|e| Error::Config(format!("thread pool: {e}")))
}

fn kernel(choice: KernelChoice, hbar: HBarConfig) -> CohenKernel {
    match choice {
        KernelChoice::Wigner => CohenKernel::wigner(),
        KernelChoice::Bj => born_jordan_kernel(hbar),
    }
}

fn kernels(cfg: &RunConfig, hbar: HBarConfig) -> Vec<CohenKernel> {
    match cfg.kernel {
        Some(k) => vec![kernel(k, hbar)],
        None => vec![CohenKernel::wigner(), born_jordan_kernel(hbar)],
    }
}

/// Runs the configured command and writes `report.json` into the output
/// directory.
pub fn run(cfg: &RunConfig) -> Result<Outcome> {
    cfg.validate()?;
    let mut outcome = match cfg.command {
        Command::Wigner => single_field(cfg, KernelChoice::Wigner)?,
        Command::Bj => single_field(cfg, KernelChoice::Bj)?,
        Command::Cohen => single_field(cfg, cfg.kernel.unwrap_or(KernelChoice::Bj))?,
        Command::Covariance => covariance(cfg)?,
        Command::Diamond => diamond(cfg)?,
        Command::QuantizeCheck => quantize_check(cfg)?,
    };
    let path = cfg.out.join("report.json");
    write_report(&outcome.reports, &path)?;
    outcome.files.push(path);
    Ok(outcome)
}

/// Normalization and marginal errors of a real distribution of `f`,
/// relative to `‖f‖²` and the marginal peaks.
pub fn moment_residuals(q: &PhaseField, f: &Signal) -> Result<[f64; 3]> {
    let norm = f.norm_sqr();
    let total = q.integral().re;
    let (px, pp) = marginals(q)?;
    let density: Vec<f64> = f.values().iter().map(|v| v.norm_sqr()).collect();
    let spectrum: Vec<f64> = f.momentum_samples().iter().map(|v| v.norm_sqr()).collect();
    let rel = |got: &[f64], want: &[f64]| {
        let peak = want.iter().copied().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        got.iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max) / peak
    };
    Ok([(total - norm).abs() / norm.max(f64::MIN_POSITIVE), rel(&px, &density), rel(&pp, &spectrum)])
}

fn single_field(cfg: &RunConfig, choice: KernelChoice) -> Result<Outcome> {
    let grid = cfg.grid()?;
    let f = cfg.signal.build(&grid)?;
    let k = kernel(choice, grid.hbar_config());
    let q = cohen_distribution(&f, &k)?;
    let mut out = Outcome::default();
    let stem = cfg.out.join(cfg.command.name());
    for &fmt in &cfg.formats {
        out.files.push(write_field(&q, fmt, &stem)?);
    }
    let mut report = Report::new(k.name());
    let names = ["normalization", "position_marginal", "momentum_marginal"];
    for (name, v) in names.iter().zip(moment_residuals(&q, &f)?) {
        report.residuals.push((name.to_string(), v));
        out.checks.push(Check::at_most(*name, v, MOMENT_TOLERANCE));
    }
    out.reports.push(report);
    Ok(out)
}

fn covariance(cfg: &RunConfig) -> Result<Outcome> {
    let grid = cfg.grid()?;
    let f = cfg.signal.build(&grid)?;
    let pool = thread_pool()?;
    let mut out = Outcome::default();
    for k in kernels(cfg, grid.hbar_config()) {
        let residuals: Vec<f64> = pool.install(|| {
            cfg.maps
                .par_iter()
                .map(|m| Ok(covariance_residual(&k, &m.build()?, &f)?.residual))
                .collect::<Result<Vec<f64>>>()
        })?;
        let mut report = Report::new(k.name());
        for (m, r) in cfg.maps.iter().zip(residuals) {
            report.residuals.push((m.to_string(), r));
            out.checks.push(Check::at_most(format!("{} {m}", k.name()), r, cfg.tolerance));
        }
        out.reports.push(report);
    }
    Ok(out)
}

pub fn diamond_config(cfg: &RunConfig) -> Result<DiamondConfig> {
    let distributions = match cfg.kernel {
        Some(KernelChoice::Wigner) => vec![Distribution::Wigner],
        Some(KernelChoice::Bj) => vec![Distribution::BornJordan],
        None => vec![Distribution::Wigner, Distribution::BornJordan],
    };
    let d = DiamondConfig {
        n_steps: cfg.steps,
        n_points: cfg.n_points,
        x_max: cfg.x_max,
        hbar: cfg.hbar_config()?,
        distributions,
        ..DiamondConfig::default()
    };
    d.validate()?;
    Ok(d)
}

/// All angles of the diamond experiment, computed on the pool.
pub fn diamond_steps(d: &DiamondConfig, pool: &rayon::ThreadPool) -> Result<Vec<DiamondStep>> {
    let angles = d.angles();
    pool.install(|| angles.par_iter().map(|&a| diamond_step(d, a).map_err(Error::from)).collect())
}

/// Distance between each field and the first-angle field rotated onto it.
fn rotation_residuals(steps: &[DiamondStep], pool: &rayon::ThreadPool) -> Result<Vec<Vec<f64>>> {
    let first = &steps[0];
    pool.install(|| {
        steps
            .par_iter()
            .map(|s| {
                // centers advance counterclockwise; `rotation` turns clockwise
                let back = rotation(s.angle - first.angle);
                s.entries
                    .iter()
                    .zip(&first.entries)
                    .map(|(e, e0)| {
                        let expected = resample_linear(&e0.field, back.matrix(), Resampling::Spectral)?;
                        Ok(e.field.relative_l2_distance(&expected)?)
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect()
    })
}

/// Pass/fail checks over the per-angle ratios and masses.
pub fn diamond_checks(steps: &[DiamondStep]) -> Vec<Check> {
    let series = |d: Distribution| -> Vec<(f64, f64)> {
        steps
            .iter()
            .flat_map(|s| s.entries.iter().filter(move |e| e.distribution == d))
            .map(|e| (e.report.ratio, e.report.cross_mass))
            .collect()
    };
    let spread = |v: &[(f64, f64)]| {
        let hi = v.iter().map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
        let lo = v.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
        (hi - lo) / hi
    };
    let w = series(Distribution::Wigner);
    let b = series(Distribution::BornJordan);
    let mut checks = Vec::new();
    if !w.is_empty() {
        checks.push(Check::at_most("wigner ratio spread", spread(&w), WIGNER_RATIO_SPREAD));
    }
    if !b.is_empty() {
        checks.push(Check::at_least("born-jordan ratio spread", spread(&b), BJ_RATIO_SPREAD));
    }
    if !w.is_empty() && !b.is_empty() {
        let best = b.iter().min_by(|x, y| x.0.total_cmp(&y.0)).unwrap().1;
        let w_min = w.iter().map(|r| r.1).fold(f64::INFINITY, f64::min);
        checks.push(Check { name: "born-jordan best cross mass below wigner".into(), value: best - w_min, passed: best < w_min });
    }
    checks
}

fn diamond(cfg: &RunConfig) -> Result<Outcome> {
    let d = diamond_config(cfg)?;
    let pool = thread_pool()?;
    let steps = diamond_steps(&d, &pool)?;
    let rot = rotation_residuals(&steps, &pool)?;
    let mut out = Outcome::default();
    for (i, (s, res)) in steps.iter().zip(&rot).enumerate() {
        for (e, r) in s.entries.iter().zip(res) {
            let stem = cfg.out.join(format!("diamond_{}_{i:02}", e.distribution.name()));
            for &fmt in &cfg.formats {
                out.files.push(write_field(&e.field, fmt, &stem)?);
            }
            out.reports.push(Report {
                angle: Some(s.angle),
                distribution: e.distribution.name().to_string(),
                signal_mass: Some(e.report.signal_mass),
                cross_mass: Some(e.report.cross_mass),
                ratio: Some(e.report.ratio),
                residuals: vec![("rotation".to_string(), *r)],
            });
        }
    }
    out.checks = diamond_checks(&steps);
    Ok(out)
}

/// Smooth random symbol: a few Gaussian bumps with plane-wave phases, kept
/// in the middle of the grid.
pub fn random_symbol(grid: &PhaseGrid, rng: &mut StdRng) -> Result<SymbolField> {
    let xr = grid.x_axis().x_max() / 4.0;
    let pr = grid.x_axis().p_max() / 8.0;
    let bumps: Vec<[f64; 6]> = (0..3)
        .map(|_| {
            [
                rng.gen_range(-xr..xr),
                rng.gen_range(-pr..pr),
                rng.gen_range(0.5..1.5),
                rng.gen_range(-1.0..1.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            ]
        })
        .collect();
    Ok(SymbolField::from_fn(*grid, |x, p| {
        bumps
            .iter()
            .map(|&[x0, p0, w, c, kx, kp]| {
                let (dx, dp) = (x - x0, p - p0);
                c * (-(dx * dx + dp * dp) / (2.0 * w * w)).exp() * (kx * dx + kp * dp).cos()
            })
            .sum()
    })?)
}

/// BJ monomials against quantized BJ symbols (`s + r ≤ 3`), the constant
/// symbol, and the operator/distribution pairing for `count` random
/// symbols.
pub fn quantize_residuals(grid: &SpatialGrid, count: usize, seed: u64) -> Result<Vec<(String, f64, f64)>> {
    let pg: PhaseGrid = (*grid).into();
    let probes = probe_signals(grid);
    let taper = SymbolTaper::for_grid(&pg);
    let mut rows = Vec::new();
    let orders: Vec<(u32, u32)> = (0..=3u32).flat_map(|t| (0..=t).map(move |s| (s, t - s))).collect();
    let pool = thread_pool()?;
    let mono: Vec<f64> = pool.install(|| {
        orders
            .par_iter()
            .map(|&(s, r)| {
                let direct = bj_monomial_matrix(grid, s, r)?;
                let via_symbol = weyl_matrix(&bj_symbol(&monomial_symbol(&pg, s, r, Some(taper))?)?)?;
                Ok(central_action_distance(&direct, &via_symbol, &probes)?)
            })
            .collect::<Result<Vec<f64>>>()
    })?;
    for (&(s, r), v) in orders.iter().zip(mono) {
        rows.push((format!("monomial p^{s} x^{r}"), v, MONOMIAL_TOLERANCE));
    }
    let one = weyl_matrix(&SymbolField::from_fn(pg, |_, _| 1.0)?)?;
    rows.push(("weyl identity".to_string(), one.max_entry_distance(&OperatorMatrix::identity(*grid)), IDENTITY_TOLERANCE));
    let mut rng = StdRng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let a = random_symbol(&pg, &mut rng)?;
        let reach = grid.x_max() / 4.0;
        let f = random_packets(grid, 2, reach, || rng.gen());
        let g = random_packets(grid, 2, reach, || rng.gen());
        worst = worst.max(operator_vs_distribution_check(&a, &f, &g)?);
    }
    rows.push(("operator pairing".to_string(), worst, PAIRING_TOLERANCE));
    Ok(rows)
}

fn quantize_check(cfg: &RunConfig) -> Result<Outcome> {
    let grid = cfg.grid()?;
    let mut out = Outcome::default();
    let mut report = Report::new("born-jordan");
    for (name, v, bound) in quantize_residuals(&grid, 10, 7)? {
        out.checks.push(Check::at_most(name.clone(), v, bound));
        report.residuals.push((name, v));
    }
    out.reports.push(report);
    Ok(out)
}
