//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use tfq::run::{diamond_checks, quantize_residuals, thread_pool};
use tfq_core::gaussians::{cross_form_identity_residual, wigner_matrix, wigner_of_gaussian, PhaseSpaceFunction};
use tfq_core::grid::{make_spatial_grid, HBarConfig, PhaseGrid, SpatialGrid};
use tfq_core::harness::{covariance_residual, translation_residual, DiamondConfig, DiamondStep};
use tfq_core::linalg::{j_matrix, CMatrix, RMatrix};
use tfq_core::state::GaussianState;
use tfq_core::symplectic::{fourier_j, rotation, scale1, shear1, SymplecticMap};
use tfq_core::tfdist::{marginals, symplectic_ft, wigner_discrete};
use tfq_core::{born_jordan_kernel, CohenKernel, Complex64, PhaseField, Signal};

/// Pinned from a trusted run (measured 0.604 for the pair at (±1, 0)).
const BJ_SHEAR_FLOOR: f64 = 0.01;

struct Outcome {
    passed: bool,
    summary: String,
}

fn criterion(id: u32, title: &str, limit: Duration, body: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let out = body();
    let took = start.elapsed();
    let passed = out.passed && took <= limit;
    println!(
        "criterion {id:>2} {} {title}: {} [{:.2} s, limit {} s]",
        if passed { "PASS" } else { "FAIL" },
        out.summary,
        took.as_secs_f64(),
        limit.as_secs()
    );
    passed
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn h() -> HBarConfig {
    HBarConfig::default()
}

fn grid(n: usize) -> SpatialGrid {
    make_spatial_grid(n, 8.0, h()).unwrap()
}

fn state(m: Complex64, center: [f64; 2]) -> GaussianState {
    GaussianState::scalar(m, center, Complex64::new(1.0, 0.0), h()).unwrap()
}

fn sum(states: &[GaussianState], g: &SpatialGrid) -> Signal {
    states.iter().fold(Signal::zeros(*g), |acc, s| acc.add(&s.sample(g).unwrap()).unwrap())
}

fn random_width(rng: &mut StdRng, n: usize) -> CMatrix {
    let a = RMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let x = a.transpose() * &a + RMatrix::identity(n, n) * 0.3;
    let y = RMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.5..1.5));
    let y = (&y + y.transpose()) * 0.5;
    CMatrix::from_fn(n, n, |i, j| Complex64::new(x[(i, j)], y[(i, j)]))
}

fn bound(name: &str, value: f64, limit: f64) -> Outcome {
    Outcome { passed: value <= limit, summary: format!("{name} {value:.3e} (limit {limit:.0e})") }
}

fn oracle_agreement() -> Vec<bool> {
    let g = grid(512);
    let pg: PhaseGrid = g.into();
    [Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0), Complex64::new(1.0, 1.0), Complex64::new(1.0, -0.5)]
        .into_iter()
        .map(|m| {
            criterion(1, &format!("Gaussian oracle, M = {m}"), secs(5), || {
                let s = state(m, [0.0, 0.0]);
                let w = wigner_discrete(&s.sample(&g).unwrap()).unwrap();
                let exact = wigner_of_gaussian(&s).unwrap().sample(&pg).unwrap();
                bound("sup error", w.sub(&exact).unwrap().max_abs(), 1e-6)
            })
        })
        .collect()
}

fn coherent_peak() -> bool {
    criterion(2, "coherent-state peak", secs(2), || {
        let g = grid(512);
        let w = wigner_discrete(&GaussianState::standard([0.0, 0.0], h()).sample(&g).unwrap()).unwrap();
        let c = g.n_points() / 2;
        let expect = 1.0 / (PI * h().value());
        let rel = (w.at(c, c).re - expect).abs() / expect;
        let argmax = w.real_values().iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        let mut out = bound("relative peak error", rel, 1e-6);
        out.passed &= argmax == c * g.n_points() + c;
        out
    })
}

fn symplectic_law() -> bool {
    criterion(3, "Wigner matrix law, 100 random M", secs(1), || {
        let mut rng = StdRng::seed_from_u64(3);
        let mut worst: f64 = 0.0;
        for i in 0..100 {
            let n = 1 + i % 3;
            let g = wigner_matrix(&random_width(&mut rng, n)).unwrap();
            let j = j_matrix(n);
            worst = worst.max((g.determinant() - 1.0).abs()).max((g.transpose() * &j * &g - j).amax());
        }
        bound("max |det G − 1|, |GᵀJG − J|", worst, 1e-10)
    })
}

fn cross_identity() -> bool {
    criterion(4, "cross-form identity, 100 random pairs", secs(1), || {
        let mut rng = StdRng::seed_from_u64(4);
        let mut worst: f64 = 0.0;
        for i in 0..100 {
            let n = 1 + i % 3;
            let (m, mp) = (random_width(&mut rng, n), random_width(&mut rng, n));
            worst = worst.max(cross_form_identity_residual(&m, &mp).unwrap());
        }
        bound("max residual", worst, 1e-12)
    })
}

fn moyal() -> bool {
    criterion(5, "normalization and marginals, 5 signals", secs(5), || {
        let g = grid(512);
        let one = Complex64::new(1.0, 0.0);
        let signals = [
            sum(&[state(one, [0.0, 0.0])], &g),
            sum(&[state(Complex64::new(2.0, 0.5), [1.0, -0.5])], &g),
            sum(&[state(Complex64::new(0.6, -0.3), [-1.5, 1.0])], &g),
            sum(&[state(one, [1.0, 0.0]), state(one, [-1.0, 0.0])], &g),
            sum(&[state(Complex64::new(1.0, 0.5), [0.5, 1.0]), state(Complex64::new(1.5, 0.0), [-0.5, -1.0])], &g),
        ];
        let mut worst: f64 = 0.0;
        for f in &signals {
            let w = wigner_discrete(f).unwrap();
            worst = worst.max((w.integral().re - f.norm_sqr()).abs());
            let (px, pp) = marginals(&w).unwrap();
            for (a, v) in px.iter().zip(f.values()) {
                worst = worst.max((a - v.norm_sqr()).abs());
            }
            for (a, v) in pp.iter().zip(f.momentum_samples()) {
                worst = worst.max((a - v.norm_sqr()).abs());
            }
        }
        bound("max deviation", worst, 1e-8)
    })
}

fn translation() -> bool {
    criterion(6, "translation covariance, 20 shifts", secs(30), || {
        let g = grid(512);
        let one = Complex64::new(1.0, 0.0);
        let f = sum(&[state(one, [1.0, 0.0]), state(Complex64::new(1.0, 0.5), [-1.0, 0.5])], &g);
        let kernels = [CohenKernel::wigner(), born_jordan_kernel(h())];
        let mut rng = StdRng::seed_from_u64(6);
        let mut worst: f64 = 0.0;
        for _ in 0..20 {
            let z0 = [rng.gen_range(-64i64..=64) as f64 * g.dx(), rng.gen_range(-32i64..=32) as f64 * g.dp()];
            for k in &kernels {
                worst = worst.max(translation_residual(k, z0, &f).unwrap());
            }
        }
        bound("max residual", worst, 1e-8)
    })
}

fn maps() -> Vec<(&'static str, SymplecticMap)> {
    vec![
        ("rotation(π/8)", rotation(FRAC_PI_8)),
        ("rotation(π/4)", rotation(FRAC_PI_4)),
        ("shear(1)", shear1(1.0).unwrap()),
        ("scale(1.5)", scale1(1.5).unwrap()),
        ("J", fourier_j(1)),
    ]
}

fn two_gaussians(g: &SpatialGrid) -> Signal {
    sum(&[GaussianState::standard([1.0, 0.0], h()), GaussianState::standard([-1.0, 0.0], h())], g)
}

fn wigner_covariance() -> bool {
    criterion(7, "Wigner symplectic covariance", secs(120), || {
        let g = grid(512);
        let signals = [
            two_gaussians(&g),
            sum(&[state(Complex64::new(1.0, 0.0), [1.0, 0.5]), state(Complex64::new(1.0, 0.5), [-1.0, -0.5])], &g),
        ];
        let mut worst: f64 = 0.0;
        let mut which = "";
        for f in &signals {
            for (name, m) in maps() {
                let r = covariance_residual(&CohenKernel::wigner(), &m, f).unwrap().residual;
                if r > worst {
                    worst = r;
                    which = name;
                }
            }
        }
        bound(&format!("max residual ({which})"), worst, 1e-4)
    })
}

fn bj_partial_covariance() -> bool {
    criterion(8, "Born-Jordan partial covariance", secs(120), || {
        let g = grid(512);
        let f = two_gaussians(&g);
        let bj = born_jordan_kernel(h());
        let covariant = [("J", fourier_j(1)), ("scale(0.5)", scale1(0.5).unwrap()), ("scale(2)", scale1(2.0).unwrap())];
        let mut worst: f64 = 0.0;
        for (_, m) in &covariant {
            worst = worst.max(covariance_residual(&bj, m, &f).unwrap().residual);
        }
        let shear = covariance_residual(&bj, &shear1(1.0).unwrap(), &f).unwrap().residual;
        Outcome {
            passed: worst <= 1e-4 && shear >= BJ_SHEAR_FLOOR,
            summary: format!("max J/scale residual {worst:.3e} (limit 1e-4), shear(1) residual {shear:.3e} (floor {BJ_SHEAR_FLOOR})"),
        }
    })
}

fn diamond() -> bool {
    criterion(9, "diamond experiment, 9 angles", secs(300), || {
        let cfg = DiamondConfig::default();
        let pool = thread_pool().unwrap();
        let run = || -> Vec<DiamondStep> { tfq::run::diamond_steps(&cfg, &pool).unwrap() };
        let first = run();
        let again = run();
        let checks = diamond_checks(&first);
        let deterministic = first == again;
        let text: Vec<String> = checks.iter().map(|c| format!("{} {:.4e}", c.name, c.value)).collect();
        Outcome {
            passed: deterministic && checks.len() == 3 && checks.iter().all(|c| c.passed),
            summary: format!("{}; deterministic {deterministic}", text.join(", ")),
        }
    })
}

fn quantization() -> bool {
    criterion(10, "quantization consistency, N = 256", secs(60), || {
        let rows = quantize_residuals(&grid(256), 10, 10).unwrap();
        let passed = rows.iter().all(|(_, v, b)| v <= b);
        let worst_mono = rows.iter().filter(|r| r.0.starts_with("monomial")).map(|r| r.1).fold(0.0, f64::max);
        let rest: Vec<String> = rows.iter().filter(|r| !r.0.starts_with("monomial")).map(|r| format!("{} {:.3e}", r.0, r.1)).collect();
        Outcome { passed, summary: format!("worst monomial {worst_mono:.3e} (limit 1e-5), {} (limits 1e-8, 1e-6)", rest.join(", ")) }
    })
}

fn involution() -> bool {
    criterion(11, "symplectic FT involution, 256² fields", secs(5), || {
        let pg: PhaseGrid = grid(256).into();
        let mut rng = StdRng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..3 {
            let values: Vec<Complex64> =
                (0..256 * 256).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let field = PhaseField::new(pg, values).unwrap();
            let once = symplectic_ft(&field).unwrap();
            let twice = symplectic_ft(&PhaseField::new(pg, once.values().to_vec()).unwrap()).unwrap();
            let err = twice.values().iter().zip(field.values()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            worst = worst.max(err);
        }
        bound("max deviation", worst, 1e-10)
    })
}

fn main() {
    let mut results = oracle_agreement();
    results.extend([
        coherent_peak(),
        symplectic_law(),
        cross_identity(),
        moyal(),
        translation(),
        wigner_covariance(),
        bj_partial_covariance(),
        diamond(),
        quantization(),
        involution(),
    ]);
    let failed = results.iter().filter(|p| !**p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
