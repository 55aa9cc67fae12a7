//! Cohen-class kernels, given by their ambiguity-domain multiplier.

use alloc::string::String;
use alloc::sync::Arc;
use core::fmt;

use num_complex::Complex64;

use crate::grid::HBarConfig;

type Multiplier = dyn Fn(f64, f64) -> Complex64 + Send + Sync;

/// A distribution `Q` with `F_σ(Qf) = F_σ(Wf)·multiplier`.
#[derive(Clone)]
pub struct CohenKernel {
    name: String,
    multiplier: Arc<Multiplier>,
}

impl CohenKernel {
    pub fn new(name: impl Into<String>, multiplier: impl Fn(f64, f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { name: name.into(), multiplier: Arc::new(multiplier) }
    }

    pub fn wigner() -> Self {
        Self::new("wigner", |_, _| Complex64::new(1.0, 0.0))
    }

    pub fn born_jordan(hbar: HBarConfig) -> Self {
        born_jordan_kernel(hbar)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Multiplier at lag `(x_lag, p_lag)`.
    pub fn multiplier(&self, x_lag: f64, p_lag: f64) -> Complex64 {
        (self.multiplier)(x_lag, p_lag)
    }
}

impl fmt::Debug for CohenKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CohenKernel").field("name", &self.name).finish_non_exhaustive()
    }
}

/// `sin(u)/u`, equal to 1 at `u = 0`.
pub fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-6 {
        let u2 = u * u;
        1.0 - u2 / 6.0 + u2 * u2 / 120.0
    } else {
        libm::sin(u) / u
    }
}

/// Born–Jordan multiplier `sinc(x_lag·p_lag / 2ħ)`.
pub fn born_jordan_kernel(hbar: HBarConfig) -> CohenKernel {
    let h = hbar.value();
    CohenKernel::new("born-jordan", move |x, p| Complex64::new(sinc(x * p / (2.0 * h)), 0.0))
}

impl PartialEq for CohenKernel {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && Arc::ptr_eq(&self.multiplier, &other.multiplier)
    }
}

impl fmt::Display for CohenKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}
