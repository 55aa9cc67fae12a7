use alloc::string::String;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// `SᵀJS ≠ J`. `residual` is the Frobenius norm of `SᵀJS − J`,
    /// `max_entry` its largest absolute entry.
    #[error("matrix is not symplectic: |SᵀJS − J|_F = {residual:e} (max entry {max_entry:e})")]
    NotSymplectic { residual: f64, max_entry: f64 },

    #[error("constraint violated: {what} (residual {residual:e})")]
    ConstraintViolation { what: &'static str, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    /// A transform would push signal energy outside the sampled window.
    #[error("range error: {what} (tail energy fraction {tail_energy:e})")]
    Range { what: String, tail_energy: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("unsupported order: s + r = {order} exceeds {max}")]
    UnsupportedOrder { order: u32, max: u32 },
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! invalid {
    ($($arg:tt)*) => {
        $crate::error::Error::InvalidArgument(alloc::format!($($arg)*))
    };
}
pub(crate) use invalid;
