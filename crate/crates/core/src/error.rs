use thiserror::Error;

pub type Result<T> = core::result::Result<T, CoreError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CoreError {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),

    #[error("shape mismatch: expected {expected} values, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("grid dimension {grid} does not match {what} dimension {other}")]
    DimensionMismatch {
        what: &'static str,
        grid: usize,
        other: usize,
    },

    #[error("unresolvable shell: delta {delta} is below the frequency spacing {dxi}")]
    UnresolvableShell { delta: f64, dxi: f64 },

    #[error("filamentation length undefined for a field without non-zero modes")]
    ZeroField,

    #[error("profile under-resolved: {reason} (need n >= {required_n} or half_width >= {required_half_width})")]
    UnderResolved {
        reason: &'static str,
        required_n: usize,
        required_half_width: f64,
    },

    #[error("negative time step {0}")]
    NegativeTimeStep(f64),

    #[error("negative diffusivity {0}")]
    NegativeDiffusivity(f64),

    #[error("time step {dt} violates the CFL limit; largest admissible step is {max_dt}")]
    CflViolation { dt: f64, max_dt: f64 },

    #[error("invalid run configuration: {0}")]
    InvalidRun(&'static str),

    #[error("identity requires pure advection (kappa = 0), got kappa = {0}")]
    NotPureAdvection(f64),

    #[error("need at least {needed} usable points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("shell integral diverges: 2a + d = {0} <= 0")]
    DivergentShell(f64),

    #[error("no lower bound available: {0}")]
    NoLowerBound(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("invalid rational: denominator is zero")]
    ZeroDenominator,
}
