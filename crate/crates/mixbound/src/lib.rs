//! Experiment harness for the `mixbound-core` solver: configuration files,
//! power-law fits, bound verdicts, λ classification, CSV/JSON artifacts and
//! the chart sweep.

pub mod classify;
pub mod config;
pub mod error;
pub mod experiment;
pub mod fit;
pub mod ini;
pub mod output;
pub mod sweep;
pub mod verdict;

pub use classify::{classify_lambda, LambdaClassification, LimitClass};
pub use config::{BoundKind, ExperimentConfig, Mode};
pub use error::{HarnessError, Result};
pub use experiment::{decay_character, run_experiment, Outcome, Report};
pub use fit::{fit_exponent, FitResult};
pub use sweep::{run_sweep, SweepConfig};
pub use verdict::{verify_bound, BoundVerdict, ConstantMode, VerifyOptions};
