//! Long-time classification of the filamentation length.

use mixbound_core::bounds::{asymptotic_class, AsymptoticClass, Equation};
use mixbound_core::Rational;
use serde::Serialize;

use crate::error::Result;
use crate::fit::{fit_exponent, window_indices, FitResult};

/// Tail log-slope separating growth, decay and a finite limit.
pub const SLOPE_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitClass {
    Zero,
    Finite,
    Infinity,
}

impl LimitClass {
    pub fn of(class: &AsymptoticClass) -> Self {
        match class {
            AsymptoticClass::Zero => LimitClass::Zero,
            AsymptoticClass::Finite(_) => LimitClass::Finite,
            AsymptoticClass::Infinity => LimitClass::Infinity,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            LimitClass::Zero => "zero",
            LimitClass::Finite => "finite",
            LimitClass::Infinity => "infinity",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaClassification {
    pub class: LimitClass,
    pub fit: FitResult,
    /// Mean of λ over the tail window.
    pub tail_mean: f64,
    /// Standard deviation of λ over the tail window.
    pub tail_std: f64,
    /// Distance of the slope from the nearest threshold in standard errors.
    pub confidence: f64,
}

/// Classifies λ by its fitted tail log-slope: above `+0.1` infinity, below
/// `-0.1` zero, otherwise finite with the tail mean.
pub fn classify_lambda(t: &[f64], lambda: &[f64], window: [f64; 2]) -> Result<LambdaClassification> {
    let fit = fit_exponent("lambda", t, lambda, window)?;
    let idx = window_indices(t, window)?;
    let vals: Vec<f64> = idx.iter().map(|&i| lambda[i]).collect();
    let n = vals.len() as f64;
    let tail_mean = vals.iter().sum::<f64>() / n;
    let tail_std = (vals.iter().map(|v| (v - tail_mean).powi(2)).sum::<f64>() / n).sqrt();
    let class = if fit.slope > SLOPE_THRESHOLD {
        LimitClass::Infinity
    } else if fit.slope < -SLOPE_THRESHOLD {
        LimitClass::Zero
    } else {
        LimitClass::Finite
    };
    let gap = (fit.slope.abs() - SLOPE_THRESHOLD).abs();
    let confidence = if fit.stderr > 0.0 { gap / fit.stderr } else { f64::INFINITY };
    Ok(LambdaClassification {
        class,
        fit,
        tail_mean,
        tail_std,
        confidence,
    })
}

/// Observed class next to the chart entry for the same equation and ν.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartComparison {
    pub equation: &'static str,
    pub nu: String,
    pub expected: LimitClass,
    /// Limit of the lower-bound curve when finite.
    pub expected_value: Option<f64>,
    pub observed: LambdaClassification,
    pub matches: bool,
}

pub fn compare_with_chart(equation: Equation, nu: Rational, observed: LambdaClassification) -> ChartComparison {
    let chart = asymptotic_class(equation, nu);
    let expected = LimitClass::of(&chart);
    ChartComparison {
        equation: equation.label(),
        nu: nu.to_string(),
        expected,
        expected_value: match chart {
            AsymptoticClass::Finite(v) => Some(v),
            _ => None,
        },
        matches: observed.class == expected,
        observed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use mixbound_core::bounds::accumulated_decay;
    use mixbound_core::solver::log_sample_times;

    fn synthetic(eq: Equation, nu: f64, t: &[f64]) -> Vec<f64> {
        // λ shaped like the chart's lower-bound curves, with a little wobble
        t.iter()
            .map(|&t| {
                let g = accumulated_decay(t, nu);
                let base = match eq {
                    Equation::PureAdvection if nu == 1.0 => 1.0 / (1.0 + t),
                    Equation::PureAdvection => (-g).exp(),
                    Equation::AdvectionDiffusion if nu > 1.0 => (1.0 + t).sqrt() * (-g).exp(),
                    Equation::AdvectionDiffusion if nu == 1.0 => (1.0 + t).sqrt(),
                    Equation::AdvectionDiffusion => (1.0 + t).powf(1.5) * (-g).exp(),
                    Equation::PureDiffusion => (1.0 + t).sqrt(),
                };
                base * (1.0 + 0.01 * (1.0 + t).ln().sin())
            })
            .collect()
    }

    #[test]
    fn nine_chart_cells() {
        let t = log_sample_times(1e4, 64);
        for eq in [Equation::PureAdvection, Equation::AdvectionDiffusion, Equation::PureDiffusion] {
            for nu in ["1/2", "1", "2"] {
                let nu = Rational::parse(nu).unwrap();
                let lam = synthetic(eq, nu.to_f64(), &t);
                let c = classify_lambda(&t, &lam, [0.5, 1.0]).unwrap();
                let cmp = compare_with_chart(eq, nu, c);
                assert!(cmp.matches, "{eq:?} nu={nu}: {cmp:?}");
            }
        }
    }

    #[test]
    fn finite_limit_reports_tail_mean() {
        let t = log_sample_times(100.0, 32);
        let lam: Vec<f64> = t.iter().map(|t| 0.5 + 0.1 / (1.0 + t)).collect();
        let c = classify_lambda(&t, &lam, [0.5, 1.0]).unwrap();
        assert_eq!(c.class, LimitClass::Finite);
        assert!((c.tail_mean - 0.5).abs() < 0.01);
    }
}
