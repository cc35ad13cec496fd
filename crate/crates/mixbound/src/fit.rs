//! Power-law fits `y ≈ C (1+t)^slope` in log-log space.

use mixbound_core::regression::fit_line;
use serde::Serialize;

use crate::error::{HarnessError, Result};

/// Fewest samples accepted inside a fit window.
pub const MIN_FIT_POINTS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub quantity: String,
    pub slope: f64,
    pub stderr: f64,
    /// Sampled times bounding the points used.
    pub window: [f64; 2],
    /// `C` of `C (1+t)^slope`.
    pub constant: f64,
    pub points: usize,
}

/// Indices of samples whose `log(1+t)` lies in the `[w0, w1]` fraction of
/// the sampled `log(1+t)` range.
pub fn window_indices(t: &[f64], window: [f64; 2]) -> Result<Vec<usize>> {
    crate::config::check_window(window).map_err(HarnessError::Fit)?;
    if t.is_empty() {
        return Err(HarnessError::Fit("no samples".into()));
    }
    let u: Vec<f64> = t.iter().map(|t| t.ln_1p()).collect();
    let (lo, hi) = (u[0], u[u.len() - 1]);
    if !(hi > lo) {
        return Err(HarnessError::Fit("sample times do not span an interval".into()));
    }
    let a = lo + window[0] * (hi - lo);
    let b = lo + window[1] * (hi - lo);
    let eps = 1e-12 * (hi - lo);
    Ok((0..t.len()).filter(|&i| u[i] >= a - eps && u[i] <= b + eps).collect())
}

/// Fits `y ≈ C(1+t)^slope` over a window of log-time fractions.
pub fn fit_exponent(quantity: &str, t: &[f64], y: &[f64], window: [f64; 2]) -> Result<FitResult> {
    if t.len() != y.len() {
        return Err(HarnessError::Fit(format!("{} times but {} values", t.len(), y.len())));
    }
    let idx = window_indices(t, window)?;
    if idx.len() < MIN_FIT_POINTS {
        return Err(HarnessError::Fit(format!(
            "{quantity}: {} points in window [{}, {}], need {MIN_FIT_POINTS}",
            idx.len(),
            window[0],
            window[1]
        )));
    }
    if let Some(&i) = idx.iter().find(|&&i| !(y[i] > 0.0)) {
        return Err(HarnessError::Fit(format!(
            "{quantity}: nonpositive value {} at t = {}",
            y[i], t[i]
        )));
    }
    let x: Vec<f64> = idx.iter().map(|&i| t[i].ln_1p()).collect();
    let ly: Vec<f64> = idx.iter().map(|&i| y[i].ln()).collect();
    let line = fit_line(&x, &ly).map_err(|e| HarnessError::Fit(e.to_string()))?;
    Ok(FitResult {
        quantity: quantity.to_string(),
        slope: line.slope,
        stderr: line.slope_stderr,
        window: [t[idx[0]], t[idx[idx.len() - 1]]],
        constant: line.intercept.exp(),
        points: idx.len(),
    })
}
