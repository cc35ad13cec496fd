//! Observed series against decay-bound curves.

use mixbound_core::bounds::{BoundCurve, Direction, Gate};
use mixbound_core::regression::fit_intercept;
use serde::Serialize;

use crate::fit::{window_indices, MIN_FIT_POINTS};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstantMode {
    /// Fit `C` in log space on the tail with the theoretical exponent.
    Fit,
    /// Use the curve's own constant.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub mode: ConstantMode,
    pub window: [f64; 2],
    pub tolerance: f64,
    pub slack: f64,
}

impl VerifyOptions {
    pub fn fit(window: [f64; 2], tolerance: f64, slack: f64) -> Self {
        VerifyOptions {
            mode: ConstantMode::Fit,
            window,
            tolerance,
            slack,
        }
    }

    pub fn fixed(window: [f64; 2], tolerance: f64, slack: f64) -> Self {
        VerifyOptions {
            mode: ConstantMode::Fixed,
            ..Self::fit(window, tolerance, slack)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GateReport {
    pub name: &'static str,
    pub holds: bool,
    pub margin: f64,
}

impl From<&Gate> for GateReport {
    fn from(g: &Gate) -> Self {
        GateReport {
            name: g.name,
            holds: g.holds,
            margin: g.margin,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundVerdict {
    pub bound: String,
    pub quantity: String,
    pub direction: &'static str,
    pub applicable: bool,
    pub failed_gates: Vec<&'static str>,
    pub gates: Vec<GateReport>,
    /// Exponent of `(1+t)` in the curve.
    pub expected_exponent: Option<f64>,
    /// Fitted exponent of the observed series with the curve's exponential
    /// factor divided out.
    pub observed_exponent: Option<f64>,
    pub exponent_stderr: Option<f64>,
    pub tolerance: f64,
    /// Observed exponent on the admissible side of the expected one, within
    /// `tolerance`.
    pub exponent_ok: bool,
    /// `|observed - expected| <= tolerance`.
    pub sharp: bool,
    pub constant: Option<f64>,
    pub t_min: f64,
    pub checked_points: usize,
    pub violations: usize,
    pub violation_fraction: f64,
    pub slack: f64,
    pub inequality_ok: bool,
    pub pass: bool,
    pub note: Option<String>,
}

impl BoundVerdict {
    /// Verdict for a bound whose validity gates are unmet.
    pub fn not_applicable(bound: &str, quantity: &str, gates: &[Gate], note: Option<String>) -> Self {
        BoundVerdict {
            bound: bound.to_string(),
            quantity: quantity.to_string(),
            direction: "",
            applicable: false,
            failed_gates: gates.iter().filter(|g| !g.holds).map(|g| g.name).collect(),
            gates: gates.iter().map(GateReport::from).collect(),
            expected_exponent: None,
            observed_exponent: None,
            exponent_stderr: None,
            tolerance: 0.0,
            exponent_ok: false,
            sharp: false,
            constant: None,
            t_min: 0.0,
            checked_points: 0,
            violations: 0,
            violation_fraction: 0.0,
            slack: 0.0,
            inequality_ok: false,
            pass: false,
            note,
        }
    }

    /// Pass, or not applicable: neither counts as a failure.
    pub fn acceptable(&self) -> bool {
        !self.applicable || self.pass
    }
}

/// Applies `curve` to the observed series `(t, y)`.
///
/// The exponent is fitted over the window after dividing out `κ^q e^{sG}`;
/// with [`ConstantMode::Fit`] the constant is the log-space least-squares
/// intercept at the theoretical exponent over the same window. The
/// inequality is checked, with relative slack, at every window sample
/// with `t >= t_min`.
pub fn verify_bound(bound: &str, t: &[f64], y: &[f64], curve: &BoundCurve, opts: &VerifyOptions) -> BoundVerdict {
    let VerifyOptions {
        mode,
        window,
        tolerance,
        slack,
    } = *opts;
    let quantity = curve.quantity.column();
    if !curve.gates_hold() {
        return BoundVerdict::not_applicable(bound, quantity, &curve.gates, None);
    }
    let mut v = BoundVerdict::not_applicable(bound, quantity, &curve.gates, None);
    v.applicable = true;
    v.direction = match curve.direction {
        Direction::Lower => "lower",
        Direction::Upper => "upper",
    };
    v.expected_exponent = Some(curve.time_power);
    v.tolerance = tolerance;
    v.slack = slack;
    v.t_min = curve.t_min;

    let idx = match window_indices(t, window) {
        Ok(idx) if idx.len() >= MIN_FIT_POINTS => idx,
        Ok(idx) => {
            v.note = Some(format!("{} samples in the fit window, need {MIN_FIT_POINTS}", idx.len()));
            return v;
        }
        Err(e) => {
            v.note = Some(e.to_string());
            return v;
        }
    };
    if let Some(&i) = idx.iter().find(|&&i| !(y[i] > 0.0)) {
        v.note = Some(format!("nonpositive {quantity} = {} at t = {}", y[i], t[i]));
        return v;
    }
    let x: Vec<f64> = idx.iter().map(|&i| t[i].ln_1p()).collect();
    // log of y / (κ^q e^{sG})
    let kq = curve.kappa_factor().ln();
    let ly: Vec<f64> = idx
        .iter()
        .map(|&i| y[i].ln() - kq - curve.log_exp_factor(t[i]))
        .collect();
    match mixbound_core::regression::fit_line(&x, &ly) {
        Ok(line) => {
            v.observed_exponent = Some(line.slope);
            v.exponent_stderr = Some(line.slope_stderr);
            let diff = line.slope - curve.time_power;
            v.sharp = diff.abs() <= tolerance;
            v.exponent_ok = match curve.direction {
                Direction::Lower => diff >= -tolerance,
                Direction::Upper => diff <= tolerance,
            };
        }
        Err(e) => {
            v.note = Some(e.to_string());
            return v;
        }
    }
    let c = match mode {
        ConstantMode::Fixed => curve.c,
        ConstantMode::Fit => match fit_intercept(&x, &ly, curve.time_power) {
            Ok(b) => b.exp(),
            Err(e) => {
                v.note = Some(e.to_string());
                return v;
            }
        },
    };
    v.constant = Some(c);
    let fitted = curve.clone().with_constant(c);
    for &i in &idx {
        if t[i] < curve.t_min {
            continue;
        }
        v.checked_points += 1;
        let b = fitted.evaluate(t[i]);
        let bad = match curve.direction {
            Direction::Lower => y[i] < b * (1.0 - slack),
            Direction::Upper => y[i] > b * (1.0 + slack),
        };
        if bad {
            v.violations += 1;
        }
    }
    if v.checked_points > 0 {
        v.violation_fraction = v.violations as f64 / v.checked_points as f64;
    } else {
        v.note = Some(format!(
            "no samples beyond t_min = {}; inequality holds vacuously",
            curve.t_min
        ));
    }
    v.inequality_ok = v.violations == 0;
    v.pass = v.exponent_ok && v.inequality_ok;
    v
}
