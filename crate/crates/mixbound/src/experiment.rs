//! One configured run: simulate, fit, verify, classify, write artifacts.

use std::path::Path;

use mixbound_core::bounds::{
    assumption_check, eta_upper_curve, grad_upper_curve, heat_lower_curve, hm1_lower_curve, lambda_lower_curve,
    pure_advection_lambda_curve, pure_diffusion_lambda_curve, theta_lower_curve, theta_upper_curve, BoundCurve,
    BoundParams, Gate, Theorem,
};
use mixbound_core::decay_character::{estimate_decay_character, log_spaced, shell_profile};
use mixbound_core::fields::{analytic_decay_character, profile_grad_sup, sample_initial_data, InitialFamily};
use mixbound_core::solver::{run, NormSeries};
use mixbound_core::CoreError;
use serde::Serialize;

use crate::classify::{classify_lambda, compare_with_chart, ChartComparison};
use crate::config::{BoundKind, ExperimentConfig, Mode};
use crate::error::{HarnessError, Result};
use crate::fit::{fit_exponent, FitResult};
use crate::output::{csv_bytes, format_f64, series_column, write_atomic, write_series_csv};
use crate::verdict::{verify_bound, BoundVerdict, GateReport, VerifyOptions};

pub const SERIES_FILE: &str = "series.csv";
pub const REPORT_FILE: &str = "report.json";
pub const PLOT_FILE: &str = "plot_data.csv";

/// Columns fitted for every run.
const FIT_COLUMNS: [&str; 6] = ["l2", "T_l2", "eta_l2", "grad_l2", "invgrad_l2", "lambda"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssumptionReport {
    pub bound: BoundKind,
    pub holds: bool,
    pub gates: Vec<GateReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Flags {
    pub boundary_mass_breach: bool,
    pub max_boundary_mass: f64,
    pub truncation_sensitive: bool,
    pub steps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub config: ExperimentConfig,
    pub series: &'static str,
    pub plot_data: &'static str,
    pub r_star: f64,
    /// Gate evaluations made before the run.
    pub assumptions: Vec<AssumptionReport>,
    pub fits: Vec<FitResult>,
    pub verdicts: Vec<BoundVerdict>,
    pub classification: Option<ChartComparison>,
    pub flags: Flags,
}

impl Report {
    /// Every applicable verdict passed.
    pub fn verdicts_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.acceptable())
    }

    pub fn fit(&self, quantity: &str) -> Option<&FitResult> {
        self.fits.iter().find(|f| f.quantity == quantity)
    }

    pub fn verdict(&self, bound: BoundKind) -> Option<&BoundVerdict> {
        self.verdicts.iter().find(|v| v.bound == bound.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub report: Report,
    pub series: NormSeries,
}

fn theorem_of(kind: BoundKind) -> Option<Theorem> {
    Some(match kind {
        BoundKind::HeatLower => Theorem::HeatLower,
        BoundKind::ThetaLower => Theorem::ThetaLower,
        BoundKind::ThetaUpper => Theorem::ThetaUpper,
        BoundKind::EtaUpper => Theorem::EtaUpper,
        BoundKind::GradUpper => Theorem::GradUpper,
        BoundKind::Hm1Lower => Theorem::Hm1Lower,
        BoundKind::LambdaLower => Theorem::LambdaLower,
        BoundKind::PureAdvectionLambda | BoundKind::PureDiffusionLambda => return None,
    })
}

fn pre_run_assumptions(cfg: &ExperimentConfig, p: &BoundParams) -> Vec<AssumptionReport> {
    cfg.bounds
        .select
        .iter()
        .filter_map(|&kind| {
            theorem_of(kind).map(|th| {
                let v = assumption_check(p, th);
                AssumptionReport {
                    bound: kind,
                    holds: v.all_hold(),
                    gates: v.gates.iter().map(GateReport::from).collect(),
                }
            })
        })
        .collect()
}

/// Pure-advection curve with `C₀ = λ(0)`, gated on `A sup|∇V| = 1`.
fn pure_advection_curve(cfg: &ExperimentConfig, lambda0: f64) -> BoundCurve {
    let mut curve = pure_advection_lambda_curve(cfg.nu(), lambda0);
    let scale = cfg
        .velocity_spec()
        .map(|v| v.amplitude.abs() * profile_grad_sup(&v))
        .unwrap_or(0.0);
    curve.gates.push(Gate {
        name: "A sup|grad V| = 1",
        holds: (scale - 1.0).abs() <= 1e-6,
        margin: -(scale - 1.0).abs(),
    });
    curve
}

fn curve_for(kind: BoundKind, cfg: &ExperimentConfig, p: &BoundParams, s: &NormSeries) -> std::result::Result<BoundCurve, CoreError> {
    Ok(match kind {
        BoundKind::HeatLower => heat_lower_curve(p),
        BoundKind::ThetaLower => theta_lower_curve(p)?,
        BoundKind::ThetaUpper => theta_upper_curve(p),
        BoundKind::EtaUpper => eta_upper_curve(p),
        BoundKind::GradUpper => grad_upper_curve(p),
        BoundKind::Hm1Lower => hm1_lower_curve(p)?,
        BoundKind::LambdaLower => lambda_lower_curve(p)?,
        BoundKind::PureAdvectionLambda => pure_advection_curve(cfg, s.lambda[0]),
        BoundKind::PureDiffusionLambda => pure_diffusion_lambda_curve(1.0),
    })
}

/// Mode a bound belongs to; bounds selected for another mode are not
/// applicable.
fn bound_mode(kind: BoundKind) -> Option<Mode> {
    match kind {
        BoundKind::HeatLower => None,
        BoundKind::PureAdvectionLambda => Some(Mode::PureAdvection),
        BoundKind::PureDiffusionLambda => Some(Mode::Heat),
        _ => Some(Mode::AdvectionDiffusion),
    }
}

pub fn evaluate_bounds(cfg: &ExperimentConfig, s: &NormSeries) -> Vec<BoundVerdict> {
    let p = cfg.bound_params();
    cfg.bounds
        .select
        .iter()
        .map(|&kind| {
            let name = kind.as_str();
            if let Some(m) = bound_mode(kind).filter(|m| *m != cfg.mode) {
                let gate = Gate {
                    name: "mode",
                    holds: false,
                    margin: 0.0,
                };
                return BoundVerdict::not_applicable(name, "", &[gate], Some(format!("bound applies to {m} runs")));
            }
            let curve = match curve_for(kind, cfg, &p, s) {
                Ok(c) => c,
                Err(e) => {
                    let gates = theorem_of(kind).map(|th| assumption_check(&p, th).gates).unwrap_or_default();
                    return BoundVerdict::not_applicable(name, "", &gates, Some(e.to_string()));
                }
            };
            let column = series_column(s, curve.quantity.column()).unwrap_or(&s.l2);
            let opts = if kind == BoundKind::PureAdvectionLambda {
                VerifyOptions::fixed([0.0, 1.0], cfg.fit.tolerance, cfg.bounds.slack)
            } else {
                VerifyOptions::fit(cfg.fit.window, cfg.fit.tolerance, cfg.bounds.slack)
            };
            verify_bound(name, &s.t, column, &curve, &opts)
        })
        .collect()
}

fn fits(cfg: &ExperimentConfig, s: &NormSeries) -> Vec<FitResult> {
    FIT_COLUMNS
        .iter()
        .filter_map(|c| {
            let y = series_column(s, c)?;
            fit_exponent(c, &s.t, y, cfg.fit.window).ok()
        })
        .collect()
}

fn plot_data(s: &NormSeries, verdicts: &[BoundVerdict], curves: &[(String, BoundCurve)]) -> Result<Vec<u8>> {
    let mut header: Vec<String> = ["t", "l2", "T_l2", "eta_l2", "grad_l2", "invgrad_l2", "lambda"]
        .iter()
        .map(|c| c.to_string())
        .collect();
    let mut cols: Vec<Vec<f64>> = header[1..]
        .iter()
        .map(|c| series_column(s, c).map(|v| v.to_vec()).unwrap_or_default())
        .collect();
    for (name, curve) in curves {
        if let Some(c) = verdicts.iter().find(|v| &v.bound == name).and_then(|v| v.constant) {
            let fitted = curve.clone().with_constant(c);
            header.push(format!("bound_{name}"));
            cols.push(s.t.iter().map(|&t| fitted.evaluate(t)).collect());
        }
    }
    let rows: Vec<Vec<f64>> = (0..s.len())
        .map(|i| {
            let mut r = vec![s.t[i]];
            r.extend(cols.iter().map(|c| c[i]));
            r
        })
        .collect();
    csv_bytes(&header, &rows)
}

/// Runs `cfg` and, if `out` is given, writes the series CSV, plot data and
/// report JSON there.
pub fn run_experiment(cfg: &ExperimentConfig, out: Option<&Path>) -> Result<Outcome> {
    let p = cfg.bound_params();
    let assumptions = pre_run_assumptions(cfg, &p);
    let series = run(&cfg.run_config()).map_err(|e| HarnessError::core(format!("run `{}`", cfg.name), e))?;

    let verdicts = evaluate_bounds(cfg, &series);
    let classification = classify_lambda(&series.t, &series.lambda, cfg.fit.window)
        .ok()
        .map(|c| compare_with_chart(cfg.mode.equation(), cfg.nu(), c));
    let report = Report {
        config: cfg.clone(),
        series: SERIES_FILE,
        plot_data: PLOT_FILE,
        r_star: p.r_star,
        assumptions,
        fits: fits(cfg, &series),
        verdicts,
        classification,
        flags: Flags {
            boundary_mass_breach: series.boundary_flagged,
            max_boundary_mass: series.boundary_mass.iter().copied().fold(0.0, f64::max),
            truncation_sensitive: series.truncation_sensitive,
            steps: series.steps,
        },
    };

    if let Some(dir) = out {
        write_series_csv(&dir.join(SERIES_FILE), &series)?;
        let curves: Vec<(String, BoundCurve)> = cfg
            .bounds
            .select
            .iter()
            .filter_map(|&k| curve_for(k, cfg, &p, &series).ok().map(|c| (k.as_str().to_string(), c)))
            .collect();
        write_atomic(&dir.join(PLOT_FILE), &plot_data(&series, &report.verdicts, &curves)?)?;
        write_atomic(&dir.join(REPORT_FILE), &report_json(&report)?)?;
    }
    Ok(Outcome { report, series })
}

pub fn report_json<T: Serialize>(report: &T) -> Result<Vec<u8>> {
    let mut v = serde_json::to_vec_pretty(report)?;
    v.push(b'\n');
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayReport {
    pub name: String,
    pub r_star: f64,
    pub stderr: f64,
    pub analytic: f64,
    pub window: [f64; 2],
    pub shells: usize,
    pub dropped_zero: usize,
    pub admissible: bool,
    pub non_power_law: bool,
}

/// Default shell window: `[4 dxi, 0.4/σ]` for Gaussian-type data,
/// `[4 dxi, cutoff/2]` for power-law data.
pub fn decay_window(cfg: &ExperimentConfig) -> [f64; 2] {
    let g = cfg.grid();
    let lo = cfg.decay.delta_min.unwrap_or(4.0 * g.dxi());
    let hi = cfg.decay.delta_max.unwrap_or(match cfg.initial_spec().family {
        InitialFamily::FourierPowerLaw { cutoff, .. } => cutoff / 2.0,
        _ => 0.4 / cfg.initial.sigma,
    });
    [lo, hi]
}

/// Estimates r* of the configured initial data.
pub fn decay_character(cfg: &ExperimentConfig) -> Result<DecayReport> {
    let g = cfg.grid();
    let spec = cfg.initial_spec();
    let f = sample_initial_data(&spec, &g).map_err(|e| HarnessError::core("initial data", e))?;
    let [lo, hi] = decay_window(cfg);
    if !(hi > lo) {
        return Err(HarnessError::Config {
            line: 0,
            field: "decay.delta_max".into(),
            message: format!("shell window [{lo}, {hi}] is empty; enlarge the box or set delta_min/delta_max"),
        });
    }
    let profile = shell_profile(&f, &log_spaced(lo, hi, cfg.decay.shells)).map_err(|e| HarnessError::core("shells", e))?;
    let est = estimate_decay_character(&profile, g.d()).map_err(|e| HarnessError::core("decay character", e))?;
    Ok(DecayReport {
        name: cfg.name.clone(),
        r_star: est.r_star,
        stderr: est.stderr,
        analytic: analytic_decay_character(&spec),
        window: [est.window.0, est.window.1],
        shells: est.shells.len(),
        dropped_zero: est.dropped_zero,
        admissible: est.admissible,
        non_power_law: est.non_power_law,
    })
}

/// One-line summary of a fit.
pub fn describe_fit(f: &FitResult) -> String {
    format!(
        "{:<11} slope {:>9.5} ± {:.5}  C {}  t in [{}, {}] ({} points)",
        f.quantity,
        f.slope,
        f.stderr,
        format_f64(f.constant),
        f.window[0],
        f.window[1],
        f.points
    )
}
