//! Three equations × several ν, classified against the chart.
//!
//! ```text
//! [sweep]
//! name = chart_sweep
//! nus = 1/2 1 2
//! samples = 48
//! window = 0.5 1.0
//!
//! [pure_advection]          # one section per equation, all keys optional
//! n = 256
//! half_width = 8
//! t_final = 100
//! sigma = 1                 # dipole width
//! amplitude = 1             # velocity amplitude
//! width = 1                 # velocity width
//! c_cfl = 0.5
//!
//! [advection_diffusion]
//! kappa = 0.01
//!
//! [pure_diffusion]
//! half_width = 64
//! kappa = 0.5
//! ```

use std::path::{Path, PathBuf};

use mixbound_core::bounds::Equation;
use mixbound_core::spectral::Grid;
use mixbound_core::Rational;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::{compare_with_chart, ChartComparison};
use crate::config::{
    check_window, default_tolerance, BoundKind, BoundsConfig, DecayConfig, ExperimentConfig, FitConfig, GridConfig,
    InitialConfig, InitialKind, Mode, Spacing, TimeConfig, VelocityConfig, VelocityKind, DEFAULT_SLACK,
    DEFAULT_WINDOW,
};
use crate::error::{HarnessError, Result};
use crate::experiment::{report_json, run_experiment, Report};
use crate::ini::{Ini, Reader};
use crate::output::write_atomic;

pub const THREADS_ENV: &str = "MIXBOUND_THREADS";
pub const CHART_FILE: &str = "chart.json";

const SECTION_KEYS: [&str; 9] = [
    "n", "half_width", "kappa", "t_final", "sigma", "amplitude", "width", "c_cfl", "samples",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub name: String,
    pub output: Option<PathBuf>,
    pub runs: Vec<ExperimentConfig>,
    /// Chart cell of each run.
    pub cells: Vec<(Equation, Rational)>,
}

fn mode_of(eq: Equation) -> Mode {
    match eq {
        Equation::PureAdvection => Mode::PureAdvection,
        Equation::AdvectionDiffusion => Mode::AdvectionDiffusion,
        Equation::PureDiffusion => Mode::Heat,
    }
}

fn nu_tag(nu: Rational) -> String {
    nu.to_string().replace('/', "_")
}

impl SweepConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("chart_sweep");
        Self::parse(&text, stem)
    }

    pub fn parse(text: &str, default_name: &str) -> Result<Self> {
        let ini = Ini::parse(text)?;
        ini.expect_sections(&["sweep", "pure_advection", "advection_diffusion", "pure_diffusion"])?;
        let s = Reader::new(&ini, "sweep");
        s.expect_keys(&["name", "nus", "samples", "window", "output"])?;
        let name = s.raw("name").unwrap_or(default_name).to_string();
        let nus = s.rational_list("nus")?.unwrap_or_else(|| {
            ["1/2", "1", "2"].iter().map(|v| Rational::parse(v).expect("literal")).collect()
        });
        if nus.is_empty() || nus.iter().any(|n| *n < Rational::ZERO) {
            return Err(s.error("nus", "need one or more non-negative rationals"));
        }
        let samples: usize = s.get_or("samples", 48)?;
        let window = match s.list::<f64>("window")? {
            Some(w) if w.len() == 2 => [w[0], w[1]],
            Some(_) => return Err(s.error("window", "expected two fractions")),
            None => DEFAULT_WINDOW,
        };
        check_window(window).map_err(|m| s.error("window", m))?;

        let mut runs = Vec::new();
        let mut cells = Vec::new();
        for eq in [Equation::PureAdvection, Equation::AdvectionDiffusion, Equation::PureDiffusion] {
            let r = Reader::new(&ini, eq.label_key());
            r.expect_keys(&SECTION_KEYS)?;
            let mode = mode_of(eq);
            let grid = GridConfig {
                d: 2,
                n: r.get_or("n", 256)?,
                half_width: r.get_or("half_width", if eq == Equation::PureDiffusion { 64.0 } else { 8.0 })?,
            };
            Grid::new(grid.d, grid.n, grid.half_width).map_err(|e| r.error("n", e.to_string()))?;
            let kappa: f64 = match eq {
                Equation::PureAdvection => 0.0,
                Equation::AdvectionDiffusion => r.get_or("kappa", 0.01)?,
                Equation::PureDiffusion => r.get_or("kappa", 0.5)?,
            };
            if eq != Equation::PureAdvection && !(kappa > 0.0) {
                return Err(r.error("kappa", "must be positive"));
            }
            let time = TimeConfig {
                kappa,
                t_final: r.get_or("t_final", 100.0)?,
                samples: r.get_or("samples", samples)?,
                spacing: Spacing::Log,
                c_cfl: r.get_or("c_cfl", 0.5)?,
                dealias: true,
            };
            if !(time.t_final > 0.0) {
                return Err(r.error("t_final", "must be positive"));
            }
            if !(time.c_cfl > 0.0 && time.c_cfl <= 1.0) {
                return Err(r.error("c_cfl", "must lie in (0, 1]"));
            }
            let initial = InitialConfig {
                family: InitialKind::Dipole,
                sigma: r.get_or("sigma", 1.0)?,
                center: vec![0.0; 2],
                amplitude: 1.0,
                exponent: 0.0,
                cutoff: 1.0,
                taper_width: 0.5,
                seed: 0,
            };
            let amplitude: f64 = r.get_or("amplitude", 1.0)?;
            let width: f64 = r.get_or("width", 1.0)?;
            let select = match eq {
                Equation::PureAdvection => vec![BoundKind::PureAdvectionLambda],
                Equation::AdvectionDiffusion => vec![BoundKind::LambdaLower],
                Equation::PureDiffusion => vec![BoundKind::PureDiffusionLambda],
            };
            for &nu in &nus {
                cells.push((eq, nu));
                let run_name = format!("{}_nu{}", eq.label_key(), nu_tag(nu));
                // the heat equation ignores ν; its runs repeat per chart cell
                let nu = if eq == Equation::PureDiffusion { None } else { Some(nu) };
                runs.push(ExperimentConfig {
                    name: run_name,
                    mode,
                    output: None,
                    grid: grid.clone(),
                    time: time.clone(),
                    initial: initial.clone(),
                    velocity: nu.map(|nu| VelocityConfig {
                        family: VelocityKind::ModifiedShear,
                        nu,
                        amplitude,
                        width,
                    }),
                    fit: FitConfig {
                        window,
                        tolerance: default_tolerance(mode, 2),
                    },
                    bounds: BoundsConfig {
                        select: select.clone(),
                        r_star: None,
                        m: None,
                        slack: DEFAULT_SLACK,
                    },
                    decay: DecayConfig {
                        delta_min: None,
                        delta_max: None,
                        shells: 16,
                    },
                });
            }
        }
        Ok(SweepConfig {
            name,
            output: s.raw("output").map(PathBuf::from),
            runs,
            cells,
        })
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output
            .clone()
            .unwrap_or_else(|| PathBuf::from("out").join(&self.name))
    }
}

trait LabelKey {
    fn label_key(&self) -> &'static str;
}

impl LabelKey for Equation {
    fn label_key(&self) -> &'static str {
        match self {
            Equation::PureAdvection => "pure_advection",
            Equation::AdvectionDiffusion => "advection_diffusion",
            Equation::PureDiffusion => "pure_diffusion",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartCell {
    pub run: String,
    pub comparison: Option<ChartComparison>,
    pub verdicts_pass: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChartReport {
    pub name: String,
    pub cells: Vec<ChartCell>,
    pub matched: usize,
    pub total: usize,
}

impl ChartReport {
    pub fn all_match(&self) -> bool {
        self.matched == self.total && self.cells.iter().all(|c| c.error.is_none())
    }

    pub fn table(&self) -> String {
        let mut out = format!("{:<30} {:<10} {:<10} {:>9}  ok\n", "run", "chart", "observed", "slope");
        for c in &self.cells {
            match &c.comparison {
                Some(cmp) => out.push_str(&format!(
                    "{:<30} {:<10} {:<10} {:>9.4}  {}\n",
                    c.run,
                    cmp.expected.label(),
                    cmp.observed.class.label(),
                    cmp.observed.fit.slope,
                    if cmp.matches { "yes" } else { "NO" }
                )),
                None => out.push_str(&format!(
                    "{:<30} error: {}\n",
                    c.run,
                    c.error.as_deref().unwrap_or("no classification")
                )),
            }
        }
        out.push_str(&format!("{}/{} cells match\n", self.matched, self.total));
        out
    }
}

/// Worker count from `MIXBOUND_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Runs every configuration of the sweep concurrently and reduces the
/// results into one table. Each run writes into its own subdirectory.
pub fn run_sweep(sweep: &SweepConfig, out: Option<&Path>) -> Result<(ChartReport, Vec<Report>)> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::Fit(format!("thread pool: {e}")))?;
    let results: Vec<Result<Report>> = pool.install(|| {
        sweep
            .runs
            .par_iter()
            .map(|cfg| {
                let dir = out.map(|o| o.join(&cfg.name));
                run_experiment(cfg, dir.as_deref()).map(|o| o.report)
            })
            .collect()
    });

    let mut cells = Vec::with_capacity(results.len());
    let mut reports = Vec::new();
    for ((cfg, &(eq, nu)), res) in sweep.runs.iter().zip(&sweep.cells).zip(results) {
        match res {
            Ok(r) => {
                cells.push(ChartCell {
                    run: cfg.name.clone(),
                    comparison: r
                        .classification
                        .as_ref()
                        .map(|c| compare_with_chart(eq, nu, c.observed.clone())),
                    verdicts_pass: r.verdicts_pass(),
                    error: None,
                });
                reports.push(r);
            }
            Err(e) => cells.push(ChartCell {
                run: cfg.name.clone(),
                comparison: None,
                verdicts_pass: false,
                error: Some(e.to_string()),
            }),
        }
    }
    let matched = cells
        .iter()
        .filter(|c| c.comparison.as_ref().is_some_and(|m| m.matches))
        .count();
    let report = ChartReport {
        name: sweep.name.clone(),
        total: cells.len(),
        matched,
        cells,
    };
    if let Some(dir) = out {
        write_atomic(&dir.join(CHART_FILE), &report_json(&report)?)?;
    }
    Ok((report, reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_sweep_has_nine_runs() {
        let s = SweepConfig::parse("[sweep]\n", "chart").unwrap();
        assert_eq!(s.runs.len(), 9);
        assert_eq!(s.runs[0].name, "pure_advection_nu1_2");
        assert_eq!(s.runs[0].time.kappa, 0.0);
        assert_eq!(s.runs[8].mode, Mode::Heat);
        assert!(s.runs[8].velocity.is_none());
        assert_eq!(s.cells[8], (Equation::PureDiffusion, Rational::integer(2)));
    }

    #[test]
    fn sections_override_defaults() {
        let s = SweepConfig::parse("[sweep]\nnus = 2\n[advection_diffusion]\nkappa = 0.05\nn = 64\n", "c").unwrap();
        assert_eq!(s.runs.len(), 3);
        assert_eq!(s.runs[2].name, "pure_diffusion_nu2");
        assert_eq!(s.runs[1].time.kappa, 0.05);
        assert_eq!(s.runs[1].grid.n, 64);
        assert!(SweepConfig::parse("[sweep]\n[advection_diffusion]\nkappa = 0\n", "c").is_err());
        assert!(SweepConfig::parse("[sweep]\n[pure_diffusion]\ncolour = red\n", "c").is_err());
    }
}
