//! Experiment configuration.
//!
//! ```text
//! [experiment]
//! name = ad_shear_nu2_2d
//! mode = advection_diffusion      # heat | advection_diffusion | pure_advection
//! output = out/ad_shear_nu2_2d    # optional
//!
//! [grid]
//! d = 2
//! n = 256
//! half_width = 50
//!
//! [time]
//! kappa = 0.1
//! t_final = 300
//! samples = 64                    # log-spaced in [1, t_final], plus t = 0
//! spacing = log                   # log | uniform
//! c_cfl = 0.5
//! dealias = true
//!
//! [initial]
//! family = gaussian               # gaussian | dipole | power_law
//! sigma = 1
//! center = 1.5 0
//! amplitude = 1
//! exponent = 0.5                  # power_law only
//! cutoff = 1
//! taper_width = 0.5
//! seed = 7
//!
//! [velocity]
//! family = modified_shear         # modified_shear | gaussian_swirl3d
//! nu = 2                          # rational, e.g. 1/2
//! amplitude = 1
//! width = 1
//!
//! [fit]
//! window = 0.5 1.0                # fractions of log(1+t) over the samples
//! tolerance = 0.07
//!
//! [bounds]
//! select = theta_lower eta_upper
//! r_star = 0                      # defaults to the analytic value of the data
//! m = 4                           # defaults to d + 2
//! slack = 0.02
//!
//! [decay]
//! delta_min = 0.1                 # defaults to 4 dxi
//! delta_max = 0.4                 # defaults to 0.4/sigma or cutoff/2
//! shells = 16
//! ```

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use mixbound_core::bounds::{BoundParams, Equation};
use mixbound_core::fields::{
    analytic_decay_character, velocity_rates, InitialDataSpec, InitialFamily, VelocityFieldSpec,
};
use mixbound_core::solver::{log_sample_times, uniform_sample_times, RunConfig};
use mixbound_core::spectral::Grid;
use mixbound_core::Rational;
use serde::{Serialize, Serializer};

use crate::error::{HarnessError, Result};
use crate::ini::{Ini, Reader};

fn display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

fn display_opt<T: fmt::Display, S: Serializer>(v: &Option<T>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.collect_str(v),
        None => s.serialize_none(),
    }
}

macro_rules! keyword_enum {
    ($name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl FromStr for $name {
            type Err = String;
            fn from_str(s: &str) -> std::result::Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)+
                    _ => Err(format!(
                        "expected one of: {}",
                        [$($text),+].join(", ")
                    )),
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.serialize_str(self.as_str())
            }
        }
    };
}

keyword_enum!(Mode {
    Heat => "heat",
    AdvectionDiffusion => "advection_diffusion",
    PureAdvection => "pure_advection",
});

keyword_enum!(Spacing {
    Log => "log",
    Uniform => "uniform",
});

keyword_enum!(InitialKind {
    Gaussian => "gaussian",
    Dipole => "dipole",
    PowerLaw => "power_law",
});

keyword_enum!(VelocityKind {
    ModifiedShear => "modified_shear",
    GaussianSwirl3d => "gaussian_swirl3d",
});

keyword_enum!(BoundKind {
    HeatLower => "heat_lower",
    ThetaLower => "theta_lower",
    ThetaUpper => "theta_upper",
    EtaUpper => "eta_upper",
    GradUpper => "grad_upper",
    Hm1Lower => "hm1_lower",
    LambdaLower => "lambda_lower",
    PureAdvectionLambda => "pure_advection_lambda",
    PureDiffusionLambda => "pure_diffusion_lambda",
});

impl Mode {
    pub fn equation(&self) -> Equation {
        match self {
            Mode::Heat => Equation::PureDiffusion,
            Mode::AdvectionDiffusion => Equation::AdvectionDiffusion,
            Mode::PureAdvection => Equation::PureAdvection,
        }
    }

    pub fn default_bounds(&self) -> Vec<BoundKind> {
        match self {
            Mode::Heat => vec![BoundKind::HeatLower, BoundKind::PureDiffusionLambda],
            Mode::AdvectionDiffusion => vec![
                BoundKind::ThetaLower,
                BoundKind::ThetaUpper,
                BoundKind::EtaUpper,
                BoundKind::GradUpper,
                BoundKind::Hm1Lower,
                BoundKind::LambdaLower,
            ],
            Mode::PureAdvection => vec![BoundKind::PureAdvectionLambda],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridConfig {
    pub d: usize,
    pub n: usize,
    pub half_width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeConfig {
    pub kappa: f64,
    pub t_final: f64,
    pub samples: usize,
    pub spacing: Spacing,
    pub c_cfl: f64,
    pub dealias: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InitialConfig {
    pub family: InitialKind,
    pub sigma: f64,
    pub center: Vec<f64>,
    pub amplitude: f64,
    pub exponent: f64,
    pub cutoff: f64,
    pub taper_width: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityConfig {
    pub family: VelocityKind,
    #[serde(serialize_with = "display")]
    pub nu: Rational,
    pub amplitude: f64,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitConfig {
    pub window: [f64; 2],
    pub tolerance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsConfig {
    pub select: Vec<BoundKind>,
    pub r_star: Option<f64>,
    #[serde(serialize_with = "display_opt")]
    pub m: Option<Rational>,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecayConfig {
    pub delta_min: Option<f64>,
    pub delta_max: Option<f64>,
    pub shells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub name: String,
    pub mode: Mode,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub grid: GridConfig,
    pub time: TimeConfig,
    pub initial: InitialConfig,
    pub velocity: Option<VelocityConfig>,
    pub fit: FitConfig,
    pub bounds: BoundsConfig,
    pub decay: DecayConfig,
}

pub const DEFAULT_WINDOW: [f64; 2] = [0.5, 1.0];
pub const DEFAULT_SLACK: f64 = 0.02;

/// Exponent tolerance: 0.05 for 2-d heat runs, 0.07 otherwise.
pub fn default_tolerance(mode: Mode, d: usize) -> f64 {
    if mode == Mode::Heat && d == 2 {
        0.05
    } else {
        0.07
    }
}

pub(crate) fn check_window(window: [f64; 2]) -> std::result::Result<(), String> {
    let [w0, w1] = window;
    if !(w0 >= 0.0 && w0 < w1 && w1 <= 1.0) {
        return Err(format!("window [{w0}, {w1}] must satisfy 0 <= w0 < w1 <= 1"));
    }
    Ok(())
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("experiment");
        Self::parse(&text, stem)
    }

    /// Parses `text`; `default_name` is used when `[experiment]` has no name.
    pub fn parse(text: &str, default_name: &str) -> Result<Self> {
        let ini = Ini::parse(text)?;
        ini.expect_sections(&[
            "experiment", "grid", "time", "initial", "velocity", "fit", "bounds", "decay",
        ])?;

        let exp = Reader::new(&ini, "experiment");
        exp.expect_keys(&["name", "mode", "output"])?;
        let mode: Mode = exp.get("mode")?;
        let name = exp.raw("name").unwrap_or(default_name).to_string();
        let output = exp.raw("output").map(PathBuf::from);

        let g = Reader::new(&ini, "grid");
        g.expect_keys(&["d", "n", "half_width"])?;
        let grid = GridConfig {
            d: g.get("d")?,
            n: g.get("n")?,
            half_width: g.get("half_width")?,
        };
        Grid::new(grid.d, grid.n, grid.half_width).map_err(|e| g.error("n", e.to_string()))?;

        let t = Reader::new(&ini, "time");
        t.expect_keys(&["kappa", "t_final", "samples", "spacing", "c_cfl", "dealias"])?;
        let kappa: f64 = match mode {
            Mode::PureAdvection => t.get_or("kappa", 0.0)?,
            _ => t.get("kappa")?,
        };
        let time = TimeConfig {
            kappa,
            t_final: t.get("t_final")?,
            samples: t.get_or("samples", 64)?,
            spacing: t.get_or("spacing", Spacing::Log)?,
            c_cfl: t.get_or("c_cfl", 0.5)?,
            dealias: t.get_or("dealias", true)?,
        };
        match mode {
            Mode::PureAdvection if kappa != 0.0 => return Err(t.error("kappa", "pure_advection requires kappa = 0")),
            Mode::Heat | Mode::AdvectionDiffusion if !(kappa > 0.0) => {
                return Err(t.error("kappa", "must be positive"))
            }
            _ => {}
        }
        if !(time.t_final > 0.0 && time.t_final.is_finite()) {
            return Err(t.error("t_final", "must be positive"));
        }
        if time.samples < 3 {
            return Err(t.error("samples", "need at least 3 samples"));
        }
        if !(time.c_cfl > 0.0 && time.c_cfl <= 1.0) {
            return Err(t.error("c_cfl", "must lie in (0, 1]"));
        }

        let i = Reader::new(&ini, "initial");
        i.expect_keys(&[
            "family", "sigma", "center", "amplitude", "exponent", "cutoff", "taper_width", "seed",
        ])?;
        let family: InitialKind = i.get("family")?;
        let center = i.list::<f64>("center")?.unwrap_or_else(|| vec![0.0; grid.d]);
        if center.len() != grid.d {
            return Err(i.error("center", format!("expected {} coordinates", grid.d)));
        }
        let initial = InitialConfig {
            family,
            sigma: i.get_or("sigma", 1.0)?,
            center,
            amplitude: i.get_or("amplitude", 1.0)?,
            exponent: if family == InitialKind::PowerLaw { i.get("exponent")? } else { i.get_or("exponent", 0.0)? },
            cutoff: i.get_or("cutoff", 1.0)?,
            taper_width: i.get_or("taper_width", 0.5)?,
            seed: i.get_or("seed", 0)?,
        };
        if !(initial.sigma > 0.0) {
            return Err(i.error("sigma", "must be positive"));
        }

        let v = Reader::new(&ini, "velocity");
        v.expect_keys(&["family", "nu", "amplitude", "width"])?;
        let velocity = if v.present() {
            if mode == Mode::Heat {
                return Err(v.error("family", "heat mode takes no velocity"));
            }
            let vc = VelocityConfig {
                family: v.get("family")?,
                nu: v.rational("nu")?.ok_or_else(|| HarnessError::MissingField {
                    section: "velocity".into(),
                    field: "nu".into(),
                })?,
                amplitude: v.get_or("amplitude", 1.0)?,
                width: v.get_or("width", 1.0)?,
            };
            if vc.nu < Rational::ZERO {
                return Err(v.error("nu", "must be non-negative"));
            }
            if !(vc.width > 0.0) {
                return Err(v.error("width", "must be positive"));
            }
            let vd = if vc.family == VelocityKind::ModifiedShear { 2 } else { 3 };
            if vd != grid.d {
                return Err(v.error("family", format!("{} needs d = {vd}", vc.family)));
            }
            Some(vc)
        } else {
            if mode != Mode::Heat {
                return Err(HarnessError::MissingField {
                    section: "velocity".into(),
                    field: "family".into(),
                });
            }
            None
        };

        let f = Reader::new(&ini, "fit");
        f.expect_keys(&["window", "tolerance"])?;
        let window = match f.list::<f64>("window")? {
            Some(w) if w.len() == 2 => [w[0], w[1]],
            Some(_) => return Err(f.error("window", "expected two fractions")),
            None => DEFAULT_WINDOW,
        };
        check_window(window).map_err(|m| f.error("window", m))?;
        let fit = FitConfig {
            window,
            tolerance: f.get_or("tolerance", default_tolerance(mode, grid.d))?,
        };

        let b = Reader::new(&ini, "bounds");
        b.expect_keys(&["select", "r_star", "m", "slack"])?;
        let bounds = BoundsConfig {
            select: b.list("select")?.unwrap_or_else(|| mode.default_bounds()),
            r_star: b.opt("r_star")?,
            m: b.rational("m")?,
            slack: b.get_or("slack", DEFAULT_SLACK)?,
        };

        let dc = Reader::new(&ini, "decay");
        dc.expect_keys(&["delta_min", "delta_max", "shells"])?;
        let decay = DecayConfig {
            delta_min: dc.opt("delta_min")?,
            delta_max: dc.opt("delta_max")?,
            shells: dc.get_or("shells", 16)?,
        };
        if decay.shells < 3 {
            return Err(dc.error("shells", "need at least 3 shells"));
        }

        Ok(ExperimentConfig {
            name,
            mode,
            output,
            grid,
            time,
            initial,
            velocity,
            fit,
            bounds,
            decay,
        })
    }

    pub fn grid(&self) -> Grid {
        Grid::new(self.grid.d, self.grid.n, self.grid.half_width).expect("validated at parse time")
    }

    pub fn initial_spec(&self) -> InitialDataSpec {
        let i = &self.initial;
        let family = match i.family {
            InitialKind::Gaussian => {
                let mut center = [0.0; 3];
                center[..i.center.len()].copy_from_slice(&i.center);
                InitialFamily::Gaussian { sigma: i.sigma, center }
            }
            InitialKind::Dipole => InitialFamily::Dipole { sigma: i.sigma },
            InitialKind::PowerLaw => InitialFamily::FourierPowerLaw {
                exponent: i.exponent,
                cutoff: i.cutoff,
                taper_width: i.taper_width,
                seed: i.seed,
            },
        };
        InitialDataSpec {
            family,
            amplitude: i.amplitude,
        }
    }

    pub fn velocity_spec(&self) -> Option<VelocityFieldSpec> {
        self.velocity.as_ref().map(|v| {
            let base = match v.family {
                VelocityKind::ModifiedShear => VelocityFieldSpec::modified_shear(v.nu),
                VelocityKind::GaussianSwirl3d => VelocityFieldSpec::gaussian_swirl3d(v.nu),
            };
            base.with_amplitude(v.amplitude).with_width(v.width)
        })
    }

    pub fn sample_times(&self) -> Vec<f64> {
        match self.time.spacing {
            Spacing::Log => log_sample_times(self.time.t_final, self.time.samples),
            Spacing::Uniform => uniform_sample_times(self.time.t_final, self.time.samples),
        }
    }

    pub fn run_config(&self) -> RunConfig {
        RunConfig {
            grid: self.grid(),
            kappa: self.time.kappa,
            initial: self.initial_spec(),
            velocity: self.velocity_spec(),
            t_final: self.time.t_final,
            sample_times: self.sample_times(),
            c_cfl: self.time.c_cfl,
            dealias: self.time.dealias,
        }
    }

    /// r* used for the bound curves: the configured override or the
    /// analytic value of the initial family.
    pub fn r_star(&self) -> f64 {
        self.bounds
            .r_star
            .unwrap_or_else(|| analytic_decay_character(&self.initial_spec()))
    }

    pub fn nu(&self) -> Rational {
        self.velocity.as_ref().map(|v| v.nu).unwrap_or(Rational::ZERO)
    }

    pub fn bound_params(&self) -> BoundParams {
        let (alpha, _) = self
            .velocity_spec()
            .map(|v| velocity_rates(&v))
            .unwrap_or((0.0, 0.0));
        let mut p = BoundParams::new(self.grid.d, self.r_star(), self.time.kappa, alpha, self.nu());
        if let Some(m) = self.bounds.m {
            p.m = m;
        }
        p
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output
            .clone()
            .unwrap_or_else(|| PathBuf::from("out").join(&self.name))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const AD: &str = "[experiment]\nmode = advection_diffusion\n[grid]\nd = 2\nn = 64\nhalf_width = 8\n\
        [time]\nkappa = 0.1\nt_final = 10\n[initial]\nfamily = gaussian\ncenter = 1.5, 0\n\
        [velocity]\nfamily = modified_shear\nnu = 1/2\n";

    #[test]
    fn parses_and_defaults() {
        let c = ExperimentConfig::parse(AD, "ad").unwrap();
        assert_eq!(c.name, "ad");
        assert_eq!(c.nu(), Rational::new(1, 2).unwrap());
        assert_eq!(c.fit.window, DEFAULT_WINDOW);
        assert_eq!(c.fit.tolerance, 0.07);
        assert_eq!(c.bounds.select, Mode::AdvectionDiffusion.default_bounds());
        assert_eq!(c.r_star(), 0.0);
        assert_eq!(c.bound_params().m, Rational::integer(4));
        assert_eq!(c.initial.center, vec![1.5, 0.0]);
        assert_eq!(c.sample_times().len(), 65);
        assert_eq!(c.output_dir(), PathBuf::from("out/ad"));
    }

    #[test]
    fn errors_name_line_and_field() {
        let bad = AD.replace("nu = 1/2", "nu = 1/x");
        match ExperimentConfig::parse(&bad, "x").unwrap_err() {
            HarnessError::Config { line, field, .. } => {
                assert_eq!(field, "velocity.nu");
                assert_eq!(line, 15);
            }
            e => panic!("{e}"),
        }
        let bad = AD.replace("kappa = 0.1", "kappa = 0");
        assert!(ExperimentConfig::parse(&bad, "x").unwrap_err().is_config());
        let bad = AD.replace("[velocity]\nfamily = modified_shear\nnu = 1/2\n", "");
        assert!(matches!(
            ExperimentConfig::parse(&bad, "x"),
            Err(HarnessError::MissingField { .. })
        ));
        let bad = format!("{AD}[fit]\nwindow = 0.9 0.2\n");
        assert!(ExperimentConfig::parse(&bad, "x").unwrap_err().is_config());
        let bad = format!("{AD}[bounds]\nselect = theta_sideways\n");
        assert!(ExperimentConfig::parse(&bad, "x").unwrap_err().is_config());
        let bad = format!("{AD}[colour]\n");
        assert!(ExperimentConfig::parse(&bad, "x").unwrap_err().is_config());
    }
}
