use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use mixbound::config::DEFAULT_WINDOW;
use mixbound::experiment::{decay_character, describe_fit, report_json, run_experiment, REPORT_FILE, SERIES_FILE};
use mixbound::output::{format_f64, read_csv_column, write_atomic};
use mixbound::sweep::{run_sweep, SweepConfig, CHART_FILE};
use mixbound::{fit_exponent, BoundVerdict, ExperimentConfig, HarnessError, Report};

#[derive(Parser)]
#[command(name = "mixbound", version, about = "Passive-scalar decay experiments and bound checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write series.csv, plot_data.csv and report.json.
    Simulate {
        config: PathBuf,
        /// Output directory (default: the config's, or out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the decay character of the configured initial data.
    DecayCharacter {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one experiment and print every bound verdict.
    CheckBounds {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the equation × ν sweep and compare λ against the chart.
    ChartSweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit `y ≈ C(1+t)^slope` to one column of a series CSV.
    Fit {
        csv: PathBuf,
        #[arg(long)]
        col: String,
        /// Fractions of log(1+t) bounding the fit.
        #[arg(long, num_args = 2, value_names = ["W0", "W1"])]
        window: Option<Vec<f64>>,
    },
}

enum Failure {
    Verdict,
    Usage(HarnessError),
}

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        Failure::Usage(e)
    }
}

fn print_verdict(v: &BoundVerdict) {
    if !v.applicable {
        println!(
            "  {:<22} not applicable  gates: {}{}",
            v.bound,
            v.failed_gates.join("; "),
            v.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default()
        );
        return;
    }
    println!(
        "  {:<22} {}  {} exponent {:.4} observed {:.4} (tol {})  violations {}/{}{}",
        v.bound,
        if v.pass { "pass" } else { "FAIL" },
        v.direction,
        v.expected_exponent.unwrap_or(f64::NAN),
        v.observed_exponent.unwrap_or(f64::NAN),
        v.tolerance,
        v.violations,
        v.checked_points,
        v.note.as_deref().map(|n| format!("  ({n})")).unwrap_or_default()
    );
}

fn print_report(r: &Report, verdicts: bool) {
    println!("{} [{}] steps {}", r.config.name, r.config.mode, r.flags.steps);
    for f in &r.fits {
        println!("  {}", describe_fit(f));
    }
    if let Some(c) = &r.classification {
        println!(
            "  lambda: observed {} (slope {:.4}), chart {}",
            c.observed.class.label(),
            c.observed.fit.slope,
            c.expected.label()
        );
    }
    if r.flags.boundary_mass_breach {
        println!("  warning: boundary mass reached {:.3e}", r.flags.max_boundary_mass);
    }
    if r.flags.truncation_sensitive {
        println!("  warning: H^-1 norm of a non-mean-free 2-d field is truncation sensitive");
    }
    if verdicts {
        for v in &r.verdicts {
            print_verdict(v);
        }
    }
}

fn experiment(config: &Path, out: Option<PathBuf>, verdicts: bool) -> Result<(), Failure> {
    let cfg = ExperimentConfig::from_file(config)?;
    let dir = out.unwrap_or_else(|| cfg.output_dir());
    let outcome = run_experiment(&cfg, Some(&dir))?;
    print_report(&outcome.report, verdicts);
    println!("wrote {} and {}", dir.join(SERIES_FILE).display(), dir.join(REPORT_FILE).display());
    if outcome.report.verdicts_pass() {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn execute(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Simulate { config, out } => experiment(&config, out, false),
        Command::CheckBounds { config, out } => experiment(&config, out, true),
        Command::DecayCharacter { config, out } => {
            let cfg = ExperimentConfig::from_file(&config)?;
            let r = decay_character(&cfg)?;
            println!(
                "{}: r* = {:.4} ± {:.4} (analytic {}), shells {} in [{:.4}, {:.4}]{}",
                r.name,
                r.r_star,
                r.stderr,
                r.analytic,
                r.shells,
                r.window[0],
                r.window[1],
                if r.non_power_law { ", not a clean power law" } else { "" }
            );
            if let Some(dir) = out {
                write_atomic(&dir.join("decay_character.json"), &report_json(&r)?)?;
            }
            Ok(())
        }
        Command::ChartSweep { config, out } => {
            let sweep = SweepConfig::from_file(&config)?;
            let dir = out.unwrap_or_else(|| sweep.output_dir());
            let (chart, _) = run_sweep(&sweep, Some(&dir))?;
            print!("{}", chart.table());
            println!("wrote {}", dir.join(CHART_FILE).display());
            if chart.all_match() {
                Ok(())
            } else {
                Err(Failure::Verdict)
            }
        }
        Command::Fit { csv, col, window } => {
            let w = window.map(|w| [w[0], w[1]]).unwrap_or(DEFAULT_WINDOW);
            let (t, y) = read_csv_column(&csv, &col)?;
            let f = fit_exponent(&col, &t, &y, w)?;
            println!(
                "{} slope {} stderr {} C {} window {} {} points {}",
                f.quantity,
                format_f64(f.slope),
                format_f64(f.stderr),
                format_f64(f.constant),
                format_f64(f.window[0]),
                format_f64(f.window[1]),
                f.points
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verdict) => ExitCode::from(1),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
