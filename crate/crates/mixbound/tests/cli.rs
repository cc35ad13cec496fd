use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mixbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixbound")).args(args).output().unwrap()
}

fn cfg(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(format!("{name}.cfg"))
        .display()
        .to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = mixbound(&["simulate", &cfg("bad_rstar"), "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    for f in ["series.csv", "plot_data.csv", "report.json"] {
        assert!(dir.path().join(f).is_file(), "missing {f}");
    }
    let header = fs::read_to_string(dir.path().join("series.csv")).unwrap();
    assert!(header.starts_with("t,l2,grad_l2,invgrad_l2,lambda,T_l2,eta_l2,boundary_mass,pivot_margin,energy_residual"));
    let report: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["mode"], "advection_diffusion");
}

#[test]
fn runs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert_eq!(mixbound(&["simulate", &cfg("bad_rstar"), "--out", path(d.path())]).status.code(), Some(0));
    }
    for f in ["series.csv", "plot_data.csv", "report.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f} differs");
    }
}

#[test]
fn out_of_range_rstar_is_not_a_failure() {
    let dir = tempfile::tempdir().unwrap();
    let o = mixbound(&["check-bounds", &cfg("bad_rstar"), "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("theta_lower") && out.contains("not applicable"), "{out}");
}

#[test]
fn fit_prints_slope() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("y.csv");
    let mut text = String::from("t,y\n");
    for i in 0..40 {
        let t = (i as f64 * 0.15).exp() - 1.0;
        text.push_str(&format!("{t},{}\n", 3.0 * (1.0 + t).powf(-0.75)));
    }
    fs::write(&csv, text).unwrap();
    let o = mixbound(&["fit", path(&csv), "--col", "y", "--window", "0", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let slope: f64 = out.split_whitespace().nth(2).unwrap().parse().unwrap();
    assert!((slope + 0.75).abs() < 1e-10, "{out}");

    let o = mixbound(&["fit", path(&csv), "--col", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nope"));
}

#[test]
fn failed_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(cfg("heat_gaussian_2d")).unwrap();
    let text = text.replace("window = 0.9 1.0", "window = 0.0 1.0").replace("samples = 128", "samples = 32");
    let file = dir.path().join("early.cfg");
    fs::write(&file, text).unwrap();
    let o = mixbound(&["check-bounds", path(&file), "--out", path(&dir.path().join("out"))]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn config_errors_exit_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(cfg("bad_rstar")).unwrap().replace("nu = 2", "nu = two");
    let file = dir.path().join("bad.cfg");
    fs::write(&file, text).unwrap();
    let o = mixbound(&["simulate", path(&file)]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("velocity.nu") && err.contains("line"), "{err}");

    let o = mixbound(&["simulate", path(&dir.path().join("missing.cfg"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(mixbound(&["simulate", "--bogus"]).status.code(), Some(2));
    assert_eq!(mixbound(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mixbound(&[]).status.code(), Some(2));
}

#[test]
fn decay_character_writes_json() {
    let dir = tempfile::tempdir().unwrap();
    let o = mixbound(&["decay-character", &cfg("decay_powerlaw_2d"), "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let r: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("decay_character.json")).unwrap()).unwrap();
    assert!((r["r_star"].as_f64().unwrap() - 0.5).abs() < 0.05);
}
