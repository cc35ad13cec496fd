use mixbound_core::decay_character::{estimate_decay_character, log_spaced, shell_profile};
use mixbound_core::fields::{sample_initial_data, InitialDataSpec, VelocityFieldSpec};
use mixbound_core::solver::{
    default_beta, heat_diagnostics, hm1_advection_identity_residual, run, run_observed,
    uniform_sample_times, RunConfig, SolverState, Stepper,
};
use mixbound_core::spectral::{l2_norm, Grid, SpectralField};
use mixbound_core::Rational;

fn shear(nu: i64) -> VelocityFieldSpec {
    VelocityFieldSpec::modified_shear(Rational::integer(nu))
}

fn ad_config(kappa: f64, t_final: f64, samples: usize) -> RunConfig {
    RunConfig {
        grid: Grid::new(2, 64, 8.0).unwrap(),
        kappa,
        initial: InitialDataSpec::dipole(1.0),
        velocity: Some(shear(2)),
        t_final,
        sample_times: uniform_sample_times(t_final, samples),
        c_cfl: 0.5,
        dealias: true,
    }
}

fn max_rel_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    let diff = a.difference(b).unwrap();
    l2_norm(&diff, false) / l2_norm(b, false)
}

#[test]
fn pure_advection_conserves_l2() {
    let mut cfg = ad_config(0.0, 50.0, 11);
    cfg.grid = Grid::new(2, 128, 8.0).unwrap();
    cfg.c_cfl = 0.25;
    let s = run(&cfg).unwrap();
    let first = s.l2[0];
    for v in &s.l2 {
        assert!((v - first).abs() <= 1e-6 * first, "{v} vs {first}");
    }
    for (i, m) in s.pivot_margin.iter().enumerate() {
        assert!(*m >= -1e-8, "pivot margin {m} at sample {i}");
    }
    for i in 0..s.len() {
        let lhs = s.l2_nonzero[i] * s.l2_nonzero[i];
        assert!(lhs <= s.grad_l2[i] * s.invgrad_l2[i] * (1.0 + 1e-12));
    }
}

#[test]
fn heat_part_starts_at_theta() {
    let mut eta0 = None;
    run_observed(&ad_config(0.05, 2.0, 3), |st| {
        if eta0.is_none() {
            eta0 = Some(l2_norm(&st.eta(), false));
        }
    })
    .unwrap();
    assert_eq!(eta0, Some(0.0));
}

#[test]
fn lawson_rk4_self_convergence() {
    let g = Grid::new(2, 64, 8.0).unwrap();
    let theta0 = sample_initial_data(&InitialDataSpec::dipole(1.0), &g).unwrap();
    let v = shear(1).with_amplitude(2.0);
    let stepper = Stepper::new(g, 0.05, Some(v), true).unwrap();
    let t_end = 2.0;
    let solve = |steps: usize| {
        let mut st = SolverState::new(theta0.clone(), 0.05, Some(v)).unwrap();
        let dt = t_end / steps as f64;
        for _ in 0..steps {
            stepper.step(&mut st, dt, 1.0).unwrap();
        }
        st.theta
    };
    let coarse = (t_end / stepper.max_dt(0.0, 1.0)).ceil() as usize;
    let a = solve(coarse);
    let b = solve(2 * coarse);
    let c = solve(4 * coarse);
    let order = (max_rel_diff(&a, &b) / max_rel_diff(&b, &c)).log2();
    assert!(order >= 3.5, "observed order {order}");
}

#[test]
fn heat_run_matches_gaussian_closed_form() {
    let kappa = 0.05;
    let cfg = RunConfig {
        grid: Grid::new(2, 128, 20.0).unwrap(),
        kappa,
        initial: InitialDataSpec::gaussian(1.0),
        velocity: None,
        t_final: 50.0,
        sample_times: uniform_sample_times(50.0, 256),
        c_cfl: 0.5,
        dealias: true,
    };
    let s = run(&cfg).unwrap();
    for (t, v) in s.t.iter().zip(&s.l2) {
        let exact = core::f64::consts::PI.sqrt() / (1.0 + 2.0 * kappa * t).sqrt();
        assert!((v - exact).abs() <= 1e-6 * exact, "t={t}: {v} vs {exact}");
    }
    for r in &s.energy_residual {
        assert!(r.abs() < 2e-2, "{r}");
    }
    assert!(!s.boundary_flagged);
}

#[test]
fn hm1_identity_for_shear_and_dipole() {
    let g = Grid::new(2, 128, 8.0).unwrap();
    let theta0 = sample_initial_data(&InitialDataSpec::dipole(1.0), &g).unwrap();
    let v = shear(2);
    let stepper = Stepper::new(g, 0.0, Some(v), true).unwrap();
    let mut st = SolverState::new(theta0, 0.0, Some(v)).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..40 {
        let prev = st.clone();
        let dt = stepper.max_dt(st.t, 0.25).min(0.05);
        stepper.step(&mut st, dt, 0.25).unwrap();
        let id = hm1_advection_identity_residual(&prev, &st).unwrap();
        worst = worst.max(id.residual);
    }
    assert!(worst <= 5e-3, "worst residual {worst}");
}

#[test]
fn hm1_identity_rejects_diffusion() {
    let g = Grid::new(2, 32, 8.0).unwrap();
    let theta0 = sample_initial_data(&InitialDataSpec::dipole(1.0), &g).unwrap();
    let a = SolverState::new(theta0.clone(), 0.1, Some(shear(2))).unwrap();
    let mut b = a.clone();
    b.t = 0.1;
    assert!(hm1_advection_identity_residual(&a, &b).is_err());
}

#[test]
fn heat_diagnostics_rates_for_gaussian() {
    let g = Grid::new(2, 256, 40.0).unwrap();
    let theta0 = sample_initial_data(&InitialDataSpec::gaussian(1.0), &g).unwrap();
    let kappa = 0.5;
    let times = log_spaced(20.0, 200.0, 8);
    let diag = heat_diagnostics(&theta0, kappa, &times, default_beta(2, 0.0)).unwrap();
    // shell of radius (κ(1+t))^{-1/2} holds mass ~ (1+t)^{-d/2}
    assert!((diag.low_mode_fit.slope + 1.0).abs() < 0.05, "{:?}", diag.low_mode_fit);
    // sup|∇T| of a 2-d Gaussian decays like t^{-3/2}
    assert!((diag.grad_sup_fit.slope + 1.5).abs() < 0.05, "{:?}", diag.grad_sup_fit);
}

#[test]
fn decay_character_of_gaussian_and_dipole() {
    let g = Grid::new(2, 512, 120.0).unwrap();
    for (spec, expect) in [(InitialDataSpec::gaussian(1.0), 0.0), (InitialDataSpec::dipole(1.0), 1.0)] {
        let f = sample_initial_data(&spec, &g).unwrap();
        let deltas = log_spaced(4.0 * g.dxi(), 0.4, 16);
        let est = estimate_decay_character(&shell_profile(&f, &deltas).unwrap(), 2).unwrap();
        assert!((est.r_star - expect).abs() < 0.05, "{est:?}");
        assert!(!est.non_power_law);
    }
}

