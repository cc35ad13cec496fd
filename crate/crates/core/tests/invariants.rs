use mixbound_core::bounds::{
    accumulated_decay, asymptotic_class, chart_curve, curve_limit_class, eta_upper_curve,
    grad_upper_curve, heat_lower_curve, theorem1_time_threshold, theta_upper_curve, BoundParams,
    Equation,
};
use mixbound_core::fields::{sample_velocity, VelocityFieldSpec};
use mixbound_core::solver::heat_evolve;
use mixbound_core::spectral::{
    filamentation_length, forward, grad_l2_norm, inv_grad_l2_norm, inverse, l2_norm, low_mode_mass,
    Grid, ScalarSamples, SpectralField,
};
use mixbound_core::Rational;
use proptest::prelude::*;

fn random_field(d: usize, n: usize, l: f64, values: &[f64]) -> ScalarSamples {
    let g = Grid::new(d, n, l).unwrap();
    ScalarSamples::new(g, values[..g.len()].to_vec()).unwrap()
}

fn field_strategy() -> impl Strategy<Value = (usize, f64, Vec<f64>)> {
    (prop_oneof![Just(2usize), Just(3usize)], 0.5f64..20.0).prop_flat_map(|(d, l)| {
        let len = 16usize.pow(d as u32);
        (Just(d), Just(l), prop::collection::vec(-1.0f64..1.0, len))
    })
}

fn nu_strategy() -> impl Strategy<Value = Rational> {
    (0i64..40, 1i64..9).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trip_and_plancherel((d, l, v) in field_strategy()) {
        let s = random_field(d, 16, l, &v);
        let f = forward(&s);
        let back = inverse(&f);
        let scale = s.sup_norm().max(1e-300);
        for (a, b) in back.values().iter().zip(s.values()) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
        let phys = s.l2_norm();
        prop_assert!((l2_norm(&f, false) - phys).abs() <= 1e-10 * phys);
        prop_assert!(f.conjugate_asymmetry() <= 1e-12 * phys * (2.0 * l).powi(d as i32));
    }

    #[test]
    fn interpolation_inequality((d, l, v) in field_strategy()) {
        let f = forward(&random_field(d, 16, l, &v));
        let l2 = l2_norm(&f, true);
        let bound = grad_l2_norm(&f) * inv_grad_l2_norm(&f).value;
        prop_assert!(l2 * l2 <= bound * (1.0 + 1e-12));
    }

    #[test]
    fn lambda_scale_invariant((d, l, v) in field_strategy(), c in prop_oneof![-50.0f64..-0.01, 0.01f64..50.0]) {
        let f = forward(&random_field(d, 16, l, &v));
        let a = filamentation_length(&f).unwrap();
        let b = filamentation_length(&f.scaled(c)).unwrap();
        prop_assert!((a - b).abs() <= 1e-13 * a);
    }

    #[test]
    fn low_mode_mass_monotone_and_additive((d, l, v) in field_strategy(), r1 in 1.0f64..4.0, r2 in 1.0f64..4.0) {
        let f = forward(&random_field(d, 16, l, &v));
        let dxi = f.grid().dxi();
        let (lo, hi) = if r1 < r2 { (r1 * dxi, r2 * dxi) } else { (r2 * dxi, r1 * dxi) };
        let a = low_mode_mass(&f, lo).unwrap();
        let b = low_mode_mass(&f, hi).unwrap();
        prop_assert!(a <= b);
        // shell (lo, hi] summed directly
        let g = f.grid();
        let shell: f64 = f.coeffs().iter().enumerate()
            .filter(|(i, _)| { let q = g.xi_sq(*i); q > lo * lo && q <= hi * hi })
            .map(|(_, z)| z.norm_sqr()).sum::<f64>() * g.xi_cell_volume();
        prop_assert!((b - a - shell).abs() <= 1e-12 * b.max(1e-300));
    }

    #[test]
    fn heat_semigroup((d, l, v) in field_strategy(), kappa in 0.0f64..2.0, a in 0.0f64..3.0, b in 0.0f64..3.0) {
        let f = forward(&random_field(d, 16, l, &v));
        let two = heat_evolve(&heat_evolve(&f, kappa, a).unwrap(), kappa, b).unwrap();
        let one = heat_evolve(&f, kappa, a + b).unwrap();
        let scale = f.coeffs().iter().fold(0.0f64, |m, z| m.max(z.norm()));
        for (x, y) in two.coeffs().iter().zip(one.coeffs()) {
            prop_assert!((x - y).norm() <= 1e-14 * scale);
        }
        prop_assert!(l2_norm(&one, false) <= l2_norm(&f, false) * (1.0 + 1e-14));
    }

    #[test]
    fn velocity_separable(t in 0.0f64..50.0, nu in nu_strategy(), amp in 0.1f64..3.0) {
        let g = Grid::new(2, 32, 8.0).unwrap();
        let spec = VelocityFieldSpec::modified_shear(nu).with_amplitude(amp);
        let u0 = sample_velocity(&spec, 0.0, &g).unwrap();
        let ut = sample_velocity(&spec, t, &g).unwrap();
        let factor = (1.0 + t).powf(-nu.to_f64());
        for (c0, ct) in u0.components().iter().zip(ut.components()) {
            for (a, b) in c0.iter().zip(ct) {
                prop_assert!((b - factor * a).abs() <= 1e-14 * a.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn accumulated_decay_positive_increasing(nu in 0.0f64..4.0, t in 0.0f64..1e3, dt in 1e-3f64..10.0) {
        let a = accumulated_decay(t, nu);
        let b = accumulated_decay(t + dt, nu);
        prop_assert!(a >= 0.0);
        prop_assert!(b > a);
        if nu > 1.0 {
            prop_assert!(b <= 1.0 / (nu - 1.0) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn curves_positive_and_linear_in_c(
        d in prop_oneof![Just(2usize), Just(3usize)],
        r in -0.9f64..3.0,
        kappa in 0.01f64..1.0,
        alpha in 0.0f64..3.0,
        nu in nu_strategy(),
        c in 0.1f64..10.0,
        t in 0.0f64..500.0,
    ) {
        let p = BoundParams::new(d, r, kappa, alpha, nu);
        for curve in [heat_lower_curve(&p), theta_upper_curve(&p), eta_upper_curve(&p), grad_upper_curve(&p)] {
            let v = curve.evaluate(t);
            prop_assert!(v.is_finite() && v > 0.0);
            let w = curve.clone().with_constant(2.0 * c).evaluate(t);
            let u = curve.with_constant(c).evaluate(t);
            prop_assert!((w - 2.0 * u).abs() <= 1e-14 * w);
        }
    }

    // the t = 1e8 slope cannot resolve ν within ~1/2 of 1, except ν = 1 itself
    #[test]
    fn chart_matches_curve_limits(nu in nu_strategy().prop_filter("away from 1", |n| {
        let v = n.to_f64();
        v == 1.0 || (v - 1.0).abs() >= 0.5
    })) {
        for eq in [Equation::PureAdvection, Equation::AdvectionDiffusion, Equation::PureDiffusion] {
            let chart = asymptotic_class(eq, nu);
            let limit = curve_limit_class(&chart_curve(eq, nu));
            prop_assert!(chart.same_kind(&limit), "{:?} nu={} chart={:?} limit={:?}", eq, nu, chart, limit);
        }
    }

    #[test]
    fn threshold_boundary(r in -0.9f64..0.95, kappa in 0.01f64..0.9, alpha in 0.0f64..3.0, m in 4i64..8) {
        let mut p = BoundParams::new(2, r, kappa, alpha, Rational::integer(2));
        p.m = Rational::integer(m);
        if let Ok(th) = theorem1_time_threshold(&p) {
            prop_assert!(th.holds_at(th.t_min));
            if th.t_min > 2.0 && th.t_min.is_finite() {
                prop_assert!(!th.holds_at(th.t_min / 2.0));
            }
        }
    }
}

#[test]
fn zero_field_lambda_is_an_error() {
    let f = SpectralField::zeros(Grid::new(2, 16, 1.0).unwrap());
    assert!(filamentation_length(&f).is_err());
}
