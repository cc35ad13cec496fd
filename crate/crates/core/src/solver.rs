//! Time integration of `∂tθ + u·∇θ = κΔθ` on the periodic box.
//!
//! Diffusion is applied exactly through the integrating factor
//! `E(h) = e^{-κ|ξ|²h}`; the advective term `-∇·(uθ)` is evaluated
//! pseudo-spectrally and integrated with the classical four-stage
//! Runge-Kutta scheme in the integrating-factor (Lawson) form. With
//! dealiasing on, both θ and the velocity are restricted to `|k_i| < n/3`, so
//! every product is alias free and the discrete advection conserves `‖θ‖₂`.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::fields::{sample_initial_data, sample_velocity, InitialDataSpec, VelocityFieldSpec};
#[allow(unused_imports)]
use crate::math::Real;
use crate::regression::{fit_line, LineFit};
use crate::spectral::field::{forward_values, inverse_values};
use crate::spectral::{
    filamentation_length, grad_l2_norm, inv_grad_l2_norm, inverse, l2_norm, Grid, SpectralField,
};
use crate::{CoreError, Result};

/// Fraction of `‖θ‖₂²` near the box faces above which a run is flagged.
pub const BOUNDARY_MASS_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub theta: SpectralField,
    /// Exact heat evolution of the initial scalar.
    pub heat: SpectralField,
    pub kappa: f64,
    pub velocity: Option<VelocityFieldSpec>,
}

impl SolverState {
    pub fn new(theta0: SpectralField, kappa: f64, velocity: Option<VelocityFieldSpec>) -> Result<Self> {
        if !(kappa >= 0.0) {
            return Err(CoreError::NegativeDiffusivity(kappa));
        }
        if let Some(v) = &velocity {
            if v.d() != theta0.grid().d() {
                return Err(CoreError::DimensionMismatch {
                    what: "velocity",
                    grid: theta0.grid().d(),
                    other: v.d(),
                });
            }
        }
        Ok(SolverState {
            t: 0.0,
            heat: theta0.clone(),
            theta: theta0,
            kappa,
            velocity,
        })
    }

    pub fn grid(&self) -> &Grid {
        self.theta.grid()
    }

    /// Advection-driven remainder `η = θ - T`.
    pub fn eta(&self) -> SpectralField {
        self.theta
            .difference(&self.heat)
            .expect("theta and heat share a grid")
    }
}

fn heat_factors(xi_sq: &[f64], kappa: f64, h: f64) -> Vec<f64> {
    xi_sq.iter().map(|q| (-kappa * q * h).exp()).collect()
}

/// Exact heat semigroup: multiplies every mode by `e^{-κ|ξ|²dt}`.
pub fn heat_evolve(f: &SpectralField, kappa: f64, dt: f64) -> Result<SpectralField> {
    if !(dt >= 0.0) {
        return Err(CoreError::NegativeTimeStep(dt));
    }
    if !(kappa >= 0.0) {
        return Err(CoreError::NegativeDiffusivity(kappa));
    }
    let g = *f.grid();
    let coeffs = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, z)| z * (-kappa * g.xi_sq(i) * dt).exp())
        .collect();
    SpectralField::new(g, coeffs)
}

/// Reusable integrator for one grid, diffusivity and velocity.
#[derive(Debug, Clone)]
pub struct Stepper {
    grid: Grid,
    kappa: f64,
    velocity: Option<VelocityFieldSpec>,
    dealias: bool,
    xi_sq: Vec<f64>,
    keep: Vec<bool>,
    /// `V(x)` sampled (and band-limited when dealiasing); `u = env(t)·base`.
    base: Vec<Vec<f64>>,
    base_sup: f64,
}

impl Stepper {
    pub fn new(grid: Grid, kappa: f64, velocity: Option<VelocityFieldSpec>, dealias: bool) -> Result<Self> {
        if !(kappa >= 0.0) {
            return Err(CoreError::NegativeDiffusivity(kappa));
        }
        let keep: Vec<bool> = (0..grid.len())
            .map(|i| !dealias || grid.dealias_keep(i))
            .collect();
        let mut base = Vec::new();
        if let Some(spec) = &velocity {
            let unit = VelocityFieldSpec {
                amplitude: 1.0,
                nu: crate::Rational::ZERO,
                ..*spec
            };
            let v = sample_velocity(&unit, 0.0, &grid)?;
            for comp in v.components() {
                if dealias {
                    let mut f = forward_values(&grid, comp);
                    for (z, k) in f.coeffs_mut().iter_mut().zip(&keep) {
                        if !k {
                            *z = Complex64::new(0.0, 0.0);
                        }
                    }
                    base.push(inverse_values(&grid, f.coeffs()));
                } else {
                    base.push(comp.clone());
                }
            }
        }
        let base_sup = (0..grid.len())
            .map(|i| base.iter().map(|c| c[i] * c[i]).sum::<f64>())
            .fold(0.0, f64::max)
            .sqrt();
        Ok(Stepper {
            grid,
            kappa,
            velocity,
            dealias,
            xi_sq: (0..grid.len()).map(|i| grid.xi_sq(i)).collect(),
            keep,
            base,
            base_sup,
        })
    }

    pub fn for_state(state: &SolverState, dealias: bool) -> Result<Self> {
        Stepper::new(*state.grid(), state.kappa, state.velocity, dealias)
    }

    pub fn dealias(&self) -> bool {
        self.dealias
    }

    /// `sup|u(t)|` of the velocity actually advecting the scalar.
    pub fn velocity_sup(&self, t: f64) -> f64 {
        match &self.velocity {
            Some(v) => v.envelope(t).abs() * self.base_sup,
            None => 0.0,
        }
    }

    /// Largest admissible step `c_cfl·dx / sup|u(t)|`; infinite without flow.
    pub fn max_dt(&self, t: f64, c_cfl: f64) -> f64 {
        let s = self.velocity_sup(t);
        if s > 0.0 {
            c_cfl * self.grid.dx() / s
        } else {
            f64::INFINITY
        }
    }

    /// `N(t, θ̂) = -P[iξ·F(u · (Pθ̂)_phys)]`.
    pub fn advection(&self, t: f64, theta: &[Complex64]) -> Vec<Complex64> {
        let g = &self.grid;
        let mut out = vec![Complex64::new(0.0, 0.0); g.len()];
        let spec = match &self.velocity {
            Some(v) => v,
            None => return out,
        };
        let env = spec.envelope(t);
        let masked: Vec<Complex64> = theta
            .iter()
            .zip(&self.keep)
            .map(|(z, &k)| if k { *z } else { Complex64::new(0.0, 0.0) })
            .collect();
        let phys = inverse_values(g, &masked);
        for (axis, comp) in self.base.iter().enumerate() {
            let prod: Vec<f64> = phys.iter().zip(comp).map(|(a, b)| env * a * b).collect();
            let f = forward_values(g, &prod);
            for (i, z) in f.coeffs().iter().enumerate() {
                if self.keep[i] && !g.is_nyquist(i, axis) {
                    // -iξ_a ŵ_a
                    let xa = g.xi(i)[axis];
                    out[i] += Complex64::new(z.im * xa, -z.re * xa);
                }
            }
        }
        out
    }

    /// Advances `state` by `dt`, rejecting steps above the CFL limit.
    pub fn step(&self, state: &mut SolverState, dt: f64, c_cfl: f64) -> Result<()> {
        if !(dt >= 0.0) {
            return Err(CoreError::NegativeTimeStep(dt));
        }
        let max_dt = self.max_dt(state.t, c_cfl);
        if dt > max_dt * (1.0 + 1e-12) {
            return Err(CoreError::CflViolation { dt, max_dt });
        }
        let e_full = heat_factors(&self.xi_sq, self.kappa, dt);
        let e_half = heat_factors(&self.xi_sq, self.kappa, dt / 2.0);
        let t = state.t;
        let th = state.theta.coeffs();
        let len = th.len();

        let (new_theta, new_heat) = if self.velocity.is_none() {
            let nt: Vec<Complex64> = (0..len).map(|i| th[i] * e_full[i]).collect();
            (nt.clone(), nt)
        } else {
            let h = dt;
            let k1 = self.advection(t, th);
            let a: Vec<Complex64> = (0..len).map(|i| (th[i] + k1[i] * (h / 2.0)) * e_half[i]).collect();
            let k2 = self.advection(t + h / 2.0, &a);
            let b: Vec<Complex64> = (0..len).map(|i| th[i] * e_half[i] + k2[i] * (h / 2.0)).collect();
            let k3 = self.advection(t + h / 2.0, &b);
            let c: Vec<Complex64> = (0..len).map(|i| th[i] * e_full[i] + k3[i] * (e_half[i] * h)).collect();
            let k4 = self.advection(t + h, &c);
            let nt = (0..len)
                .map(|i| {
                    th[i] * e_full[i]
                        + (k1[i] * e_full[i] + (k2[i] + k3[i]) * (2.0 * e_half[i]) + k4[i]) * (h / 6.0)
                })
                .collect();
            let nh = state
                .heat
                .coeffs()
                .iter()
                .zip(&e_full)
                .map(|(z, e)| z * e)
                .collect();
            (nt, nh)
        };
        state.theta = SpectralField::new(self.grid, new_theta)?;
        state.heat = SpectralField::new(self.grid, new_heat)?;
        state.t = t + dt;
        Ok(())
    }
}

/// One integrating-factor RK4 step with dealiasing and `c_cfl = 1`.
pub fn step_ad(state: &SolverState, dt: f64) -> Result<SolverState> {
    let stepper = Stepper::for_state(state, true)?;
    let mut next = state.clone();
    stepper.step(&mut next, dt, 1.0)?;
    Ok(next)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub kappa: f64,
    pub initial: InitialDataSpec,
    /// `None` runs the heat equation.
    pub velocity: Option<VelocityFieldSpec>,
    pub t_final: f64,
    pub sample_times: Vec<f64>,
    pub c_cfl: f64,
    pub dealias: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(CoreError::InvalidRun("t_final must be positive"));
        }
        if !(self.kappa >= 0.0) {
            return Err(CoreError::NegativeDiffusivity(self.kappa));
        }
        if !(self.c_cfl > 0.0 && self.c_cfl <= 1.0) {
            return Err(CoreError::InvalidRun("c_cfl must lie in (0, 1]"));
        }
        if self.sample_times.is_empty() {
            return Err(CoreError::InvalidRun("no sample times"));
        }
        if self.sample_times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CoreError::InvalidRun("sample times must be strictly increasing"));
        }
        if self.sample_times[0] < 0.0 || *self.sample_times.last().unwrap() > self.t_final {
            return Err(CoreError::InvalidRun("sample times must lie in [0, t_final]"));
        }
        if self.velocity.is_none() && self.kappa == 0.0 {
            return Err(CoreError::InvalidRun("nothing to evolve: no velocity and kappa = 0"));
        }
        Ok(())
    }
}

/// `{0}` followed by `count` log-spaced times in `[1, t_final]`.
pub fn log_sample_times(t_final: f64, count: usize) -> Vec<f64> {
    let mut out = vec![0.0];
    if t_final <= 1.0 || count < 2 {
        out.push(t_final);
        return out;
    }
    let top = t_final.ln();
    out.extend((0..count).map(|i| (top * i as f64 / (count - 1) as f64).exp()));
    if let Some(last) = out.last_mut() {
        *last = t_final;
    }
    out
}

/// `count` uniformly spaced times in `[0, t_final]`.
pub fn uniform_sample_times(t_final: f64, count: usize) -> Vec<f64> {
    let count = count.max(2);
    (0..count)
        .map(|i| t_final * i as f64 / (count - 1) as f64)
        .collect()
}

/// Sampled time series of a run. All columns have one entry per sample.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct NormSeries {
    pub t: Vec<f64>,
    pub l2: Vec<f64>,
    pub grad_l2: Vec<f64>,
    pub invgrad_l2: Vec<f64>,
    pub lambda: Vec<f64>,
    pub heat_l2: Vec<f64>,
    pub eta_l2: Vec<f64>,
    pub boundary_mass: Vec<f64>,
    pub pivot_margin: Vec<f64>,
    pub energy_residual: Vec<f64>,
    /// `‖θ‖₂` without the zero mode, the denominator of λ.
    pub l2_nonzero: Vec<f64>,
    pub kappa: f64,
    /// Some Ḣ⁻¹ value was computed on a d = 2 field with non-zero mean.
    pub truncation_sensitive: bool,
    /// Boundary mass exceeded [`BOUNDARY_MASS_LIMIT`] at some sample.
    pub boundary_flagged: bool,
    pub steps: usize,
}

impl NormSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    fn record(&mut self, state: &SolverState) -> Result<()> {
        let theta = &state.theta;
        let inv = inv_grad_l2_norm(theta);
        self.truncation_sensitive |= inv.truncation_sensitive;
        let phys = inverse(theta);
        let bm = phys.boundary_mass_fraction();
        self.boundary_flagged |= bm > BOUNDARY_MASS_LIMIT;
        self.t.push(state.t);
        self.l2.push(l2_norm(theta, false));
        self.l2_nonzero.push(l2_norm(theta, true));
        self.grad_l2.push(grad_l2_norm(theta));
        self.invgrad_l2.push(inv.value);
        self.lambda.push(filamentation_length(theta)?);
        self.heat_l2.push(l2_norm(&state.heat, false));
        self.eta_l2.push(l2_norm(&state.eta(), false));
        self.boundary_mass.push(bm);
        self.pivot_margin.push(pivot_inequality_margin(state)?);
        Ok(())
    }
}

/// Runs `config`, calling `observe` on the state at every sample time.
pub fn run_observed(config: &RunConfig, mut observe: impl FnMut(&SolverState)) -> Result<NormSeries> {
    config.validate()?;
    let theta0 = sample_initial_data(&config.initial, &config.grid)?;
    let mut state = SolverState::new(theta0.clone(), config.kappa, config.velocity)?;
    let stepper = Stepper::new(config.grid, config.kappa, config.velocity, config.dealias)?;
    let mut series = NormSeries {
        kappa: config.kappa,
        ..NormSeries::default()
    };
    for &ts in &config.sample_times {
        if config.velocity.is_none() {
            let evolved = heat_evolve(&theta0, config.kappa, ts)?;
            state.theta = evolved.clone();
            state.heat = evolved;
            state.t = ts;
        } else {
            while state.t < ts {
                let remaining = ts - state.t;
                let mut dt = stepper.max_dt(state.t, config.c_cfl).min(remaining);
                if remaining - dt <= 1e-12 * ts.max(1.0) {
                    dt = remaining;
                }
                stepper.step(&mut state, dt, config.c_cfl)?;
                series.steps += 1;
                if dt == remaining {
                    state.t = ts;
                }
            }
        }
        series.record(&state)?;
        observe(&state);
    }
    series.energy_residual = energy_identity_residual(&series);
    Ok(series)
}

pub fn run(config: &RunConfig) -> Result<NormSeries> {
    run_observed(config, |_| {})
}

/// Residual of `d/dt‖θ‖₂² = -2κ‖∇θ‖₂²` at every sample.
///
/// The derivative uses three-point differences on the (non-uniform) sample
/// times, one-sided at the ends. For κ > 0 the residual is relative to
/// `2κ‖∇θ‖₂²`; for κ = 0 it is the raw derivative. Fewer than three
/// samples give an empty result.
pub fn energy_identity_residual(series: &NormSeries) -> Vec<f64> {
    let n = series.len();
    if n < 3 {
        return Vec::new();
    }
    let t = &series.t;
    let e: Vec<f64> = series.l2.iter().map(|v| v * v).collect();
    let deriv = |i0: usize, at: usize| -> f64 {
        // derivative at t[at] of the quadratic through samples i0..i0+3
        let (x0, x1, x2) = (t[i0], t[i0 + 1], t[i0 + 2]);
        let x = t[at];
        let l0 = (2.0 * x - x1 - x2) / ((x0 - x1) * (x0 - x2));
        let l1 = (2.0 * x - x0 - x2) / ((x1 - x0) * (x1 - x2));
        let l2 = (2.0 * x - x0 - x1) / ((x2 - x0) * (x2 - x1));
        l0 * e[i0] + l1 * e[i0 + 1] + l2 * e[i0 + 2]
    };
    (0..n)
        .map(|i| {
            let i0 = i.saturating_sub(1).min(n - 3);
            let de = deriv(i0, i);
            let rhs = 2.0 * series.kappa * series.grad_l2[i] * series.grad_l2[i];
            if rhs > 0.0 {
                (de + rhs).abs() / rhs
            } else {
                de.abs()
            }
        })
        .collect()
}

/// `min_{ξ≠0} (R - L)/R` with `L = |(∇·(uθ))^(ξ)|` and
/// `R = |ξ| ‖θ‖₂ ‖u‖₂`, all norms discrete. 1 when `u ≡ 0`.
pub fn pivot_inequality_margin(state: &SolverState) -> Result<f64> {
    let spec = match &state.velocity {
        Some(v) => v,
        None => return Ok(1.0),
    };
    let g = state.grid();
    let u = sample_velocity(spec, state.t, g)?;
    let theta = inverse(&state.theta);
    let norm_u = u.l2_norm();
    let norm_t = theta.l2_norm();
    if norm_u == 0.0 || norm_t == 0.0 {
        return Ok(1.0);
    }
    let mut div = vec![Complex64::new(0.0, 0.0); g.len()];
    for (axis, comp) in u.components().iter().enumerate() {
        let prod: Vec<f64> = comp.iter().zip(theta.values()).map(|(a, b)| a * b).collect();
        let f = forward_values(g, &prod);
        for (i, z) in f.coeffs().iter().enumerate() {
            div[i] += z * g.xi(i)[axis];
        }
    }
    let mut margin: f64 = 1.0;
    for (i, z) in div.iter().enumerate().skip(1) {
        let rhs = g.xi_sq(i).sqrt() * norm_t * norm_u;
        margin = margin.min((rhs - z.norm()) / rhs);
    }
    Ok(margin)
}

/// Radius of the Fourier-splitting set `S(t)`, `R(t)² = β / (2κ(1+t))`.
pub fn splitting_radius(beta: f64, kappa: f64, t: f64) -> f64 {
    (beta / (2.0 * kappa * (1.0 + t))).sqrt()
}

/// Default splitting exponent `β = d/2 + r* + 1`; any `β > d/2 + r*` works.
pub fn default_beta(d: usize, r_star: f64) -> f64 {
    d as f64 / 2.0 + r_star + 1.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatDiagnostics {
    pub beta: f64,
    pub t: Vec<f64>,
    /// `∫_{S(t)} e^{-2κ|ξ|²t} |θ̂₀|²`.
    pub low_mode_mass: Vec<f64>,
    /// `sup_x |∇T(x, t)|`.
    pub grad_sup: Vec<f64>,
    /// Log-log fit against `1+t` of the two columns.
    pub low_mode_fit: LineFit,
    pub grad_sup_fit: LineFit,
}

/// Heat-kernel diagnostics of the Fourier-splitting argument.
pub fn heat_diagnostics(theta0: &SpectralField, kappa: f64, times: &[f64], beta: f64) -> Result<HeatDiagnostics> {
    if !(kappa > 0.0) {
        return Err(CoreError::InvalidParameter("heat diagnostics need kappa > 0"));
    }
    if times.len() < 3 {
        return Err(CoreError::TooFewPoints {
            needed: 3,
            got: times.len(),
        });
    }
    let g = *theta0.grid();
    let d = g.d();
    let vol = g.xi_cell_volume();
    let mut low = Vec::with_capacity(times.len());
    let mut gsup = Vec::with_capacity(times.len());
    for &t in times {
        let r = splitting_radius(beta, kappa, t);
        let r2 = r * r;
        let mut s = 0.0;
        for (i, z) in theta0.coeffs().iter().enumerate() {
            let q = g.xi_sq(i);
            if q <= r2 {
                s += (-2.0 * kappa * q * t).exp() * z.norm_sqr();
            }
        }
        low.push(s * vol);

        let heat = heat_evolve(theta0, kappa, t)?;
        let mut mag = vec![0.0; g.len()];
        for axis in 0..d {
            let deriv: Vec<Complex64> = heat
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    if g.is_nyquist(i, axis) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        z * Complex64::new(0.0, g.xi(i)[axis])
                    }
                })
                .collect();
            for (m, v) in mag.iter_mut().zip(inverse_values(&g, &deriv)) {
                *m += v * v;
            }
        }
        gsup.push(mag.iter().fold(0.0, |a: f64, b| a.max(*b)).sqrt());
    }
    let x: Vec<f64> = times.iter().map(|t| (1.0 + t).ln()).collect();
    let ly: Vec<f64> = low.iter().map(|v| v.ln()).collect();
    let gy: Vec<f64> = gsup.iter().map(|v| v.ln()).collect();
    Ok(HeatDiagnostics {
        beta,
        t: times.to_vec(),
        low_mode_fit: fit_line(&x, &ly)?,
        grad_sup_fit: fit_line(&x, &gy)?,
        low_mode_mass: low,
        grad_sup: gsup,
    })
}

/// Both sides of `d/dt‖∇⁻¹θ‖₂² = 2∫ ∇⁻¹θ · (∇u) ∇⁻¹θ` between two states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hm1Identity {
    /// Finite-difference rate of `‖∇⁻¹θ‖₂²`.
    pub lhs: f64,
    /// Quadratic form averaged over the two states (trapezoid rule).
    pub rhs: f64,
    /// `|lhs - rhs| / (2 sup|∇u| ‖∇⁻¹θ‖₂²)`, 0 when that scale vanishes.
    pub residual: f64,
}

/// `∇⁻¹θ := ∇Δ⁻¹θ`, spectrum `-iξθ̂/|ξ|²`, sampled per component.
fn inverse_gradient_samples(theta: &SpectralField) -> Vec<Vec<f64>> {
    let g = theta.grid();
    (0..g.d())
        .map(|axis| {
            let c: Vec<Complex64> = theta
                .coeffs()
                .iter()
                .enumerate()
                .map(|(i, z)| {
                    let q = g.xi_sq(i);
                    if i == 0 || g.is_nyquist(i, axis) {
                        Complex64::new(0.0, 0.0)
                    } else {
                        z * Complex64::new(0.0, -g.xi(i)[axis] / q)
                    }
                })
                .collect();
            inverse_values(g, &c)
        })
        .collect()
}

/// `2∫ ψᵀ (∇u) ψ dx` with `ψ = ∇⁻¹θ` and the analytic velocity gradient;
/// also returns `sup_x ‖∇u(x)‖`.
fn hm1_quadratic_form(state: &SolverState, spec: &VelocityFieldSpec) -> (f64, f64) {
    let g = state.grid();
    let d = g.d();
    let psi = inverse_gradient_samples(&state.theta);
    let env = spec.envelope(state.t);
    let mut sum = 0.0;
    let mut sup: f64 = 0.0;
    for i in 0..g.len() {
        let x = g.point(i);
        let jac = spec.profile_jacobian(&x[..d]);
        sup = sup.max(crate::fields::operator_norm(&jac));
        for a in 0..d {
            for b in 0..d {
                sum += psi[a][i] * jac[a][b] * psi[b][i];
            }
        }
    }
    (2.0 * env * sum * g.cell_volume(), env.abs() * sup)
}

/// Checks the pure-advection Ḣ⁻¹ identity between consecutive states.
pub fn hm1_advection_identity_residual(s: &SolverState, ds: &SolverState) -> Result<Hm1Identity> {
    if s.kappa != 0.0 || ds.kappa != 0.0 {
        return Err(CoreError::NotPureAdvection(s.kappa.max(ds.kappa)));
    }
    let h = ds.t - s.t;
    if !(h > 0.0) {
        return Err(CoreError::InvalidParameter("states must be ordered in time"));
    }
    let a = inv_grad_l2_norm(&s.theta).value;
    let b = inv_grad_l2_norm(&ds.theta).value;
    let lhs = (b * b - a * a) / h;
    let spec = match &s.velocity {
        Some(v) => v,
        None => {
            return Ok(Hm1Identity {
                lhs,
                rhs: 0.0,
                residual: 0.0,
            })
        }
    };
    let (q0, sup0) = hm1_quadratic_form(s, spec);
    let (q1, sup1) = hm1_quadratic_form(ds, spec);
    let rhs = 0.5 * (q0 + q1);
    let scale = 2.0 * sup0.max(sup1) * a.max(b) * a.max(b);
    let residual = if scale > 0.0 { (lhs - rhs).abs() / scale } else { 0.0 };
    Ok(Hm1Identity { lhs, rhs, residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::InitialDataSpec;
    use crate::Rational;
    use core::f64::consts::PI;

    fn shear(nu: &str) -> VelocityFieldSpec {
        VelocityFieldSpec::modified_shear(Rational::parse(nu).unwrap())
    }

    #[test]
    fn heat_semigroup_and_single_mode() {
        let g = Grid::new(2, 32, PI).unwrap();
        let f = crate::spectral::forward(&crate::spectral::ScalarSamples::from_fn(g, |x| x[0].cos() + 0.3 * (2.0 * x[1]).sin()));
        let ab = heat_evolve(&heat_evolve(&f, 0.3, 0.7).unwrap(), 0.3, 1.1).unwrap();
        let direct = heat_evolve(&f, 0.3, 1.8).unwrap();
        for (x, y) in ab.coeffs().iter().zip(direct.coeffs()) {
            assert!((x - y).norm() <= 1e-14 * f.coeffs().iter().fold(0.0, |m: f64, z| m.max(z.norm())));
        }
        assert_eq!(heat_evolve(&f, 0.0, 5.0).unwrap(), f);
        let z0 = f.coeff(&[1, 0]);
        let z1 = heat_evolve(&f, 0.25, 2.0).unwrap().coeff(&[1, 0]);
        assert!((z1 - z0 * (-0.5f64).exp()).norm() < 1e-14 * z0.norm());
        assert!(matches!(heat_evolve(&f, 0.1, -1.0), Err(CoreError::NegativeTimeStep(_))));
    }

    #[test]
    fn step_without_flow_is_heat() {
        let g = Grid::new(2, 64, 10.0).unwrap();
        let f = sample_initial_data(&InitialDataSpec::gaussian(1.0), &g).unwrap();
        let s = SolverState::new(f.clone(), 0.1, None).unwrap();
        let next = step_ad(&s, 0.37).unwrap();
        let h = heat_evolve(&f, 0.1, 0.37).unwrap();
        for (x, y) in next.theta.coeffs().iter().zip(h.coeffs()) {
            assert!((x - y).norm() < 1e-12 * f.coeffs()[0].norm());
        }
    }

    #[test]
    fn cfl_violation_names_limit() {
        let g = Grid::new(2, 64, 8.0).unwrap();
        let f = sample_initial_data(&InitialDataSpec::gaussian_at(1.0, [1.0, 0.0, 0.0]), &g).unwrap();
        let s = SolverState::new(f, 0.0, Some(shear("2"))).unwrap();
        match step_ad(&s, 10.0) {
            Err(CoreError::CflViolation { max_dt, .. }) => {
                assert!(max_dt > 0.0 && max_dt < 10.0);
                assert!(step_ad(&s, max_dt).is_ok());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn advection_conserves_mean_and_symmetry() {
        let g = Grid::new(2, 64, 8.0).unwrap();
        let f = sample_initial_data(&InitialDataSpec::gaussian_at(1.0, [1.5, 0.0, 0.0]), &g).unwrap();
        let stepper = Stepper::new(g, 0.0, Some(shear("1")), true).unwrap();
        let n = stepper.advection(0.0, f.coeffs());
        assert_eq!(n[0], Complex64::new(0.0, 0.0));
        // energy rate Re Σ conj(θ) N vanishes for the alias-free term
        let rate: f64 = f.coeffs().iter().zip(&n).map(|(a, b)| (a.conj() * b).re).sum();
        let scale: f64 = f.coeffs().iter().zip(&n).map(|(a, b)| a.norm() * b.norm()).sum();
        assert!(rate.abs() < 1e-12 * scale);
        let mut s = SolverState::new(f, 0.0, Some(shear("1"))).unwrap();
        let dt = stepper.max_dt(0.0, 0.5);
        for _ in 0..5 {
            stepper.step(&mut s, dt, 0.5).unwrap();
        }
        let max = s.theta.coeffs().iter().fold(0.0, |m: f64, z| m.max(z.norm()));
        assert!(s.theta.conjugate_asymmetry() < 1e-12 * max);
    }

    #[test]
    fn sample_time_helpers() {
        let t = log_sample_times(100.0, 5);
        assert_eq!(t.len(), 6);
        assert_eq!(t[0], 0.0);
        assert_eq!(t[1], 1.0);
        assert_eq!(*t.last().unwrap(), 100.0);
        assert!((t[3] - 10.0).abs() < 1e-12);
        let u = uniform_sample_times(2.0, 5);
        assert_eq!(u, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn config_validation() {
        let g = Grid::new(2, 64, 10.0).unwrap();
        let mut cfg = RunConfig {
            grid: g,
            kappa: 0.1,
            initial: InitialDataSpec::gaussian(1.0),
            velocity: None,
            t_final: 10.0,
            sample_times: vec![0.0, 1.0, 10.0],
            c_cfl: 0.5,
            dealias: true,
        };
        assert!(cfg.validate().is_ok());
        cfg.sample_times = vec![0.0, 2.0, 1.0];
        assert!(cfg.validate().is_err());
        cfg.sample_times = vec![0.0, 11.0];
        assert!(cfg.validate().is_err());
        cfg.sample_times = vec![0.0, 1.0];
        cfg.c_cfl = 1.5;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn energy_residual_of_exact_exponential() {
        // ‖θ‖² = e^{-2t} with κ‖∇θ‖² = ‖θ‖² (single mode |ξ| = 1, κ = 1)
        let t = uniform_sample_times(1.0, 201);
        let l2: Vec<f64> = t.iter().map(|s| (-s).exp()).collect();
        let series = NormSeries {
            t,
            grad_l2: l2.clone(),
            l2,
            kappa: 1.0,
            ..NormSeries::default()
        };
        let r = energy_identity_residual(&series);
        assert_eq!(r.len(), 201);
        assert!(r.iter().all(|v| *v < 1e-4), "{:?}", r.iter().fold(0.0f64, |a, b| a.max(*b)));
    }

    #[test]
    fn pivot_margin_cases() {
        let g = Grid::new(2, 64, 8.0).unwrap();
        let f = sample_initial_data(&InitialDataSpec::gaussian(1.0), &g).unwrap();
        let heat = SolverState::new(f.clone(), 0.1, None).unwrap();
        assert_eq!(pivot_inequality_margin(&heat).unwrap(), 1.0);
        let adv = SolverState::new(f, 0.1, Some(shear("2"))).unwrap();
        assert!(pivot_inequality_margin(&adv).unwrap() >= -1e-8);
    }

    #[test]
    fn hm1_identity_rejects_diffusion() {
        let g = Grid::new(2, 64, 8.0).unwrap();
        let f = sample_initial_data(&InitialDataSpec::dipole(1.0), &g).unwrap();
        let s = SolverState::new(f, 0.1, Some(shear("2"))).unwrap();
        assert!(matches!(
            hm1_advection_identity_residual(&s, &s),
            Err(CoreError::NotPureAdvection(_))
        ));
    }
}
