//! Decay character of sampled data.
//!
//! The low-mode mass `F(δ) = ∫_{|ξ|<=δ} |θ̂₀|²` behaves like `δ^{2r*+d}` for
//! small `δ`, so `r*` is read off the log-log slope of `F` over a window of
//! resolvable shells.

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use crate::math::{gamma, Real};
use crate::regression::fit_line;
use crate::spectral::SpectralField;
use crate::{CoreError, Result};

/// Standard error above which a profile is reported as not power-law.
pub const NON_POWER_LAW_STDERR: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct DecayCharacterEstimate {
    pub r_star: f64,
    pub stderr: f64,
    pub window: (f64, f64),
    /// `(δ, F(δ))` pairs entering the fit.
    pub shells: Vec<(f64, f64)>,
    /// Number of input shells dropped because `F(δ) = 0`.
    pub dropped_zero: usize,
    /// `false` if `r*` falls outside `(-d/2, ∞)`.
    pub admissible: bool,
    /// Set when the fit residuals are too large for a clean power law.
    pub non_power_law: bool,
}

/// `F(δ)` at each requested radius.
pub fn shell_profile(f: &SpectralField, deltas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let g = f.grid();
    let dxi = g.dxi();
    if let Some(&bad) = deltas.iter().find(|&&d| !(d >= dxi)) {
        return Err(CoreError::UnresolvableShell { delta: bad, dxi });
    }
    if deltas.windows(2).any(|w| w[1] < w[0]) {
        return Err(CoreError::InvalidParameter("shell radii must be sorted"));
    }
    let mut modes: Vec<(f64, f64)> = f
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, z)| (g.xi_sq(i), z.norm_sqr()))
        .collect();
    modes.sort_by(|a, b| a.0.total_cmp(&b.0));
    let vol = g.xi_cell_volume();
    let mut out = Vec::with_capacity(deltas.len());
    let (mut idx, mut acc) = (0usize, 0.0);
    for &delta in deltas {
        let d2 = delta * delta;
        while idx < modes.len() && modes[idx].0 <= d2 {
            acc += modes[idx].1;
            idx += 1;
        }
        out.push((delta, acc * vol));
    }
    Ok(out)
}

/// `count` log-spaced radii in `[lo, hi]`.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count < 2 {
        return alloc::vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Least-squares slope `s` of `log F` against `log δ`; `r* = (s - d)/2`.
pub fn estimate_decay_character(profile: &[(f64, f64)], d: usize) -> Result<DecayCharacterEstimate> {
    let usable: Vec<(f64, f64)> = profile.iter().copied().filter(|p| p.1 > 0.0).collect();
    let dropped_zero = profile.len() - usable.len();
    if usable.len() < 4 {
        return Err(CoreError::TooFewPoints {
            needed: 4,
            got: usable.len(),
        });
    }
    let x: Vec<f64> = usable.iter().map(|p| p.0.ln()).collect();
    let y: Vec<f64> = usable.iter().map(|p| p.1.ln()).collect();
    let fit = fit_line(&x, &y)?;
    let r_star = (fit.slope - d as f64) / 2.0;
    let stderr = fit.slope_stderr / 2.0;
    Ok(DecayCharacterEstimate {
        r_star,
        stderr,
        window: (usable[0].0, usable[usable.len() - 1].0),
        shells: usable,
        dropped_zero,
        admissible: r_star > -(d as f64) / 2.0,
        non_power_law: stderr > NON_POWER_LAW_STDERR,
    })
}

/// Area of the unit sphere in ℝ^d.
pub fn unit_sphere_area(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    2.0 * PI.powf(h) / gamma(h)
}

/// `∫_{|ξ|<=δ} |ξ|^{2a} dξ = ω_{d-1} δ^{2a+d} / (2a+d)`.
pub fn oracle_f_power_law(a: f64, delta: f64, d: usize) -> Result<f64> {
    let e = 2.0 * a + d as f64;
    if !(e > 0.0) {
        return Err(CoreError::DivergentShell(e));
    }
    Ok(unit_sphere_area(d) * delta.powf(e) / e)
}
