//! Catalog of initial data and decaying divergence-free velocity fields.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[allow(unused_imports)]
use crate::math::Real;
use crate::spectral::{forward, Grid, ScalarSamples, SpectralField, VectorSamples};
use crate::{CoreError, Rational, Result};

/// Shape of the initial scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialFamily {
    /// `e^{-|x-c|²/(2σ²)}`.
    Gaussian { sigma: f64, center: [f64; 3] },
    /// `∂₁ e^{-|x|²/(2σ²)} = -(x₁/σ²) e^{-|x|²/(2σ²)}`.
    Dipole { sigma: f64 },
    /// Defined in frequency space: `|θ̂₀(ξ)| = |ξ|^a τ(|ξ|)` where the taper
    /// `τ` is 1 on `|ξ| <= cutoff`, 0 beyond `cutoff + taper_width`, and C^∞.
    FourierPowerLaw {
        exponent: f64,
        cutoff: f64,
        taper_width: f64,
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialDataSpec {
    pub family: InitialFamily,
    pub amplitude: f64,
}

impl InitialDataSpec {
    pub fn gaussian(sigma: f64) -> Self {
        InitialDataSpec {
            family: InitialFamily::Gaussian {
                sigma,
                center: [0.0; 3],
            },
            amplitude: 1.0,
        }
    }

    pub fn gaussian_at(sigma: f64, center: [f64; 3]) -> Self {
        InitialDataSpec {
            family: InitialFamily::Gaussian { sigma, center },
            amplitude: 1.0,
        }
    }

    pub fn dipole(sigma: f64) -> Self {
        InitialDataSpec {
            family: InitialFamily::Dipole { sigma },
            amplitude: 1.0,
        }
    }

    pub fn power_law(exponent: f64, cutoff: f64, taper_width: f64, seed: u64) -> Self {
        InitialDataSpec {
            family: InitialFamily::FourierPowerLaw {
                exponent,
                cutoff,
                taper_width,
                seed,
            },
            amplitude: 1.0,
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }
}

/// Decay character of a catalog family.
pub fn analytic_decay_character(spec: &InitialDataSpec) -> f64 {
    match spec.family {
        InitialFamily::Gaussian { .. } => 0.0,
        InitialFamily::Dipole { .. } => 1.0,
        InitialFamily::FourierPowerLaw { exponent, .. } => exponent,
    }
}

/// Decay character `-d(1 - 1/p)` of generic `L^p ∩ L²` data, `1 <= p <= 2`.
/// Not a sampled family.
pub fn lp_decay_character(d: usize, p: f64) -> f64 {
    -(d as f64) * (1.0 - 1.0 / p)
}

/// Smallest `n` for which spacing `2L/n` does not exceed `max_dx`, rounded up
/// to a power of two.
fn required_n(half_width: f64, max_dx: f64) -> usize {
    let raw = (2.0 * half_width / max_dx).ceil() as usize;
    raw.next_power_of_two().max(16)
}

fn check_gaussian_resolution(g: &Grid, sigma: f64, extent: f64) -> Result<()> {
    if !(sigma > 0.0) {
        return Err(CoreError::InvalidParameter("width must be positive"));
    }
    if sigma < 2.0 * g.dx() {
        return Err(CoreError::UnderResolved {
            reason: "width below two grid spacings",
            required_n: required_n(g.half_width(), sigma / 2.0),
            required_half_width: g.half_width(),
        });
    }
    if g.half_width() < extent + 6.0 * sigma {
        return Err(CoreError::UnderResolved {
            reason: "profile does not fit in the box",
            required_n: required_n(extent + 6.0 * sigma, g.dx()),
            required_half_width: extent + 6.0 * sigma,
        });
    }
    Ok(())
}

/// C^∞ step: 1 for `s <= 0`, 0 for `s >= 1`.
fn smooth_step_down(s: f64) -> f64 {
    let psi = |x: f64| if x > 0.0 { (-1.0 / x).exp() } else { 0.0 };
    let a = psi(1.0 - s);
    let b = psi(s);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

/// Frequency-space taper of the power-law family.
pub fn power_law_taper(xi: f64, cutoff: f64, taper_width: f64) -> f64 {
    smooth_step_down((xi - cutoff) / taper_width)
}

fn unit_f64(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Seeded smooth odd phase `φ(ξ) = Σ_j b_j sin(ξ·w_j)`. Oddness gives the
/// conjugate symmetry of a real field; smoothness keeps it localised.
struct PhaseFunction {
    terms: Vec<(f64, [f64; 3])>,
}

impl PhaseFunction {
    fn new(seed: u64, d: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let terms = (0..3)
            .map(|_| {
                let b = 2.0 * unit_f64(&mut rng) - 1.0;
                let len = 0.5 + 1.5 * unit_f64(&mut rng);
                let mut w = [0.0; 3];
                if d == 2 {
                    let ang = 2.0 * PI * unit_f64(&mut rng);
                    w[0] = len * ang.cos();
                    w[1] = len * ang.sin();
                } else {
                    let z = 2.0 * unit_f64(&mut rng) - 1.0;
                    let ang = 2.0 * PI * unit_f64(&mut rng);
                    let rho = (1.0 - z * z).sqrt();
                    w = [len * rho * ang.cos(), len * rho * ang.sin(), len * z];
                }
                (b, w)
            })
            .collect();
        PhaseFunction { terms }
    }

    fn eval(&self, xi: &[f64; 3]) -> f64 {
        self.terms
            .iter()
            .map(|(b, w)| b * (xi[0] * w[0] + xi[1] * w[1] + xi[2] * w[2]).sin())
            .sum()
    }
}

/// Samples the initial scalar on `g` and transforms it.
pub fn sample_initial_data(spec: &InitialDataSpec, g: &Grid) -> Result<SpectralField> {
    let d = g.d();
    let amp = spec.amplitude;
    match spec.family {
        InitialFamily::Gaussian { sigma, center } => {
            let extent = center[..d].iter().fold(0.0, |m: f64, c| m.max(c.abs()));
            check_gaussian_resolution(g, sigma, extent)?;
            let s2 = 2.0 * sigma * sigma;
            let samples = ScalarSamples::from_fn(*g, |x| {
                let r2: f64 = x.iter().zip(&center).map(|(a, c)| (a - c) * (a - c)).sum();
                amp * (-r2 / s2).exp()
            });
            Ok(forward(&samples))
        }
        InitialFamily::Dipole { sigma } => {
            check_gaussian_resolution(g, sigma, 0.0)?;
            let s2 = sigma * sigma;
            let samples = ScalarSamples::from_fn(*g, |x| {
                let r2: f64 = x.iter().map(|a| a * a).sum();
                -amp * x[0] / s2 * (-r2 / (2.0 * s2)).exp()
            });
            let mut f = forward(&samples);
            // odd profile: the mean vanishes identically
            f.coeffs_mut()[0] = Complex64::new(0.0, 0.0);
            Ok(f)
        }
        InitialFamily::FourierPowerLaw {
            exponent,
            cutoff,
            taper_width,
            seed,
        } => {
            if !(exponent > -(d as f64) / 2.0) {
                return Err(CoreError::InvalidParameter("power-law exponent must exceed -d/2"));
            }
            if !(cutoff > 0.0 && taper_width > 0.0) {
                return Err(CoreError::InvalidParameter("cutoff and taper width must be positive"));
            }
            if cutoff < 8.0 * g.dxi() {
                return Err(CoreError::UnderResolved {
                    reason: "cutoff below eight frequency spacings",
                    required_n: g.n(),
                    required_half_width: 8.0 * PI / cutoff,
                });
            }
            let top = cutoff + taper_width;
            let kept = (g.n() / 3) as f64 * g.dxi();
            if top > kept {
                let dx = PI / (3.0 * top);
                return Err(CoreError::UnderResolved {
                    reason: "tapered support exceeds the dealiased band",
                    required_n: required_n(g.half_width(), dx),
                    required_half_width: g.half_width(),
                });
            }
            let phase = PhaseFunction::new(seed, d);
            let coeffs = (0..g.len())
                .map(|i| {
                    let q = g.xi_sq(i);
                    if q == 0.0 {
                        return Complex64::new(if exponent == 0.0 { amp } else { 0.0 }, 0.0);
                    }
                    let r = q.sqrt();
                    let mag = amp * r.powf(exponent) * power_law_taper(r, cutoff, taper_width);
                    if mag == 0.0 {
                        return Complex64::new(0.0, 0.0);
                    }
                    let (s, c) = phase.eval(&g.xi(i)).sin_cos();
                    Complex64::new(mag * c, mag * s)
                })
                .collect();
            SpectralField::new(*g, coeffs)
        }
    }
}

/// Spatial profile of a velocity field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VelocityFamily {
    /// `V = e^{-r²/(2w²)} (-y, x)` in d = 2.
    ModifiedShear,
    /// `V = e^{-r²/(2w²)} (e × x)` in d = 3 with axis `e = (1,1,1)/√3`; the
    /// curl of the Gaussian stream vector `w² e^{-r²/(2w²)} e`.
    GaussianSwirl3d,
}

/// `u(x, t) = A (1+t)^{-ν} V(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityFieldSpec {
    pub family: VelocityFamily,
    pub amplitude: f64,
    pub nu: Rational,
    pub width: f64,
}

const SWIRL_AXIS: [f64; 3] = [
    0.577_350_269_189_625_8,
    0.577_350_269_189_625_8,
    0.577_350_269_189_625_8,
];

impl VelocityFieldSpec {
    pub fn modified_shear(nu: Rational) -> Self {
        VelocityFieldSpec {
            family: VelocityFamily::ModifiedShear,
            amplitude: 1.0,
            nu,
            width: 1.0,
        }
    }

    pub fn gaussian_swirl3d(nu: Rational) -> Self {
        VelocityFieldSpec {
            family: VelocityFamily::GaussianSwirl3d,
            amplitude: 1.0,
            nu,
            width: 1.0,
        }
    }

    /// Time-independent version of `family` (ν = 0).
    pub fn frozen(family: VelocityFamily) -> Self {
        VelocityFieldSpec {
            family,
            amplitude: 1.0,
            nu: Rational::ZERO,
            width: 1.0,
        }
    }

    pub fn with_amplitude(mut self, amplitude: f64) -> Self {
        self.amplitude = amplitude;
        self
    }

    pub fn with_width(mut self, width: f64) -> Self {
        self.width = width;
        self
    }

    pub fn d(&self) -> usize {
        match self.family {
            VelocityFamily::ModifiedShear => 2,
            VelocityFamily::GaussianSwirl3d => 3,
        }
    }

    /// `A (1+t)^{-ν}`.
    pub fn envelope(&self, t: f64) -> f64 {
        self.amplitude * (1.0 + t).powf(-self.nu.to_f64())
    }

    #[inline]
    fn rotation_axis(&self) -> [f64; 3] {
        match self.family {
            VelocityFamily::ModifiedShear => [0.0, 0.0, 1.0],
            VelocityFamily::GaussianSwirl3d => SWIRL_AXIS,
        }
    }

    /// Spatial profile `V(x)`; `x` has `d` components.
    pub fn profile(&self, x: &[f64]) -> [f64; 3] {
        let p = [x[0], x[1], if x.len() > 2 { x[2] } else { 0.0 }];
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let g = (-r2 / (2.0 * self.width * self.width)).exp();
        let c = cross(&self.rotation_axis(), &p);
        [g * c[0], g * c[1], g * c[2]]
    }

    /// Jacobian `J[i][j] = ∂_j V_i` of the spatial profile.
    pub fn profile_jacobian(&self, x: &[f64]) -> [[f64; 3]; 3] {
        let p = [x[0], x[1], if x.len() > 2 { x[2] } else { 0.0 }];
        let w2 = self.width * self.width;
        let r2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
        let g = (-r2 / (2.0 * w2)).exp();
        let e = self.rotation_axis();
        let c = cross(&e, &p);
        // [e×]_{ij} v_j = (e × v)_i
        let ex = [
            [0.0, -e[2], e[1]],
            [e[2], 0.0, -e[0]],
            [-e[1], e[0], 0.0],
        ];
        let mut jac = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                jac[i][j] = g * ex[i][j] - g / w2 * c[i] * p[j];
            }
        }
        jac
    }
}

fn cross(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `(α, ν)`: decay rates of `‖u‖₂` and `‖∇u‖_∞`. Equal for separable fields.
pub fn velocity_rates(spec: &VelocityFieldSpec) -> (f64, f64) {
    let nu = spec.nu.to_f64();
    (nu, nu)
}

/// Samples `u(·, t)` on `g`.
pub fn sample_velocity(spec: &VelocityFieldSpec, t: f64, g: &Grid) -> Result<VectorSamples> {
    if spec.d() != g.d() {
        return Err(CoreError::DimensionMismatch {
            what: "velocity",
            grid: g.d(),
            other: spec.d(),
        });
    }
    check_gaussian_resolution(g, spec.width, 0.0)?;
    let env = spec.envelope(t);
    let d = g.d();
    let mut comps: Vec<Vec<f64>> = (0..d).map(|_| Vec::with_capacity(g.len())).collect();
    for i in 0..g.len() {
        let x = g.point(i);
        let v = spec.profile(&x[..d]);
        for (a, c) in comps.iter_mut().enumerate() {
            c.push(env * v[a]);
        }
    }
    VectorSamples::new(*g, comps)
}

/// Largest eigenvalue of a symmetric 3×3 matrix.
fn sym3_max_eigenvalue(a: &[[f64; 3]; 3]) -> f64 {
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    let tr = a[0][0] + a[1][1] + a[2][2];
    if p1 == 0.0 {
        return a[0][0].max(a[1][1]).max(a[2][2]);
    }
    let q = tr / 3.0;
    let p2 = (a[0][0] - q) * (a[0][0] - q)
        + (a[1][1] - q) * (a[1][1] - q)
        + (a[2][2] - q) * (a[2][2] - q)
        + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (a[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det / 2.0).clamp(-1.0, 1.0);
    let phi = libm::acos(r) / 3.0;
    q + 2.0 * p * phi.cos()
}

/// Operator 2-norm of a 3×3 matrix.
pub fn operator_norm(j: &[[f64; 3]; 3]) -> f64 {
    let mut m = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            m[a][b] = (0..3).map(|k| j[k][a] * j[k][b]).sum();
        }
    }
    sym3_max_eigenvalue(&m).max(0.0).sqrt()
}

/// Quadrature nodes on `[-6w, 6w]^d` with `per_w` points per unit width,
/// centred so the origin is a node. Calls `f(x, weight)`.
fn fine_quadrature(spec: &VelocityFieldSpec, per_w: usize, mut f: impl FnMut(&[f64; 3], f64)) {
    let d = spec.d();
    let h = spec.width / per_w as f64;
    let m = 6 * per_w as i64;
    let weight = if d == 2 { h * h } else { h * h * h };
    let zr = if d == 2 { 0..=0 } else { -m..=m };
    for i in -m..=m {
        for j in -m..=m {
            for k in zr.clone() {
                let x = [i as f64 * h, j as f64 * h, k as f64 * h];
                f(&x, weight);
            }
        }
    }
}

/// `‖V‖₂` by fine quadrature.
pub fn profile_l2(spec: &VelocityFieldSpec) -> f64 {
    let d = spec.d();
    let per_w = if d == 2 { 40 } else { 12 };
    let mut s = 0.0;
    fine_quadrature(spec, per_w, |x, w| {
        let v = spec.profile(&x[..d]);
        s += w * (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    });
    s.sqrt()
}

/// `‖∇V‖_∞`: sup over the fine nodes of the pointwise operator 2-norm.
pub fn profile_grad_sup(spec: &VelocityFieldSpec) -> f64 {
    let d = spec.d();
    let per_w = if d == 2 { 40 } else { 12 };
    let mut best: f64 = 0.0;
    fine_quadrature(spec, per_w, |x, _| {
        best = best.max(operator_norm(&spec.profile_jacobian(&x[..d])));
    });
    best
}

/// `‖u(t)‖₂ = A ‖V‖₂ (1+t)^{-ν}`.
pub fn velocity_l2(spec: &VelocityFieldSpec, t: f64) -> f64 {
    spec.envelope(t).abs() * profile_l2(spec)
}

/// `‖∇u(t)‖_∞ = A ‖∇V‖_∞ (1+t)^{-ν}`.
pub fn grad_velocity_sup(spec: &VelocityFieldSpec, t: f64) -> f64 {
    spec.envelope(t).abs() * profile_grad_sup(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{divergence_max, inverse, l2_norm};

    fn nu(s: &str) -> Rational {
        Rational::parse(s).unwrap()
    }

    #[test]
    fn decay_characters() {
        assert_eq!(analytic_decay_character(&InitialDataSpec::gaussian(1.0)), 0.0);
        assert_eq!(analytic_decay_character(&InitialDataSpec::dipole(1.0)), 1.0);
        assert_eq!(
            analytic_decay_character(&InitialDataSpec::power_law(0.5, 1.0, 0.5, 7)),
            0.5
        );
        assert_eq!(lp_decay_character(2, 1.0), 0.0);
        assert!((lp_decay_character(3, 1.2) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn gaussian_l2_and_dipole_mean() {
        let g = Grid::new(2, 128, 12.0).unwrap();
        let f = sample_initial_data(&InitialDataSpec::gaussian(1.0), &g).unwrap();
        assert!((l2_norm(&f, false) - PI.sqrt()).abs() < 1e-6);
        let dp = sample_initial_data(&InitialDataSpec::dipole(1.0), &g).unwrap();
        assert_eq!(dp.coeffs()[0], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn under_resolved_profiles_are_rejected() {
        let g = Grid::new(2, 32, 20.0).unwrap();
        match sample_initial_data(&InitialDataSpec::gaussian(1.0), &g) {
            Err(CoreError::UnderResolved { required_n, .. }) => assert!(required_n >= 80),
            other => panic!("{other:?}"),
        }
        let small = Grid::new(2, 64, 3.0).unwrap();
        assert!(matches!(
            sample_initial_data(&InitialDataSpec::gaussian(1.0), &small),
            Err(CoreError::UnderResolved { .. })
        ));
        assert!(sample_initial_data(&InitialDataSpec::power_law(0.5, 0.1, 0.5, 1), &g).is_err());
    }

    #[test]
    fn power_law_is_real_and_localised() {
        let g = Grid::new(2, 256, 100.0).unwrap();
        let f = sample_initial_data(&InitialDataSpec::power_law(0.5, 1.0, 1.0, 3), &g).unwrap();
        let max = f.coeffs().iter().fold(0.0, |m: f64, z| m.max(z.norm()));
        assert!(f.conjugate_asymmetry() < 1e-12 * max);
        let s = inverse(&f);
        let bm = s.boundary_mass_fraction();
        assert!(bm < 1e-4, "{bm}");
        let again = sample_initial_data(&InitialDataSpec::power_law(0.5, 1.0, 1.0, 3), &g).unwrap();
        assert_eq!(f, again);
    }

    #[test]
    fn taper_is_a_smooth_step() {
        assert_eq!(power_law_taper(0.5, 1.0, 0.5), 1.0);
        assert_eq!(power_law_taper(1.0, 1.0, 0.5), 1.0);
        assert_eq!(power_law_taper(1.5, 1.0, 0.5), 0.0);
        assert!((power_law_taper(1.25, 1.0, 0.5) - 0.5).abs() < 1e-15);
        let mut prev = 1.0;
        for i in 0..=100 {
            let v = power_law_taper(1.0 + 0.005 * i as f64, 1.0, 0.5);
            assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn shear_samples_and_separability() {
        let g = Grid::new(2, 64, 8.0).unwrap();
        let spec = VelocityFieldSpec::modified_shear(nu("2"));
        let u0 = sample_velocity(&spec, 0.0, &g).unwrap();
        let u3 = sample_velocity(&spec, 3.0, &g).unwrap();
        for i in 0..g.len() {
            let x = g.point(i);
            let e = (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp();
            assert!((u0.components()[0][i] + x[1] * e).abs() < 1e-15);
            assert!((u0.components()[1][i] - x[0] * e).abs() < 1e-15);
            for a in 0..2 {
                assert!((u3.components()[a][i] - u0.components()[a][i] / 16.0).abs() <= 1e-14 * u0.components()[a][i].abs());
            }
        }
        assert!(sample_velocity(&VelocityFieldSpec::gaussian_swirl3d(nu("1")), 0.0, &g).is_err());
    }

    #[test]
    fn velocity_divergence_free() {
        let g = Grid::new(2, 128, 8.0).unwrap();
        let u = sample_velocity(&VelocityFieldSpec::modified_shear(nu("1/2")), 0.0, &g).unwrap();
        assert!(divergence_max(&u) <= 1e-8 * u.sup_magnitude() * g.max_xi());
        let g3 = Grid::new(3, 48, 8.0).unwrap();
        let u3 = sample_velocity(&VelocityFieldSpec::gaussian_swirl3d(nu("1")), 2.0, &g3).unwrap();
        assert!(divergence_max(&u3) <= 1e-8 * u3.sup_magnitude() * g3.max_xi());
    }

    #[test]
    fn rates_and_norms() {
        assert_eq!(velocity_rates(&VelocityFieldSpec::modified_shear(nu("2"))), (2.0, 2.0));
        assert_eq!(velocity_rates(&VelocityFieldSpec::frozen(VelocityFamily::ModifiedShear)), (0.0, 0.0));
        assert_eq!(velocity_rates(&VelocityFieldSpec::modified_shear(nu("1/2"))), (0.5, 0.5));

        let s = VelocityFieldSpec::modified_shear(nu("3/2"));
        assert!((velocity_l2(&s, 3.0) / velocity_l2(&s, 0.0) - 4f64.powf(-1.5)).abs() < 1e-14);
        let a = grad_velocity_sup(&s, 1.0) * 2f64.powf(1.5);
        let b = grad_velocity_sup(&s, 9.0) * 10f64.powf(1.5);
        assert!((a - b).abs() < 1e-12 * a);
        assert!((profile_grad_sup(&s) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norm_of_known_matrices() {
        let rot = [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]];
        assert!((operator_norm(&rot) - 1.0).abs() < 1e-14);
        let diag = [[3.0, 0.0, 0.0], [0.0, -5.0, 0.0], [0.0, 0.0, 1.0]];
        assert!((operator_norm(&diag) - 5.0).abs() < 1e-14);
        let m = [[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]];
        // singular values of [[1,2],[0,1]]: 1 ± √2
        assert!((operator_norm(&m) - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    }
}
