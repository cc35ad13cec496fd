use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use super::fft::{transform_axis, FftPlan};
use super::Grid;
#[allow(unused_imports)]
use crate::math::Real;
use crate::{CoreError, Result};

/// Real samples of a scalar at the grid points `x_j = -L + j dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSamples {
    grid: Grid,
    values: Vec<f64>,
}

impl ScalarSamples {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(CoreError::ShapeMismatch {
                expected: grid.len(),
                actual: values.len(),
            });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(CoreError::InvalidParameter("samples must be finite"));
        }
        Ok(ScalarSamples { grid, values })
    }

    /// Samples `f` at every grid point. `f` receives the first `d`
    /// coordinates.
    pub fn from_fn(grid: Grid, mut f: impl FnMut(&[f64]) -> f64) -> Self {
        let d = grid.d();
        let values = (0..grid.len())
            .map(|i| {
                let x = grid.point(i);
                f(&x[..d])
            })
            .collect();
        ScalarSamples { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Physical-space L² norm by the rectangle rule.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.values.iter().map(|v| v * v).sum();
        (s * self.grid.cell_volume()).sqrt()
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Fraction of `∫θ²` carried by points with `max_i |x_i| >= 0.9 L`.
    pub fn boundary_mass_fraction(&self) -> f64 {
        let edge = 0.9 * self.grid.half_width();
        let d = self.grid.d();
        let (mut outer, mut total) = (0.0, 0.0);
        for (i, v) in self.values.iter().enumerate() {
            let w = v * v;
            total += w;
            let x = self.grid.point(i);
            if x[..d].iter().any(|c| c.abs() >= edge) {
                outer += w;
            }
        }
        if total > 0.0 {
            outer / total
        } else {
            0.0
        }
    }
}

/// Fourier coefficients scaled so that `coeffs[k] ≈ ∫ e^{-iξ_k·x} θ(x) dx`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(CoreError::ShapeMismatch {
                expected: grid.len(),
                actual: coeffs.len(),
            });
        }
        Ok(SpectralField { grid, coeffs })
    }

    pub fn zeros(grid: Grid) -> Self {
        SpectralField {
            grid,
            coeffs: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    /// Coefficient at lattice vector `k`.
    pub fn coeff(&self, k: &[i64]) -> Complex64 {
        self.coeffs[self.grid.index_of(k)]
    }

    pub fn scaled(&self, c: f64) -> Self {
        SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|z| z * c).collect(),
        }
    }

    /// `self - other`, coefficient-wise.
    pub fn difference(&self, other: &SpectralField) -> Result<Self> {
        if self.grid != other.grid {
            return Err(CoreError::ShapeMismatch {
                expected: self.coeffs.len(),
                actual: other.coeffs.len(),
            });
        }
        Ok(SpectralField {
            grid: self.grid,
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    /// Largest deviation from `c[-k] = conj(c[k])`.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let g = &self.grid;
        let mut worst: f64 = 0.0;
        for (i, z) in self.coeffs.iter().enumerate() {
            let k = g.lattice(i);
            let j = g.index_of(&[-k[0], -k[1], -k[2]]);
            worst = worst.max((z - self.coeffs[j].conj()).norm());
        }
        worst
    }

    /// `true` if the zero mode is negligible, `|c_0| <= 1e-8 max|c|`.
    pub fn is_mean_free(&self) -> bool {
        let max = self.coeffs.iter().fold(0.0, |m: f64, z| m.max(z.norm()));
        self.coeffs[0].norm() <= 1e-8 * max
    }

    fn weighted_sum(&self, exclude_zero: bool, weight: impl Fn(f64) -> f64) -> f64 {
        let g = &self.grid;
        let start = usize::from(exclude_zero);
        let s: f64 = self.coeffs[start..]
            .iter()
            .enumerate()
            .map(|(i, z)| weight(g.xi_sq(i + start)) * z.norm_sqr())
            .sum();
        s * g.xi_cell_volume() / (2.0 * PI).powi(g.d() as i32)
    }
}

/// Real samples of a vector field, one array per component.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorSamples {
    grid: Grid,
    components: Vec<Vec<f64>>,
}

impl VectorSamples {
    pub fn new(grid: Grid, components: Vec<Vec<f64>>) -> Result<Self> {
        if components.len() != grid.d() {
            return Err(CoreError::DimensionMismatch {
                what: "vector field",
                grid: grid.d(),
                other: components.len(),
            });
        }
        for c in &components {
            if c.len() != grid.len() {
                return Err(CoreError::ShapeMismatch {
                    expected: grid.len(),
                    actual: c.len(),
                });
            }
        }
        Ok(VectorSamples { grid, components })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn components(&self) -> &[Vec<f64>] {
        &self.components
    }

    /// Pointwise maximum of `|u(x)|`.
    pub fn sup_magnitude(&self) -> f64 {
        let mut best: f64 = 0.0;
        for i in 0..self.grid.len() {
            let s: f64 = self.components.iter().map(|c| c[i] * c[i]).sum();
            best = best.max(s);
        }
        best.sqrt()
    }

    /// `(Σ_i ∫ u_i² dx)^{1/2}` by the rectangle rule.
    pub fn l2_norm(&self) -> f64 {
        let s: f64 = self.components.iter().flatten().map(|v| v * v).sum();
        (s * self.grid.cell_volume()).sqrt()
    }
}

fn transform_all_axes(grid: &Grid, data: &mut [Complex64], inverse: bool) {
    let plan = FftPlan::new(grid.n());
    for axis in 0..grid.d() {
        transform_axis(&plan, data, grid.d(), axis, inverse);
    }
}

#[inline]
fn parity_sign(grid: &Grid, flat: usize) -> f64 {
    let m = grid.multi_index(flat);
    if (m[0] + m[1] + m[2]) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Forward transform of raw real values on `grid` (no shape checks).
pub(crate) fn forward_values(grid: &Grid, values: &[f64]) -> SpectralField {
    let mut data: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    transform_all_axes(grid, &mut data, false);
    let vol = grid.cell_volume();
    for (i, z) in data.iter_mut().enumerate() {
        *z *= vol * parity_sign(grid, i);
    }
    SpectralField {
        grid: *grid,
        coeffs: data,
    }
}

/// Inverse transform returning the real part of the samples.
pub(crate) fn inverse_values(grid: &Grid, coeffs: &[Complex64]) -> Vec<f64> {
    let mut data: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .map(|(i, z)| z * parity_sign(grid, i))
        .collect();
    transform_all_axes(grid, &mut data, true);
    let scale = 1.0 / (grid.len() as f64 * grid.cell_volume());
    data.iter().map(|z| z.re * scale).collect()
}

/// Continuum-normalised forward transform: `dx^d (-1)^{Σk} DFT[θ]`.
pub fn forward(s: &ScalarSamples) -> SpectralField {
    forward_values(&s.grid, &s.values)
}

/// Inverse of [`forward`]; the imaginary residue is discarded.
pub fn inverse(f: &SpectralField) -> ScalarSamples {
    ScalarSamples {
        grid: f.grid,
        values: inverse_values(&f.grid, &f.coeffs),
    }
}

/// `((2π)^{-d} Σ_k |c_k|² dxi^d)^{1/2}`.
pub fn l2_norm(f: &SpectralField, exclude_zero_mode: bool) -> f64 {
    f.weighted_sum(exclude_zero_mode, |_| 1.0).sqrt()
}

/// `((2π)^{-d} Σ_k |ξ_k|² |c_k|² dxi^d)^{1/2}`.
pub fn grad_l2_norm(f: &SpectralField) -> f64 {
    f.weighted_sum(true, |q| q).sqrt()
}

/// Ḣ⁻¹ norm together with the mean-free warning flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvGradNorm {
    pub value: f64,
    /// Set in d = 2 when the box mean is not negligible; the value then
    /// depends on the box size through the smallest non-zero modes.
    pub truncation_sensitive: bool,
}

/// `((2π)^{-d} Σ_{k≠0} |ξ_k|^{-2} |c_k|² dxi^d)^{1/2}`.
pub fn inv_grad_l2_norm(f: &SpectralField) -> InvGradNorm {
    InvGradNorm {
        value: f.weighted_sum(true, |q| 1.0 / q).sqrt(),
        truncation_sensitive: f.grid.d() == 2 && !f.is_mean_free(),
    }
}

/// `λ = ‖∇⁻¹θ‖₂ / ‖θ‖₂`, both without the zero mode.
pub fn filamentation_length(f: &SpectralField) -> Result<f64> {
    let l2 = l2_norm(f, true);
    if !(l2 > 0.0) {
        return Err(CoreError::ZeroField);
    }
    Ok(inv_grad_l2_norm(f).value / l2)
}

/// `F(δ) = Σ_{|ξ_k| <= δ} |c_k|² dxi^d`, zero mode included.
pub fn low_mode_mass(f: &SpectralField, delta: f64) -> Result<f64> {
    let g = &f.grid;
    if !(delta >= g.dxi()) {
        return Err(CoreError::UnresolvableShell {
            delta,
            dxi: g.dxi(),
        });
    }
    let d2 = delta * delta;
    let s: f64 = f
        .coeffs
        .iter()
        .enumerate()
        .filter(|(i, _)| g.xi_sq(*i) <= d2)
        .map(|(_, z)| z.norm_sqr())
        .sum();
    Ok(s * g.xi_cell_volume())
}

/// Sup norm of the spectrally computed divergence. The unpaired Nyquist
/// mode is dropped from each derivative.
pub fn divergence_max(v: &VectorSamples) -> f64 {
    let g = &v.grid;
    let mut acc = vec![Complex64::new(0.0, 0.0); g.len()];
    for (axis, comp) in v.components.iter().enumerate() {
        let f = forward_values(g, comp);
        for (i, z) in f.coeffs.iter().enumerate() {
            if !g.is_nyquist(i, axis) {
                acc[i] += Complex64::new(0.0, g.xi(i)[axis]) * z;
            }
        }
    }
    inverse_values(g, &acc)
        .iter()
        .fold(0.0, |m: f64, x| m.max(x.abs()))
}
