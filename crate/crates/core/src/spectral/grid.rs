use core::f64::consts::PI;

use crate::{CoreError, Result};

/// Uniform grid on `[-L, L)^d` with `n` points per axis.
///
/// Spectral arrays use the usual FFT storage order along every axis: index
/// `j < n/2` holds wavenumber `j`, index `j >= n/2` holds `j - n`. The
/// lattice is therefore `[-n/2, n/2 - 1]` per axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    d: usize,
    n: usize,
    half_width: f64,
}

impl Grid {
    pub fn new(d: usize, n: usize, half_width: f64) -> Result<Self> {
        if d != 2 && d != 3 {
            return Err(CoreError::InvalidGrid("dimension must be 2 or 3"));
        }
        if n % 2 != 0 {
            return Err(CoreError::InvalidGrid("points per axis must be even"));
        }
        if n < 16 {
            return Err(CoreError::InvalidGrid("points per axis must be at least 16"));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(CoreError::InvalidGrid("half width must be positive and finite"));
        }
        Ok(Grid { d, n, half_width })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    pub fn dxi(&self) -> f64 {
        PI / self.half_width
    }

    /// Total number of points, `n^d`.
    pub fn len(&self) -> usize {
        self.n.pow(self.d as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest frequency magnitude on the lattice, `|ξ|` at the corner.
    pub fn max_xi(&self) -> f64 {
        (self.d as f64).sqrt() * (self.n / 2) as f64 * self.dxi()
    }

    #[inline]
    pub fn wavenumber(&self, j: usize) -> i64 {
        if j < self.n / 2 {
            j as i64
        } else {
            j as i64 - self.n as i64
        }
    }

    /// Per-axis storage indices of a flat index; unused trailing axes are 0.
    #[inline]
    pub fn multi_index(&self, flat: usize) -> [usize; 3] {
        let n = self.n;
        if self.d == 2 {
            [flat / n, flat % n, 0]
        } else {
            [flat / (n * n), (flat / n) % n, flat % n]
        }
    }

    /// Integer lattice vector `k` of a flat spectral index.
    #[inline]
    pub fn lattice(&self, flat: usize) -> [i64; 3] {
        let m = self.multi_index(flat);
        let mut k = [0; 3];
        for a in 0..self.d {
            k[a] = self.wavenumber(m[a]);
        }
        k
    }

    /// Flat index of lattice vector `k`; components are taken modulo `n`.
    pub fn index_of(&self, k: &[i64]) -> usize {
        let n = self.n as i64;
        k.iter()
            .take(self.d)
            .fold(0usize, |acc, &ki| acc * self.n + ki.rem_euclid(n) as usize)
    }

    #[inline]
    pub fn xi(&self, flat: usize) -> [f64; 3] {
        let k = self.lattice(flat);
        let s = self.dxi();
        [k[0] as f64 * s, k[1] as f64 * s, k[2] as f64 * s]
    }

    #[inline]
    pub fn xi_sq(&self, flat: usize) -> f64 {
        let k = self.lattice(flat);
        let s = self.dxi();
        (k[0] * k[0] + k[1] * k[1] + k[2] * k[2]) as f64 * s * s
    }

    /// `true` if component `axis` of the mode sits on the unpaired Nyquist
    /// wavenumber `-n/2`.
    #[inline]
    pub fn is_nyquist(&self, flat: usize, axis: usize) -> bool {
        self.multi_index(flat)[axis] == self.n / 2
    }

    /// `true` if the mode survives the 2/3-rule truncation, `|k_i| < n/3`.
    #[inline]
    pub fn dealias_keep(&self, flat: usize) -> bool {
        let k = self.lattice(flat);
        let cut = self.n as i64;
        k.iter().take(self.d).all(|&ki| 3 * ki.abs() < cut)
    }

    #[inline]
    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    /// Physical point of a flat index; unused trailing components are 0.
    #[inline]
    pub fn point(&self, flat: usize) -> [f64; 3] {
        let m = self.multi_index(flat);
        let mut x = [0.0; 3];
        for a in 0..self.d {
            x[a] = self.coordinate(m[a]);
        }
        x
    }

    /// Volume element `dx^d`.
    pub fn cell_volume(&self) -> f64 {
        let dx = self.dx();
        if self.d == 2 {
            dx * dx
        } else {
            dx * dx * dx
        }
    }

    /// Frequency-space volume element `dxi^d`.
    pub fn xi_cell_volume(&self) -> f64 {
        let s = self.dxi();
        if self.d == 2 {
            s * s
        } else {
            s * s * s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_lattice() {
        let g = Grid::new(2, 64, 20.0).unwrap();
        assert_eq!(g.dx(), 0.625);
        assert!((g.dxi() - PI / 20.0).abs() < 1e-16);
        assert_eq!(g.len(), 4096);

        let g3 = Grid::new(3, 16, 10.0).unwrap();
        assert_eq!(g3.len(), 4096);
        let (mut lo, mut hi) = (0, 0);
        for f in 0..g3.len() {
            for &k in &g3.lattice(f) {
                lo = lo.min(k);
                hi = hi.max(k);
            }
        }
        assert_eq!((lo, hi), (-8, 7));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::new(2, 63, 20.0).is_err());
        assert!(Grid::new(4, 64, 20.0).is_err());
        assert!(Grid::new(2, 64, 0.0).is_err());
        assert!(Grid::new(2, 8, 1.0).is_err());
    }

    #[test]
    fn index_round_trip() {
        let g = Grid::new(3, 16, 1.0).unwrap();
        for f in 0..g.len() {
            assert_eq!(g.index_of(&g.lattice(f)), f);
        }
    }
}
