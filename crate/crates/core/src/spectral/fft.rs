//! Mixed-radix complex FFT (radices 4, 2, 3, 5 and a generic fallback).
//!
//! The forward transform is unnormalised, `X[k] = Σ_j x[j] e^{-2πi jk/n}`.
//! The inverse is unnormalised as well and is computed through the
//! conjugation identity, so callers divide by `n` themselves.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

#[allow(unused_imports)]
use crate::math::Real;

#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    factors: Vec<(usize, usize)>,
    twiddles: Vec<Complex64>,
}

fn factorize(n: usize) -> Vec<(usize, usize)> {
    let mut factors = Vec::new();
    let mut rest = n;
    let mut p = 4;
    while rest > 1 {
        while rest % p != 0 {
            p = match p {
                4 => 2,
                2 => 3,
                _ => p + 2,
            };
            if p * p > rest {
                p = rest;
            }
        }
        rest /= p;
        factors.push((p, rest));
    }
    factors
}

impl FftPlan {
    pub fn new(n: usize) -> Self {
        assert!(n > 0, "FFT length must be positive");
        let twiddles = (0..n)
            .map(|i| {
                let (s, c) = (-2.0 * PI * i as f64 / n as f64).sin_cos();
                Complex64::new(c, s)
            })
            .collect();
        FftPlan {
            n,
            factors: factorize(n),
            twiddles,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In-place forward transform. `scratch` must hold at least `n` values.
    pub fn forward(&self, data: &mut [Complex64], scratch: &mut [Complex64]) {
        assert_eq!(data.len(), self.n);
        if self.n == 1 {
            return;
        }
        let input = &mut scratch[..self.n];
        input.copy_from_slice(data);
        let mut buf = vec![Complex64::new(0.0, 0.0); self.max_radix()];
        self.work(data, input, 0, 1, &self.factors, &mut buf);
    }

    /// In-place unnormalised inverse transform.
    pub fn inverse(&self, data: &mut [Complex64], scratch: &mut [Complex64]) {
        for z in data.iter_mut() {
            *z = z.conj();
        }
        self.forward(data, scratch);
        for z in data.iter_mut() {
            *z = z.conj();
        }
    }

    fn max_radix(&self) -> usize {
        self.factors.iter().map(|f| f.0).max().unwrap_or(1)
    }

    fn work(
        &self,
        out: &mut [Complex64],
        input: &[Complex64],
        offset: usize,
        fstride: usize,
        factors: &[(usize, usize)],
        buf: &mut [Complex64],
    ) {
        let (p, m) = factors[0];
        if m == 1 {
            for (j, o) in out.iter_mut().take(p).enumerate() {
                *o = input[offset + j * fstride];
            }
        } else {
            for j in 0..p {
                self.work(
                    &mut out[j * m..(j + 1) * m],
                    input,
                    offset + j * fstride,
                    fstride * p,
                    &factors[1..],
                    buf,
                );
            }
        }
        match p {
            2 => self.butterfly2(out, fstride, m),
            4 => self.butterfly4(out, fstride, m),
            _ => self.butterfly_generic(out, fstride, p, m, buf),
        }
    }

    fn butterfly2(&self, out: &mut [Complex64], fstride: usize, m: usize) {
        for k in 0..m {
            let t = out[k + m] * self.twiddles[k * fstride];
            out[k + m] = out[k] - t;
            out[k] += t;
        }
    }

    fn butterfly4(&self, out: &mut [Complex64], fstride: usize, m: usize) {
        let tw = &self.twiddles;
        for k in 0..m {
            let s0 = out[k + m] * tw[k * fstride];
            let s1 = out[k + 2 * m] * tw[2 * k * fstride];
            let s2 = out[k + 3 * m] * tw[3 * k * fstride];
            let s5 = out[k] - s1;
            let a = out[k] + s1;
            let s3 = s0 + s2;
            let s4 = s0 - s2;
            out[k + 2 * m] = a - s3;
            out[k] = a + s3;
            out[k + m] = Complex64::new(s5.re + s4.im, s5.im - s4.re);
            out[k + 3 * m] = Complex64::new(s5.re - s4.im, s5.im + s4.re);
        }
    }

    fn butterfly_generic(
        &self,
        out: &mut [Complex64],
        fstride: usize,
        p: usize,
        m: usize,
        buf: &mut [Complex64],
    ) {
        let n = self.n;
        for u in 0..m {
            for q in 0..p {
                buf[q] = out[u + q * m];
            }
            for q1 in 0..p {
                let k = u + q1 * m;
                let step = (fstride * k) % n;
                let mut idx = 0;
                let mut sum = buf[0];
                for b in &buf[1..p] {
                    idx += step;
                    if idx >= n {
                        idx -= n;
                    }
                    sum += *b * self.twiddles[idx];
                }
                out[k] = sum;
            }
        }
    }
}

/// Applies a 1-d transform along `axis` of a row-major array with `d` axes
/// of length `n`.
pub(crate) fn transform_axis(
    plan: &FftPlan,
    data: &mut [Complex64],
    d: usize,
    axis: usize,
    inverse: bool,
) {
    let n = plan.len();
    let stride = n.pow((d - 1 - axis) as u32);
    let total = data.len();
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    let mut scratch = vec![Complex64::new(0.0, 0.0); n];
    let block = stride * n;
    for outer in (0..total).step_by(block) {
        for inner in 0..stride {
            let base = outer + inner;
            if stride == 1 {
                let l = &mut data[base..base + n];
                if inverse {
                    plan.inverse(l, &mut scratch);
                } else {
                    plan.forward(l, &mut scratch);
                }
                continue;
            }
            for (j, z) in line.iter_mut().enumerate() {
                *z = data[base + j * stride];
            }
            if inverse {
                plan.inverse(&mut line, &mut scratch);
            } else {
                plan.forward(&mut line, &mut scratch);
            }
            for (j, z) in line.iter().enumerate() {
                data[base + j * stride] = *z;
            }
        }
    }
}
