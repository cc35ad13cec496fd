//! Ordinary least squares for straight lines.

#[allow(unused_imports)]
use crate::math::Real;
use crate::{CoreError, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    /// Root mean square of the residuals.
    pub residual_rms: f64,
    pub points: usize,
}

/// Fits `y ≈ intercept + slope·x`.
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    let n = x.len().min(y.len());
    if n < 2 {
        return Err(CoreError::TooFewPoints { needed: 2, got: n });
    }
    let nf = n as f64;
    let mx = x[..n].iter().sum::<f64>() / nf;
    let my = y[..n].iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for i in 0..n {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if !(sxx > 0.0) {
        return Err(CoreError::InvalidParameter("abscissae must not all coincide"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = (0..n)
        .map(|i| {
            let r = y[i] - intercept - slope * x[i];
            r * r
        })
        .sum();
    let s2 = if n > 2 { sse / (nf - 2.0) } else { 0.0 };
    let slope_stderr = (s2 / sxx).sqrt();
    let intercept_stderr = (s2 * (1.0 / nf + mx * mx / sxx)).sqrt();
    Ok(LineFit {
        slope,
        intercept,
        slope_stderr,
        intercept_stderr,
        residual_rms: (sse / nf).sqrt(),
        points: n,
    })
}

/// Least-squares intercept of `y ≈ c + slope·x` with the slope held fixed.
pub fn fit_intercept(x: &[f64], y: &[f64], slope: f64) -> Result<f64> {
    let n = x.len().min(y.len());
    if n == 0 {
        return Err(CoreError::TooFewPoints { needed: 1, got: 0 });
    }
    Ok((0..n).map(|i| y[i] - slope * x[i]).sum::<f64>() / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [1.0, 3.0, 5.0, 7.0];
        let f = fit_line(&x, &y).unwrap();
        assert!((f.slope - 2.0).abs() < 1e-15);
        assert!((f.intercept - 1.0).abs() < 1e-15);
        assert!(f.slope_stderr < 1e-15);
        assert!((fit_intercept(&x, &y, 2.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stderr_matches_hand_computation() {
        // residuals +-0.1 alternating around y = x
        let x = [0.0, 1.0, 2.0, 3.0];
        let y = [0.1, 0.9, 2.1, 2.9];
        let f = fit_line(&x, &y).unwrap();
        // slope = Sxy/Sxx = 4.8/5 = 0.96, intercept = 1.5 - 0.96*1.5 = 0.06
        assert!((f.slope - 0.96).abs() < 1e-14);
        assert!((f.intercept - 0.06).abs() < 1e-14);
        let sse: f64 = (0..4).map(|i| (y[i] - 0.06 - 0.96 * x[i]).powi(2)).sum();
        assert!((f.slope_stderr - (sse / 2.0 / 5.0).sqrt()).abs() < 1e-14);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_line(&[1.0], &[1.0]).is_err());
        assert!(fit_line(&[1.0, 1.0], &[1.0, 2.0]).is_err());
    }
}
