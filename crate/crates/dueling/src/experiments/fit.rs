//! Ordinary least squares on log-log data, with classical standard errors.

use serde::Serialize;

use crate::{Error, Result};

/// Power-law fit `log2 y = slope * log2 x + intercept` with unbiased
/// residual-variance standard errors and the coefficient of determination.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    pub intercept_stderr: f64,
    pub r_squared: f64,
}

/// Straight-line least squares on already-transformed coordinates.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() || xs.len() < 3 {
        return Err(Error::BadFit(format!(
            "need at least 3 paired points, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::BadFit("all x values coincide".into()));
    }
    let sxy: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (x - x_mean) * (y - y_mean))
        .sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - (slope * x + intercept)).powi(2))
        .sum();
    let ss_tot: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let variance = ss_res / (n - 2.0);
    // Zero-variance targets fit exactly; report a perfect determination.
    let r_squared = if ss_tot == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(FitResult {
        slope,
        intercept,
        slope_stderr: (variance / sxx).sqrt(),
        intercept_stderr: (variance * (1.0 / n + x_mean * x_mean / sxx)).sqrt(),
        r_squared,
    })
}

/// OLS on `(log2 x, log2 y)`; every coordinate must be positive.
pub fn loglog_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.iter().any(|&(x, y)| x <= 0.0 || y <= 0.0) {
        return Err(Error::BadFit("log-log fit needs positive data".into()));
    }
    let xs: Vec<f64> = points.iter().map(|&(x, _)| x.log2()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, y)| y.log2()).collect();
    linear_fit(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let fit = loglog_fit(&[(2.0, 2.0), (4.0, 4.0), (8.0, 8.0)]).unwrap();
        assert!((fit.slope - 1.0).abs() < 1e-12);
        assert!(fit.intercept.abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert!(fit.slope_stderr.abs() < 1e-12);
    }

    #[test]
    fn constant_targets_have_unit_r_squared() {
        let fit = loglog_fit(&[(2.0, 1.0), (4.0, 1.0), (8.0, 1.0)]).unwrap();
        assert_eq!(fit.slope, 0.0);
        assert_eq!(fit.r_squared, 1.0);
    }

    #[test]
    fn square_root_scaling_is_exact() {
        let points: Vec<(f64, f64)> = (4..10)
            .map(|n| {
                let x = (1u64 << n) as f64;
                (x, x.sqrt())
            })
            .collect();
        let fit = loglog_fit(&points).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-12);
        assert!(fit.slope_stderr < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(loglog_fit(&[(2.0, 2.0), (4.0, 4.0)]).is_err());
        assert!(loglog_fit(&[(2.0, 2.0), (2.0, 4.0), (2.0, 8.0)]).is_err());
        assert!(loglog_fit(&[(2.0, 2.0), (-4.0, 4.0), (8.0, 8.0)]).is_err());
    }

    #[test]
    fn published_complexity_points_reproduce_reported_fit() {
        // (N, T) rows of the tuned complexity experiment; the reference
        // coefficients come from an independent hand computation.
        let t = [3.0, 5.0, 9.0, 10.0, 14.0, 19.0, 27.0, 44.0, 66.0, 104.0, 131.0, 187.0];
        let points: Vec<(f64, f64)> = (5..=16)
            .map(|n| ((1u64 << n) as f64, t[n - 5]))
            .collect();
        let fit = loglog_fit(&points).unwrap();
        assert!((fit.slope - 0.530678).abs() < 1e-3);
        assert!((fit.slope_stderr - 0.013311).abs() < 1e-3);
        assert!((fit.intercept - (-0.9060)).abs() < 5e-3);
        assert!((fit.intercept_stderr - 0.1471).abs() < 1e-3);
        assert!((fit.r_squared - 0.993747).abs() < 1e-4);
    }
}
