//! Time quadrature and convergence-order helpers.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Composite Simpson rule over equally spaced samples; needs an odd count >= 3.
pub fn simpson(values: &[Complex64], h: f64) -> Result<Complex64> {
    let n = values.len();
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidArgument(format!(
            "Simpson quadrature needs an odd number (>= 3) of samples, got {n}"
        )));
    }
    let mut s = values[0] + values[n - 1];
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    Ok(s * (h / 3.0))
}

/// `n` equally spaced times from `t1` to `t2` inclusive.
pub fn linspace(t1: f64, t2: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![t1];
    }
    let h = (t2 - t1) / (n - 1) as f64;
    (0..n).map(|i| t1 + i as f64 * h).collect()
}

/// Least-squares slope of `log(error)` against `log(step)`.
///
/// Returns `NaN` if any error is non-positive.
pub fn observed_order(steps: &[f64], errors: &[f64]) -> f64 {
    if steps.len() != errors.len() || steps.len() < 2 || errors.iter().any(|&e| e <= 0.0) {
        return f64::NAN;
    }
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_is_exact_on_cubics() {
        let ts = linspace(0.0, 2.0, 9);
        let v: Vec<Complex64> = ts.iter().map(|t| Complex64::new(t * t * t - t, 0.5 * t)).collect();
        let s = simpson(&v, 0.25).unwrap();
        assert!((s - Complex64::new(4.0 - 2.0, 1.0)).norm() < 1e-13);
        assert!(simpson(&v[..4], 0.25).is_err());
    }

    #[test]
    fn order_of_power_law() {
        let steps = [0.1, 0.05, 0.025];
        let errs: Vec<f64> = steps.iter().map(|h: &f64| 3.0 * h.powi(2)).collect();
        assert!((observed_order(&steps, &errs) - 2.0).abs() < 1e-12);
        assert!(observed_order(&steps, &[1.0, 0.0, 1.0]).is_nan());
    }
}
