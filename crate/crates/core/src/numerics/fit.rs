//! Ordinary least squares on log-log points, used to estimate volume-growth
//! exponents.

use crate::scalar::Scalar;
use crate::{domain_err, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit<F> {
    pub slope: F,
    pub intercept: F,
    /// Sum of squared residuals in log space.
    pub residual: F,
}

/// Fit `ln v = slope · ln r + intercept` by least squares.
///
/// Requires at least three points with strictly positive coordinates.
pub fn fit_loglog_slope<F: Scalar>(points: &[(F, F)]) -> Result<LineFit<F>> {
    if points.len() < 3 {
        return domain_err(format!(
            "log-log fit needs at least 3 points, got {}",
            points.len()
        ));
    }
    if points
        .iter()
        .any(|&(r, v)| r <= F::zero() || v <= F::zero() || !r.is_finite() || !v.is_finite())
    {
        return domain_err("log-log fit requires positive finite points");
    }
    let n = F::of(points.len() as f64);
    let logs: Vec<(F, F)> = points.iter().map(|&(r, v)| (r.ln(), v.ln())).collect();
    let sx: F = logs.iter().map(|&(x, _)| x).sum();
    let sy: F = logs.iter().map(|&(_, y)| y).sum();
    let mx = sx / n;
    let my = sy / n;
    let mut sxx = F::zero();
    let mut sxy = F::zero();
    for &(x, y) in &logs {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == F::zero() {
        return domain_err("log-log fit: all abscissae equal");
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let mut residual = F::zero();
    for &(x, y) in &logs {
        let e = y - (slope * x + intercept);
        residual += e * e;
    }
    Ok(LineFit {
        slope,
        intercept,
        residual,
    })
}
