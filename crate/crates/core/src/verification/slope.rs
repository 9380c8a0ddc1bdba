//! Least-squares slopes on log-log data.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_PAIRS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS deviation of `ln e` from the fitted line.
    pub residual: f64,
}

/// Fits `ln e = slope·ln x + intercept` to `(x, e)` pairs.
pub fn fit_slope(pairs: &[(f64, f64)]) -> Result<SlopeFit> {
    if pairs.len() < MIN_PAIRS {
        return Err(Error::DegenerateLadder(format!(
            "need at least {MIN_PAIRS} points, got {}",
            pairs.len()
        )));
    }
    if let Some((x, e)) = pairs
        .iter()
        .find(|(x, e)| !(*x > 0.0 && *e > 0.0 && x.is_finite() && e.is_finite()))
    {
        return Err(Error::DegenerateLadder(format!(
            "nonpositive value in ({x:e}, {e:e})"
        )));
    }
    let logs: Vec<(f64, f64)> = pairs.iter().map(|(x, e)| (x.ln(), e.ln())).collect();
    let m = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / m;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateLadder("all abscissae coincide".into()));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (logs
        .iter()
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    Ok(SlopeFit {
        slope,
        intercept,
        residual,
    })
}
