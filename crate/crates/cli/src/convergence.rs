//! Rate at which refined poles approach their seeds along a q-sequence.

use serde::{Deserialize, Serialize};
use tritronquee::bsb::Ratio;
use tritronquee::Error;

use crate::catalog::Catalog;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub q: String,
    pub ks: Vec<u32>,
    pub errors: Vec<f64>,
    /// Least-squares slope of `log error` against `log(2k + 1)`.
    pub fitted_exponent: f64,
    pub fit_stderr: f64,
}

/// Ordinary least squares `y ≈ c + s x`; returns `(s, stderr(s))`.
pub fn fit_slope(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(u, v)| (u - mx) * (v - my)).sum();
    let slope = sxy / sxx;
    let ssr: f64 = x.iter().zip(y).map(|(u, v)| (v - my - slope * (u - mx)).powi(2)).sum();
    let stderr = if x.len() > 2 { (ssr / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    (slope, stderr)
}

pub fn convergence_report(catalog: &Catalog, q: Ratio) -> Result<ConvergenceReport, Error> {
    let label = q.to_string();
    let mut rows: Vec<(u32, f64)> = catalog
        .entries
        .iter()
        .filter(|e| e.q == label && e.is_ok())
        .filter_map(|e| e.error_a.filter(|v| *v > 0.0).map(|v| (e.k, v)))
        .collect();
    rows.sort_by_key(|r| r.0);
    rows.dedup_by_key(|r| r.0);
    if rows.len() < 3 {
        return Err(Error::InsufficientData(format!("{} usable entries for q = {label}; need 3", rows.len())));
    }
    let x: Vec<f64> = rows.iter().map(|r| ((2 * r.0 + 1) as f64).ln()).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.1.ln()).collect();
    let (fitted_exponent, fit_stderr) = fit_slope(&x, &y);
    Ok(ConvergenceReport {
        q: label,
        ks: rows.iter().map(|r| r.0).collect(),
        errors: rows.iter().map(|r| r.1).collect(),
        fitted_exponent,
        fit_stderr,
    })
}
