//! Library half of the `tritronquee` command: configuration, the pole
//! catalog, convergence fits and plot export.

pub mod catalog;
pub mod config;
pub mod convergence;
pub mod error;
pub mod plot;

use tritronquee::Complex;

/// Parses `"re"` or `"re,im"`.
pub fn parse_complex(s: &str) -> Result<Complex, String> {
    let mut parts = s.split(',');
    let re = parts.next().unwrap_or("").trim();
    let im = parts.next().map(str::trim);
    if parts.next().is_some() {
        return Err(format!("expected `re` or `re,im`, got `{s}`"));
    }
    let num = |t: &str| t.parse::<f64>().map_err(|_| format!("not a number: `{t}`"));
    Ok(Complex::new(num(re)?, im.map(num).transpose()?.unwrap_or(0.0)))
}
