//! TOML run configuration. Every key is optional and defaults to the
//! library's own default, so an empty file and no file mean the same thing.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tritronquee::bsb::BsbConfig;
use tritronquee::monodromy::{DiscPolicy, MonodromyConfig};
use tritronquee::painleve::PainleveConfig;
use tritronquee::periods::PeriodConfig;
use tritronquee::stokes::TraceConfig;
use tritronquee::Potential;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PeriodsSection {
    pub tol_quad: f64,
    pub tol_cut: f64,
    pub initial_nodes: usize,
    pub max_nodes: usize,
}

impl Default for PeriodsSection {
    fn default() -> Self {
        let d = PeriodConfig::default();
        PeriodsSection { tol_quad: d.tol_quad, tol_cut: d.tol_cut, initial_nodes: d.initial_nodes, max_nodes: d.max_nodes }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StokesSection {
    pub step_fraction: f64,
    pub start_fraction: f64,
    pub escape_factor: f64,
    pub merge_factor: f64,
    pub max_steps: usize,
}

impl Default for StokesSection {
    fn default() -> Self {
        let d = TraceConfig::default();
        StokesSection {
            step_fraction: d.step_fraction,
            start_fraction: d.start_fraction,
            escape_factor: d.escape_factor,
            merge_factor: d.merge_factor,
            max_steps: d.max_steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BsbSection {
    pub tol_newton: f64,
    pub max_iterations: usize,
    pub max_halvings: usize,
    pub anchor_a: f64,
    pub anchor_b: f64,
    pub homotopy_steps: usize,
    pub verify_320: bool,
}

impl Default for BsbSection {
    fn default() -> Self {
        let d = BsbConfig::default();
        BsbSection {
            tol_newton: d.tol_newton,
            max_iterations: d.max_iterations,
            max_halvings: d.max_halvings,
            anchor_a: d.anchor.a.re,
            anchor_b: d.anchor.b.re,
            homotopy_steps: d.homotopy_steps,
            verify_320: d.verify_320,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MonodromySection {
    pub tol_ode: f64,
    pub order: usize,
    pub tol_wkb: f64,
    pub margin_fraction: f64,
    pub tol_dep: f64,
    pub fd_factor: f64,
    pub min_start_radius: f64,
    pub radius_growth: f64,
    pub max_steps: usize,
    pub max_newton: usize,
}

impl Default for MonodromySection {
    fn default() -> Self {
        let d = MonodromyConfig::default();
        MonodromySection {
            tol_ode: d.tol_ode,
            order: d.order,
            tol_wkb: d.tol_wkb,
            margin_fraction: d.margin_fraction,
            tol_dep: d.tol_dep,
            fd_factor: d.fd_factor,
            min_start_radius: d.min_start_radius,
            radius_growth: d.radius_growth,
            max_steps: d.max_steps,
            max_newton: d.max_newton,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PainleveSection {
    pub tol_ode: f64,
    pub order: usize,
    pub blowup: f64,
    pub laurent_order: usize,
    pub tol_fit: f64,
    pub tol_seed: f64,
    pub tol_match: f64,
    pub z_seed_min: f64,
    pub sector_margin: f64,
    pub max_steps: usize,
}

impl Default for PainleveSection {
    fn default() -> Self {
        let d = PainleveConfig::default();
        PainleveSection {
            tol_ode: d.tol_ode,
            order: d.order,
            blowup: d.blowup,
            laurent_order: d.laurent_order,
            tol_fit: d.tol_fit,
            tol_seed: d.tol_seed,
            tol_match: d.tol_match,
            z_seed_min: d.z_seed_min,
            sector_margin: d.sector_margin,
            max_steps: d.max_steps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiscSection {
    pub alpha: f64,
    pub epsilon: f64,
}

impl Default for DiscSection {
    fn default() -> Self {
        let d = DiscPolicy::default();
        DiscSection { alpha: d.alpha, epsilon: d.epsilon }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub periods: PeriodsSection,
    pub stokes: StokesSection,
    pub bsb: BsbSection,
    pub monodromy: MonodromySection,
    pub painleve: PainleveSection,
    pub disc: DiscSection,
}

impl Config {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Config = toml::from_str(text).map_err(|e| CliError::Args(format!("config: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Config::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
                Config::from_toml(&text)
            }
        }
    }

    #[allow(clippy::neg_cmp_op_on_partial_ord)] // NaN must fail too
    fn validate(&self) -> Result<(), CliError> {
        let positive = [
            ("periods.tol_quad", self.periods.tol_quad),
            ("periods.tol_cut", self.periods.tol_cut),
            ("stokes.step_fraction", self.stokes.step_fraction),
            ("stokes.escape_factor", self.stokes.escape_factor),
            ("bsb.tol_newton", self.bsb.tol_newton),
            ("monodromy.tol_ode", self.monodromy.tol_ode),
            ("monodromy.tol_wkb", self.monodromy.tol_wkb),
            ("monodromy.tol_dep", self.monodromy.tol_dep),
            ("monodromy.margin_fraction", self.monodromy.margin_fraction),
            ("monodromy.fd_factor", self.monodromy.fd_factor),
            ("painleve.tol_ode", self.painleve.tol_ode),
            ("painleve.blowup", self.painleve.blowup),
            ("disc.epsilon", self.disc.epsilon),
        ];
        for (key, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(CliError::Args(format!("config: {key} must be positive")));
            }
        }
        if !(self.monodromy.radius_growth > 1.0) {
            return Err(CliError::Args("config: monodromy.radius_growth must exceed 1".into()));
        }
        if self.periods.initial_nodes < 2 || self.periods.max_nodes < self.periods.initial_nodes {
            return Err(CliError::Args("config: periods node counts are inconsistent".into()));
        }
        if self.monodromy.order < 4 || self.painleve.order < 4 {
            return Err(CliError::Args("config: Taylor orders must be at least 4".into()));
        }
        Ok(())
    }

    /// Canonical TOML text of the effective configuration.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("plain data serializes")
    }

    /// SHA-256 of [`Config::canonical`], hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn periods(&self) -> PeriodConfig {
        let s = &self.periods;
        PeriodConfig { tol_quad: s.tol_quad, tol_cut: s.tol_cut, initial_nodes: s.initial_nodes, max_nodes: s.max_nodes }
    }

    pub fn trace(&self) -> TraceConfig {
        let s = &self.stokes;
        TraceConfig {
            step_fraction: s.step_fraction,
            start_fraction: s.start_fraction,
            escape_factor: s.escape_factor,
            merge_factor: s.merge_factor,
            max_steps: s.max_steps,
        }
    }

    pub fn bsb(&self) -> BsbConfig {
        let s = &self.bsb;
        BsbConfig {
            tol_newton: s.tol_newton,
            max_iterations: s.max_iterations,
            max_halvings: s.max_halvings,
            anchor: Potential::real(s.anchor_a, s.anchor_b),
            homotopy_steps: s.homotopy_steps,
            verify_320: s.verify_320,
            periods: self.periods(),
            trace: self.trace(),
        }
    }

    pub fn monodromy(&self) -> MonodromyConfig {
        let s = &self.monodromy;
        MonodromyConfig {
            tol_ode: s.tol_ode,
            order: s.order,
            tol_wkb: s.tol_wkb,
            margin_fraction: s.margin_fraction,
            tol_dep: s.tol_dep,
            fd_factor: s.fd_factor,
            min_start_radius: s.min_start_radius,
            radius_growth: s.radius_growth,
            max_steps: s.max_steps,
            max_newton: s.max_newton,
        }
    }

    pub fn painleve(&self) -> PainleveConfig {
        let s = &self.painleve;
        PainleveConfig {
            tol_ode: s.tol_ode,
            order: s.order,
            blowup: s.blowup,
            laurent_order: s.laurent_order,
            tol_fit: s.tol_fit,
            tol_seed: s.tol_seed,
            tol_match: s.tol_match,
            z_seed_min: s.z_seed_min,
            sector_margin: s.sector_margin,
            max_steps: s.max_steps,
        }
    }

    pub fn disc(&self) -> DiscPolicy {
        DiscPolicy { alpha: self.disc.alpha, epsilon: self.disc.epsilon }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_the_default() {
        assert_eq!(Config::from_toml("").unwrap(), Config::default());
        assert_eq!(Config::default().monodromy(), MonodromyConfig::default());
        assert_eq!(Config::default().painleve(), PainleveConfig::default());
        assert_eq!(Config::default().bsb(), BsbConfig::default());
    }

    #[test]
    fn partial_override_and_hash() {
        let c = Config::from_toml("[disc]\nalpha = 0.8\n").unwrap();
        assert_eq!(c.disc.alpha, 0.8);
        assert_eq!(c.disc.epsilon, 1.0);
        assert_ne!(c.hash(), Config::default().hash());
        assert_eq!(Config::from_toml(&c.canonical()).unwrap(), c);
    }

    #[test]
    fn bad_keys_and_values_are_rejected() {
        assert!(Config::from_toml("[disc]\nbeta = 1\n").is_err());
        assert!(Config::from_toml("[monodromy]\ntol_ode = -1.0\n").is_err());
    }
}
