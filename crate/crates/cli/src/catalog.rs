//! The pole catalog: one entry per `(q, k)`, written as a single JSON
//! document with a metadata header.

use std::fs;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use tritronquee::bsb::{descendant, solve_bsb, BsbSolution, QuantumPair};
use tritronquee::monodromy::refine_pole;
use tritronquee::painleve::locate_pole_near;
use tritronquee::stokes::trace_stokes_lines_with;
use tritronquee::{Complex, Error};

use crate::config::Config;
use crate::error::CliError;

/// Complex numbers are stored as `[re, im]`.
pub type Pair = [f64; 2];

pub fn pair(z: Complex) -> Pair {
    [z.re, z.im]
}

pub fn complex(p: Pair) -> Complex {
    Complex::new(p[0], p[1])
}

pub const FORMAT_VERSION: u32 = 1;
pub const STATUS_OK: &str = "ok";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub format: u32,
    pub config_hash: String,
    pub config: Config,
    /// Primitive pairs requested, as `"n,m"`.
    pub quantum_pairs: Vec<String>,
    pub k_max: u32,
    pub painleve_check: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CatalogEntry {
    /// `"p/r"`.
    pub q: String,
    pub k: u32,
    pub n: u32,
    pub m: u32,
    /// `"ok"`, or the name of the error that stopped this entry.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    pub seed_a: Option<Pair>,
    pub seed_b: Option<Pair>,
    pub bsb_residual: Option<f64>,
    pub pole_a: Option<Pair>,
    pub pole_b: Option<Pair>,
    pub dep_residual: Option<f64>,
    pub wkb_gap2: Option<f64>,
    pub wkb_gapm2: Option<f64>,
    pub painleve_a: Option<Pair>,
    pub painleve_b: Option<Pair>,
    /// `|pole_a − seed_a|`.
    pub error_a: Option<f64>,
    pub newton_iterations: Option<usize>,
}

impl CatalogEntry {
    fn blank(quantum: QuantumPair, k: u32) -> Self {
        let scaled = quantum.scaled(k);
        CatalogEntry {
            q: quantum.q().to_string(),
            k,
            n: scaled.n,
            m: scaled.m,
            status: STATUS_OK.into(),
            message: None,
            seed_a: None,
            seed_b: None,
            bsb_residual: None,
            pole_a: None,
            pole_b: None,
            dep_residual: None,
            wkb_gap2: None,
            wkb_gapm2: None,
            painleve_a: None,
            painleve_b: None,
            error_a: None,
            newton_iterations: None,
        }
    }

    fn fail(&mut self, e: &Error) {
        self.status = e.name().into();
        self.message = Some(e.to_string());
    }

    pub fn is_ok(&self) -> bool {
        self.status == STATUS_OK
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Catalog {
    pub meta: Meta,
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("catalog serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Io(format!("malformed catalog: {e}")))
    }

    /// Writes to a sibling temporary file, then renames over `path`.
    pub fn write(&self, path: &Path) -> Result<(), CliError> {
        let name = path.file_name().ok_or_else(|| CliError::Io(format!("{}: not a file path", path.display())))?;
        let mut tmp_name = std::ffi::OsString::from(".");
        tmp_name.push(name);
        tmp_name.push(".tmp");
        let tmp = path.with_file_name(tmp_name);
        let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", path.display()));
        {
            let mut f = fs::File::create(&tmp).map_err(io)?;
            f.write_all(self.to_json().as_bytes()).map_err(io)?;
            f.sync_all().map_err(io)?;
        }
        fs::rename(&tmp, path).map_err(|e| {
            let _ = fs::remove_file(&tmp);
            io(e)
        })
    }

    pub fn read(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Catalog::from_json(&text)
    }
}

fn fill_entry(entry: &mut CatalogEntry, prim: &BsbSolution, k: u32, cfg: &Config, painleve_check: bool) -> Result<(), Error> {
    let seed = descendant(prim, k, &cfg.periods())?;
    entry.seed_a = Some(pair(seed.point.a));
    entry.seed_b = Some(pair(seed.point.b));
    entry.bsb_residual = Some(seed.residual);
    if cfg.bsb.verify_320 {
        let g = trace_stokes_lines_with(&seed.point, &cfg.trace())?;
        if !g.is_320() {
            return Err(Error::NotType320 { label: g.topology_label });
        }
    }
    let rec = refine_pole(&seed, cfg.disc(), &cfg.monodromy(), &cfg.periods())?;
    entry.pole_a = Some(pair(rec.pole.a));
    entry.pole_b = Some(pair(rec.pole.b));
    entry.dep_residual = Some(rec.dep_residual);
    entry.wkb_gap2 = Some(rec.wkb_gap.0);
    entry.wkb_gapm2 = Some(rec.wkb_gap.1);
    entry.error_a = Some(rec.error_a());
    entry.newton_iterations = Some(rec.iterations);
    if painleve_check {
        let p = locate_pole_near(rec.pole.a, &cfg.painleve())?;
        entry.painleve_a = Some(pair(p.a));
        entry.painleve_b = Some(pair(p.b));
    }
    Ok(())
}

/// Runs the full pipeline for every primitive pair and `k = 0..=k_max`.
/// Numerical failures end up in the entries; only invalid input is an error.
pub fn build_catalog(pairs: &[QuantumPair], k_max: u32, cfg: &Config, painleve_check: bool) -> Result<Catalog, CliError> {
    for p in pairs {
        if !p.is_primitive() {
            return Err(CliError::Args(format!("quantum pair {p} is not primitive")));
        }
    }
    let bsb_cfg = cfg.bsb();
    let primitives: Vec<Result<BsbSolution, Error>> = pairs.par_iter().map(|&p| solve_bsb(p, None, &bsb_cfg)).collect();
    let jobs: Vec<(usize, u32)> = (0..pairs.len()).flat_map(|i| (0..=k_max).map(move |k| (i, k))).collect();
    let entries = jobs
        .par_iter()
        .map(|&(i, k)| {
            let mut entry = CatalogEntry::blank(pairs[i], k);
            let outcome = match &primitives[i] {
                Ok(prim) => fill_entry(&mut entry, prim, k, cfg, painleve_check),
                Err(e) => Err(e.clone()),
            };
            if let Err(e) = outcome {
                entry.fail(&e);
            }
            entry
        })
        .collect();
    Ok(Catalog {
        meta: Meta {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            format: FORMAT_VERSION,
            config_hash: cfg.hash(),
            config: cfg.clone(),
            quantum_pairs: pairs.iter().map(|p| p.label()).collect(),
            k_max,
            painleve_check,
        },
        entries,
    })
}
