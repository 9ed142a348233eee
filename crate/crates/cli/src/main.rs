use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use tritronquee::bsb::{descendant, solve_bsb, QuantumPair, Ratio};
use tritronquee::monodromy::refine_pole;
use tritronquee::painleve::{locate_pole_near, seed_asymptotic, track_recorded};
use tritronquee::periods::{legendre_residual, PeriodData};
use tritronquee::stokes::trace_stokes_lines_with;
use tritronquee::{Complex, Potential};
use tritronquee_cli::catalog::{build_catalog, pair, Catalog};
use tritronquee_cli::config::Config;
use tritronquee_cli::convergence::convergence_report;
use tritronquee_cli::error::CliError;
use tritronquee_cli::parse_complex;
use tritronquee_cli::plot::PlotData;

const EXIT_CODES: &str = "Exit codes:
  0  success
  2  invalid arguments or configuration (InvalidArguments, InvalidQuantumNumbers,
     NotPrimitive)
  3  numerical failure; the error name is printed on stderr
  4  file input/output failure (IoError)";

#[derive(Parser)]
#[command(name = "tritronquee", version, about = "Poles of the Painlevé I tritronquée from Bohr-Sommerfeld-Boutroux seeds", after_help = EXIT_CODES)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for catalog entries.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Write plot data (JSON polylines and points) to this file.
    #[arg(long, global = true)]
    emit_plot: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PotentialArgs {
    /// Coefficient a, as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    a: Complex,
    /// Coefficient b, as `re` or `re,im`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
    b: Complex,
}

impl PotentialArgs {
    fn potential(&self) -> Potential {
        Potential::new(self.a, self.b)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Cycle periods, their derivatives and the Legendre residual.
    Periods(PotentialArgs),
    /// Trace and classify the Stokes graph.
    Stokes(PotentialArgs),
    /// Solve the Bohr-Sommerfeld-Boutroux system for (n, m).
    Bsb {
        #[arg(long)]
        n: i64,
        #[arg(long)]
        m: i64,
        /// Newton seed for a, instead of continuation from the anchor.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, requires = "seed_b")]
        seed_a: Option<Complex>,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex, requires = "seed_a")]
        seed_b: Option<Complex>,
    },
    /// Refine the k-th seed of the q-sequence to a pole.
    Refine {
        /// q as `p/r` with odd p, r.
        #[arg(long)]
        q: Ratio,
        /// Index in the q-sequence; the seed is scaled by 2k + 1.
        #[arg(long, default_value_t = 0)]
        k: u32,
        /// Cross-check against direct integration of Painlevé I.
        #[arg(long)]
        painleve: bool,
    },
    /// Integrate the tritronquée from its asymptotic seed through waypoints.
    Track {
        /// Waypoints after the seed point, each `re` or `re,im`.
        #[arg(long = "to", required = true, allow_hyphen_values = true, value_parser = parse_complex)]
        to: Vec<Complex>,
        /// Seed point; defaults to the configured minimum seed radius.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_complex)]
        from: Option<Complex>,
    },
    /// Build a pole catalog for several q and k = 0..=K.
    Catalog {
        /// q as `p/r`; repeatable.
        #[arg(long = "q")]
        qs: Vec<Ratio>,
        /// Largest sequence index.
        #[arg(long = "k-max", default_value_t = 0)]
        k_max: u32,
        /// Catalog file to write.
        #[arg(long)]
        out: PathBuf,
        /// Add a Painlevé I cross-check to every entry.
        #[arg(long)]
        painleve: bool,
    },
    /// Fit the decay exponent of |pole − seed| along a q-sequence.
    Convergence {
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        q: Ratio,
    },
}

fn c2(z: Complex) -> Value {
    json!(pair(z))
}

fn fmt_c(z: Complex) -> String {
    format!("{:.12} {} {:.12}i", z.re, if z.im < 0.0 { '-' } else { '+' }, z.im.abs())
}

struct Output {
    json: Value,
    text: String,
    plot: Option<PlotData>,
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let cfg = Config::load(cli.config.as_deref())?;
    match &cli.command {
        Command::Periods(p) => {
            let pot = p.potential();
            let pd = PeriodData::at(&pot, &cfg.periods())?;
            let tp = pot.turning_points()?;
            let res = legendre_residual(&pd);
            let mut text = format!("chi_2   = {}\nchi_-2  = {}\n", fmt_c(pd.chi2), fmt_c(pd.chi_m2));
            text += &format!("det J   = {}\nlegendre residual = {res:.3e}\n", fmt_c(pd.determinant()));
            let mut plot = PlotData::default();
            for r in tp.roots() {
                plot.add_point(r);
            }
            Ok(Output {
                json: json!({
                    "a": c2(pot.a), "b": c2(pot.b),
                    "turning_points": tp.roots().iter().map(|r| pair(*r)).collect::<Vec<_>>(),
                    "chi2": c2(pd.chi2), "chi_m2": c2(pd.chi_m2),
                    "dchi2_da": c2(pd.dchi2_da), "dchi2_db": c2(pd.dchi2_db),
                    "dchim2_da": c2(pd.dchim2_da), "dchim2_db": c2(pd.dchim2_db),
                    "determinant": c2(pd.determinant()), "legendre_residual": res,
                }),
                text,
                plot: Some(plot),
            })
        }
        Command::Stokes(p) => {
            let pot = p.potential();
            let g = trace_stokes_lines_with(&pot, &cfg.trace())?;
            let mut text = format!("topology: {}\n", g.topology_label);
            for (i, r) in g.turning_points.roots().iter().enumerate() {
                text += &format!("turning point {i}: {}  termini {:?}\n", fmt_c(*r), g.termini(i));
            }
            let plot = PlotData::from_stokes(&g);
            Ok(Output {
                json: json!({
                    "a": c2(pot.a), "b": c2(pot.b),
                    "topology": g.topology_label, "is_320": g.is_320(),
                    "turning_points": g.turning_points.roots().iter().map(|r| pair(*r)).collect::<Vec<_>>(),
                    "lines": plot.labels,
                }),
                text,
                plot: Some(plot),
            })
        }
        Command::Bsb { n, m, seed_a, seed_b } => {
            let quantum = QuantumPair::new(*n, *m)?;
            let seed = seed_a.zip(*seed_b).map(|(a, b)| Potential::new(a, b));
            let bsb = cfg.bsb();
            let s = solve_bsb(quantum, seed, &bsb)?;
            let text = format!(
                "(n, m) = {}  q = {}  k = {}\na = {}\nb = {}\nresidual = {:.3e}\n",
                s.quantum,
                s.q,
                s.k,
                fmt_c(s.point.a),
                fmt_c(s.point.b),
                s.residual
            );
            let plot = trace_stokes_lines_with(&s.point, &cfg.trace()).ok().map(|g| PlotData::from_stokes(&g));
            Ok(Output {
                json: json!({
                    "n": s.quantum.n, "m": s.quantum.m, "q": s.q.to_string(), "k": s.k,
                    "a": c2(s.point.a), "b": c2(s.point.b), "residual": s.residual,
                }),
                text,
                plot,
            })
        }
        Command::Refine { q, k, painleve } => {
            let prim = solve_bsb(q.quantum_pair()?, None, &cfg.bsb())?;
            let seed = descendant(&prim, *k, &cfg.periods())?;
            let mut rec = refine_pole(&seed, cfg.disc(), &cfg.monodromy(), &cfg.periods())?;
            if *painleve {
                rec.painleve_check = Some(locate_pole_near(rec.pole.a, &cfg.painleve())?);
            }
            let mut text = format!(
                "q = {}  k = {}\nseed a = {}\npole a = {}\npole b = {}\n|pole a - seed a| = {:.6e}\n",
                rec.q,
                rec.k,
                fmt_c(rec.seed.a),
                fmt_c(rec.pole.a),
                fmt_c(rec.pole.b),
                rec.error_a()
            );
            text += &format!("dependence residual = {:.3e}\nwkb gap = ({:.6e}, {:.6e})\n", rec.dep_residual, rec.wkb_gap.0, rec.wkb_gap.1);
            if let Some(p) = rec.painleve_check {
                text += &format!("painleve a = {}\npainleve b = {}\n", fmt_c(p.a), fmt_c(p.b));
            }
            let mut plot = PlotData::default();
            plot.add_point(rec.seed.a);
            plot.add_point(rec.pole.a);
            plot.labels = vec!["seed".into(), "pole".into()];
            Ok(Output {
                json: json!({
                    "q": rec.q.to_string(), "k": rec.k,
                    "seed_a": c2(rec.seed.a), "seed_b": c2(rec.seed.b),
                    "pole_a": c2(rec.pole.a), "pole_b": c2(rec.pole.b),
                    "error_a": rec.error_a(), "dep_residual": rec.dep_residual,
                    "wkb_gap2": rec.wkb_gap.0, "wkb_gapm2": rec.wkb_gap.1,
                    "iterations": rec.iterations,
                    "painleve_a": rec.painleve_check.map(|p| pair(p.a)),
                    "painleve_b": rec.painleve_check.map(|p| pair(p.b)),
                }),
                text,
                plot: Some(plot),
            })
        }
        Command::Track { to, from } => {
            let pc = cfg.painleve();
            let z0 = from.unwrap_or(Complex::new(pc.z_seed_min, 0.0));
            let st = seed_asymptotic(z0, &pc)?;
            let mut path = vec![z0];
            path.extend(to.iter().copied());
            let (end, poles, trail) = track_recorded(st, &path, &pc)?;
            let mut text = format!("z = {}\ny = {}\ny' = {}\n", fmt_c(end.z), fmt_c(end.y), fmt_c(end.yp));
            for p in &poles {
                text += &format!("pole a = {}  b = {}  fit residual {:.2e}\n", fmt_c(p.a), fmt_c(p.b), p.fit_residual);
            }
            let mut plot = PlotData::default();
            plot.add_polyline(&trail, "trajectory");
            for p in &poles {
                plot.add_point(p.a);
            }
            Ok(Output {
                json: json!({
                    "z": c2(end.z), "y": c2(end.y), "yp": c2(end.yp),
                    "poles": poles.iter().map(|p| json!({"a": c2(p.a), "b": c2(p.b), "fit_residual": p.fit_residual})).collect::<Vec<_>>(),
                }),
                text,
                plot: Some(plot),
            })
        }
        Command::Catalog { qs, k_max, out, painleve } => {
            let pairs = qs.iter().map(|q| q.quantum_pair()).collect::<Result<Vec<_>, _>>()?;
            let cat = build_catalog(&pairs, *k_max, &cfg, *painleve)?;
            cat.write(out)?;
            let ok = cat.entries.iter().filter(|e| e.is_ok()).count();
            let mut text = format!("wrote {} entries ({ok} ok) to {}\n", cat.entries.len(), out.display());
            for e in cat.entries.iter().filter(|e| !e.is_ok()) {
                text += &format!("q = {} k = {}: {}\n", e.q, e.k, e.status);
            }
            let mut plot = PlotData::default();
            for e in cat.entries.iter().filter_map(|e| e.pole_a) {
                plot.points.push(e);
            }
            Ok(Output {
                json: json!({"path": out, "entries": cat.entries.len(), "ok": ok, "config_hash": cat.meta.config_hash}),
                text,
                plot: Some(plot),
            })
        }
        Command::Convergence { catalog, q } => {
            let cat = Catalog::read(catalog)?;
            let rep = convergence_report(&cat, *q)?;
            let mut text = format!("q = {}\n", rep.q);
            for (k, e) in rep.ks.iter().zip(&rep.errors) {
                text += &format!("k = {k}  error = {e:.6e}\n");
            }
            text += &format!("fitted exponent = {:.4} ± {:.4}\n", rep.fitted_exponent, rep.fit_stderr);
            let mut plot = PlotData::default();
            let pts: Vec<Complex> = rep.ks.iter().zip(&rep.errors).map(|(k, e)| Complex::new(((2 * k + 1) as f64).ln(), e.ln())).collect();
            plot.add_polyline(&pts, "log error vs log(2k+1)");
            Ok(Output { json: serde_json::to_value(&rep).expect("report serializes"), text, plot: Some(plot) })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.jobs {
        if n == 0 {
            eprintln!("InvalidArguments: --jobs must be positive");
            return ExitCode::from(2);
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = run(&cli).and_then(|out| {
        if let (Some(path), Some(plot)) = (&cli.emit_plot, &out.plot) {
            plot.write(path)?;
        }
        Ok(out)
    });
    match result {
        Ok(out) => {
            let text = if cli.json { serde_json::to_string_pretty(&out.json).expect("json value") + "\n" } else { out.text };
            // A closed pipe (e.g. `| head`) is not an error of ours.
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                    eprintln!("IoError: {e}");
                    ExitCode::from(tritronquee_cli::error::EXIT_IO as u8)
                }
                _ => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("{}: {e}", e.name());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
