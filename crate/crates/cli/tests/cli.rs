use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tritronquee")).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn bsb_anchor() {
    let v = json(&run(&["bsb", "--n", "1", "--m", "1", "--json"]));
    assert!((v["a"][0].as_f64().unwrap() + 2.34).abs() < 0.01);
    assert!((v["b"][0].as_f64().unwrap() + 0.064).abs() < 0.005);
    let text = String::from_utf8(run(&["bsb", "--n", "1", "--m", "1"]).stdout).unwrap();
    assert!(text.contains("a = -2.3475"));
}

#[test]
fn periods_near_anchor() {
    let v = json(&run(&["periods", "--a", "-2.34", "--b", "-0.064", "--json"]));
    let pi = std::f64::consts::PI;
    assert!((v["chi2"][1].as_f64().unwrap() - pi).abs() < 0.02);
    assert!((v["chi_m2"][1].as_f64().unwrap() - pi).abs() < 0.02);
    assert!(v["legendre_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn degenerate_stokes_exits_nonzero() {
    let out = run(&["stokes", "--a", "0", "--b", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("DegenerateTurningPoints"));
}

#[test]
fn stokes_plot_export() {
    let dir = tempfile::tempdir().unwrap();
    let plot = dir.path().join("p.json");
    let v = json(&run(&["stokes", "--a", "-2.3476", "--b", "-0.064", "--json", "--emit-plot", plot.to_str().unwrap()]));
    assert_eq!(v["topology"], "320");
    let p: Value = serde_json::from_str(&std::fs::read_to_string(&plot).unwrap()).unwrap();
    assert_eq!(p["polylines"].as_array().unwrap().len(), 9);
    assert_eq!(p["points"].as_array().unwrap().len(), 3);
    assert_eq!(p["labels"].as_array().unwrap().len(), 9);
}

#[test]
fn argument_errors_exit_with_two() {
    assert_eq!(run(&["bsb", "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["bsb", "--n", "0", "--m", "1"]).status.code(), Some(2));
    assert_eq!(run(&["periods", "--a", "x", "--b", "0"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[disc]\nalpha = \"one\"\n").unwrap();
    assert_eq!(run(&["bsb", "--n", "1", "--m", "1", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn io_errors_exit_with_four() {
    let out = run(&["convergence", "--catalog", "/nonexistent/c.json", "--q", "1"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("IoError"));
}

#[test]
fn help_lists_exit_codes() {
    let out = run(&["--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for code in ["0  success", "2  invalid", "3  numerical", "4  file"] {
        assert!(text.contains(code), "{code}");
    }
}

#[test]
fn catalog_then_convergence() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("cat.json");
    let cat = cat.to_str().unwrap();
    let v = json(&run(&["catalog", "--q", "1/1", "--k-max", "3", "--out", cat, "--jobs", "2", "--json"]));
    assert_eq!(v["ok"], 4);
    let rep = json(&run(&["convergence", "--catalog", cat, "--q", "1", "--json"]));
    let slope = rep["fitted_exponent"].as_f64().unwrap();
    assert!((-1.5..=-0.9).contains(&slope), "{slope}");
    let few = run(&["convergence", "--catalog", cat, "--q", "5/1"]);
    assert_eq!(few.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&few.stderr).starts_with("InsufficientData"));
}

#[test]
fn track_reports_the_first_pole() {
    let v = json(&run(&["track", "--to", "-3", "--json"]));
    let poles = v["poles"].as_array().unwrap();
    assert_eq!(poles.len(), 1);
    assert!((poles[0]["a"][0].as_f64().unwrap() + 2.384_168_769_57).abs() < 1e-9);
}

#[test]
fn refine_with_painleve_check() {
    let v = json(&run(&["refine", "--q", "1/1", "--k", "1", "--painleve", "--json"]));
    let pa = v["pole_a"][0].as_f64().unwrap();
    let qa = v["painleve_a"][0].as_f64().unwrap();
    assert!((pa - qa).abs() < 1e-8);
}
