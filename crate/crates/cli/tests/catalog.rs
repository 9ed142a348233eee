use proptest::prelude::*;
use tritronquee::bsb::{QuantumPair, Ratio};
use tritronquee_cli::catalog::{build_catalog, Catalog, CatalogEntry, Meta, FORMAT_VERSION};
use tritronquee_cli::config::Config;
use tritronquee_cli::convergence::convergence_report;

fn meta() -> Meta {
    let cfg = Config::default();
    Meta {
        tool: "tritronquee-cli".into(),
        version: "0".into(),
        format: FORMAT_VERSION,
        config_hash: cfg.hash(),
        config: cfg,
        quantum_pairs: vec!["1,1".into()],
        k_max: 0,
        painleve_check: false,
    }
}

fn entry(q: &str, k: u32, error_a: f64) -> CatalogEntry {
    CatalogEntry {
        q: q.into(),
        k,
        n: 1,
        m: 1,
        status: "ok".into(),
        message: None,
        seed_a: Some([-2.3, 0.0]),
        seed_b: Some([-0.06, 0.0]),
        bsb_residual: Some(1e-12),
        pole_a: Some([-2.3 - error_a, 0.0]),
        pole_b: Some([-0.06, 0.0]),
        dep_residual: Some(1e-11),
        wkb_gap2: Some(0.1),
        wkb_gapm2: Some(0.1),
        painleve_a: None,
        painleve_b: None,
        error_a: Some(error_a),
        newton_iterations: Some(3),
    }
}

/// Every float of an entry, by bit pattern.
fn bits(e: &CatalogEntry) -> Vec<u64> {
    let mut out = Vec::new();
    for p in [e.seed_a, e.seed_b, e.pole_a, e.pole_b, e.painleve_a, e.painleve_b].into_iter().flatten() {
        out.extend(p.iter().map(|v| v.to_bits()));
    }
    for v in [e.bsb_residual, e.dep_residual, e.wkb_gap2, e.wkb_gapm2, e.error_a].into_iter().flatten() {
        out.push(v.to_bits());
    }
    out
}

fn finite() -> impl Strategy<Value = f64> {
    any::<f64>().prop_filter("finite", |v| v.is_finite())
}

proptest! {
    #[test]
    fn round_trip_is_bit_exact(vals in prop::collection::vec(finite(), 14), k in 0u32..50) {
        let mut e = entry("3/5", k, vals[0]);
        e.seed_a = Some([vals[1], vals[2]]);
        e.seed_b = Some([vals[3], vals[4]]);
        e.pole_a = Some([vals[5], vals[6]]);
        e.pole_b = Some([vals[7], -0.0]);
        e.painleve_a = Some([vals[8], vals[9]]);
        e.painleve_b = Some([vals[10], f64::MIN_POSITIVE / 3.0]);
        e.dep_residual = Some(vals[11].abs());
        e.wkb_gap2 = Some(vals[12].abs());
        e.wkb_gapm2 = Some(vals[13].abs());
        let cat = Catalog { meta: meta(), entries: vec![e] };
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cat.json");
        cat.write(&path).unwrap();
        let back = Catalog::read(&path).unwrap();
        prop_assert_eq!(bits(&back.entries[0]), bits(&cat.entries[0]));
        prop_assert_eq!(back.to_json(), cat.to_json());
    }
}

#[test]
fn pipeline_catalog_round_trips_and_is_deterministic() {
    let cfg = Config::default();
    let pairs = [QuantumPair::new(1, 1).unwrap(), QuantumPair::new(3, 1).unwrap()];
    let a = build_catalog(&pairs, 1, &cfg, false).unwrap();
    let b = build_catalog(&pairs, 1, &cfg, false).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.entries.len(), 4);
    for e in &a.entries {
        assert!(e.is_ok(), "{e:?}");
        assert!(e.dep_residual.unwrap() < 1e-9);
        let (p, s) = (e.pole_a.unwrap(), e.seed_a.unwrap());
        assert_eq!(e.error_a.unwrap(), (p[0] - s[0]).hypot(p[1] - s[1]));
    }
    let seed = a.entries[0].seed_a.unwrap();
    assert!((seed[0] + 2.34).abs() < 0.01);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    a.write(&path).unwrap();
    let back = Catalog::read(&path).unwrap();
    assert_eq!(back, a);
    for (x, y) in back.entries.iter().zip(&a.entries) {
        assert_eq!(bits(x), bits(y));
    }
    // No temporary file is left behind.
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn empty_catalog_has_a_full_header() {
    let cfg = Config::default();
    let cat = build_catalog(&[], 3, &cfg, false).unwrap();
    assert!(cat.entries.is_empty());
    assert_eq!(cat.meta.config_hash, cfg.hash());
    assert_eq!(cat.meta.k_max, 3);
    assert_eq!(Catalog::from_json(&cat.to_json()).unwrap(), cat);
}

#[test]
fn non_primitive_pairs_are_rejected() {
    let err = build_catalog(&[QuantumPair::new(2, 2).unwrap()], 0, &Config::default(), false).unwrap_err();
    assert_eq!(err.exit_code(), 2);
}

#[test]
fn failures_are_recorded_per_entry() {
    let mut cfg = Config::default();
    cfg.disc.epsilon = 1e-4;
    let cat = build_catalog(&[QuantumPair::new(1, 1).unwrap()], 1, &cfg, false).unwrap();
    assert!(cat.entries[0].is_ok());
    assert_eq!(cat.entries[1].status, "OutsideDisc");
    assert!(cat.entries[1].seed_a.is_some() && cat.entries[1].pole_a.is_none());
}

#[test]
fn exact_power_law_gives_exact_exponent() {
    let entries = (0..6).map(|k| entry("1/1", k, 0.7 * ((2 * k + 1) as f64).powf(-1.2))).collect();
    let cat = Catalog { meta: meta(), entries };
    let rep = convergence_report(&cat, Ratio::new(1, 1).unwrap()).unwrap();
    assert!((rep.fitted_exponent + 1.2).abs() < 1e-10);
    assert!(rep.fit_stderr < 1e-10);
    assert_eq!(rep.ks, vec![0, 1, 2, 3, 4, 5]);
}

#[test]
fn two_points_are_not_enough() {
    let cat = Catalog { meta: meta(), entries: vec![entry("1/1", 0, 0.1), entry("1/1", 1, 0.05), entry("5/1", 2, 0.01)] };
    let err = convergence_report(&cat, Ratio::new(1, 1).unwrap()).unwrap_err();
    assert_eq!(err.name(), "InsufficientData");
}
