use std::path::Path;
use std::process::Command;

use serde_json::Value;
use solgeo::cli::{emit_dataset, run_verify, DatasetKind, EmitParams, Format, RunConfig};

fn config(out: &Path) -> RunConfig {
    RunConfig { out: out.to_path_buf(), ..RunConfig::default() }
}

fn read_json(p: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

#[test]
fn elliptic_suite_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = run_verify(&config(dir.path()), "elliptic").unwrap();
    assert!(report.passed());
    assert_eq!(report.exit_code(), 0);
    let doc = read_json(&dir.path().join("report.json"));
    let checks = doc.as_array().unwrap();
    assert_eq!(checks.len(), report.checks.len());
    for c in checks {
        for key in ["suite", "check", "lemma_ref", "value", "bound", "pass"] {
            assert!(c.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn loose_tolerance_breaks_symmetric_identities() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { ode_abs: 1e-2, ode_rel: 1e-2, ..config(dir.path()) };
    let report = run_verify(&cfg, "symflow").unwrap();
    assert_eq!(report.exit_code(), 1);
    assert!(report.checks.iter().any(|c| !c.pass && c.check.contains("ax")));
}

#[test]
fn unknown_suite_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_verify(&config(dir.path()), "foo").is_err());
}

#[test]
fn invalid_config_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = RunConfig { ode_rel: 0.0, ..config(dir.path()) };
    assert!(cfg.validate().is_err());
    let cfg = RunConfig { check_slack: 0.9, ..config(dir.path()) };
    assert!(cfg.validate().is_err());
}

fn small(format: Format) -> EmitParams {
    EmitParams { r: 5.0, l: 8.0, resolution: 64, raster: 128, samples: 81, format, ..EmitParams::default() }
}

#[test]
fn emit_is_deterministic() {
    for kind in [DatasetKind::Lambda, DatasetKind::Aux, DatasetKind::Raster] {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let ma = emit_dataset(kind, &small(Format::Csv), a.path()).unwrap();
        let mb = emit_dataset(kind, &small(Format::Csv), b.path()).unwrap();
        assert_eq!(ma, mb);
        for f in &ma.files {
            assert_eq!(std::fs::read(a.path().join(&f.name)).unwrap(), std::fs::read(b.path().join(&f.name)).unwrap());
        }
    }
}

#[test]
fn aux_values_stay_in_range() {
    let dir = tempfile::tempdir().unwrap();
    emit_dataset(DatasetKind::Aux, &small(Format::Json), dir.path()).unwrap();
    let rows = read_json(&dir.path().join("aux_L8.json"));
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 81);
    for row in rows {
        let t = row["t"].as_f64().unwrap();
        assert!((0.0..=8.0).contains(&t));
        for key in ["X", "Y", "Z"] {
            let v = row[key].as_f64().unwrap();
            assert!((-1.0..=1.0).contains(&v), "{key} = {v}");
        }
    }
}

#[test]
fn isochron_covers_requested_periods() {
    let dir = tempfile::tempdir().unwrap();
    let m = emit_dataset(DatasetKind::Isochron, &small(Format::Csv), dir.path()).unwrap();
    assert_eq!(m.files[0].name, "isochron_r5.csv");
    let text = std::fs::read_to_string(dir.path().join("isochron_r5.csv")).unwrap();
    let periods: Vec<f64> = text.lines().skip(1).map(|l| l.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(periods.first(), Some(&5.0));
    assert!((periods.last().unwrap() - 40.0).abs() < 1e-12);
    assert!(dir.path().join("manifest_isochron.json").exists());
}

#[test]
fn bound_reports_theta_star() {
    let dir = tempfile::tempdir().unwrap();
    emit_dataset(DatasetKind::Bound, &small(Format::Json), dir.path()).unwrap();
    let doc = read_json(&dir.path().join("bound_r5.json"));
    let th = doc["limiting"]["theta_star"].as_f64().unwrap();
    assert!((th - 0.590_819_256_544_399).abs() < 1e-6);
    assert!(doc["theta_star"].as_f64().unwrap() > 0.0 && doc["n_z"].as_u64().unwrap() >= 1);
}

#[test]
fn emit_rejects_bad_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let p = EmitParams { l: 3.0, ..small(Format::Csv) };
    assert!(emit_dataset(DatasetKind::Lambda, &p, dir.path()).is_err());
    let p = EmitParams { raster: 127, ..small(Format::Csv) };
    assert!(emit_dataset(DatasetKind::Raster, &p, dir.path()).is_err());
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_solgeo");
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| Command::new(bin).args(args).arg("--out").arg(dir.path()).output().unwrap();
    assert_eq!(run(&["verify", "--suite", "elliptic"]).status.code(), Some(0));
    assert_eq!(run(&["verify", "--suite", "foo"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "symflow", "--tol-ode", "1e-2"]).status.code(), Some(1));
    let out = run(&["emit", "cusp", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("cusp.csv").exists());
}
