use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

use copolab::config::{default_config, RunConfig};
use copolab::{run, RunOptions};

const NAMES: [&str; 7] = [
    "free_energy",
    "hc_curve",
    "collapse",
    "pipeline_chain",
    "regenset_sample",
    "rn_check",
    "validate",
];

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_copolab"))
}

/// Set `COPOLAB_BLESS=1` to rewrite the shipped configs from the defaults.
#[test]
fn shipped_configs_match_defaults() {
    let bless = std::env::var_os("COPOLAB_BLESS").is_some();
    for name in NAMES {
        let path = configs_dir().join(format!("{name}.json"));
        let cfg = default_config(name).unwrap();
        if bless {
            fs::write(&path, serde_json::to_string_pretty(&cfg).unwrap() + "\n").unwrap();
        }
        let src = fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(RunConfig::parse(&src).unwrap(), cfg, "{name}");
    }
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let p = dir.join("run.json");
    fs::write(&p, text).unwrap();
    p
}

fn free_energy_text(n: usize) -> String {
    let mut cfg = default_config("free_energy").unwrap();
    if let copolab::config::Experiment::FreeEnergy(e) = &mut cfg.experiment {
        e.n = n;
        e.replicas = 4;
    }
    cfg.model.n_max = n;
    serde_json::to_string_pretty(&cfg).unwrap()
}

#[test]
fn unknown_field_exits_one_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let text = free_energy_text(200).replacen("\"seed\"", "\"sed\": 1,\n  \"seed\"", 1);
    let line = text.lines().position(|l| l.contains("\"sed\"")).unwrap() + 1;
    let cfg = write_config(dir.path(), &text);
    let out = bin()
        .args(["free-energy", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("line {line}")), "{err}");
    assert!(err.contains("sed"), "{err}");
}

#[test]
fn mismatched_experiment_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &free_energy_text(200));
    let out = bin().args(["hc-curve", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn oversized_table_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = default_config("free_energy").unwrap();
    cfg.model.n_max = 100_000_000;
    let path = write_config(dir.path(), &serde_json::to_string_pretty(&cfg).unwrap());
    let out = bin()
        .args(["free-energy", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn injected_fault_exits_two_and_names_check() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = default_config("validate").unwrap();
    if let copolab::config::Experiment::Validate(v) = &mut cfg.experiment {
        v.inject = Some(copolab::config::Fault::CorruptKTable);
    }
    let path = write_config(dir.path(), &serde_json::to_string_pretty(&cfg).unwrap());
    let out = bin()
        .args(["validate", "--fast", "--config"])
        .arg(&path)
        .arg("--out")
        .arg(dir.path().join("o"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("renewal.normalization"), "{err}");
}

#[test]
fn same_seed_gives_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &free_energy_text(300));
    let mut bodies = Vec::new();
    for tag in ["a", "b"] {
        let out = dir.path().join(tag);
        let rec = run(
            "free-energy",
            &RunOptions {
                config: Some(cfg.clone()),
                out: Some(out.clone()),
                ..Default::default()
            },
        )
        .unwrap();
        let csv = fs::read(out.join("free_energy.csv")).unwrap();
        let reps = fs::read(out.join("free_energy_replicas.csv")).unwrap();
        let mut body: serde_json::Value = serde_json::from_str(&rec.body()).unwrap();
        body["config"]["output"]["dir"] = serde_json::Value::Null;
        bodies.push((csv, reps, body));
    }
    assert_eq!(bodies[0], bodies[1]);
}

#[test]
fn lambda_zero_row_is_exactly_zero() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &free_energy_text(300));
    let rec = run(
        "free-energy",
        &RunOptions {
            config: Some(cfg),
            dry: true,
            ..Default::default()
        },
    )
    .unwrap();
    let t = &rec.tables[0];
    let li = t.header.iter().position(|h| h == "lambda").unwrap();
    let fi = t.header.iter().position(|h| h == "f_hat").unwrap();
    let zero_rows: Vec<_> = t.rows.iter().filter(|r| r[li].parse::<f64>().unwrap() == 0.0).collect();
    assert!(!zero_rows.is_empty());
    for r in zero_rows {
        assert_eq!(r[fi].parse::<f64>().unwrap(), 0.0);
    }
}

#[test]
fn unit_spacing_collapse_matches_free_energy() {
    use copolab::config::Experiment;
    use copolymer::discrete::estimate_free_energy;

    let mut cfg = default_config("collapse").unwrap();
    if let Experiment::Collapse(e) = &mut cfg.experiment {
        e.t = 300.0;
        e.a_list = vec![1.0];
        e.replicas = 4;
        e.laws = None;
        e.continuum_replicas = 2;
        e.continuum_cells_per_unit = 1.0;
    }
    let rec_tables = copolab::execute("collapse", &cfg, false).unwrap().tables;
    let t = &rec_tables[0];
    let vi = t.header.iter().position(|h| h == "value").unwrap();
    let value: f64 = t.rows[0][vi].parse().unwrap();
    let k = cfg.model.build().unwrap();
    let p = cfg.params.points()[0];
    let direct = estimate_free_energy(&k, &cfg.disorder_law(), p, 300, 4, cfg.seed).unwrap();
    assert_eq!(value, direct.value);
}
