use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kaehler_cli::emit::{canonical_json, emit_report, from_json, to_json};
use kaehler_cli::{list_builtins, run_config, ConfigError, Format, RunConfig, RunOptions};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_kaehler-verify"));
    c.env_remove("KAEHLER_VERIFY_OUT_DIR");
    c
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn verify(args: &[&str]) -> Output {
    bin().arg("verify").args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const SLANT_GAUSS: &str = r#"
[ambient]
kind = "flat"
m = 2

[immersion]
builtin = "SLANT"
params = { theta = 0.5 }

[sample]
mode = "grid"
grid = [2, 2]

[checks]
names = ["chen.thm1", "submanifold.gauss"]
"#;

#[test]
fn slant_plane_passes_with_zero_margins() {
    let cfg = RunConfig::from_toml(SLANT_GAUSS).unwrap();
    let r = run_config(&cfg, RunOptions::default()).unwrap();
    assert_eq!(r.summary.failed, 0);
    assert_eq!(r.summary.total, 8);
    for rec in r.records.iter().filter(|r| r.check == "chen.thm1") {
        let m = rec.entries.iter().find(|e| e.label == "margin").unwrap();
        assert!(m.value.abs() < 1e-12);
    }
}

#[test]
fn complex_line_bochner_residual_is_small() {
    let text = "[ambient]\nkind = \"fubini_study\"\nm = 2\n[immersion]\nbuiltin = \"CLINE\"\n[sample]\nseed = 1\ncount = 5\n[checks]\nnames = [\"bochner.residual\"]\n";
    let r = run_config(&RunConfig::from_toml(text).unwrap(), RunOptions::default()).unwrap();
    assert_eq!(r.summary.failed, 0);
    assert!(r.summary.worst_residual["bochner.residual"] <= 1e-5);
}

#[test]
fn records_are_sorted_by_check_then_point() {
    let cfg = RunConfig::load(&configs().join("cline_fs2.toml")).unwrap();
    let r = run_config(&cfg, RunOptions::default()).unwrap();
    let keys: Vec<_> = r.records.iter().map(|x| (x.check.clone(), x.point_index)).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(r.summary.total, r.records.len());
    assert_eq!(r.summary.passed + r.summary.failed, r.summary.total);
}

#[test]
fn worker_count_does_not_change_the_report() {
    let cfg = RunConfig::load(&configs().join("graph_fs2.toml")).unwrap();
    let one = run_config(&cfg, RunOptions { jobs: Some(1), ..Default::default() }).unwrap();
    let four = run_config(&cfg, RunOptions { jobs: Some(4), ..Default::default() }).unwrap();
    assert_eq!(canonical_json(&one), canonical_json(&four));
}

#[test]
fn seed_override_changes_points() {
    let cfg = RunConfig::load(&configs().join("graph_fs2.toml")).unwrap();
    let a = run_config(&cfg, RunOptions::default()).unwrap();
    let b = run_config(&cfg, RunOptions { seed: Some(99), ..Default::default() }).unwrap();
    assert_eq!(a.seed, 2024);
    assert_eq!(b.seed, 99);
    assert_ne!(a.records[0].point, b.records[0].point);
}

#[test]
fn tol_scale_multiplies_tolerances() {
    let cfg = RunConfig::from_toml(SLANT_GAUSS).unwrap();
    let r = run_config(&cfg, RunOptions { tol_scale: 10.0, ..Default::default() }).unwrap();
    let rec = r.records.iter().find(|x| x.check == "submanifold.gauss").unwrap();
    assert!((rec.tolerance - 1e-3).abs() < 1e-15);
    assert!(run_config(&cfg, RunOptions { tol_scale: 0.0, ..Default::default() }).is_err());
}

#[test]
fn json_round_trips() {
    let cfg = RunConfig::load(&configs().join("crw.toml")).unwrap();
    let r = run_config(&cfg, RunOptions::default()).unwrap();
    assert_eq!(from_json(&to_json(&r)).unwrap(), r);
}

#[test]
fn empty_check_list_gives_zero_total() {
    let text = "[ambient]\nkind = \"flat\"\nm = 2\n[sample]\nseed = 1\n";
    let r = run_config(&RunConfig::from_toml(text).unwrap(), RunOptions::default()).unwrap();
    assert_eq!(r.summary.total, 0);
    assert!(emit_report(&r, Format::Text).contains("total 0"));
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn failing_run_has_advice_line() {
    let cfg = RunConfig::load(&configs().join("sphere_failing.toml")).unwrap();
    let r = run_config(&cfg, RunOptions::default()).unwrap();
    assert!(r.summary.failed > 0);
    let text = emit_report(&r, Format::Text);
    assert!(text.contains("failures:"));
    assert!(text.contains("exit status 1"), "{text}");
}

#[test]
fn domain_errors_are_per_point() {
    // CR checks on a slant plane fail at each point without aborting the run.
    let text = SLANT_GAUSS.replace("\"chen.thm1\", ", "\"crwarp.split\", ");
    let r = run_config(&RunConfig::from_toml(&text).unwrap(), RunOptions::default()).unwrap();
    let split: Vec<_> = r.records.iter().filter(|x| x.check == "crwarp.split").collect();
    assert_eq!(split.len(), 4);
    assert!(split.iter().all(|x| !x.pass && x.error.is_some()));
    assert!(r.records.iter().filter(|x| x.check == "submanifold.gauss").all(|x| x.pass));
}

#[test]
fn lemma_check_runs_without_geometry() {
    let text = "[ambient]\nkind = \"flat\"\nm = 2\n[sample]\nseed = 5\n[checks]\nnames = [\"chen.lemma1\"]\nlemma_instances = 200\n";
    let r = run_config(&RunConfig::from_toml(text).unwrap(), RunOptions::default()).unwrap();
    assert_eq!(r.records.len(), 1);
    assert!(r.records[0].pass, "{:?}", r.records[0]);
}

#[test]
fn list_is_stable_and_complete() {
    let a = list_builtins();
    assert_eq!(a, list_builtins());
    for needle in ["SPH3", "crwarp.thm3", "chen.thm1", "bochner.w33", "fubini_study"] {
        assert!(a.contains(needle), "{needle}");
    }
    let out = bin().arg("list").output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), a);
}

#[test]
fn binary_exit_codes() {
    let ok = verify(&[configs().join("slant_flat.toml").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = verify(&[configs().join("sphere_failing.toml").to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn unknown_check_is_reported_by_name() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.toml", &SLANT_GAUSS.replace("chen.thm1", "chen.thm9"));
    let out = verify(&[p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("chen.thm9"));
    assert!(matches!(RunConfig::load(&p), Err(ConfigError::UnknownCheck(n)) if n == "chen.thm9"));
}

#[test]
fn parse_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "bad.toml", &SLANT_GAUSS.replace("m = 2", "m = = 2"));
    let out = verify(&[p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn json_output_and_report_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs().join("slant_flat.toml");
    let out = bin()
        .env("KAEHLER_VERIFY_OUT_DIR", dir.path())
        .args(["verify", cfg.to_str().unwrap(), "--format", "json", "--seed", "4"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    let written = dir.path().join("slant_flat.json");
    assert_eq!(std::fs::read_to_string(&written).unwrap(), stdout);
    let parsed = from_json(&stdout).unwrap();
    assert_eq!(parsed.seed, 4);

    let text = bin().args(["report", written.to_str().unwrap(), "--format", "text"]).output().unwrap();
    assert!(text.status.success());
    assert_eq!(String::from_utf8(text.stdout).unwrap(), emit_report(&parsed, Format::Text));
}
