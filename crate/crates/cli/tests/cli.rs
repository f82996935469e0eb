use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use wcss_cli::output::{lint_heatmap, lint_roc};

fn sense(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sense")).args(args).output().expect("run sense")
}

fn csv_names(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    v.sort();
    v
}

fn lint_dir(dir: &Path) {
    for n in csv_names(dir) {
        let text = fs::read_to_string(dir.join(&n)).unwrap();
        if n.starts_with("heatmap") {
            lint_heatmap(&text).unwrap_or_else(|e| panic!("{n}: {e}"));
        } else {
            lint_roc(&text).unwrap_or_else(|e| panic!("{n}: {e}"));
        }
        assert!(dir.join(format!("{n}.meta")).exists(), "{n} has no sidecar");
    }
}

#[test]
fn static_compare_manifest() {
    let d = tempfile::tempdir().unwrap();
    let out = sense(&["preset", "--name", "static-compare", "--trials", "500", "--points", "11", "--set", "su.1=-730,-2000,0", "--set", "su.2=-2000,-2120,0", "--out", d.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let names = csv_names(d.path());
    let want: Vec<String> = ["wed_paper", "wed_uniform", "wevd_paper", "wevd_uniform"]
        .iter()
        .flat_map(|t| [format!("roc_{t}_analytic.csv"), format!("roc_{t}_mc.csv")])
        .collect();
    let mut want = want;
    want.sort();
    assert_eq!(names, want);
    lint_dir(d.path());
    let meta = fs::read_to_string(d.path().join("roc_wevd_paper_mc.csv.meta")).unwrap();
    assert!(meta.contains("preset = static-compare") && meta.contains("scenario_digest = "));
}

#[test]
fn aperture_and_heatmap_presets() {
    let d = tempfile::tempdir().unwrap();
    let dir = d.path().to_str().unwrap();
    let out = sense(&["preset", "--name", "heatmap", "--out", dir]);
    assert!(out.status.success());
    let out = sense(&["preset", "--name", "aperture", "--trials", "300", "--points", "5", "--set", "su.1=-730,-2000,0", "--out", dir]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let names = csv_names(d.path());
    for n in ["heatmap.csv", "heatmap_l64.csv", "heatmap_l128.csv", "roc_l64_wed_paper_mc.csv", "roc_l128_wevd_paper_analytic.csv"] {
        assert!(names.contains(&n.to_string()), "{n} missing from {names:?}");
    }
    lint_dir(d.path());
}

#[test]
fn failures_print_one_machine_line() {
    let out = sense(&["roc", "--detector", "wed", "--set", "radio.K = 0", "--out", "/nonexistent"]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.starts_with("sense: error kind=config key=radio.K at=\"override 1\""), "{err}");

    let cfg = tempfile::NamedTempFile::new().unwrap();
    fs::write(cfg.path(), "seed = 1\nnot.a.key = 2\n").unwrap();
    let out = sense(&["config", "--config", cfg.path().to_str().unwrap()]);
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("key=not.a.key at=\"line 2\""), "{err}");

    let out = sense(&["config", "--config", "/definitely/missing.cfg"]);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("sense: error kind=io"));

    let out = sense(&["analytic", "--detector", "wed", "--tau-grid", "a:b"]);
    assert!(String::from_utf8(out.stderr).unwrap().starts_with("sense: error kind=usage"));
}

#[test]
fn analytic_grid_and_config_echo() {
    let out = sense(&["analytic", "--detector", "wevd", "--weights", "uniform", "--set", "su.1=-730,-2000,0", "--set", "su.2=-2000,-40,0", "--tau-grid", "0.5e-9, 2e-9, 1e-9"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(lint_roc(&text), Ok(3));

    let out = sense(&["config", "--set", "array.L=128", "--seed", "42"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("array.Lx = 16\n") && text.contains("seed = 42\n"));
    let back = wcss_cli::parse_config(&text).unwrap();
    assert_eq!(back.geometry.elements(), 128);
}
