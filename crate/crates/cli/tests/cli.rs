//! The `berezin` binary: exit codes, error messages and output contracts.

use std::path::PathBuf;
use std::process::{Command, Output};

use berezin_core::fuchsian::octagon_group;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("berezin-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn berezin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berezin"))
        .args(args)
        .env("BEREZIN_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn write_config(name: &str, json: &str) -> String {
    let p = scratch(name);
    std::fs::write(&p, json).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn malformed_group_file_names_the_line() {
    let mut text = octagon_group().to_text();
    text.push_str("0.5 0.1 oops 0 7 0\n");
    let group = scratch("bad_group.txt");
    std::fs::write(&group, &text).unwrap();
    let bad_line = text.lines().count();
    let cfg = write_config(
        "bad_group.json",
        &format!(r#"{{"group": {{"file": {:?}}}}}"#, group.to_string_lossy()),
    );
    let out = berezin(&["group-info", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(&format!("line {bad_line}")), "{err}");
}

#[test]
fn group_file_round_trips_through_group_info() {
    let group = scratch("octagon.txt");
    std::fs::write(&group, octagon_group().to_text()).unwrap();
    let cfg = write_config(
        "octagon.json",
        &format!(
            r#"{{"group": {{"file": {:?}}}, "depth": 4}}"#,
            group.to_string_lossy()
        ),
    );
    let out = berezin(&["group-info", "--config", &cfg, "--format", "csv"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap_or(f64::NAN))
        .collect();
    assert_eq!(row[0], 4.0);
    assert_eq!(row[4], 8.0);
    assert!((row[5] - std::f64::consts::PI).abs() < 1e-6);
}

#[test]
fn invalid_config_is_rejected_with_context() {
    let cfg = write_config("caps.json", r#"{"depth": 40}"#);
    let out = berezin(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("depth = 40"));
}

#[test]
fn kr_at_the_origin_is_one_row_with_a_tail() {
    let out = berezin(&[
        "compute", "kr", "--z", "0,0", "--zeta", "0,0", "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], "z_re,z_im,zeta_re,zeta_im,value,tail");
    let row: Vec<f64> = lines[1].split(',').map(|v| v.parse().unwrap()).collect();
    // the identity term alone contributes 1
    assert!(row[4] > 1.0 && row[5] > 0.0 && row[5] < 1e-3 * row[4]);
}

#[test]
fn sums_table_has_one_row_per_n_and_is_reproducible() {
    let cfg = write_config("sums.json", r#"{"depth": 4, "n_max": 5}"#);
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_berezin"))
            .args(["compute", "sums", "--config", &cfg, "--format", "csv"])
            .env("BEREZIN_THREADS", threads)
            .output()
            .unwrap()
    };
    let a = run("1");
    let b = run("3");
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.starts_with(
        "n,y_n,y_n_tail,root_n,root_n_tail,double_sum,double_sum_tail,phased_sum,phased_sum_tail\n"
    ));
    assert_eq!(text.lines().count(), 6);
}

#[test]
fn trivial_verify_passes_and_writes_the_report() {
    let cfg = write_config("trivial.json", r#"{"group": "trivial"}"#);
    let out_path = scratch("report.json");
    let out = berezin(&[
        "verify",
        "--config",
        &cfg,
        "--out",
        &out_path.to_string_lossy(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    assert!(v["constants"]["kappa_star"].as_f64().unwrap() > 0.0);
    let results = v["results"].as_array().unwrap();
    assert!(results.iter().all(|r| r["pass"] == true));
    assert!(results
        .iter()
        .any(|r| r["name"] == "c07.mean_value.printed_constant_rejected"));
}

#[test]
fn point_outside_the_disk_is_a_usage_error() {
    let out = berezin(&["compute", "kr", "--z", "1.5,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unit disk"));
}

#[test]
fn bad_thread_variable_is_an_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_berezin"))
        .args(["calibrate"])
        .env("BEREZIN_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("BEREZIN_THREADS"));
}
