use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_tgrs"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write_config(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

const SMALL_CENSUS: &str = "p = 7\nk = 4\nalpha = [1, 2, 3, 4, 5, 6]\nB = \"*,*;*,*;0,0;0,0\"\nlimit = 3\n";

#[test]
fn check_reports_example_member() {
    let cfg = configs().join("member_example1.toml");
    let v = json(&run(&["check", "--config", cfg.to_str().unwrap(), "--format", "json"]));
    assert_eq!(v["is_mds"], true);
    assert_eq!(v["mds_oracle"], true);
    assert_eq!(v["distance"]["d"], 3);
    assert_eq!(v["grs_status"], "grs");
    assert!(v["selfdual_sufficient"]["error"].is_string());

    let text = run(&["check", "--config", cfg.to_str().unwrap()]);
    assert!(text.status.success());
    assert!(String::from_utf8_lossy(&text.stdout).contains("distance.d"));
}

#[test]
fn check_zero_twist_is_grs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "zero.toml", "p = 11\nk = 3\nalpha = [0, 1, 2, 3, 5, 8, 9]\nnu = [1, 2, 3, 4, 5, 6, 7]\n");
    let v = json(&run(&["check", "--config", &cfg, "--format", "json"]));
    assert_eq!(v["is_mds"], true);
    assert_eq!(v["grs_status"], "grs");
    assert_eq!(v["schur_dim"], 5);
}

#[test]
fn validation_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let dup = write_config(&dir, "dup.toml", "p = 7\nk = 2\nalpha = [1, 2, 5, 5]\n");
    let out = run(&["check", "--config", &dup]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("repeated") && err.contains('5'), "{err}");

    let ragged = write_config(&dir, "ragged.toml", "p = 7\nk = 2\nalpha = [1, 2, 3, 4]\nB = \"1,2;3\"\n");
    assert_eq!(run(&["parity", "--config", &ragged]).status.code(), Some(1));

    let zero_nu = write_config(&dir, "nu.toml", "p = 7\nk = 2\nalpha = [1, 2, 3]\nnu = [1, 0, 1]\n");
    assert_eq!(run(&["check", "--config", &zero_nu]).status.code(), Some(1));

    assert_eq!(run(&["check", "--config", "/nonexistent/job.toml"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn census_guard_exits_two() {
    let cfg = configs().join("example1.toml");
    let out = run(&["census", "--config", cfg.to_str().unwrap(), "--tier", "quick"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("exceeds"));
}

#[test]
fn census_formats_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "small.toml", SMALL_CENSUS);
    let v = json(&run(&["census", "--config", &cfg, "--format", "json"]));
    assert_eq!(v["total"], 2401);
    assert_eq!(v["omega_count"], 171);
    assert_eq!(v["completed"], true);
    assert_eq!(v["sample_members"].as_array().unwrap().len(), 3);

    let baseline = run(&["census", "--config", &cfg, "--format", "json", "--threads", "1"]).stdout;
    for threads in ["1", "2", "8"] {
        let again = run(&["census", "--config", &cfg, "--format", "json", "--threads", threads]).stdout;
        assert_eq!(again, baseline, "threads {threads}");
    }
    for strategy in ["early-exit", "exhaustive"] {
        let s = json(&run(&["census", "--config", &cfg, "--format", "json", "--strategy", strategy]));
        assert_eq!(s["omega_count"], 171, "{strategy}");
        assert_eq!(s["sample_members"], v["sample_members"]);
    }

    let csv = run(&["census", "--config", &cfg, "--format", "csv"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "index,member");
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[1], "0,\"0,0;0,0;0,0;0,0\"");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(&dir, "small.toml", SMALL_CENSUS);
    let target = dir.path().join("report.json");
    let out = run(&["census", "--config", &cfg, "--format", "json", "--out", target.to_str().unwrap()]);
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["omega_count"], 171);
}

#[test]
fn polyp_reproduces_symbolic_example() {
    let cfg = configs().join("polyp_gf17.toml");
    let first = run(&["polyp", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    let v = json(&first);
    assert_eq!(v["p"], "11*x0*x1+12*x0+10*x1+2");
    assert_eq!(v["pij"][2][1], "10*x0*x1+1*x0+8*x1+12");
    assert!(v["P"].as_str().unwrap().starts_with("1*x0^6*x1^5+"));
    assert_eq!(v["p_terms"], 44);
    assert_eq!(v["p_zeros"], 45);
    assert_eq!((v["mds"].as_u64(), v["grs"].as_u64(), v["nongrs"].as_u64()), (Some(90), Some(8), Some(82)));
    let second = run(&["polyp", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn polyp_rejects_degenerate_inputs() {
    let cfg = configs().join("polyp_gf17.toml");
    let grs_ref = run(&["polyp", "--config", cfg.to_str().unwrap(), "--reference", "0,0"]);
    assert_eq!(grs_ref.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&grs_ref.stderr).contains("GRS"));

    let dir = tempfile::tempdir().unwrap();
    let fixed = write_config(&dir, "fixed.toml", "p = 17\nk = 3\nalpha = [1, 2, 3, 4, 5, 6]\nB = \"9,0,0;0,0,0;0,0,9\"\n");
    let out = run(&["polyp", "--config", &fixed]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("wildcard"));
}

#[test]
fn parity_dual_schur_grs() {
    let cfg = configs().join("member_example1.toml");
    let cfg = cfg.to_str().unwrap();
    let p = json(&run(&["parity", "--config", cfg, "--format", "json"]));
    assert_eq!(p["rank_is_n_minus_k"], true);
    assert_eq!(p["orthogonal"], true);
    assert_eq!(p["matches_null_space"], true);
    let d = json(&run(&["dual", "--config", cfg, "--format", "json"]));
    assert_eq!(d["generator"], p["H"]);
    assert_eq!(d["min_distance"], 5);
    let s = json(&run(&["schur", "--config", cfg, "--format", "json"]));
    assert_eq!(s["dim"], 6);
    let g = json(&run(&["grs", "--config", cfg, "--format", "json"]));
    assert_eq!(g["status"], "grs");
}

#[test]
fn field_info_lists_powers() {
    let v = json(&run(&["field-info", "--p", "3", "--m", "2", "--format", "json"]));
    assert_eq!(v["q"], 9);
    assert_eq!(v["modulus"], serde_json::json!([2, 1, 1]));
    assert_eq!(v["powers"].as_array().unwrap().len(), 8);
    assert_eq!(run(&["field-info", "--p", "3", "--m", "2", "--modulus", "1,0,1"]).status.code(), Some(0));
    assert_eq!(run(&["field-info", "--p", "3", "--m", "2", "--modulus", "2,0,1"]).status.code(), Some(1));
    assert_eq!(run(&["field-info", "--p", "4"]).status.code(), Some(1));
}

#[cfg(unix)]
#[test]
fn interrupted_census_writes_checkpoint() {
    let cfg = configs().join("example3.toml");
    let child = bin()
        .args(["census", "--config", cfg.to_str().unwrap(), "--format", "json", "--threads", "1"])
        .stdout(std::process::Stdio::piped())
        .stderr(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    std::thread::sleep(std::time::Duration::from_millis(1500));
    let status = Command::new("kill").args(["-INT", &child.id().to_string()]).status().unwrap();
    assert!(status.success());
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(1), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["completed"], false);
    let resume = v["resume_prefix"].as_u64().unwrap();
    assert!(resume < v["prefix_count"].as_u64().unwrap());
    assert!(v["processed"].as_u64().unwrap() < v["total"].as_u64().unwrap());
}
