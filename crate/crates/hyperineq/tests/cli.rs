use std::process::Command;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hyperineq"));
    c.env_remove("HYPERINEQ_SEED");
    c
}

fn tmp(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("hyperineq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn malformed_config_names_the_key() {
    let p = tmp("bad.toml", "command = \"criteria\"\n[family]\nnmae = \"rosen\"\n");
    let out = bin().arg("--config").arg(&p).arg("criteria").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nmae"));
}

#[test]
fn missing_required_key_is_a_config_error() {
    let out = bin().arg("criteria").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("measure.spec"));
}

#[test]
fn hypothesis_violation_exits_two() {
    let out = bin().args(["criteria", "--measure", "laplace", "--family", "rosen", "--beta", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn config_file_and_flags_merge_deterministically() {
    let p = tmp("rosen.toml", "command = \"criteria\"\nseed = 11\n[measure]\nspec = \"nu_alpha:1.5\"\n[family]\nname = \"poincare\"\n");
    let run = || bin().arg("--config").arg(&p).args(["criteria", "--family", "rosen", "--beta", "auto"]).output().unwrap();
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "hyperineq.report/1");
    assert_eq!(v["config"]["family"]["name"], "rosen");
    assert_eq!(v["config"]["seed"], 11);
    assert_eq!(v["result"]["family"], "rosen_beta");
}

#[test]
fn seed_comes_from_environment() {
    let out = bin().env("HYPERINEQ_SEED", "77").args(["oracle", "--task", "poincare", "--space", "random:5"]).output().unwrap();
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 77);
}

#[test]
fn oracle_reads_space_files() {
    let p = tmp("space.toml", "weights = [0.25, 0.75]\n[[edges]]\nu = 0\nv = 1\nc = 2.0\n");
    let out = bin().args(["oracle", "--task", "poincare", "--space"]).arg(&p).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let c_p = v["result"]["result"]["c_p"].as_f64().unwrap();
    assert!((c_p - 0.25 * 0.75 / 2.0).abs() < 1e-12);
}

#[test]
fn schedule_reads_criteria_reports() {
    let crit = bin().args(["criteria", "--measure", "nu_alpha:1.5", "--family", "rosen"]).output().unwrap();
    let p = tmp("crit.json", &String::from_utf8_lossy(&crit.stdout));
    let out = bin().args(["schedule", "--growth", "f_alpha:1.5", "--c-f"]).arg(&p).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let c: serde_json::Value = serde_json::from_slice(&crit.stdout).unwrap();
    let s: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(s["result"]["c_f"], c["result"]["extras"]["K_times_D"]);
}

#[test]
fn injected_fault_fails_verify() {
    let out = bin().args(["verify", "--criteria", "3", "--inject", "3:1.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = bin().args(["verify", "--criteria", "3"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn csv_output_is_written() {
    let dir = std::env::temp_dir().join(format!("hyperineq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("profile.csv");
    let out = bin().args(["--points", "11", "isoperimetry", "--alpha", "1.5", "--csv"]).arg(&csv).output().unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 12);
}
