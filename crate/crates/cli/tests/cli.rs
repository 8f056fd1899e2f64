use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qstatlab"))
}

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn list_prints_every_experiment() {
    let out = run(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in ["stein", "sanov", "chernoff", "divergence-props", "hot", "modelsel", "risk-alpha"] {
        assert!(text.lines().any(|l| l.starts_with(&format!("{name}:"))), "{text}");
    }
    assert!(text.contains("p, q, eps, n_list"));
}

#[test]
fn validate_shipped_config() {
    let cfg = configs().join("stein.json");
    let out = run(&["validate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("ok: stein"));
}

#[test]
fn validation_failures_exit_one() {
    let bad = write_config(
        "bad.json",
        r#"{"experiment": "stein", "parameters": {"p": [0.5, 0.4], "q": [0.75, 0.25], "eps": 0.05, "n_list": [10, 20]}}"#,
    );
    let out = run(&["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("sum"));

    let broken = write_config("broken.json", "{ not json");
    assert_eq!(run(&["run", "--config", broken.to_str().unwrap()]).status.code(), Some(1));
    assert_eq!(run(&["run", "--config", "/nonexistent/config.json"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["run"]).status.code(), Some(1));
}

#[test]
fn capacity_guard_exits_two() {
    let cfg = write_config(
        "big.json",
        r#"{"experiment": "risk-alpha", "parameters": {"grid": {"first": 0.1, "last": 0.9, "count": 9}, "n": 25, "alphas": [0.0]}}"#,
    );
    let out = run(&["run", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn csv_to_stdout_and_seed_override() {
    let cfg = configs().join("stein.json");
    let out = run(&["run", "--config", cfg.to_str().unwrap(), "--format", "csv", "--out", "/dev/stdout"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("n,log_beta_n,rate_n\n"));

    let mc = configs().join("modelsel.json");
    let a = scratch("m1.json");
    let b = scratch("m2.json");
    for (path, seed) in [(&a, "5"), (&b, "6")] {
        let out = run(&["run", "--config", mc.to_str().unwrap(), "--seed", seed, "--out", path.to_str().unwrap()]);
        assert!(out.status.success());
    }
    let va: serde_json::Value = serde_json::from_slice(&std::fs::read(&a).unwrap()).unwrap();
    let vb: serde_json::Value = serde_json::from_slice(&std::fs::read(&b).unwrap()).unwrap();
    assert_eq!(va["config"]["seed"], 5);
    assert_ne!(va["results"], vb["results"]);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let cfg = configs().join("risk_alpha.json");
    let a = run(&["run", "--config", cfg.to_str().unwrap(), "--format", "csv", "--out", "/dev/stdout"]);
    let b = run(&["run", "--config", cfg.to_str().unwrap(), "--format", "csv", "--out", "/dev/stdout"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn default_output_path_is_created() {
    let dir = scratch("workdir");
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = configs().join("hot_commuting.json").canonicalize().unwrap();
    let out = bin().current_dir(&dir).args(["run", "--config", cfg.to_str().unwrap()]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.join("out/hot_commuting.json")).unwrap()).unwrap();
    assert_eq!(report["results"]["gap_zero"], true);
    assert_eq!(report["all_passed"], true);
}
