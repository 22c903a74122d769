use std::process::Command;

fn wstar() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wstar"))
}

fn script(dir: &tempfile::TempDir, name: &str, text: &str) -> std::path::PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn run_writes_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = script(&dir, "a.wstar", "algebra A = [2]\nalgebra B = [3]\ncheck cross_norm A B trials=100 seed=7 tol=1e-9\n");
    let out_path = dir.path().join("r.json");
    let status = wstar().arg("run").arg(&file).arg("--report").arg(&out_path).status().unwrap();
    assert_eq!(status.code(), Some(0));
    let text = std::fs::read_to_string(&out_path).unwrap();
    assert!(text.starts_with("[\n  {\n    \"name\": \"cross_norm\",\n    \"status\": \"pass\""), "{text}");
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v[0]["seed"], 7);
    assert!(v[0]["witness"].is_null());
}

#[test]
fn report_directive_and_failures() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("out.json");
    let text = format!(
        "algebra A = [2]\nalgebra B = [1,1]\ncheck orthogonal_sum A B trials=2 inject=1e-6\nreport json {}\n",
        target.display()
    );
    let file = script(&dir, "b.wstar", &text);
    let out = wstar().arg("run").arg(&file).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let written = std::fs::read_to_string(&target).unwrap();
    assert!(written.contains("\"status\": \"fail\""));
    assert!(written.contains("not orthogonal"));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim_end(), written.trim_end());
}

#[test]
fn script_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = script(&dir, "c.wstar", "algebra A = [0]\n");
    let out = wstar().arg("run").arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("1:14"), "{err}");
    assert!(err.contains("not positive"), "{err}");

    let undeclared = script(&dir, "d.wstar", "check cross_norm X Y\n");
    assert_eq!(wstar().arg("run").arg(&undeclared).status().unwrap().code(), Some(2));
}

#[test]
fn parse_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    let ok = script(&dir, "e.wstar", "algebra A = [2,1]\ncheck cross_norm A A # undeclared names are fine here\n");
    let out = wstar().arg("parse").arg(&ok).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("2 statements"));
    let bad = script(&dir, "f.wstar", "tensor T = A x B\n");
    assert_eq!(wstar().arg("parse").arg(&bad).status().unwrap().code(), Some(2));
}

#[test]
fn seed_override_changes_seeds_deterministically() {
    let dir = tempfile::tempdir().unwrap();
    let file = script(&dir, "g.wstar", "algebra A = [2]\ncheck cstar_identity A seed=3\n");
    let run = |seed: &str| {
        let out = wstar().args(["run"]).arg(&file).args(["--seed", seed]).output().unwrap();
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("9"), run("9"));
    assert_ne!(run("9"), run("10"));
}
