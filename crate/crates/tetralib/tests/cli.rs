//! Black-box tests of the `tetra` binary: exit codes, JSON/CSV output,
//! table persistence and determinism, and the env-var default location.

use std::path::Path;
use std::process::{Command, Output};

fn tetra() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_tetra"));
    cmd.env_remove("TETRALIB_TABLE_DIR");
    cmd
}

fn run(args: &[&str]) -> Output {
    tetra().args(args).output().expect("binary must run")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout must be JSON")
}

fn stderr_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stderr);
    assert_eq!(
        text.lines().count(),
        1,
        "stderr must be a single line: {text}"
    );
    serde_json::from_str(text.trim()).expect("stderr must be JSON")
}

fn solve_table(dir: &Path, base: &str, nodes: &str, height: &str, tol: &str) {
    let file = dir.join(format!("table_{base}.json"));
    let out = tetra()
        .args([
            "solve", "--base", base, "--nodes", nodes, "--height", height, "--tol", tol,
        ])
        .arg("--out")
        .arg(&file)
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn solve_quick(dir: &Path, base: &str) {
    // the coarse grid bottoms out around 1.5e-9 (base e) and 1.3e-9 (base 2)
    solve_table(dir, base, "64", "4", "5e-9");
}

#[test]
fn fixpoint_prints_the_known_values() {
    let v = stdout_json(&run(&["fixpoint", "--base", "e"]));
    let l = v["l"].as_array().unwrap();
    assert!((l[0].as_f64().unwrap() - 0.3181315052047641).abs() < 1e-12);
    assert!((l[1].as_f64().unwrap() - 1.3372357014306895).abs() < 1e-12);
    assert!(v["residual"].as_f64().unwrap() < 1e-13);
}

#[test]
fn inadmissible_base_fails_with_json_error() {
    let out = run(&["solve", "--base", "1.2"]);
    assert_eq!(out.status.code(), Some(2));
    let e = stderr_json(&out);
    assert_eq!(e["code"], "base_out_of_range");
}

#[test]
fn unwritable_out_path_fails_before_solving() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("occupied");
    std::fs::write(&blocker, "not a directory").unwrap();
    // A grid this size takes minutes; the path probe must reject first.
    let started = std::time::Instant::now();
    let out = tetra()
        .args(["solve", "--base", "e", "--nodes", "2048", "--height", "12"])
        .arg("--out")
        .arg(blocker.join("table_e.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["code"], "io");
    assert!(started.elapsed() < std::time::Duration::from_secs(10));
}

#[test]
fn solve_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = tetra()
            .args(["solve", "--base", "e", "--nodes", "64", "--height", "4"])
            .arg("--out")
            .arg(path)
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn env_var_gives_the_default_table_location() {
    let dir = tempfile::tempdir().unwrap();
    let out = tetra()
        .env("TETRALIB_TABLE_DIR", dir.path())
        .args(["solve", "--base", "e", "--nodes", "64", "--height", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(dir.path().join("table_e.json").exists());

    let out = tetra()
        .env("TETRALIB_TABLE_DIR", dir.path())
        .args(["sexp", "--at", "1"])
        .output()
        .unwrap();
    let v = stdout_json(&out);
    assert!((v["re"].as_f64().unwrap() - std::f64::consts::E).abs() < 1e-8);
    assert_eq!(v["im"].as_f64().unwrap(), 0.0);
}

#[test]
fn evaluation_formats_and_digits() {
    let dir = tempfile::tempdir().unwrap();
    solve_quick(dir.path(), "e");
    let table = dir.path().join("table_e.json");
    let t = table.to_str().unwrap();

    let v = stdout_json(&run(&["sexp", "--table", t, "--at", "0"]));
    assert_eq!(v["re"].as_f64().unwrap(), 1.0);

    let out = run(&["--format", "csv", "sexp", "--table", t, "--at", "0"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("re,im"));
    let row = lines.next().unwrap();
    assert!(row.starts_with("1.0000000000000000e0,"));

    let out = run(&[
        "--digits",
        "6",
        "slog",
        "--table",
        t,
        "--at",
        "2.718281828459045,0",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.00000e0"), "got {text}");
}

#[test]
fn domain_and_numerical_errors_set_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    solve_quick(dir.path(), "e");
    let table = dir.path().join("table_e.json");
    let t = table.to_str().unwrap();

    // excluded ray: usage/domain error
    let out = run(&["sexp", "--table", t, "--at", "-2.5,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["code"], "outside_domain");

    // above the strip: usage/domain error
    let out = run(&["sexp", "--table", t, "--at", "0,7"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["code"], "domain_clipped");

    // fixed point of the base map: numerical failure
    let out = run(&[
        "slog",
        "--table",
        t,
        "--at",
        "0.3181315052047641,1.3372357014306895",
    ]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stderr_json(&out)["code"], "at_fixed_point");

    let out = run(&["sexp", "--table", "/nonexistent/t.json", "--at", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let e = stderr_json(&out);
    assert_eq!(e["code"], "invalid_params");
    assert!(e["message"]
        .as_str()
        .unwrap()
        .contains("/nonexistent/t.json"));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"not\": \"a table\"}").unwrap();
    let out = run(&["sexp", "--table", bad.to_str().unwrap(), "--at", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["code"], "table_format");
}

#[test]
fn verify_exit_codes_and_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    // deep table so every check has room; default tolerance is below this
    // grid's floor, so relax it
    solve_table(dir.path(), "e", "96", "8", "5e-9");
    let table = dir.path().join("table_e.json");
    let t = table.to_str().unwrap();
    let report_path = dir.path().join("report.json");

    let out = run(&[
        "verify",
        "--table",
        t,
        "--criterion",
        "C",
        "--out",
        report_path.to_str().unwrap(),
    ]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["criterion"], "C");
    assert_eq!(v["passed"], true);
    assert!(v["sample_count"].as_u64().unwrap() >= 200);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 0);
    // the written report matches stdout
    let file: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert_eq!(file, v);

    let out = run(&["verify", "--table", t, "--criterion", "all"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);

    let out = run(&[
        "verify",
        "--table",
        t,
        "--criterion",
        "all",
        "--perturb",
        "szekeres",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().any(|r| r["passed"] == false));

    // witnesses carry index/location/detail and arrive sorted by index
    let failing = v
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["passed"] == false)
        .unwrap();
    let ws = failing["witnesses"].as_array().unwrap();
    assert!(!ws.is_empty());
    let idx: Vec<u64> = ws.iter().map(|w| w["index"].as_u64().unwrap()).collect();
    assert!(idx.windows(2).all(|p| p[0] <= p[1]));
    assert!(ws[0]["location"].as_array().unwrap().len() == 2);
    assert!(ws[0]["detail"].is_string());
}

#[test]
fn shallow_table_is_rejected_for_covering() {
    let dir = tempfile::tempdir().unwrap();
    solve_quick(dir.path(), "e");
    let table = dir.path().join("table_e.json");
    let out = run(&[
        "verify",
        "--table",
        table.to_str().unwrap(),
        "--criterion",
        "A",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["message"]
        .as_str()
        .unwrap()
        .contains("--height 8"));
}

#[test]
fn verify_without_a_table_names_the_expected_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = tetra()
        .env("TETRALIB_TABLE_DIR", dir.path())
        .args(["verify", "--criterion", "C"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let e = stderr_json(&out);
    assert_eq!(e["code"], "invalid_params");
    assert!(e["message"]
        .as_str()
        .unwrap()
        .contains(dir.path().join("table_e.json").to_str().unwrap()));
}

#[test]
fn emit_figure_writes_the_advertised_files() {
    let dir = tempfile::tempdir().unwrap();
    solve_quick(dir.path(), "e");
    solve_quick(dir.path(), "2");
    let table = dir.path().join("table_e.json");
    let t = table.to_str().unwrap();

    let fig4 = dir.path().join("fig4.csv");
    let out = run(&[
        "emit-figure",
        "--table",
        t,
        "--figure",
        "fig4",
        "--out",
        fig4.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&fig4).unwrap();
    assert_eq!(text.lines().count(), 1 + 11 * 601);
    assert_eq!(text.lines().next(), Some("c,x,y"));

    let fig3 = dir.path().join("fig3.csv");
    let out = run(&[
        "emit-figure",
        "--table",
        t,
        "--figure",
        "fig3",
        "--out",
        fig3.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(
        std::fs::read_to_string(&fig3).unwrap().lines().count(),
        1 + 101 * 101
    );
    assert!(dir.path().join("fig3_boundary.csv").exists());

    // fig1 needs the base-2 table, found through the table dir
    let fig1 = dir.path().join("fig1.csv");
    let out = tetra()
        .env("TETRALIB_TABLE_DIR", dir.path())
        .args([
            "emit-figure",
            "--table",
            t,
            "--figure",
            "fig1",
            "--out",
            fig1.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&fig1).unwrap();
    assert_eq!(text.lines().count(), 501);
    assert_eq!(text.lines().next(), Some("x,sexp_e,sexp_2"));

    // without the base-2 table the error names the missing path
    let empty = tempfile::tempdir().unwrap();
    let out = tetra()
        .env("TETRALIB_TABLE_DIR", empty.path())
        .args([
            "emit-figure",
            "--table",
            t,
            "--figure",
            "fig1",
            "--out",
            fig1.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_json(&out)["message"]
        .as_str()
        .unwrap()
        .contains("table_2.json"));

    let out = run(&[
        "emit-figure",
        "--table",
        t,
        "--figure",
        "fig9",
        "--out",
        "/tmp/x.csv",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_are_json_too() {
    let out = run(&["sexp", "--at"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_json(&out)["code"], "invalid_params");

    let out = run(&["slog", "--table", "x.json", "--at", "1,2,3"]);
    assert_eq!(out.status.code(), Some(2));
}
