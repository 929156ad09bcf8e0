use std::path::Path;
use std::process::{Command, Output};

fn spinorlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinorlab"))
        .args(args)
        .env_remove("SPINORLAB_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn classify_builtins() {
    let o = spinorlab(&["classify", "--builtin", "psi1", "--n", "8"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("Pure, rank 4"));

    let o = spinorlab(&["classify", "--builtin", "psi2", "--n", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("TotallyImpure"));

    let o = spinorlab(&["classify", "--builtin", "random", "--n", "5", "--seed", "9"]);
    assert_eq!(
        stdout(&o).lines().next(),
        Some("StrictlyPartiallyPure, rank 2")
    );
}

#[test]
fn classify_json_block() {
    let o = spinorlab(&["classify", "--builtin", "psi1", "--n", "3", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let start = text.find('{').unwrap();
    let v: serde_json::Value = serde_json::from_str(&text[start..]).unwrap();
    assert_eq!(v["nullity"], 1);
    assert_eq!(v["cr_frame"]["dim_d"], 2);
    assert_eq!(v["xi"], serde_json::json!([0.0, 0.0, 1.0]));
}

#[test]
fn operational_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let zero = dir.path().join("zero.json");
    std::fs::write(
        &zero,
        r#"{"format":"spinorlab/1","n":4,"coeffs":[[0,0],[0,0],[0,0],[0,0]]}"#,
    )
    .unwrap();
    let o = spinorlab(&["classify", "--file", path_str(&zero)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero"));

    let short = dir.path().join("short.json");
    std::fs::write(
        &short,
        r#"{"format":"spinorlab/1","n":6,"coeffs":[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#,
    )
    .unwrap();
    assert_eq!(
        spinorlab(&["classify", "--file", path_str(&short)])
            .status
            .code(),
        Some(2)
    );

    assert_eq!(
        spinorlab(&["classify", "--file", "/nonexistent/spinor.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(spinorlab(&["spectrum", "--n", "5"]).status.code(), Some(2));
    assert_eq!(
        spinorlab(&["verify", "--suite", "nope"]).status.code(),
        Some(2)
    );
    assert_eq!(
        spinorlab(&["verify", "--nmax", "20"]).status.code(),
        Some(2)
    );
    let out = dir.path().join("x.json");
    assert_eq!(
        spinorlab(&[
            "construct",
            "--n",
            "10",
            "--nullity",
            "3",
            "--out",
            path_str(&out)
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn construct_then_classify() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("n3.json");
    let o = spinorlab(&[
        "construct",
        "--n",
        "12",
        "--nullity",
        "3",
        "--out",
        path_str(&out),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = spinorlab(&["classify", "--file", path_str(&out)]);
    assert_eq!(
        stdout(&o).lines().next(),
        Some("StrictlyPartiallyPure, rank 3")
    );
}

#[test]
fn spectrum_levels() {
    let o = spinorlab(&["spectrum", "--n", "6", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let mults: Vec<u64> = v["levels"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| l["multiplicity"].as_u64().unwrap())
        .collect();
    assert_eq!(mults, [1, 3, 3, 1]);
}

#[test]
fn verify_exit_codes() {
    let o = spinorlab(&[
        "verify",
        "--suite",
        "lemma22,prop37",
        "--nmax",
        "6",
        "--trials",
        "5",
    ]);
    assert_eq!(o.status.code(), Some(0));

    // A coarse rank threshold collapses the nullity computation, so checks fail.
    let o = spinorlab(&[
        "verify",
        "--suite",
        "lemma22",
        "--nmax",
        "6",
        "--trials",
        "5",
        "--tol-rank",
        "0.9",
    ]);
    assert_eq!(o.status.code(), Some(1));

    let o = spinorlab(&["verify", "--suite", "", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["summary"]["total"], 0);
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
}

#[test]
fn seed_from_environment_and_flag() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_spinorlab"));
        cmd.args([
            "verify", "--suite", "prop36", "--nmax", "4", "--trials", "2", "--json",
        ]);
        cmd.env_remove("SPINORLAB_SEED");
        if let Some(e) = env {
            cmd.env("SPINORLAB_SEED", e);
        }
        if let Some(f) = flag {
            cmd.args(["--seed", f]);
        }
        let o = cmd.output().unwrap();
        let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
        v["config"]["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 42);
    assert_eq!(run(Some("7"), None), 7);
    assert_eq!(run(Some("7"), Some("11")), 11);
}

#[test]
fn verify_report_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = (0..2)
        .map(|i| dir.path().join(format!("r{i}.json")))
        .collect();
    for p in &paths {
        let o = spinorlab(&[
            "verify",
            "--nmax",
            "7",
            "--trials",
            "6",
            "--seed",
            "5",
            "--out",
            path_str(p),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    }
    let strip = |p: &Path| -> String {
        std::fs::read_to_string(p)
            .unwrap()
            .lines()
            .filter(|l| !l.contains("wall_time_s"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&paths[0]), strip(&paths[1]));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&paths[0]).unwrap()).unwrap();
    assert_eq!(v["format"], "spinorlab-report/1");
    for key in ["config", "records", "summary"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}
