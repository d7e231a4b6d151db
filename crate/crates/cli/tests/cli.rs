use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn backbone(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_backbone"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const CHAIN: &str = "c var 1 x\nc var 2 y\np cnf 2 2\n1 0\n-1 2 0\n";

#[test]
fn classify_krom_and_parse_error() {
    let dir = TempDir::new().unwrap();
    let krom = write(dir.path(), "k.cnf", "p cnf 2 2\n1 2 0\n-1 0\n");
    let out = backbone(&["classify", s(&krom)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("krom: true"));
    let bad = write(dir.path(), "bad.cnf", "p cnf 2 1\n1 2\n-1 x 0\n");
    let out = backbone(&["classify", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn tautologies_strict_by_default() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "t.cnf", "p cnf 2 2\n1 -1 0\n2 0\n");
    assert_eq!(backbone(&["classify", s(&p)]).status.code(), Some(2));
    let out = backbone(&["backbones", s(&p), "--strict-tautologies", "false"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("backbones (1): 2"));
}

#[test]
fn sus_prints_witness() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let out = backbone(&["sus", s(&p), "-k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("witness: c0 c1"));
    assert_eq!(backbone(&["sus", s(&p), "-k", "1"]).status.code(), Some(1));
    let out = backbone(&["sus", s(&p), "-k", "2", "--vo", "2", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["witness"]["clause_ids"], serde_json::json!([0, 1]));
}

#[test]
fn local_by_name() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "c.cnf", CHAIN);
    let out = backbone(&["local", s(&p), "-k", "2", "--var", "y"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("yes, polarity +"));
    assert_eq!(
        backbone(&["local", s(&p), "-k", "1", "--var", "y"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        backbone(&["local", s(&p), "-k", "1", "--var", "zz"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn iterative_one_is_unit_propagation() {
    let dir = TempDir::new().unwrap();
    let p = write(
        dir.path(),
        "c.cnf",
        "p cnf 4 4\n1 0\n-1 2 0\n-2 3 4 0\n-3 -4 0\n",
    );
    let it: Value = serde_json::from_slice(
        &backbone(&["iterative", s(&p), "-k", "1", "--format", "json"]).stdout,
    )
    .unwrap();
    let uc: Value =
        serde_json::from_slice(&backbone(&["uc", s(&p), "-k", "1", "--format", "json"]).stdout)
            .unwrap();
    assert_eq!(it["forced"], serde_json::json!([1, 2]));
    assert_eq!(it["forced"], uc["forced"]);
}

#[test]
fn unsat_exit_codes() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "u.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    assert_eq!(backbone(&["report", s(&p)]).status.code(), Some(3));
    assert_eq!(backbone(&["backbones", s(&p)]).status.code(), Some(3));
    assert_eq!(
        backbone(&["iterative", s(&p), "-k", "2"]).status.code(),
        Some(3)
    );
    assert_eq!(backbone(&["solve", s(&p)]).status.code(), Some(1));
}

#[test]
fn report_without_backbones() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "f.cnf", "p cnf 2 1\n1 2 0\n");
    let out = backbone(&["report", s(&p), "--kmax", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["backbone_count"], 0);
    assert_eq!(v["curve"], serde_json::json!([]));
    assert_eq!(
        backbone(&["report", s(&p), "--kmax", "0"]).status.code(),
        Some(2)
    );
}

#[test]
fn generate_writes_sidecar() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("g.cnf");
    let status = backbone(&[
        "generate",
        "krom",
        "-n",
        "8",
        "-m",
        "6",
        "--seed",
        "3",
        "-o",
        s(&out),
    ])
    .status;
    assert!(status.success());
    let meta: Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("g.cnf.json")).unwrap()).unwrap();
    assert_eq!(meta["construction"], "krom");
    assert_eq!(meta["params"]["seed"], 3);
    let again = dir.path().join("h.cnf");
    backbone(&[
        "generate",
        "krom",
        "-n",
        "8",
        "-m",
        "6",
        "--seed",
        "3",
        "-o",
        s(&again),
    ]);
    assert_eq!(fs::read(&out).unwrap(), fs::read(&again).unwrap());
    let graph = backbone(&["graph", s(&out)]);
    assert!(stdout(&graph).starts_with("digraph implication {"));
    assert_eq!(
        backbone(&["generate", "vo1", "-n", "2", "-m", "5"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn planted_clique_instances() {
    let dir = TempDir::new().unwrap();
    for (construction, no, expected) in [
        ("hyperpath-defhorn", false, 0),
        ("hyperpath-defhorn", true, 1),
    ] {
        let out = dir.path().join(format!("{construction}{no}.cnf"));
        let mut args = vec!["generate", construction, "--seed", "4", "-o", s(&out)];
        if no {
            args.push("--no");
        }
        assert!(backbone(&args).status.success());
        let meta: Value =
            serde_json::from_str(&fs::read_to_string(format!("{}.json", s(&out))).unwrap())
                .unwrap();
        let k = meta["planted"]["k"].to_string();
        let code = backbone(&["local", s(&out), "-k", &k, "--var", "t"])
            .status
            .code();
        assert_eq!(code, Some(expected), "{construction} no={no}");
    }
}
