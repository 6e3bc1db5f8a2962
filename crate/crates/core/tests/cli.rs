use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bcx"))
        .args(args)
        .env("BCX_JOBS", "2")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn complete(n: usize) -> String {
    let mut s = String::new();
    for i in 1..=n {
        for j in i + 1..=n {
            s.push_str(&format!("{i} {j}\n"));
        }
    }
    s
}

const K33: &str = "a x\na y\na z\nb x\nb y\nb z\nc x\nc y\nc z\n";

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_k4_emits_a_certificate_that_verifies_and_renders() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", &complete(4));
    let cert = dir.path().join("cert.json");
    let svg = dir.path().join("k4.svg");
    let out = bcx(&["solve", s(&k4), "--k", "1", "--emit-cert", s(&cert), "--svg", s(&svg)]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(doc["layout"]["bundling"].as_array().unwrap().len(), 1);
    let out = bcx(&["verify", s(&k4), "--cert", s(&cert)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let drawn = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(drawn.matches(r#"class="bundle""#).count(), 1);
    let a = bcx(&["render", s(&k4), "--cert", s(&cert)]);
    let b = bcx(&["render", s(&k4), "--cert", s(&cert)]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", &complete(4));
    let out = bcx(&["solve", s(&k4), "--k", "1"]);
    let mut doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    doc["layout"]["bundling"] = serde_json::json!([]);
    let cert = write(&dir, "bad.json", &doc.to_string());
    assert_eq!(code(&bcx(&["verify", s(&k4), "--cert", s(&cert)])), 1);
    let junk = write(&dir, "junk.json", "{");
    assert_eq!(code(&bcx(&["verify", s(&k4), "--cert", s(&junk)])), 2);
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let k33 = write(&dir, "k33.txt", K33);
    assert_eq!(code(&bcx(&["solve", s(&k33), "--k", "1"])), 1);
    let k4 = write(&dir, "k4.txt", &complete(4));
    assert_eq!(code(&bcx(&["solve", s(&k4), "--k", "0"])), 1);
    let bad = write(&dir, "bad.txt", "1 2 3\n");
    assert_eq!(code(&bcx(&["solve", s(&bad), "--k", "1"])), 2);
    assert_eq!(code(&bcx(&["solve", "/nonexistent/graph", "--k", "1"])), 2);
    // a budget too small to finish anything
    let k6 = write(&dir, "k6.txt", &complete(6));
    assert_eq!(code(&bcx(&["--budget", "1", "solve", s(&k6), "--k", "2"])), 3);
}

#[test]
fn bundle_modes() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", &complete(4));
    let out = bcx(&["bundle", s(&k4), "--order", "1,2,3,4", "--exact"]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["classes"], 1);
    let c4 = write(&dir, "c4.txt", "1 2\n2 3\n3 4\n4 1\n");
    let out = bcx(&["bundle", s(&c4), "--order", "1,2,3,4"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["bundling"].as_array().unwrap().len(), 0);
    let k33 = write(&dir, "k33.txt", K33);
    let classes = |flag: &str| {
        let out = bcx(&["bundle", s(&k33), "--order", "a,b,c,x,y,z", flag]);
        let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        doc["classes"].as_u64().unwrap()
    };
    assert!(classes("--greedy") >= classes("--exact"));
    assert_eq!(code(&bcx(&["bundle", s(&k4), "--order", "1,2,3"])), 2);
    assert_eq!(code(&bcx(&["bundle", s(&k4), "--order", "1,2,3,9"])), 2);
}

#[test]
fn genus_commands() {
    let dir = TempDir::new().unwrap();
    let k6 = write(&dir, "k6.txt", &complete(6));
    let out = bcx(&["genus", s(&k6)]);
    assert_eq!((code(&out), stdout(&out).trim()), (0, "1"));
    let tree = write(&dir, "tree.txt", "1 2\n1 3\n3 4\n3 5\n");
    assert_eq!(stdout(&bcx(&["bc-prime", s(&tree)])).trim(), "0");
    let k33 = write(&dir, "k33.txt", K33);
    assert_eq!(stdout(&bcx(&["bco-prime", s(&k33)])).trim(), "1");
    let bad = write(&dir, "bad.txt", "x x\n");
    assert_eq!(code(&bcx(&["genus", s(&bad)])), 2);
}

#[test]
fn oracle_and_obstruct() {
    let dir = TempDir::new().unwrap();
    let k4 = write(&dir, "k4.txt", &complete(4));
    let out = bcx(&["oracle", s(&k4)]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["k"], 1);
    assert_eq!(code(&bcx(&["oracle", s(&k4), "--max-k", "0"])), 1);
    for p in ["4", "6"] {
        for pat in ["a", "b"] {
            assert_eq!(code(&bcx(&["obstruct", "--pattern", pat, "--p", p])), 0);
        }
    }
    let grid = write(
        &dir,
        "grid.json",
        r#"{"positions": 4, "chords": [[0, 2], [1, 3]], "partners": [[1], [0]]}"#,
    );
    assert_eq!(code(&bcx(&["obstruct", s(&grid)])), 1);
    assert_eq!(code(&bcx(&["obstruct"])), 2);
}
