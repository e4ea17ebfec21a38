use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const ODG: &str = env!("CARGO_BIN_EXE_odg");
const SAT: &str = env!("CARGO_BIN_EXE_odg-sat");

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(dir: &Path, args: &[&str]) -> Run {
    let out: Output = Command::new(ODG)
        .args(args)
        .current_dir(dir)
        .env_remove("ODG_SOLVER")
        .env_remove("ODG_TIMEOUT")
        .env_remove("ODG_INTERNAL_LIMIT")
        .output()
        .expect("odg runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
    }
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let r = run(dir, args);
    assert_eq!(r.code, 0, "odg {args:?}: {}", r.stderr);
    r.stdout
}

fn build(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["build"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path.to_str().unwrap()]);
    ok(dir, &all);
    path
}

fn sat_template() -> String {
    format!("'{SAT}' {{cnf}}")
}

#[test]
fn build_and_stats() {
    let dir = TempDir::new().unwrap();
    let f = build(dir.path(), "f.json", &["-e", "F(8,3)"]);
    assert_eq!(ok(dir.path(), &["stats", f.to_str().unwrap()]).trim(), "9 vertices, 21 edges; 3:9 5:3 7:6 11:3");

    let g = build(dir.path(), "g.json", &["--named", "g306", "--restricted"]);
    assert!(ok(dir.path(), &["stats", g.to_str().unwrap()]).starts_with("306 vertices, 2448 edges;"));
    let d = ok(dir.path(), &["decompose", g.to_str().unwrap(), "--rho", "8,8,7"]);
    assert!(d.contains("core 36") && d.contains("frame 9") && d.contains("54 core-rotor, 108 rotor-rotor"), "{d}");
}

#[test]
fn usage_errors() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(dir.path(), &["frobnicate"]).code, 1);
    assert_eq!(run(dir.path(), &["build", "-e", "F(8,"]).code, 1);
    assert_eq!(run(dir.path(), &["build", "--named", "nope"]).code, 1);
    assert_eq!(run(dir.path(), &["stats", "missing.json"]).code, 1);
}

#[test]
fn chi_writes_manifest() {
    let dir = TempDir::new().unwrap();
    let t = build(dir.path(), "t.json", &["--named", "t"]);
    assert_eq!(ok(dir.path(), &["--seed", "7", "chi", t.to_str().unwrap(), "--internal"]).trim(), "3");
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("odg-manifest.json")).unwrap()).unwrap();
    assert_eq!(m["command"], "chi");
    assert_eq!(m["parameters"]["seed"], "7");
    assert_eq!(m["parameters"]["chi"], "3");
    assert_eq!(m["outcome"], "SAT");
}

#[test]
fn solve_verify_roundtrip() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let f = build(p, "f.json", &["-e", "F(8,3)"]);
    let f = f.to_str().unwrap();
    let tpl = sat_template();
    assert_eq!(ok(p, &["solve", f, "-k", "2", "--solver", &tpl]).trim(), "UNSAT");
    assert_eq!(ok(p, &["solve", f, "-k", "3", "--solver", &tpl, "-o", "c.json"]).trim(), "SAT");
    assert!(ok(p, &["verify", f, "c.json"]).starts_with("valid 3-coloring"));

    fs::write(p.join("bad.json"), r#"{"k":3,"colors":[0,0,0,0,0,0,0,0,0]}"#).unwrap();
    assert_eq!(run(p, &["verify", f, "bad.json"]).code, 2);
    assert_eq!(run(p, &["render", f, "--coloring", "bad.json"]).code, 2);
    let svg = ok(p, &["render", f, "--coloring", "c.json", "--edges"]);
    assert!(svg.starts_with("<svg") && svg.matches("<circle").count() == 9);
}

#[test]
fn internal_limit_and_indet() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let g = build(p, "g.json", &["--named", "g306", "--restricted"]);
    let g = g.to_str().unwrap();
    let r = run(p, &["solve", g, "-k", "6", "--internal"]);
    assert_eq!(r.code, 2, "{}", r.stderr);
    assert!(r.stderr.contains("limit"));

    let h = build(p, "h.json", &["--named", "h"]);
    let r = run(p, &["solve", h.to_str().unwrap(), "-k", "3", "--internal", "--timeout", "0"]);
    assert_eq!(r.code, 3);
    assert!(r.stdout.starts_with("INDET"));
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(p.join("odg-manifest.json")).unwrap()).unwrap();
    assert_eq!(m["outcome"], "INDET");
}

#[cfg(unix)]
#[test]
fn external_timeout_is_indet() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let h = build(p, "h.json", &["--named", "h"]);
    let r = run(p, &["solve", h.to_str().unwrap(), "-k", "3", "--solver", "sh -c 'sleep 10' {cnf}", "--timeout", "0.5"]);
    assert_eq!(r.code, 3, "{}", r.stderr);
}

#[test]
fn virtual_pairs() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let h = build(p, "h.json", &["--named", "h"]);
    let out = ok(p, &["virtual", h.to_str().unwrap(), "-k", "3", "--distance", "2", "--internal"]);
    // the hexagon of H alternates two colors, so opposite vertices never match
    assert_eq!(out.lines().count(), 3);
    assert!(out.lines().all(|l| l.ends_with("always-distinct")), "{out}");
    let out = ok(p, &["virtual", h.to_str().unwrap(), "-k", "2", "--pair", "1,2", "--internal"]);
    assert!(out.trim().ends_with("base-unsat") || out.trim().ends_with("always-distinct"), "{out}");
}

#[test]
fn reduce_modes() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let f = build(p, "f.json", &["-e", "F(8,3)"]);
    let f = f.to_str().unwrap();

    let r = run(p, &["reduce", f, "-k", "3", "--internal"]);
    assert_eq!(r.code, 2, "{}", r.stderr);

    ok(p, &["reduce", f, "-k", "2", "--internal", "--log", "log.jsonl", "-o", "min.json"]);
    let stats = ok(p, &["stats", "min.json"]);
    let n: usize = stats.split_whitespace().next().unwrap().parse().unwrap();
    assert!(n % 2 == 1 && n <= 9, "{stats}");
    assert_eq!(fs::read_to_string(p.join("log.jsonl")).unwrap().lines().count(), 9);
    assert_eq!(ok(p, &["solve", "min.json", "-k", "2", "--internal"]).trim(), "UNSAT");

    ok(p, &["reduce", f, "-k", "2", "--peel", "--min-vertices", "5", "-o", "peeled.json"]);
    assert!(ok(p, &["stats", "peeled.json"]).starts_with("5 vertices"));
}

#[test]
fn solver_core_maps_to_unsat_subgraph() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    let f = build(p, "f.json", &["-e", "F(8,3)"]);
    let f = f.to_str().unwrap();
    ok(p, &["encode", f, "-k", "2", "-o", "f.cnf"]);
    let out = Command::new(SAT).current_dir(p).args(["f.cnf", "--core", "core.txt", "--proof", "f.drat"]).output().unwrap();
    assert_eq!(out.status.code(), Some(20));
    assert!(String::from_utf8_lossy(&out.stdout).contains("s UNSATISFIABLE"));
    assert!(!fs::read_to_string(p.join("core.txt")).unwrap().trim().is_empty());
    assert!(p.join("f.drat").exists());

    ok(p, &["reduce", f, "-k", "2", "--core", "core.txt", "-o", "core.json"]);
    assert_eq!(ok(p, &["solve", "core.json", "-k", "2", "--internal"]).trim(), "UNSAT");
}

#[test]
fn sat_front_end_model() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    fs::write(p.join("x.cnf"), "p cnf 2 2\n1 2 0\n-1 0\n").unwrap();
    let out = Command::new(SAT).current_dir(p).arg("x.cnf").output().unwrap();
    assert_eq!(out.status.code(), Some(10));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("s SATISFIABLE") && text.contains("v -1 2") && text.trim_end().ends_with("v 0"), "{text}");

    fs::write(p.join("bad.cnf"), "p cnf x\n").unwrap();
    let out = Command::new(SAT).current_dir(p).arg("bad.cnf").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("s UNKNOWN"));
}
