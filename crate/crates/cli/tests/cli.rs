use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_monoclif"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn monoclif")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn metric(v: &Value, k: &str) -> f64 {
    v["metrics"][k].as_f64().unwrap_or_else(|| panic!("metric {k} missing in {v}"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("monoclif-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["verify", "sic", "--builtin", "n4", "--slot", "2", "--s", "1", "--t", "3", "--u", "0"])), 0);
    // the typeset coefficients are not a fiducial
    let printed = run(&["verify", "sic", "--builtin", "n16", "--as-printed"]);
    assert_eq!(code(&printed), 1);
    assert!(!json(&printed)["pass"].as_bool().unwrap());
    assert_eq!(code(&run(&["generate", "sic", "--dim", "9", "--m3", "3"])), 2);
    assert_eq!(code(&run(&["generate", "sic", "--dim", "5"])), 2);
    assert_eq!(code(&run(&["verify", "mub", "--p", "4"])), 2);
    assert_eq!(code(&run(&["verify", "monomial", "--dim", "6"])), 2);
    assert_eq!(code(&run(&["search", "--dim", "21"])), 2);
    assert_eq!(code(&run(&["search", "--dim", "1"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["verify", "sic"])), 2);
    assert_eq!(code(&run(&["--tol", "-1", "verify", "zauner", "--dim", "4"])), 2);
}

#[test]
fn search_failure_reports_best_residual() {
    let o = run(&["--tol", "1e-300", "search", "--dim", "3", "--max-restarts", "1"]);
    assert_eq!(code(&o), 1);
    let r = json(&o);
    assert!(!r["pass"].as_bool().unwrap());
    assert!(metric(&r, "best_deviation").is_finite());
    assert!(r.get("artifacts").is_none());
}

#[test]
fn reports_are_deterministic() {
    for args in [
        &["--seed", "3", "verify", "monomial", "--dim", "9", "--samples", "20"][..],
        &["--seed", "3", "verify", "crt", "--dim", "10", "--samples", "5"][..],
        &["--seed", "5", "search", "--dim", "5"][..],
    ] {
        let a = run(args);
        let b = run(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn verify_commands_pass() {
    let m = json(&run(&["verify", "monomial", "--dim", "25", "--samples", "100"]));
    assert!(m["pass"].as_bool().unwrap());
    assert_eq!(metric(&m, "non_phase_permutations"), 0.0);
    let z = json(&run(&["verify", "zauner", "--dim", "9"]));
    assert!(z["pass"].as_bool().unwrap());
    assert_eq!((metric(&z, "d0"), metric(&z, "d1"), metric(&z, "d2")), (4.0, 3.0, 2.0));
    let c = json(&run(&["verify", "crt", "--dim", "12"]));
    assert!(c["pass"].as_bool().unwrap());
    assert_eq!(c["inputs"]["factors"].as_array().unwrap().len(), 2);
    let u = json(&run(&["verify", "mub", "--p", "3"]));
    assert!(u["pass"].as_bool().unwrap());
    assert_eq!(metric(&u, "bases"), 4.0);
}

#[test]
fn generated_fiducials_round_trip() {
    let dir = scratch("sic");
    let cases: [(&str, &[&str], &[&str]); 3] = [
        ("4", &["--slot", "3", "--s", "1", "--t", "2", "--u", "3"], &["--builtin", "n4", "--slot", "3", "--s", "1", "--t", "2", "--u", "3"]),
        ("9", &["--s0", "-1", "--s2", "-1", "--m4", "2"], &["--builtin", "n9", "--s0", "-1", "--s2", "-1", "--m4", "2"]),
        ("16", &["--t2-branch", "-1"], &["--builtin", "n16", "--t2-branch", "-1"]),
    ];
    for (n, gen, builtin) in cases {
        let path = dir.join(format!("f{n}.json"));
        let mut args = vec!["--out", path_str(&path), "generate", "sic", "--dim", n];
        args.extend_from_slice(gen);
        assert_eq!(code(&run(&args)), 0);
        let from_file = json(&run(&["verify", "sic", "--file", path_str(&path)]));
        let mut args = vec!["verify", "sic"];
        args.extend_from_slice(builtin);
        let direct = json(&run(&args));
        assert!(from_file["pass"].as_bool().unwrap(), "N={n}");
        let (a, b) = (metric(&from_file, "max_abs_deviation"), metric(&direct, "max_abs_deviation"));
        assert!((a - b).abs() < 1e-12, "N={n}: {a} vs {b}");
    }
    // emitting in another basis still verifies
    let path = dir.join("f9std.json");
    assert_eq!(code(&run(&["--out", path_str(&path), "generate", "sic", "--dim", "9", "--basis", "standard"])), 0);
    let v = json(&run(&["verify", "sic", "--file", path_str(&path)]));
    assert_eq!(v["inputs"]["basis"], "standard");
    assert!(v["pass"].as_bool().unwrap());
}

#[test]
fn searched_fiducial_round_trips() {
    let dir = scratch("search");
    let path = dir.join("s6.json");
    let o = run(&["--seed", "2", "--out", path_str(&path), "search", "--dim", "6"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    let embedded = &r["artifacts"]["fiducial"];
    let on_disk: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(embedded, &on_disk);
    let v = json(&run(&["verify", "sic", "--file", path_str(&path)]));
    assert!(v["pass"].as_bool().unwrap());
    assert!((metric(&v, "max_abs_deviation") - metric(&r, "best_deviation")).abs() < 1e-12);
}

#[test]
fn malformed_files_are_usage_errors() {
    let dir = scratch("bad");
    let cases = [
        ("nonunit", r#"{"N":2,"basis":"standard","amplitudes":[[1,0],[1,0]],"format_version":1}"#),
        ("short", r#"{"N":3,"basis":"standard","amplitudes":[[1,0]],"format_version":1}"#),
        ("tag", r#"{"N":1,"basis":"weird","amplitudes":[[1,0]],"format_version":1}"#),
        ("garbage", "not json"),
    ];
    for (name, text) in cases {
        let p = dir.join(format!("{name}.json"));
        std::fs::write(&p, text).unwrap();
        assert_eq!(code(&run(&["verify", "sic", "--file", path_str(&p)])), 2, "{name}");
    }
    assert_eq!(code(&run(&["verify", "sic", "--file", path_str(&dir.join("absent.json"))])), 2);
}

fn vectors(file: &Value) -> Vec<Vec<(f64, f64)>> {
    file["vectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_array().unwrap().iter().map(|z| (z[0].as_f64().unwrap(), z[1].as_f64().unwrap())).collect())
        .collect()
}

fn inner_abs2(u: &[(f64, f64)], v: &[(f64, f64)]) -> f64 {
    let (mut re, mut im) = (0.0, 0.0);
    for (a, b) in u.iter().zip(v) {
        re += a.0 * b.0 + a.1 * b.1;
        im += a.0 * b.1 - a.1 * b.0;
    }
    re * re + im * im
}

#[test]
fn generated_mub_files_are_unbiased() {
    let dir = scratch("mub");
    assert_eq!(code(&run(&["--out", path_str(&dir), "generate", "mub", "--p", "3"])), 0);
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    assert_eq!(files.len(), 4);
    let bases: Vec<_> = files.iter().map(|p| vectors(&serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap())).collect();
    let mut worst: f64 = 0.0;
    for (i, a) in bases.iter().enumerate() {
        assert_eq!(a.len(), 9);
        for (j, b) in bases.iter().enumerate() {
            for (x, u) in a.iter().enumerate() {
                for (y, v) in b.iter().enumerate() {
                    let want = if i != j { 1.0 / 9.0 } else if x == y { 1.0 } else { 0.0 };
                    worst = worst.max((inner_abs2(u, v) - want).abs());
                }
            }
        }
    }
    assert!(worst < 1e-12, "{worst}");
    // without --out the same payload is one array on stdout
    let all = json(&run(&["generate", "mub", "--p", "2"]));
    assert_eq!(all.as_array().unwrap().len(), 3);
}

#[test]
fn projection_collapses_for_n4() {
    let v = json(&run(&["generate", "projection", "--dim", "4"]));
    let pts = v["points"].as_array().unwrap();
    assert_eq!(pts.len(), 16);
    for p in pts {
        let s: f64 = p.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }
    assert_eq!(v["distinct_points"], 4);
}

#[test]
fn operators_have_the_right_shape() {
    let v = json(&run(&["generate", "operators", "--dim", "9", "--basis", "monomial"]));
    for k in ["X", "Z", "zauner"] {
        let m = v["operators"][k].as_array().unwrap();
        assert_eq!(m.len(), 9);
        assert!(m.iter().all(|row| row.as_array().unwrap().len() == 9));
    }
    assert_eq!(code(&run(&["generate", "operators", "--dim", "6", "--basis", "monomial"])), 2);
    assert_eq!(code(&run(&["generate", "operators", "--dim", "4", "--basis", "adapted16"])), 2);
}
