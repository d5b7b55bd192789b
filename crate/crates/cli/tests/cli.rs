//! End-to-end checks of the binary: exit codes, stdout shapes, and
//! byte-identical reports for identical inputs and seeds.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn pbcx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pbcx"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn workdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pbcx-cli-test-{tag}-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("mkdir");
    dir
}

#[test]
fn verify_passes_and_exits_zero() {
    let out = pbcx(&["verify", "--theorem", "2.11", "--n", "3", "--l", "0"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("pass"));
}

#[test]
fn verify_rejects_bad_parameters() {
    // 2.11 needs n - l >= 3
    let out = pbcx(&["verify", "--theorem", "2.11", "--n", "3", "--l", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn decide_basis_negative_verdict_still_exits_zero() {
    let out = pbcx(&["decide-basis", "--n", "2", "--words", "a b a^-1 b^-1"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("NOT"));

    let out = pbcx(&["decide-basis", "--n", "2", "--words", "a b, b"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("IS"));
}

#[test]
fn extend_basis_failure_is_exit_one() {
    let out = pbcx(&["extend-basis", "--n", "2", "--words", "a a"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn budget_exhaustion_is_exit_two() {
    let out = pbcx(&["pb", "build", "--n", "5", "--L", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_input_is_exit_three() {
    let out = pbcx(&["homology", "--complex", "/nonexistent/nope.json"]);
    assert_eq!(out.status.code(), Some(3));

    let dir = workdir("badjson");
    let path = dir.join("broken.json");
    fs::write(&path, "{ not json").unwrap();
    let out = pbcx(&["homology", "--complex", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("line") && err.contains("column"), "{err}");
}

#[test]
fn homology_of_sphere_from_file() {
    let dir = workdir("sphere");
    let path = dir.join("delta3.json");
    fs::write(
        &path,
        r#"{"vertices":["p0","p1","p2","p3"],
            "facets":[["p0","p1","p2"],["p0","p1","p3"],["p0","p2","p3"],["p1","p2","p3"]]}"#,
    )
    .unwrap();
    let out = pbcx(&["homology", "--complex", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("H~_2 = Z^1"));
}

#[test]
fn pb_build_output_feeds_homology() {
    let dir = workdir("pb");
    let complex = dir.join("pb31.json");
    let out = pbcx(&[
        "pb", "build", "--n", "3", "--L", "1", "--out",
        complex.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = pbcx(&["homology", "--complex", complex.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("H~_2 = Z^1"), "{}", stdout(&out));
}

#[test]
fn quillen_check_and_basis_from_files() {
    let dir = workdir("quillen");
    let map = dir.join("map.json");
    let complex = dir.join("points.json");
    fs::write(
        &map,
        r#"{"source":{"elements":["{p0}","{p1}","{p2}","{p3}"],"relations":[]},
            "target":{"elements":["y1","y2"],"relations":[]},
            "assignment":{"{p0}":"y1","{p1}":"y1","{p2}":"y2","{p3}":"y2"}}"#,
    )
    .unwrap();
    fs::write(
        &complex,
        r#"{"vertices":["p0","p1","p2","p3"],"facets":[["p0"],["p1"],["p2"],["p3"]]}"#,
    )
    .unwrap();
    let out = pbcx(&["quillen", "check", "--map", map.to_str().unwrap(), "--n", "0"]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(stdout(&out).contains("pass"));

    let cert = dir.join("cert.json");
    let out = pbcx(&[
        "quillen", "basis",
        "--map", map.to_str().unwrap(),
        "--complex", complex.to_str().unwrap(),
        "--n", "0",
        "--json", cert.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let text = fs::read_to_string(&cert).unwrap();
    assert!(text.contains("\"unimodular\": true"));
    assert!(text.contains("\"schema_version\": 1"));
}

#[test]
fn reports_are_byte_identical_per_seed() {
    let dir = workdir("determinism");
    let r1 = dir.join("r1.json");
    let r2 = dir.join("r2.json");
    for path in [&r1, &r2] {
        let out = pbcx(&[
            "quillen", "suite",
            "--count", "4",
            "--seed", "7",
            "--json", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0), "{out:?}");
    }
    assert_eq!(
        fs::read(&r1).unwrap(),
        fs::read(&r2).unwrap(),
        "same seed must produce byte-identical reports"
    );

    // unseeded reports are deterministic as well
    let v1 = dir.join("v1.json");
    let v2 = dir.join("v2.json");
    for path in [&v1, &v2] {
        let out = pbcx(&[
            "verify", "--theorem", "2.5", "--n", "2", "--l", "1",
            "--json", path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&v1).unwrap(), fs::read(&v2).unwrap());
}

#[test]
fn stabilizer_reports_counts() {
    let out = pbcx(&["stabilizer", "--tuple", "a", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("4 vertices"), "{text}");
    assert!(text.contains("generators"), "{text}");
}
