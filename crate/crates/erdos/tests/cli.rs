use std::fs;
use std::path::Path;
use std::process::Command;

use erdos::format::parse_matrix;
use erdos_core::erdos::is_erdos;

fn erdos(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_erdos")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn enumerate_prints_summary_line() {
    let (code, out, _) = erdos(&["enumerate", "--n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().next(), Some("n=3 erdos=6 admissible=6"));
}

#[test]
fn enumerate_writes_records_summary_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let records = dir.path().join("r4.jsonl");
    let csv = dir.path().join("r4.csv");
    let (code, _, _) = erdos(&[
        "enumerate", "--n", "4", "--fix-identity", "--out", records.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(fs::read_to_string(&records).unwrap().lines().count(), 32);
    assert_eq!(fs::read_to_string(&csv).unwrap(), "n,count,total\n4,32,33\n");
    let summary = dir.path().join("r4.jsonl.summary.json");
    assert!(fs::read_to_string(summary).unwrap().contains("\"admissible\": 33"));

    let (code, out, _) = erdos(&["stats", "--records", records.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("n=4 erdos=32 admissible=33\nshrink=1 "));
    assert!(out.contains("consistent=true"));

    let (code, out, _) = erdos(&["query", "--records", records.to_str().unwrap(), "--max-denominator"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("# denominator=43 "));
    assert!(is_erdos(&parse_matrix(&out).unwrap()));

    let (code, out, _) = erdos(&["query", "--records", records.to_str().unwrap(), "--distinct"]);
    assert_eq!(code, 0);
    assert_eq!(out, "# distinct=0\n");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    let first = erdos(&["enumerate", "--n", "4", "--workers", "1", "--out", a.to_str().unwrap()]);
    let second = erdos(&["enumerate", "--n", "4", "--workers", "3", "--out", b.to_str().unwrap()]);
    assert_eq!(first, second);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn verify_uniform_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let j2 = write(dir.path(), "j2.txt", "1/2 1/2\n1/2 1/2\n");
    let (code, out, _) = erdos(&["verify", "--matrix", &j2]);
    assert_eq!(code, 0);
    assert!(out.contains("erdos=true maxtrace=1"), "{out}");
    assert!(out.contains("bistochastic=true rcds=true inner_traces={1}"));
}

#[test]
fn verify_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "9/10 1/10 0\n1/10 8/10 1/10\n0 1/10 9/10\n");
    let (code, out, _) = erdos(&["verify", "--matrix", &m]);
    assert_eq!(code, 1);
    assert!(out.contains("rcds=false inner_traces={11/10,13/5}"), "{out}");
    let (code, out, _) = erdos(&["rcds", "--matrix", &m]);
    assert_eq!(code, 1);
    assert!(out.starts_with("rcds=false"));
}

#[test]
fn family_counterexample_line() {
    let (code, out, _) = erdos(&["family", "--spec", "zigzag:r=4,2,4;s=3,2,5", "--verify"]);
    assert_eq!(code, 1);
    assert_eq!(out.lines().last(), Some("# rcds=true inner_trace=81/40 maxtrace=82/40 erdos=false"));
    let m = parse_matrix(&out).unwrap();
    assert_eq!(m.rows(), 10);
    assert!(!is_erdos(&m));
}

#[test]
fn family_output_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    for spec in ["xrsn:3,1,5", "zigzag:r=2,2;s=1,2,1", "alpha:p=2;a=1,1,1,1;blocks=circulant", "alpha:p=3;a=2,1,3,2"] {
        let (code, out, _) = erdos(&["family", "--spec", spec, "--verify", "--approx"]);
        assert_eq!(code, 0, "{spec}: {out}");
        assert!(out.contains("erdos=true"));
        let path = write(dir.path(), "f.txt", &out);
        let (code, out, _) = erdos(&["verify", "--matrix", &path]);
        assert_eq!(code, 0, "{spec}: {out}");
    }
}

#[test]
fn rcds_prints_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let (_, grid, _) = erdos(&["family", "--spec", "xrsn:2,1,3"]);
    let path = write(dir.path(), "x.txt", &grid);
    let (code, out, _) = erdos(&["rcds", "--matrix", &path]);
    assert_eq!(code, 0);
    assert_eq!(out, "u=(0,0,1/4)\nv=(1/2,1/4,1/4)\ncriterion=true\n");
    let (code, out, _) = erdos(&["rcds", "--matrix", &path, "--json"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("{\"u\":[\"0\",\"0\",\"1/4\"],\"v\":[\"1/2\",\"1/4\",\"1/4\"],\"skeleton_hex\":"));
}

#[test]
fn maxtrace_and_canonical() {
    let dir = tempfile::tempdir().unwrap();
    let m = write(dir.path(), "m.txt", "# comment\n1 0\n0 1\n");
    let (code, out, _) = erdos(&["maxtrace", "--matrix", &m]);
    assert_eq!(code, 0);
    assert_eq!(out, "maxtrace=2 permutation=[0,1]\n");
    let s = write(dir.path(), "s.txt", "110\n011\n101\n");
    let (code, out, _) = erdos(&["canonical", "--skeleton", &s]);
    assert_eq!(code, 0);
    let t = write(dir.path(), "t.txt", "011\n101\n110\n");
    let (_, other, _) = erdos(&["canonical", "--skeleton", &t]);
    assert_eq!(out, other);
    assert!(out.contains("admissible=true"));
}

#[test]
fn usage_and_file_errors_exit_two() {
    let (code, _, err) = erdos(&["enumerate", "--n", "7"]);
    assert_eq!(code, 2);
    assert!(err.contains("--n"), "{err}");
    let (code, _, err) = erdos(&["enumerate", "--n", "6"]);
    assert_eq!(code, 2);
    assert!(err.contains("--allow-n6"));
    let (code, _, err) = erdos(&["enumerate", "--n", "6", "--allow-n6"]);
    assert_eq!(code, 2);
    assert!(err.contains("--checkpoint"));
    let (code, _, err) = erdos(&["verify", "--matrix", "/nonexistent/m.txt"]);
    assert_eq!(code, 2);
    assert!(err.contains("/nonexistent/m.txt"));
    let (code, _, err) = erdos(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(err.contains("frobnicate"));
    let (code, _, _) = erdos(&["query", "--records", "x", "--distinct", "--max-denominator"]);
    assert_eq!(code, 2);
    let (code, _, err) = erdos(&["family", "--spec", "zigzag:r=1,2;s=3,3"]);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn malformed_inputs_name_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "1/0 1\n1 0\n");
    let (code, _, err) = erdos(&["maxtrace", "--matrix", &bad]);
    assert_eq!(code, 2);
    assert!(err.contains("bad.txt") && err.contains("zero denominator"), "{err}");
    let rect = write(dir.path(), "rect.txt", "1 0 0\n0 1 0\n");
    let (code, _, err) = erdos(&["verify", "--matrix", &rect]);
    assert_eq!(code, 2);
    assert!(err.contains("2x3"));
    let records = write(dir.path(), "r.jsonl", "{\"n\":2}\n");
    let (code, _, err) = erdos(&["query", "--records", &records, "--distinct"]);
    assert_eq!(code, 2);
    assert!(err.contains("r.jsonl"));
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = erdos(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["enumerate", "verify", "family", "rcds", "maxtrace", "canonical", "stats", "query"] {
        assert!(out.contains(sub));
    }
}
