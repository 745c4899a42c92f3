use std::fs;

use erdos::driver::{enumerate_erdos, run_sweep, SweepOptions, SweepOutcome};
use erdos::Error;

fn opts(n: usize, path: &std::path::Path, stop_after: Option<usize>) -> SweepOptions {
    SweepOptions { checkpoint: Some(path.to_path_buf()), stop_after, ..SweepOptions::new(n, false, 2) }
}

#[test]
fn interrupted_run_resumes_to_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n4.ckpt");
    let reference = enumerate_erdos(4, false, 1).unwrap();

    let first = run_sweep(&opts(4, &path, Some(512)), &mut |_| {}).unwrap();
    let SweepOutcome::Interrupted(p) = first else { panic!("budget should stop the sweep") };
    assert_eq!((p.chunks_done, p.chunks), (512, 1024));
    assert!(path.exists());

    let SweepOutcome::Complete(resumed) = run_sweep(&opts(4, &path, None), &mut |_| {}).unwrap() else {
        panic!("no budget")
    };
    assert_eq!(resumed.erdos_count, 32);
    assert_eq!(resumed, reference);
}

#[test]
fn many_small_interruptions_including_phase_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n5.ckpt");
    let reference = enumerate_erdos(5, true, 1).unwrap();
    let mut seen_phase_two = false;
    let mut budget = 1020;
    let report = loop {
        let o = SweepOptions { checkpoint: Some(path.clone()), stop_after: Some(budget), ..SweepOptions::new(5, true, 1) };
        budget = 3;
        match run_sweep(&o, &mut |_| {}).unwrap() {
            SweepOutcome::Complete(r) => break r,
            SweepOutcome::Interrupted(p) => seen_phase_two |= p.keys.is_some() && p.keys_done > 0,
        }
    };
    assert!(seen_phase_two);
    assert_eq!(report, reference);
}

#[test]
fn resuming_a_completed_checkpoint_gives_the_same_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n3.ckpt");
    let SweepOutcome::Complete(a) = run_sweep(&opts(3, &path, None), &mut |_| {}).unwrap() else { panic!() };
    let SweepOutcome::Complete(b) = run_sweep(&opts(3, &path, Some(0)), &mut |_| {}).unwrap() else {
        panic!("a finished checkpoint needs no work")
    };
    assert_eq!(a, b);
    assert_eq!(a.erdos_count, 6);
}

#[test]
fn different_parameters_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n4.ckpt");
    run_sweep(&opts(4, &path, Some(10)), &mut |_| {}).unwrap();
    let err = run_sweep(&opts(3, &path, None), &mut |_| {}).unwrap_err();
    assert!(matches!(err, Error::CorruptCheckpoint { .. }), "{err}");
    let other = SweepOptions { fix_identity: true, ..opts(4, &path, None) };
    assert!(matches!(run_sweep(&other, &mut |_| {}), Err(Error::CorruptCheckpoint { .. })));
}

#[test]
fn tampered_checkpoint_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n4.ckpt");
    run_sweep(&opts(4, &path, Some(700)), &mut |_| {}).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("\"chunks_done\":700", "\"chunks_done\":701", 1);
    assert_ne!(text, tampered);
    fs::write(&path, tampered).unwrap();
    let err = run_sweep(&opts(4, &path, None), &mut |_| {}).unwrap_err();
    assert!(err.to_string().contains("digest mismatch"), "{err}");

    fs::write(&path, "not json").unwrap();
    assert!(matches!(run_sweep(&opts(4, &path, None), &mut |_| {}), Err(Error::CorruptCheckpoint { .. })));
}

#[test]
fn cli_resume_matches_uninterrupted_output() {
    let bin = env!("CARGO_BIN_EXE_erdos");
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("c.json");
    let out = dir.path().join("r.jsonl");
    let run = |extra: &[&str]| {
        let mut args = vec!["enumerate", "--n", "4", "--checkpoint", ckpt.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = std::process::Command::new(bin).args(&args).output().unwrap();
        assert!(o.status.success());
        String::from_utf8(o.stdout).unwrap()
    };
    assert!(run(&["--stop-after", "100"]).starts_with("interrupted n=4 chunks=100/1024"));
    let resumed = run(&["--out", out.to_str().unwrap()]);
    assert!(resumed.starts_with("n=4 erdos=32 admissible=33"));
    assert_eq!(fs::read_to_string(&out).unwrap().lines().count(), 32);
}
