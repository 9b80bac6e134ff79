use qhsing::monodromy::Verdict;
use qhsing::scan::{compute_record, run_scan, FamilyKind, ScanConfig, ScanMode};
use qhsing::{Error, WeightSystem};
use std::fs;
use std::path::Path;

fn config(out: &Path, jobs: usize) -> ScanConfig {
    ScanConfig {
        n: Some(3),
        d_max: Some(16),
        jobs,
        out: Some(out.to_path_buf()),
        ..Default::default()
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.jsonl");
    let four = dir.path().join("four.jsonl");
    let a = run_scan(&config(&one, 1)).unwrap();
    let b = run_scan(&config(&four, 4)).unwrap();
    assert!(a.summary.records > 100);
    assert_eq!(a.summary, b.summary);
    assert_eq!(fs::read(&one).unwrap(), fs::read(&four).unwrap());
    assert!(!dir.path().join("one.jsonl.tmp").exists());
}

#[test]
fn resume_after_interruption_converges() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.jsonl");
    let full = run_scan(&config(&path, 2)).unwrap();
    let complete = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = complete.lines().collect();

    // keep 40 whole lines plus half of the next one, shuffled order
    let mut kept: Vec<&str> = lines[..40].to_vec();
    kept.reverse();
    let torn = &lines[40][..lines[40].len() / 2];
    fs::write(&path, format!("{}\n{torn}", kept.join("\n"))).unwrap();

    let cfg = ScanConfig {
        resume: true,
        ..config(&path, 3)
    };
    let resumed = run_scan(&cfg).unwrap();
    assert_eq!(resumed.summary.skipped, 40);
    assert_eq!(resumed.summary.computed, full.summary.records - 40);
    assert_eq!(resumed.summary.records, full.summary.records);
    assert_eq!(fs::read_to_string(&path).unwrap(), complete);

    // a second resume has nothing left to do
    let again = run_scan(&cfg).unwrap();
    assert_eq!(again.summary.computed, 0);
    assert_eq!(fs::read_to_string(&path).unwrap(), complete);
}

#[test]
fn records_start_with_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("k.jsonl");
    run_scan(&ScanConfig {
        n: Some(2),
        d_max: Some(8),
        ..config(&path, 1)
    })
    .unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("{\"ws\":\"1,1:2\""), "{first}");
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        let ws: WeightSystem = v["ws"].as_str().unwrap().parse().unwrap();
        assert_eq!(ws.canonical_key(), v["ws"]);
    }
}

#[test]
fn empty_range_writes_empty_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.jsonl");
    let out = run_scan(&ScanConfig {
        mode: ScanMode::Family(FamilyKind::Saito),
        mu_max: 50,
        out: Some(path.clone()),
        ..Default::default()
    })
    .unwrap();
    assert_eq!(out.summary.records, 0);
    assert!(!out.summary.found_counterexample());
    assert_eq!(fs::read_to_string(&path).unwrap(), "");
}

#[test]
fn config_errors_are_reported() {
    let text = "# small run\nn=2\nd_max = 10\nmode = family:cycle\njobs=2\n";
    let cfg = ScanConfig::from_config_text(text).unwrap();
    assert_eq!(cfg.mode, ScanMode::Family(FamilyKind::Cycle));
    assert_eq!(cfg.jobs, 2);
    assert!(run_scan(&cfg).unwrap().summary.records > 0);

    for bad in ["n=x", "d_max=1\nn=2", "unknown=3", "mode=spiral", "no equals sign"] {
        let r = ScanConfig::from_config_text(bad).and_then(|c| c.validate());
        assert!(r.is_err(), "{bad:?} accepted");
    }
    let missing_d = ScanConfig { n: Some(2), ..Default::default() };
    assert!(matches!(missing_d.validate(), Err(Error::InvalidConfig(_))));

    let big = ScanConfig {
        n: Some(4),
        d_max: Some(10),
        ..Default::default()
    };
    assert!(big.validate().is_err());
    assert!(ScanConfig { allow_exhaustive_n4: true, ..big }.validate().is_ok());
}

#[test]
fn io_errors_name_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let path = blocker.join("scan.jsonl");
    match run_scan(&config(&path, 1)) {
        Err(e @ Error::Io { .. }) => assert!(e.to_string().contains("file"), "{e}"),
        other => panic!("expected an I/O error, got {:?}", other.map(|o| o.summary)),
    }
}

#[test]
fn failing_verdict_marks_counterexample() {
    let ws: WeightSystem = "1,1:3".parse().unwrap();
    let mut r = compute_record(&ws).unwrap();
    assert!(!r.is_counterexample());
    r.elementary_sets.verdict = Verdict::Fail;
    assert!(r.is_counterexample());
}
