use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], cache: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbitquant"))
        .args(args)
        .env("ORBITQUANT_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_summary_and_cache_hit() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["build", "--type", "A", "--rank", "1", "--lambda", "5", "--cutoff", "3"];
    let first = run(&args, dir.path());
    assert_eq!(first.status.code(), Some(0));
    let text = stdout(&first);
    assert!(text.contains("3 blocks plus the zero degree, 0 read from cache"), "{text}");
    assert_eq!(text.matches("inverse ok").count(), 4);
    let second = run(&args, dir.path());
    assert!(stdout(&second).contains("4 read from cache"));

    let dump = ["dump-b", "--type", "A", "--rank", "1", "--lambda", "5", "--cutoff", "3", "--order", "3"];
    let cold = run(&dump, tempfile::tempdir().unwrap().path());
    let warm = run(&dump, dir.path());
    assert_eq!(cold.stdout, warm.stdout);
    assert!(stdout(&warm).starts_with("t^0:\n  1 ⊗ 1\nt^1:\n  f1 ⊗ e1\n"));
}

#[test]
fn degenerate_orbit_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["build", "--type", "A", "--rank", "1", "--lambda", "0", "--cutoff", "3"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("degenerate orbit"));
}

#[test]
fn argument_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["build", "--type", "Q", "--rank", "1", "--lambda", "5"],
        vec!["build", "--type", "A", "--rank", "2", "--lambda", "5"],
        vec!["build", "--type", "A", "--rank", "1", "--lambda", "x"],
        vec!["build", "--type", "A", "--rank", "1", "--lambda", "5", "--cutoff", "0"],
        vec!["verify", "--type", "A", "--rank", "1", "--lambda", "5", "--suite", "bogus"],
    ] {
        assert_eq!(run(&args, dir.path()).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn small_cutoff_reports_window() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--type", "A", "--rank", "1", "--lambda", "5", "--cutoff", "1", "--suite", "associativity"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("needs every degree up to height"));
}

#[test]
fn verify_passes_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["verify", "--type", "A", "--rank", "1", "--lambda", "5", "--seed", "11", "--triples", "4", "--points", "3"];
    let a = run(&args, dir.path());
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let b = run(&args, dir.path());
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["failed"], 0);
    assert_eq!(report["suites"].as_array().unwrap().len(), 6);
}

#[test]
fn injected_fault_fails() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        &["verify", "--type", "A", "--rank", "1", "--lambda", "5", "--inject-fault", "scale-t", "--suite", "composition,momentum-map"],
        dir.path(),
    );
    assert_eq!(o.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(report["failed"].as_u64().unwrap() > 0);
    assert_eq!(report["fault"], "scale-t");
}

#[test]
fn suite_filter_keeps_only_selected_records() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "--type", "A", "--rank", "2", "--lambda", "2,3", "--suite", "separation"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let records = report["records"].as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records.iter().all(|r| r["check_id"].as_str().unwrap().starts_with("separation/")));
}

#[test]
fn invariants_tables() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["invariants", "--type", "A", "--rank", "2", "--grid", "4"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| l.ends_with(",true") || l.ends_with(",false")).collect();
    assert_eq!(rows.len(), 25);
    assert!(rows.iter().all(|r| r.ends_with(",true")));
    assert!(rows.contains(&"0,0,1,1,true"));

    let g2 = run(&["invariants", "--type", "G", "--rank", "2", "--xi", "short-fundamental"], dir.path());
    assert!(stdout(&g2).contains(",7,7,true"));

    let out = dir.path().join("t.csv");
    let o = run(&["invariants", "--type", "A", "--rank", "1", "--lambda", "3", "--grid", "2", "--output", out.to_str().unwrap()], dir.path());
    assert_eq!(stdout(&o).trim(), r#"{"order0":["-3/2"],"order1":["1/2i"]}"#);
    assert_eq!(std::fs::read_to_string(out).unwrap(), "k1,qdim,freudenthal,match\n0,1,1,true\n1,2,2,true\n2,3,3,true\n");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "type = A\nrank = 1\nlambda = 5\ncutoff = 2\n").unwrap();
    let o = run(&["build", "--config", cfg.to_str().unwrap(), "--cutoff", "3"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("cutoff 3: 3 blocks"));
}
