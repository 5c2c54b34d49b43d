use std::path::Path;
use std::process::{Command, Output};

fn radiocast(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_radiocast"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn gen_writes_graph_files() {
    let dir = tempfile::tempdir().unwrap();
    let o = radiocast(dir.path(), &["gen", "dumbbell", "--n", "4", "--out", "d.txt"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("d.txt")).unwrap();
    assert!(text.starts_with("radiograph v1 13 16\n"));

    let o = radiocast(dir.path(), &["gen", "gnp", "--n", "8", "--p", "1", "--out", "k.txt"]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(dir.path().join("k.txt")).unwrap();
    assert!(text.starts_with("radiograph v1 8 56\n"));

    let o = radiocast(dir.path(), &["gen", "lowerbound", "--n", "16", "--D", "20", "--out", "l.txt"]);
    assert!(o.status.success());
    let summary = stdout(&o);
    assert!(summary.contains("nodes=47") && summary.contains("eccentricity=20"), "{summary}");
}

#[test]
fn gen_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = radiocast(dir.path(), &["gen", "lowerbound", "--n", "12", "--D", "40"]);
    assert_eq!(o.status.code(), Some(2));
    let o = radiocast(dir.path(), &["gen", "gnp", "--n", "8"]);
    assert_eq!(o.status.code(), Some(2));
    let o = radiocast(dir.path(), &["bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn run_emits_artifacts_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let args = |out: &'static str| {
        vec![
            "run", "--protocol", "broadcast-random", "--n", "2", "--p", "1", "--trials", "10",
            "--seed", "9", "--reproducible", "--out", out,
        ]
    };
    let o = radiocast(dir.path(), &args("a"));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    radiocast(dir.path(), &args("b"));
    for file in ["traces.json", "summary.csv", "report.json"] {
        let a = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let b = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file}");
    }
    let csv = std::fs::read_to_string(dir.path().join("a/summary.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("n,p_or_D,protocol,trials,completion_rate,rounds_mean,rounds_p95,tx_mean,tx_max")
    );
    assert!(lines.next().unwrap().starts_with("2,1,broadcast-random,10,1,"));
    let report = std::fs::read_to_string(dir.path().join("a/report.json")).unwrap();
    assert!(!report.contains("generated_at"));
}

#[test]
fn run_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    // An isolated destination never gets informed: completion 0 < threshold.
    // Complete digraph on 0..4 plus isolated node 4.
    let mut text = String::from("radiograph v1 5 12\n");
    for u in 0..4 {
        for v in (0..4).filter(|&v| v != u) {
            text += &format!("{u} {v}\n");
        }
    }
    std::fs::write(dir.path().join("g.txt"), text).unwrap();
    let o = radiocast(
        dir.path(),
        &["run", "--protocol", "broadcast-random", "--graph", "g.txt", "--trials", "3"],
    );
    assert_eq!(o.status.code(), Some(1));
    let o = radiocast(
        dir.path(),
        &["run", "--protocol", "broadcast-random", "--graph", "g.txt", "--threshold", "0"],
    );
    assert_eq!(o.status.code(), Some(0));
    let o = radiocast(dir.path(), &["run", "--protocol", "gossip-random", "--n", "8"]);
    assert_eq!(o.status.code(), Some(2));
    let o = radiocast(
        dir.path(),
        &["run", "--protocol", "broadcast-general", "--graph-kind", "dumbbell", "--n", "8"],
    );
    assert_eq!(o.status.code(), Some(2));
    let o = radiocast(
        dir.path(),
        &["run", "--protocol", "broadcast-random", "--n", "4", "--p", "1", "--trials", "0"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn general_run_on_dumbbell() {
    let dir = tempfile::tempdir().unwrap();
    let o = radiocast(
        dir.path(),
        &[
            "run", "--protocol", "broadcast-general", "--graph-kind", "dumbbell", "--n", "64",
            "--D", "3", "--trials", "5", "--threshold", "0", "--reproducible",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["violations"], 0);
    assert_eq!(report["summary"]["trials"], 5);
}

#[test]
fn dist_prints_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = radiocast(dir.path(), &["dist", "--n", "65536", "--D", "64", "--dist", "alpha-prime"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("dist v1 65536 64 10\n"), "{text}");
    let table = radiocast::protocols::ProbabilityTable::read_from(text.as_bytes()).unwrap();
    assert_eq!(table.mass(1), 1.0 / 20.0);

    let o = radiocast(dir.path(), &["dist", "--n", "1024", "--D", "60", "--lambda", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lowerbound_suite_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = radiocast(
        dir.path(),
        &[
            "lowerbound", "--kind", "dumbbell", "--n", "1", "--dist", "point:1", "--trials", "50",
            "--out", "r.json",
        ],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("r.json")).unwrap()).unwrap();
    assert_eq!(r["destination_oracle"], 0.5);

    let o = radiocast(
        dir.path(),
        &["lowerbound", "--n", "64", "--D", "30", "--trials", "10", "--threshold", "0"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["stars"].as_array().unwrap().len(), 6);
}
