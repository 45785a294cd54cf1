use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn biaslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biaslab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn generated(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let out = dir.join(name);
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", p(&out)]);
    let o = biaslab(&full);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out
}

#[test]
fn run_procrastination_family() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), "isc.json", &["isc", "--n", "10", "--c", "3"]);
    let o = biaslab(&["run", p(&inst), "--beta", "1/4", "--out-dir", p(dir.path())]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ratio=10/3 steps=10 opt=3 cost=10 bounds="));
    let written: Vec<_> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".trace.json") || n.ends_with(".report.json"))
        .collect();
    assert_eq!(written.len(), 2);
}

#[test]
fn run_tight_maximization() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), "gk.json", &["gk", "--k", "4", "--beta", "2"]);
    let o = biaslab(&[
        "run", p(&inst), "--beta", "2", "--objective", "max", "--emit", "none",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ratio=16/5 steps=5 opt=16 cost=5"));
}

#[test]
fn unbiased_run_is_optimal() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), "isc.json", &["isc", "--n", "5", "--c", "2"]);
    let o = biaslab(&["run", p(&inst), "--beta", "1", "--emit", "none"]);
    assert!(stdout(&o).starts_with("ratio=1 "));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), "isc.json", &["isc", "--n", "3", "--c", "2"]);
    // Decimal bias is rejected.
    assert_eq!(biaslab(&["run", p(&inst), "--beta", "0.5"]).status.code(), Some(2));
    // Objective mismatch.
    assert_eq!(
        biaslab(&["run", p(&inst), "--beta", "2", "--objective", "max"]).status.code(),
        Some(2)
    );
    // Missing generator parameter.
    let out = dir.path().join("gk.json");
    assert_eq!(biaslab(&["generate", "gk", "--k", "3", "--out", p(&out)]).status.code(), Some(2));
    // Unknown subcommand.
    assert_eq!(biaslab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn walk_akerlof() {
    let dir = tempfile::tempdir().unwrap();
    let dag = generated(dir.path(), "a.json", &["akerlof", "--n", "5", "--x", "1", "--c", "16"]);
    let json = dir.path().join("walk.json");
    let o = biaslab(&["walk", p(&dag), "--beta", "1/2", "--out", p(&json)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "ratio=21/16 length=21 optimum=16 path=0,2,3,4,5,6,1");
    let walk: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(walk["path"].as_array().unwrap().len(), 7);

    let o = biaslab(&["walk", p(&dag), "--beta", "1"]);
    assert!(stdout(&o).starts_with("ratio=1 "));
}

#[test]
fn walk_without_reachable_sink_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let dag = dir.path().join("cut.json");
    std::fs::write(
        &dag,
        r#"{"schema":"biaslab/dag/v1","n":3,"arcs":[[0,2,1]],"s":0,"t":1}"#,
    )
    .unwrap();
    let o = biaslab(&["walk", p(&dag), "--beta", "1/2"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn sweep_is_ordered_and_switches_at_two_thirds() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), "isc.json", &["isc", "--n", "6", "--c", "3"]);
    let csv = dir.path().join("s.csv");
    let grid = "1/10,1/4,1/3,1/2,2/3,3/4,4/5,9/10";
    let o = biaslab(&["sweep", p(&inst), "--beta-grid", grid, "--out", p(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut cells: Vec<(String, String)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1].to_string(), f[7].to_string())
        })
        .collect();
    cells.dedup();
    let expected: Vec<(String, String)> = grid
        .split(',')
        .map(|b| {
            let r = if ["1/10", "1/4", "1/3", "1/2"].contains(&b) { "2" } else { "1" };
            (b.to_string(), r.to_string())
        })
        .collect();
    assert_eq!(cells, expected);

    // Same inputs, same bytes.
    let again = dir.path().join("t.csv");
    biaslab(&["sweep", p(&inst), "--beta-grid", grid, "--out", p(&again)]);
    assert_eq!(text, std::fs::read_to_string(again).unwrap());
}

#[test]
fn empty_sweep_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), "isc.json", &["isc", "--n", "3", "--c", "2"]);
    let csv = dir.path().join("e.csv");
    let o = biaslab(&["sweep", p(&inst), "--beta-grid", "", "--out", p(&csv)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(csv).unwrap(),
        "trace_id,beta,alpha,objective,steps,cost,opt,ratio,bound,lhs,rhs,holds\n"
    );
}

#[test]
fn single_cell_sweep_matches_run() {
    let dir = tempfile::tempdir().unwrap();
    let inst = generated(dir.path(), "isc.json", &["isc", "--n", "4", "--c", "3"]);
    let csv = dir.path().join("one.csv");
    biaslab(&["sweep", p(&inst), "--beta-grid", "1/4", "--out", p(&csv)]);
    let row = std::fs::read_to_string(csv).unwrap().lines().nth(1).unwrap().to_string();
    let f: Vec<&str> = row.split(',').collect();
    let o = biaslab(&["run", p(&inst), "--beta", "1/4", "--emit", "none"]);
    let summary = stdout(&o);
    assert!(summary.starts_with(&format!(
        "ratio={} steps={} opt={} cost={}",
        f[7], f[4], f[6], f[5]
    )));
}

#[test]
fn verify_quick_passes() {
    let o = biaslab(&["verify", "--suite", "quick"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(), 14);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(biaslab(&["verify", "--suite", "nope"]).status.code(), Some(2));
    let o = biaslab(&["verify", "--suite", "quick", "--inject-violation"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).lines().last().unwrap().starts_with("FAIL"));
}
