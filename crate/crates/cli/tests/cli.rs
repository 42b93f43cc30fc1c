use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cayley-spectra"))
        .args(args)
        .env_remove("CAYLEY_SPECTRA_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn class_sizes_at_seven() {
    let o = run(&["classes", "--n", "7", "--k", "0", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let sizes: Vec<u64> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["size"].as_u64().unwrap())
        .collect();
    assert_eq!(sizes, vec![21, 70, 105, 210, 420, 504]);
}

#[test]
fn filtered_three_cycles() {
    let o = run(&[
        "classes", "--n", "7", "--k", "2", "--class", "2", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["size"], 10);
    assert!(v["elements"].as_array().unwrap().iter().all(|e| {
        let s = e.as_str().unwrap();
        s.contains('1') && s.contains('2')
    }));
}

#[test]
fn five_cycles_need_five_points() {
    let o = run(&["classes", "--n", "4", "--class", "6"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("n >= 5"));
}

#[test]
fn lambda2_queries() {
    let o = run(&[
        "lambda2", "--n", "7", "--family", "1", "--k", "0", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lambda2"], 14.0);
    assert_eq!(
        v["valency"].as_u64().unwrap() as f64 - v["lambda2"].as_f64().unwrap(),
        7.0
    );

    let o = run(&[
        "lambda2", "--n", "7", "--family", "1", "--k", "1", "--format", "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["counting_value"], 5);
    assert!((v["lambda2"].as_f64().unwrap() - 5.0).abs() < 1e-6);

    let o = run(&[
        "lambda2",
        "--n",
        "7",
        "--family",
        "2",
        "--method",
        "character",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["top_repeated"], true);

    let o = run(&[
        "lambda2",
        "--n",
        "5",
        "--family",
        "1",
        "--k",
        "1",
        "--method",
        "character",
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn sweep_subset_exit_codes_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let o = run(&[
        "sweep",
        "--family",
        "1",
        "--family",
        "1,3",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next(),
        Some("family,k,degree,lambda2_formula,lambda2_measured,residual")
    );
    // only the passing family {1} is tabulated, for k = 0 and 1
    assert_eq!(lines.count(), 2);
}

#[test]
fn fj_at_four() {
    let o = run(&["fj", "--n", "4", "--max-n", "8", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["outcome"], "pass");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["inequalities"].as_array().unwrap().len(), 4);
}

#[test]
fn aldous_random_trees() {
    let o = run(&[
        "aldous", "--n", "5", "--tree", "random", "--count", "5", "--format", "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn seeds_are_reproducible() {
    let a = run(&[
        "aldous",
        "--n",
        "4",
        "--tree",
        "random-graph",
        "--count",
        "3",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    let b = run(&[
        "aldous",
        "--n",
        "4",
        "--tree",
        "random-graph",
        "--count",
        "3",
        "--seed",
        "7",
        "--format",
        "json",
    ]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn examples_and_corollaries() {
    let o = run(&["examples", "--max-dim", "4", "--max-cycle", "40"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["corollaries", "--n", "3,4,5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("outcome: pass"));
}

#[test]
fn recursion_for_one_family() {
    let o = run(&["recursion", "--family", "1,2", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("family,k,i,difference,expected,holds"));
}

#[test]
fn bad_usage_and_missing_csv() {
    assert_eq!(run(&["sweep", "--n", "5"]).status.code(), Some(3));
    assert_eq!(run(&["lambda2", "--family", "9"]).status.code(), Some(3));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
