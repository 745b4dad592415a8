use std::io::Write;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_quadrant-ruin");
const P0: [&str; 6] = ["--lambda", "1", "--mu", "1", "--c", "3"];

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("QUADRANT_RUIN_THREADS").output().unwrap()
}

fn p0(args: &[&str]) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.extend_from_slice(&P0);
    all.push("2");
    run(&all)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_field(o: &Output, column: &str) -> f64 {
    let text = stdout(o);
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == column).unwrap();
    row[i].parse().unwrap()
}

fn model_file(json: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(json.as_bytes()).unwrap();
    f
}

#[test]
fn derive_prints_constants() {
    let o = p0(&["derive"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("gamma2 = 0.5"));
    assert!(text.contains("regime = case1"));
}

#[test]
fn derive_json_matches_text() {
    let text = stdout(&p0(&["derive"]));
    let json: serde_json::Value = serde_json::from_slice(&p0(&["derive", "--json"]).stdout).unwrap();
    for line in text.lines() {
        let (key, val) = line.split_once(" = ").unwrap();
        match val.parse::<f64>() {
            Ok(x) => assert_eq!(json[key].as_f64().unwrap(), x, "{key}"),
            Err(_) => assert_eq!(json[key].as_str().unwrap(), val),
        }
    }
}

#[test]
fn invalid_model_exits_2_naming_assumption() {
    let o = run(&["derive", "--lambda", "1", "--mu", "1", "--c", "2", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("net-profit ordering"));
    let o = run(&["derive"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn model_file_round_trip() {
    let f = model_file(r#"{"lambda": 2, "claim": {"type": "exponential", "mu": 1}, "c": [5, 2.2], "delta": [1, 1]}"#);
    let o = run(&["derive", "--model", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("regime = case2"));
    let bad = model_file("{not json");
    assert_eq!(run(&["derive", "--model", bad.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn ruin_examples() {
    let o = p0(&["ruin", "--u", "1", "1", "--method", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((csv_field(&o, "value") - 0.303265).abs() < 1e-6);
    let lower = p0(&["ruin", "--u", "2", "1"]);
    assert!((csv_field(&lower, "value") - 0.303265).abs() < 1e-6);
}

#[test]
fn ruin_methods_agree() {
    let exact = csv_field(&p0(&["ruin", "--u", "1", "3"]), "value");
    let pde = csv_field(&p0(&["ruin", "--u", "1", "3", "--method", "pde"]), "value");
    let inv = csv_field(&p0(&["ruin", "--u", "1", "3", "--method", "invert"]), "value");
    let mc = p0(&["ruin", "--u", "1", "3", "--method", "mc", "--paths", "1e5", "--seed", "7"]);
    assert!((pde - exact).abs() < 1e-3);
    assert!((inv - exact).abs() < 1e-3);
    assert!((csv_field(&mc, "value") - exact).abs() < 4.0 * csv_field(&mc, "error"));
}

#[test]
fn mc_ruin_is_reproducible() {
    let args = ["ruin", "--u", "1", "3", "--method", "mc", "--paths", "1e5", "--seed", "7"];
    assert_eq!(p0(&args).stdout, p0(&args).stdout);
}

#[test]
fn capability_errors_exit_3() {
    let f = model_file(r#"{"lambda": 1, "claim": {"type": "empirical", "samples": [0.5, 1.5]}, "c": [3, 2], "delta": [1, 1]}"#);
    let path = f.path().to_str().unwrap();
    for method in ["exact", "pde", "invert"] {
        let o = run(&["ruin", "--model", path, "--u", "1", "2", "--method", method]);
        assert_eq!(o.status.code(), Some(3), "{method}");
    }
    let o = run(&["simulate", "--model", path, "--u", "1", "2", "--method", "conditional", "--paths", "100"]);
    assert_eq!(o.status.code(), Some(3));
    // Empirical claims fall back to simulation.
    let o = run(&["ruin", "--model", path, "--u", "1", "2", "--paths", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let o = p0(&["ruin", "--u", "1", "3", "--s", "0.5", "--method", "exact"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn tolerance_errors_exit_4() {
    let o = p0(&["pde", "--steps", "4", "--rmax", "12", "--grid-tol", "1e-9"]);
    assert_eq!(o.status.code(), Some(4));
    let o = p0(&["table", "--x1", "0", "1", "2", "--x2", "1", "2", "2", "--tol", "1e-300"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stdout(&o).contains("tolerance_not_met"));
}

#[test]
fn table_shape_range_and_bytes() {
    let args = ["table", "--x1", "0", "1", "2", "--x2", "1", "3", "2"];
    let o = p0(&args);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[0].starts_with("x1,x2,survival,ruin,omega,quadratureError,regime"));
    for row in &lines[1..] {
        let ruin: f64 = row.split(',').nth(3).unwrap().parse().unwrap();
        assert!((0.0..=1.0).contains(&ruin));
    }
    assert_eq!(o.stdout, p0(&args).stdout);
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    let o = p0(&["table", "--x1", "0", "1", "2", "--x2", "1", "3", "2", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(path).unwrap().lines().count(), 5);
}

#[test]
fn simulate_csv_and_threads_env() {
    let args = ["simulate", "--u", "1", "2", "--paths", "20000", "--seed", "3", "--horizon", "50"];
    let a = p0(&args);
    assert_eq!(a.status.code(), Some(0));
    assert!(stdout(&a).starts_with("estimate,stderr,n,seed,meta\n"));
    let mut all: Vec<&str> = args.to_vec();
    all.extend_from_slice(&P0);
    all.push("2");
    let b = Command::new(BIN).args(&all).env("QUADRANT_RUIN_THREADS", "1").output().unwrap();
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn pde_grid_csv() {
    let o = p0(&["pde", "--rmax", "2", "--steps", "4", "--no-halving"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("r,w,u1,u2,chi,xi,h\n"));
    // Triangular lattice: (n+1)(n+2)/2 nodes.
    assert_eq!(text.lines().count(), 1 + 15);
    let o = p0(&["pde", "--rmax", "12", "--steps", "120", "--point", "1,3"]);
    assert!((csv_field(&o, "value") - 0.194023).abs() < 1e-3);
    let o = p0(&["pde", "--rmax", "12", "--steps", "120", "--point", "3,1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn transform_and_invert() {
    let o = p0(&["transform", "--p", "1", "--q", "1"]);
    assert!((csv_field(&o, "value_re") - 0.638675).abs() < 1e-6);
    let o = p0(&["invert", "--u", "1", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!((csv_field(&o, "survival") - 0.778202).abs() < 1e-3);
}

#[test]
fn phase_type_model() {
    // Erlang(2, 2) claims, mean 1.
    let f = model_file(r#"{"lambda": 1, "claim": {"type": "phase_type", "beta": [1, 0], "B": [[-2, 2], [0, -2]]}, "c": [3, 2], "delta": [1, 1]}"#);
    let path = f.path().to_str().unwrap();
    let o = run(&["derive", "--model", path]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!stdout(&o).contains("gamma1"));
    let o = run(&["ruin", "--model", path, "--u", "2", "1", "--method", "exact"]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["ruin", "--model", path, "--u", "1", "2", "--paths", "20000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("conditional"));
}

#[test]
fn help_and_usage() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}
