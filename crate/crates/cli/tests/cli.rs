use std::process::{Command, Output};

use dfactor::graph_core::is_d_factor;
use dfactor::{ColoredState, HostInstance};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dfactor")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn approx_sample_has_dn_over_two_edges_per_factor() {
    let o = run(&["sample", "--algorithm", "approx", "--n", "1000", "--d", "3", "--delta", "2", "--samples", "5", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let factors: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(factors.len(), 5);
    for f in factors {
        assert_eq!(f.trim().lines().count(), 1500);
    }
    let tel: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(tel["telemetry"]["samples"], 5);
}

#[test]
fn same_seed_same_bytes() {
    let args = ["sample", "--algorithm", "easy", "--n", "60", "--d", "2", "--delta", "2", "--samples", "4", "--seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["sample", "--algorithm", "easy", "--n", "60", "--d", "2", "--delta", "2", "--samples", "4", "--seed", "8"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn jobs_do_not_change_output() {
    let base = ["sample", "--algorithm", "approx", "--n", "200", "--d", "3", "--delta", "3", "--samples", "6", "--seed", "3"];
    let a = run(&base);
    let mut with_jobs = base.to_vec();
    with_jobs.extend(["--jobs", "3"]);
    let b = run(&with_jobs);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn no_factor_exhausts_budget() {
    let dir = tempfile::tempdir().unwrap();
    let star = dir.path().join("star.json");
    std::fs::write(&star, r#"{"n": 4, "d": 2, "forbidden": [[0, 1], [0, 2], [0, 3]]}"#).unwrap();
    let o = run(&["sample", "--algorithm", "easy", "--forbidden", star.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget exhausted"));
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(code(&run(&["sample", "--n", "5", "--d", "3"])), 2);
    assert_eq!(code(&run(&["sample", "--d", "3"])), 2);
    assert_eq!(code(&run(&["sample", "--n", "9", "--d", "2", "--delta", "3"])), 2);
    assert_eq!(code(&run(&["sample", "--algorithm", "bogus", "--n", "10", "--d", "2"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"n\": 4").unwrap();
    assert_eq!(code(&run(&["sample", "--forbidden", bad.to_str().unwrap()])), 2);
}

#[test]
fn uniform_rejects_irregular_complement() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("path.txt");
    std::fs::write(&path, "0 1\n1 2\n# comment\n").unwrap();
    let o = run(&["sample", "--algorithm", "uniform", "--forbidden", path.to_str().unwrap(), "--n", "8", "--d", "2"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not regular"));
    let o = run(&["sample", "--algorithm", "easy", "--forbidden", path.to_str().unwrap(), "--n", "8", "--d", "2", "--bound-provider", "oracle"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn analytic_guard_exits_4() {
    let o = run(&["sample", "--algorithm", "easy", "--n", "10", "--d", "2", "--delta", "2", "--samples", "20"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("oracle"));
    let o = run(&["solve-params", "--n", "10", "--d", "2", "--delta", "2"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn json_output_round_trips() {
    let o = run(&["sample", "--algorithm", "easy", "--n", "8", "--d", "2", "--delta", "2", "--samples", "10", "--bound-provider", "oracle", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let factors: Vec<Vec<[u32; 2]>> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(factors.len(), 10);
    // generated instances draw the forbidden graph from stream u64::MAX of the seed
    let forb = dfactor::regular_gen::pairing_sample(8, 2, &mut dfactor::RngStream::new(0, u64::MAX)).unwrap();
    let host = dfactor::load_instance(8, 2, &forb).unwrap();
    for f in &factors {
        let pairs: Vec<(u32, u32)> = f.iter().map(|p| (p[0], p[1])).collect();
        let g = ColoredState::from_edges(&host, &pairs).unwrap();
        assert!(is_d_factor(&host, &g));
    }
}

#[test]
fn written_factor_is_a_factor_of_the_instance() {
    let dir = tempfile::tempdir().unwrap();
    let inst = dir.path().join("c10.json");
    let forbidden: Vec<[u32; 2]> = (0..10).map(|i| [i, (i + 1) % 10]).collect();
    std::fs::write(&inst, serde_json::json!({"n": 10, "d": 2, "forbidden": forbidden}).to_string()).unwrap();
    let out = dir.path().join("out.txt");
    let tel = dir.path().join("tel.json");
    let o = run(&[
        "sample", "--algorithm", "easy", "--bound-provider", "oracle", "--forbidden", inst.to_str().unwrap(), "--samples", "3",
        "-o", out.to_str().unwrap(), "--telemetry", tel.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let host = HostInstance::from_json_file(&inst).unwrap();
    let text = std::fs::read_to_string(&out).unwrap();
    for block in text.split("\n\n") {
        let pairs = dfactor::graph_core::parse_edge_list(block).unwrap();
        let g = ColoredState::from_edges(&host, &pairs).unwrap();
        assert!(is_d_factor(&host, &g));
    }
    let t: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&tel).unwrap()).unwrap();
    assert_eq!(t["algorithm"], "easy");
}

#[test]
fn verify_examples_pass() {
    for args in [
        vec!["verify", "--suite", "bijection", "--n", "8", "--d", "2", "--delta", "2"],
        vec!["verify", "--suite", "expectation", "--n", "5", "--d", "2"],
        vec!["verify", "--suite", "solver-fixed-point", "--n", "10000", "--d", "3", "--delta", "3"],
        vec!["verify", "--suite", "uniformity", "--algorithm", "easy", "--bound-provider", "oracle", "--n", "6", "--d", "2", "--delta", "1", "--samples", "3000"],
    ] {
        let o = run(&args);
        assert_eq!(code(&o), 0, "{args:?}: {}{}", stdout(&o), String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("PASS"));
    }
}

#[test]
fn bench_emits_one_row_per_n_and_algorithm() {
    let o = run(&["bench", "--algorithms", "approx,easy", "--ns", "100,200", "--d", "2", "--delta", "2", "--samples", "3"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "algorithm,n,d,delta,samples,mean_ms,median_ms,max_ms,restarts");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("approx,100,2,2,3,"));
}
