use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frevival")).args(args).env_remove("FREVIVAL_TOL").output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let out = run(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text:?}"));
    (out.status.code().unwrap(), value)
}

const COCKTAIL4: &str = r#"{"kind":"cocktail_party","params":{"n":4}}"#;

#[test]
fn cocktail_party_pair_is_proper_at_quarter_pi() {
    let (code, v) = json(&["--recipe", COCKTAIL4, "analyze", "--subset", "0,1"]);
    assert_eq!(code, 0);
    let cert = &v["certificate"];
    assert_eq!(cert["kind"], "proper");
    assert!((cert["tau"].as_f64().unwrap() - PI / 4.0).abs() < 1e-12);
    assert!(cert["off_block_residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn fork_partition_uses_labels() {
    let fork = data("fork.json");
    let (code, v) = json(&["--graph", &fork, "analyze", "--subset", "1,2,3"]);
    assert_eq!(code, 3);
    assert_eq!(v["K"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["partition"], serde_json::json!([[0, 1, 3, 4], [2]]));
    assert_eq!(v["decomposability"]["decomposable"], false);
}

#[test]
fn k2_pair_reports_unconstrained_times() {
    let (code, v) = json(&["--recipe", r#"{"kind":"complete","params":{"n":2}}"#, "pair", "--pair", "0,1"]);
    assert_eq!(code, 0);
    assert_eq!(v["minimal_time"]["outcome"], "unconstrained");
    assert!((v["minimal_time"]["witness"].as_f64().unwrap() - PI / 2.0).abs() < 1e-12);
    assert_eq!(v["verified"]["kind"], "proper");
}

#[test]
fn path_endpoints_transfer() {
    let (code, v) = json(&["--graph", &data("p3.json"), "pair", "--pair", "0,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["minimal_time"]["outcome"], "at");
    assert!((v["minimal_time"]["tau"].as_f64().unwrap() - PI / 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn spider_centre_leaks_out_of_its_subset() {
    let spider = r#"{"kind":"subdivided_star","params":{"m":3}}"#;
    let (code, v) = json(&["--recipe", spider, "evolve", "--vertex", "0", "--time", "pi/2"]);
    assert_eq!(code, 0);
    let probs: Vec<f64> = v["probabilities"].as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect();
    assert!((probs[0] - 0.25).abs() < 1e-12);
    assert!(probs[1..4].iter().all(|&p| p < 1e-20));
    let (code, v) = json(&["--recipe", spider, "analyze", "--subset", "0,4,5,6", "--time", "pi/2"]);
    assert_eq!(code, 3);
    assert_eq!(v["at_time"]["kind"], "none");
}

#[test]
fn sweeps_find_transfer_peaks() {
    let (code, v) = json(&["--recipe", r#"{"kind":"complete","params":{"n":2}}"#, "sweep", "--vertex", "0", "--grid", "0:pi:5"]);
    assert_eq!(code, 0);
    let peak = &v["peak"];
    assert_eq!(peak["partner"], 1);
    assert!((peak["t"].as_f64().unwrap() - PI / 2.0).abs() < 1e-12);
    assert!((peak["amplitude"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let h4 = r#"{"kind":"hadamard_polygamy","params":{"m":2,"primes":[3,5,7],"adjacency":false}}"#;
    let (code, v) = json(&["--recipe", h4, "sweep", "--vertex", "0", "--grid", "0:2pi:13"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"].as_array().unwrap().len(), 13);
    assert!(v["concentration_peaks"].as_array().unwrap().iter().all(|r| r["concentration"].as_f64().unwrap() >= 0.99));
}

#[test]
fn constructed_graph_round_trips_through_a_file() {
    let (code, v) = json(&["--recipe", COCKTAIL4, "construct"]);
    assert_eq!(code, 0);
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let dir = std::env::temp_dir().join(format!("frevival-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("cocktail4.json");
    std::fs::write(&path, serde_json::to_string(&v["graph"]).unwrap()).unwrap();
    let from_file = json(&["--graph", path.to_str().unwrap(), "analyze", "--subset", "0,1"]);
    let from_recipe = json(&["--recipe", COCKTAIL4, "analyze", "--subset", "0,1"]);
    assert_eq!(from_file, from_recipe);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn json_output_is_deterministic() {
    let args = ["--recipe", r#"{"kind":"hypercube","params":{"d":3}}"#, "pair", "--pair", "0,7", "--format", "json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    assert!(!a.stdout.is_empty());
}

#[test]
fn tolerance_flag_overrides_environment() {
    let args = ["--recipe", COCKTAIL4, "analyze", "--subset", "0,1"];
    let bin = env!("CARGO_BIN_EXE_frevival");
    let strict = Command::new(bin).args(args).env("FREVIVAL_TOL", "1e-300").output().unwrap();
    assert_eq!(strict.status.code(), Some(3));
    let mut with_flag = args.to_vec();
    with_flag.extend(["--tol", "1e-8"]);
    let flagged = Command::new(bin).args(&with_flag).env("FREVIVAL_TOL", "1e-300").output().unwrap();
    assert_eq!(flagged.status.code(), Some(0));
}

#[test]
fn errors_exit_with_one_and_a_code() {
    let out = run(&["--graph", "/definitely/missing.json", "analyze", "--subset", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error[request::Invalid]"));

    let out = run(&["--graph", &data("p3.json"), "--format", "json", "pair", "--pair", "1,1"]);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "cospectral::SameVertex");

    let out = run(&["--recipe", r#"{"kind":"rook","params":{"n":3,"extra":1}}"#, "construct"]);
    assert_eq!(out.status.code(), Some(1));

    let out = run(&["analyze", "--subset", "0", "--grid"]);
    assert_eq!(out.status.code(), Some(1));
}

const H4: &str = r#"{"kind":"hadamard_polygamy","params":{"m":2,"primes":[3,5,7],"adjacency":false}}"#;

#[test]
fn path_endpoints_analyze_to_transfer() {
    let (code, v) = json(&["--graph", &data("p3.json"), "analyze", "--subset", "0,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["certificate"]["kind"], "proper");
    assert!((v["certificate"]["tau"].as_f64().unwrap() - PI / 2f64.sqrt()).abs() < 1e-9);
}

#[test]
fn h4_concentration_peaks_at_each_pair_time() {
    // 2520 intervals put 2pi/3, 2pi/5 and 2pi/7 exactly on the grid.
    let (code, v) = json(&["--recipe", H4, "sweep", "--vertex", "0", "--grid", "0:2pi:2521"]);
    assert_eq!(code, 0);
    let peaks = v["concentration_peaks"].as_array().unwrap();
    for (partner, p) in [(1, 3.0), (2, 5.0), (3, 7.0)] {
        let t = 2.0 * PI / p;
        assert!(
            peaks.iter().any(|r| (r["t"].as_f64().unwrap() - t).abs() < 1e-9 && r["partner"] == partner),
            "no peak with vertex {partner} at 2pi/{p}"
        );
    }
}

#[test]
fn h4_pairs_are_strongly_cospectral() {
    for b in ["1", "2", "3"] {
        let pair = format!("0,{b}");
        let (code, v) = json(&["--recipe", H4, "pair", "--pair", &pair]);
        assert_eq!(code, 0);
        assert_eq!(v["cospectrality"]["strongly_fractionally_cospectral"], true);
        assert_eq!(v["certificate"]["kind"], "proper");
    }
}

#[test]
fn spider_middle_pair_is_cospectral() {
    let spider = r#"{"kind":"subdivided_star","params":{"m":3}}"#;
    let (_, v) = json(&["--recipe", spider, "pair", "--pair", "1,2"]);
    assert_eq!(v["cospectrality"]["cospectral"], true);
}

#[test]
fn graph_and_recipe_are_exclusive() {
    let both = ["--graph", &data("p3.json"), "construct", "--recipe", H4];
    assert_eq!(run(&both).status.code(), Some(1));
    let both = ["pair", "--pair", "0,1", "--graph", &data("p3.json"), "--recipe", H4];
    assert_eq!(run(&both).status.code(), Some(1));
}
