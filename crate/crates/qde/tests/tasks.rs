use std::f64::consts::LN_2;
use std::path::PathBuf;

use qde::record::Value;
use qde::{parse_spec, parse_spec_file, run_task, ResultRecord};

fn shipped(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("specs").join(name);
    std::fs::read_to_string(path).unwrap()
}

fn run(text: &str) -> ResultRecord {
    let (spec, system) = parse_spec(text).unwrap();
    run_task(&spec, &system, "t").unwrap()
}

fn binary_entropy(p: f64) -> f64 {
    -p * p.ln() - (1.0 - p) * (1.0 - p).ln()
}

#[test]
fn info_on_diagonal_state_is_shannon_entropy() {
    let r = run(&shipped("info_z.json"));
    assert!((r.number("H").unwrap() - LN_2).abs() < 1e-12);
    assert!(r.number("Hq").unwrap().abs() < 1e-12);
    assert!(r.number("H_conditional").unwrap().abs() < 1e-12);
    assert!(r.all_passed());

    for p in [0.1, 0.3, 0.7] {
        let text = format!(
            r#"{{"schema_version": "1", "state": [[{p}, 0], [0, {q}]],
                "partitions": [{{"name": "z", "maps": [[[[1, 0], [0, 0]]], [[[0, 0], [0, 1]]]]}}],
                "task": "info"}}"#,
            q = 1.0 - p
        );
        let r = run(&text);
        assert!((r.number("H").unwrap() - binary_entropy(p)).abs() < 1e-9, "p={p}");
    }
}

#[test]
fn pure_eigenstate_carries_no_information() {
    let text = r#"{"schema_version": "1", "state": [[1, 0], [0, 0]],
                   "partitions": [{"name": "z", "maps": [[[[1, 0], [0, 0]]], [[[0, 0], [0, 1]]]]}],
                   "task": "info"}"#;
    let r = run(text);
    assert_eq!(r.scalars["H"], Value::Number(0.0));
}

#[test]
fn markov_dynent_gives_the_entropy_rate() {
    let r = run(&shipped("markov.json"));
    let a = r.series["an"].column("a_n").unwrap();
    let embedded = r.series["an_embedded"].column("a_n").unwrap();
    assert_eq!(a.len(), 5);
    let rate = binary_entropy(0.1);
    for (x, y) in a.iter().zip(&embedded) {
        assert!((x - 0.325083).abs() < 1e-6);
        assert!((x - rate).abs() < 1e-12);
        assert!((x - y).abs() < 1e-8);
    }
    assert!(r.all_passed());
}

#[test]
fn non_circulant_chain_skips_the_embedding() {
    let text = r#"{"schema_version": "1", "classical": {"markov": [[0.8, 0.2], [0.4, 0.6]]},
                   "task": "dynent", "params": {"n": 4}}"#;
    let r = run(text);
    assert_eq!(r.scalars["embedded"], Value::Flag(false));
    // stationary (2/3, 1/3)
    let rate = 2.0 / 3.0 * binary_entropy(0.2) + 1.0 / 3.0 * binary_entropy(0.4);
    assert!((r.number("entropy_rate").unwrap() - rate).abs() < 1e-12);
    assert!((r.number("h_estimate").unwrap() - rate).abs() < 1e-12);
}

#[test]
fn cyclic_dynamics_collapse_after_one_step() {
    let r = run(&shipped("cycle.json"));
    let a = r.series["an"].column("a_n").unwrap();
    // cells {0} and {1,2}: one step later the pair of cells pins the point, so
    // a_1 = ln 3 - h(1/3)
    let oracle = 2.0 / 3.0 * LN_2;
    assert!((a[0] - oracle).abs() < 1e-9, "{}", a[0]);
    assert!(a[1..].iter().all(|x| x.abs() < 1e-9));
    assert!(r.all_passed());
}

#[test]
fn capacity_of_the_nonorthogonal_ensemble() {
    let r = run(&shipped("ensemble.json"));
    let c = (1.0 + std::f64::consts::FRAC_1_SQRT_2) / 2.0;
    let chi = binary_entropy(c);
    assert!((r.number("chi").unwrap() - chi).abs() < 1e-9);
    assert!((r.number("H_1").unwrap() - chi).abs() < 1e-9);
    let d = r.number("D_1").unwrap();
    assert!(d > 0.2766 && d <= r.number("C_1").unwrap() + 1e-8);
    assert!(r.all_passed());
    assert!(r.provenance.optimizer.is_some());
}

#[test]
fn classical_task_on_a_rotation() {
    let r = run(&shipped("circle.json"));
    let a = r.series["an"].column("a_n").unwrap();
    assert_eq!(a.len(), 4);
    assert!(a[3].abs() < 1e-12);
    assert_eq!(r.number("period"), Some(4.0));
    assert!(r.all_passed());
}

#[test]
fn verify_reports_every_family() {
    let text = r#"{"schema_version": "1", "task": "verify", "params": {"dims": [2, 3], "trials": 12, "seed": 1}}"#;
    let r = run(text);
    assert_eq!(r.checks.len(), qde_core::suite::Family::ALL.len());
    assert!(r.all_passed(), "{}", r.table());
    for f in qde_core::suite::Family::ALL {
        assert_eq!(r.number(&format!("{}.violations", f.name())), Some(0.0));
    }
}

fn without_wall_time(r: &ResultRecord) -> String {
    let mut r = r.clone();
    r.wall_time_s = 0.0;
    r.to_json().unwrap()
}

#[test]
fn records_are_deterministic() {
    for name in ["info_z.json", "markov.json", "ensemble.json", "cycle.json", "circle.json"] {
        let text = shipped(name);
        let a = run(&text);
        let b = run(&text);
        assert_eq!(without_wall_time(&a), without_wall_time(&b), "{name}");
    }
}

#[test]
fn table_numbers_appear_in_the_record() {
    let r = run(&shipped("ensemble.json"));
    let json = r.to_json().unwrap();
    let table = r.table();
    for (k, v) in &r.scalars {
        assert!(table.contains(&format!("{v}")), "{k}");
        assert!(json.contains(&serde_json::to_string(v).unwrap()), "{k}");
    }
}

#[test]
fn task_errors_carry_context() {
    let text = r#"{"schema_version": "1", "classical": {"markov": [[0.9, 0.1], [0.1, 0.9]]},
                   "task": "dynent", "params": {"n": 40}}"#;
    let (spec, system) = parse_spec_file(text).unwrap().remove(0);
    let e = run_task(&spec, &system, "big").unwrap_err();
    assert_eq!(e.exit_code(), qde::exit::RESOURCE);
    assert!(e.to_string().starts_with("big: dynent task"), "{e}");
}
