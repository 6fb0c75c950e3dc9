use std::process::{Command, Output};

use proptest::prelude::*;
use serde_json::{json, Value};
use stiefel_cli::report::render_text;
use stiefel_cli::{Check, RunReport};

fn stiefel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stiefel")).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("stiefel-cli-{}-{name}", std::process::id()))
}

#[test]
fn same_seed_gives_identical_bytes() {
    let args = ["verify-tg", "--n", "3", "--controls", "20", "--seed", "7"];
    let a = stiefel(&args);
    let b = stiefel(&args);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let mut seq = args.to_vec();
    seq.push("--sequential");
    assert_eq!(a.stdout, stiefel(&seq).stdout, "scheduling must not change the report");
}

#[test]
fn json_is_newline_terminated_and_sorted() {
    let out = stiefel(&["oracle", "--n", "2,3", "--pairs", "50", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).expect("UTF-8");
    assert!(text.ends_with("}\n"));
    let report = RunReport::from_json(&text).unwrap();
    assert_eq!(report.command, "oracle");
    assert_eq!(report.seed, 3);
    let names: Vec<&str> = report.checks.iter().map(|c| c.name.as_str()).collect();
    assert_eq!(names, ["oracle_n02", "oracle_n03"]);
}

#[test]
fn unknown_flag_is_a_usage_error() {
    assert_eq!(stiefel(&["holonomy", "--bogus"]).status.code(), Some(2));
    assert_eq!(stiefel(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(stiefel(&["actions", "verify"]).status.code(), Some(2));
}

#[test]
fn invalid_arguments_are_usage_errors() {
    assert_eq!(stiefel(&["verify-tg", "--n", "3", "--candidate", "stiefel:9"]).status.code(), Some(2));
    assert_eq!(stiefel(&["actions", "verify", "--row", "nope"]).status.code(), Some(2));
    assert_eq!(stiefel(&["holonomy", "--n", "1"]).status.code(), Some(2));
}

#[test]
fn failing_check_exits_one_with_report() {
    // epsilon = 0 leaves the controls totally geodesic, so they cannot fail.
    let out = stiefel(&["verify-tg", "--n", "2", "--controls", "10", "--epsilon", "0"]);
    assert_eq!(out.status.code(), Some(1));
    let report = RunReport::from_json(std::str::from_utf8(&out.stdout).unwrap()).unwrap();
    let ctrl = report.checks.iter().find(|c| c.name == "tg_controls_failing_fraction").unwrap();
    assert!(!ctrl.passed);
    assert_eq!(ctrl.value, 0.0);
    assert!(report.checks.iter().filter(|c| c.name != ctrl.name).all(|c| c.passed));
}

#[test]
fn flags_override_config() {
    let cfg = tmp("override.toml");
    std::fs::write(&cfg, "seed = 5\nn = 3\nformat = \"json\"\n").unwrap();
    let c = cfg.to_str().unwrap();
    let from_cfg =
        RunReport::from_json(std::str::from_utf8(&stiefel(&["holonomy", "--config", c]).stdout).unwrap()).unwrap();
    assert_eq!(from_cfg.seed, 5);
    assert_eq!(from_cfg.params["n"], json!(3));
    let flagged = RunReport::from_json(
        std::str::from_utf8(&stiefel(&["holonomy", "--config", c, "--seed", "6", "--n", "2"]).stdout).unwrap(),
    )
    .unwrap();
    assert_eq!(flagged.seed, 6);
    assert_eq!(flagged.params["n"], json!(2));
    std::fs::write(&cfg, "colour = \"red\"\n").unwrap();
    assert_eq!(stiefel(&["holonomy", "--config", c]).status.code(), Some(2));
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn output_file_and_text_rendering() {
    let path = tmp("holonomy.json");
    let p = path.to_str().unwrap();
    let out = stiefel(&["holonomy", "--output", p]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let json_text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).ok();
    let text = String::from_utf8(stiefel(&["holonomy", "--format", "text"]).stdout).unwrap();
    let value: Value = serde_json::from_str(&json_text).unwrap();
    assert_eq!(text, render_text(&value));
    assert!(text.contains("PASS holonomy_commutant_dim"));
}

#[test]
fn infinite_residuals_survive_round_trip() {
    let mut r = RunReport::new("test", 1);
    r.param("n", 4);
    r.push(Check::errored("b_broken", "no convergence"));
    r.push(Check::value("a_dim", 10.0, true, json!({ "k": [1, 2] })));
    let r = r.finish();
    assert_eq!(r.checks[0].name, "a_dim");
    let back = RunReport::from_json(&r.to_json()).unwrap();
    assert_eq!(back, r);
    assert!(back.checks[1].value.is_infinite());
    assert!(!back.all_passed());
}

proptest! {
    #[test]
    fn reports_round_trip(
        seed in any::<u64>(),
        entries in prop::collection::vec(("[a-z_]{1,12}", any::<bool>(), prop_oneof![
            any::<f64>().prop_filter("finite", |x| x.is_finite()),
            Just(f64::INFINITY),
            Just(f64::NEG_INFINITY),
        ]), 0..8),
    ) {
        let mut r = RunReport::new("prop", seed);
        r.param("count", entries.len());
        for (name, passed, value) in &entries {
            r.push(Check::residual(name.clone(), *value, *passed, json!({ "v": name })));
        }
        let r = r.finish();
        let text = r.to_json();
        prop_assert!(text.ends_with('\n'));
        let back = RunReport::from_json(&text).unwrap();
        prop_assert_eq!(&back, &r);
        prop_assert_eq!(back.to_json(), text);
    }
}
