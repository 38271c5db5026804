//! End-to-end tests of the `guesswork` binary: flags, JSON/CSV output shapes,
//! exit codes, and reproducibility of printed values.

use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_guesswork"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("guesswork-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn solve_tetrahedron_prints_the_closed_form() {
    let output = run(&["solve", "--channel", "tetrahedron"]);
    assert!(output.status.success());
    let json = stdout_json(&output);
    let value = json["value"].as_f64().unwrap();
    assert!((value - (2.5 - 15f64.sqrt() / 6.0)).abs() < 1e-9);
    assert_eq!(json["regime"], "transitive");
    assert_eq!(json["bound_only"], false);
    assert_eq!(json["numbering"].as_array().unwrap().len(), 4);
    let manifest = &json["manifest"];
    assert!(manifest["input_hash"].as_str().unwrap().starts_with("fnv1a64:"));
    assert!(manifest["version"].is_string());
}

#[test]
fn identical_invocations_print_identical_values() {
    // Same inputs, different thread counts: the value field must be
    // byte-identical.
    let a = run(&["solve", "--channel", "cube", "--threads", "1"]);
    let b = run(&["solve", "--channel", "cube", "--threads", "8"]);
    let va = stdout_json(&a)["value"].to_string();
    let vb = stdout_json(&b)["value"].to_string();
    assert_eq!(va, vb);
}

#[test]
fn forced_regimes_agree() {
    let a = run(&["solve", "--channel", "cube", "--regime", "general"]);
    let b = run(&["solve", "--channel", "cube", "--regime", "transitive-cs"]);
    assert!(a.status.success() && b.status.success());
    let va = stdout_json(&a)["value"].as_f64().unwrap();
    let vb = stdout_json(&b)["value"].as_f64().unwrap();
    assert!((va - vb).abs() < 1e-12);
}

#[test]
fn csv_format_has_the_documented_header() {
    let output = run(&["solve", "--channel", "octahedron", "--format", "csv"]);
    assert!(output.status.success());
    let text = String::from_utf8(output.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "command,channel,cost,value,best_norm,regime,leaves_visited,\
         nodes_expanded,wall_time_s,bound_only,numbering"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("solve,octahedron,identity,"));
}

#[test]
fn invalid_channel_file_exits_2() {
    let path = temp_path("duplicate.json");
    std::fs::write(
        &path,
        r#"{"labels": ["a", "a"], "bloch": [[0, 0, 1], [0, 0, -1]]}"#,
    )
    .unwrap();
    let output = run(&["solve", "--channel", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("duplicate label"));
}

#[test]
fn unknown_channel_exits_2() {
    let output = run(&["solve", "--channel", "hexagon-that-does-not-exist"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn unbalanced_cost_exits_3() {
    let cost_path = temp_path("unbalanced.json");
    std::fs::write(&cost_path, "[1.0, 2.0, 4.0, 8.0]").unwrap();
    let output = run(&[
        "solve",
        "--channel",
        "tetrahedron",
        "--cost",
        &format!("file:{}", cost_path.display()),
    ]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn time_budget_exits_4_with_flagged_result() {
    let output = run(&[
        "solve",
        "--channel",
        "icosidodecahedron",
        "--time-budget",
        "0.5",
    ]);
    assert_eq!(output.status.code(), Some(4));
    let json = stdout_json(&output);
    assert_eq!(json["bound_only"], true);
    // The incumbent starts at the greedy numbering (value 10.52884...), so
    // the reported upper bound can only be at or below it.
    assert!(json["value"].as_f64().unwrap() <= 10.5288415);
}

#[test]
fn oracle_matches_the_octahedron_radical() {
    let output = run(&["oracle", "--channel", "octahedron"]);
    assert!(output.status.success());
    let json = stdout_json(&output);
    let value = json["value"].as_f64().unwrap();
    assert!((value - (3.5 - 35f64.sqrt() / 6.0)).abs() < 1e-12);
    assert_eq!(json["leaves"].as_u64().unwrap(), 8); // transitive-cs tree
}

#[test]
fn oracle_cap_exits_2() {
    let output = run(&["oracle", "--channel", "cube", "--regime", "general", "--cap", "100"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn simulate_reports_a_band_around_the_exact_value() {
    let output = run(&[
        "simulate",
        "--channel",
        "icosahedron",
        "--shots",
        "400",
        "--seed",
        "1",
    ]);
    assert!(output.status.success());
    let json = stdout_json(&output);
    let empirical = json["report"]["empirical_guesswork"].as_f64().unwrap();
    let se = json["report"]["standard_error"].as_f64().unwrap();
    let exact = json["exact_value"].as_f64().unwrap();
    assert!(se > 0.0);
    assert!((empirical - exact).abs() <= 5.0 * se, "empirical {empirical} exact {exact} se {se}");
    assert!((exact - 4.5081376).abs() < 1e-6);
}

#[test]
fn simulate_is_reproducible_per_seed() {
    let args =
        ["simulate", "--channel", "octahedron", "--shots", "200", "--seed", "9"];
    let a = stdout_json(&run(&args));
    let b = stdout_json(&run(&args));
    assert_eq!(
        a["report"]["empirical_guesswork"].to_string(),
        b["report"]["empirical_guesswork"].to_string()
    );
}

#[test]
fn channels_list_names_all_seven() {
    let output = run(&["channels", "list"]);
    assert!(output.status.success());
    let json = stdout_json(&output);
    let families = json["families"].as_array().unwrap();
    assert_eq!(families.len(), 7);
    assert_eq!(families[0]["family"], "tetrahedron");
    assert_eq!(families[6]["states"], 30);
}

#[test]
fn channels_export_writes_a_loadable_file() {
    let path = temp_path("dodecahedron.json");
    let output = run(&[
        "channels",
        "export",
        "--family",
        "dodecahedron",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let bloch = file["bloch"].as_array().unwrap();
    assert_eq!(bloch.len(), 20);
    for v in bloch {
        let [x, y, z] = [0, 1, 2].map(|i| v[i].as_f64().unwrap());
        assert!((x * x + y * y + z * z - 1.0).abs() < 1e-12);
    }
    // And the exported file solves like the built-in generator.
    let solved = run(&["solve", "--channel", path.to_str().unwrap()]);
    assert!(solved.status.success());
    let direct = run(&["solve", "--channel", "dodecahedron"]);
    assert_eq!(
        stdout_json(&solved)["value"].to_string(),
        stdout_json(&direct)["value"].to_string()
    );
}

#[test]
fn export_without_out_prints_the_channel() {
    let output = run(&["channels", "export", "--family", "tetrahedron"]);
    assert!(output.status.success());
    let json = stdout_json(&output);
    assert_eq!(json["labels"].as_array().unwrap().len(), 4);
    assert!(json["manifest"].is_object());
}

#[test]
fn missing_flags_exit_2_with_usage() {
    let output = run(&["solve"]);
    assert_eq!(output.status.code(), Some(2));
    let output = run(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&output.stderr).contains("usage"));
}

#[test]
fn custom_prior_channel_file_is_used_by_simulate() {
    let path = temp_path("biased_pair.json");
    std::fs::write(
        &path,
        r#"{"labels": ["a", "b"], "bloch": [[0, 0, 1], [0, 0, -1]], "prior": [0.9, 0.1]}"#,
    )
    .unwrap();
    let output = run(&[
        "simulate",
        "--channel",
        path.to_str().unwrap(),
        "--shots",
        "100",
        "--seed",
        "3",
    ]);
    assert!(output.status.success());
    let json = stdout_json(&output);
    // Antipodal states are perfectly distinguishable whatever the prior.
    assert_eq!(json["report"]["empirical_guesswork"].as_f64().unwrap(), 1.0);
}
