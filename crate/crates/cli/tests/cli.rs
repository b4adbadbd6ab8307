use std::path::PathBuf;

use coarsetop_cli::report::Report;
use coarsetop_cli::{run, Outcome};

fn fixture(name: &str) -> String {
    format!("tests/fixtures/{name}")
}

fn coarsetop(args: &[&str]) -> Outcome {
    run(std::iter::once("coarsetop").chain(args.iter().copied()))
}

fn temp_artifact(tag: &str) -> PathBuf {
    std::env::temp_dir().join(format!("coarsetop-cli-test-{tag}-{}.json", std::process::id()))
}

/// Compares with `tests/golden/<name>`, rewriting it when `UPDATE_GOLDEN` is set.
fn golden(name: &str, actual: &str) {
    let path = PathBuf::from("tests/golden").join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::create_dir_all("tests/golden").unwrap();
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

#[test]
fn check_discrete_space_is_disconnected() {
    let out = coarsetop(&["check", &fixture("discrete3.json"), "--no-artifact"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("  prebornology connected: false\n"));
    assert!(out.stdout.contains("prebornology galaxies: {{a}, {b}, {c}}"));
}

#[test]
fn check_pseudometric_components() {
    let out = coarsetop(&["check", &fixture("pseudometric.json"), "--no-artifact"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("  pseudometric components: {{a, b}, {c}}\n"));
    assert!(out.stdout.contains("  prebornology galaxies: {{a, b}, {c}}\n"));
}

#[test]
fn check_malformed_json_reports_position() {
    let out = coarsetop(&["check", &fixture("malformed.json"), "--no-artifact"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("malformed JSON"), "{}", out.stderr);
    assert!(out.stderr.contains("line 4 column 1"), "{}", out.stderr);
    assert!(out.stdout.is_empty());
}

#[test]
fn check_schema_errors_carry_paths() {
    let out = coarsetop(&["check", &fixture("unknown_label.json"), "--no-artifact"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("coarse.generators[0][0][1]: unknown point label `z`"), "{}", out.stderr);
    let out = coarsetop(&["check", &fixture("unknown_check.json"), "--no-artifact"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("checks[1]: unknown check `shiny`"), "{}", out.stderr);
    let out = coarsetop(&["check", &fixture("does_not_exist.json"), "--no-artifact"]);
    assert_eq!(out.code, 2);
}

#[test]
fn check_axiom_violation_is_falsified() {
    let out = coarsetop(&["check", &fixture("bad_family.json"), "--no-artifact"]);
    assert_eq!(out.code, 3);
    assert!(out.stdout.contains("FAIL prebornology: cover: no member contains `c`"), "{}", out.stdout);
}

#[test]
fn check_maps_golden() {
    let out = coarsetop(&["check", &fixture("maps.json"), "--no-artifact"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("  map swap bornological: false (source set {a, b})\n"));
    assert!(out.stdout.contains("  maps id, squash bornotopic: true\n"));
    golden("check_maps.txt", &out.stdout);
}

#[test]
fn check_group() {
    let out = coarsetop(&["check", &fixture("group.json"), "--no-artifact"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("  group identity: e\n"));
    assert!(out.stdout.contains("  group left coarse classes: {{e, s}}\n"));
}

#[test]
fn enumerate_counts() {
    let out = coarsetop(&["enumerate", "--n", "5", "--kind", "prebornology", "--no-artifact"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("counts: 1 2 5 15 52\n"));
    let out = coarsetop(&["enumerate", "--n", "2", "--kind", "coarse", "--verify", "--no-artifact"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("family scan counts: 1 2\n"));
    golden("enumerate_coarse_2.txt", &out.stdout);
}

#[test]
fn enumerate_rejects_out_of_range() {
    for n in ["0", "6"] {
        let out = coarsetop(&["enumerate", "--n", n, "--kind", "prebornology", "--no-artifact"]);
        assert_eq!(out.code, 2, "n = {n}");
    }
    let out = coarsetop(&["enumerate", "--n", "3", "--kind", "uniform", "--no-artifact"]);
    assert_eq!(out.code, 2);
}

#[test]
fn report_renders_the_artifact() {
    let artifact = temp_artifact("report");
    let a = artifact.to_str().unwrap();
    let out = coarsetop(&["enumerate", "--n", "5", "--kind", "prebornology", "--artifact", a]);
    assert_eq!(out.code, 0);
    let table = coarsetop(&["report", "--artifact", a]);
    assert_eq!(table.code, 0);
    assert_eq!(table.stdout, out.stdout);
    assert!(table.stdout.contains("counts: 1 2 5 15 52"));
    let json = coarsetop(&["report", "--format", "json", "--artifact", a]);
    assert_eq!(json.code, 0);
    assert_eq!(json.stdout, std::fs::read_to_string(&artifact).unwrap());
    let parsed = Report::from_json(&json.stdout).unwrap();
    assert_eq!(parsed.to_json(), json.stdout);
    assert_eq!(coarsetop(&["report", "--format", "xml", "--artifact", a]).code, 2);
    std::fs::remove_file(&artifact).unwrap();
    assert_eq!(coarsetop(&["report", "--artifact", a]).code, 2);
}

#[test]
fn report_rejects_a_tampered_artifact() {
    let artifact = temp_artifact("tampered");
    let a = artifact.to_str().unwrap();
    coarsetop(&["enumerate", "--n", "2", "--kind", "prebornology", "--artifact", a]);
    let text = std::fs::read_to_string(&artifact).unwrap().replace("\"exit_code\": 0", "\"exit_code\": 3");
    std::fs::write(&artifact, text).unwrap();
    let out = coarsetop(&["report", "--artifact", a]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("does not match status"), "{}", out.stderr);
    std::fs::remove_file(&artifact).unwrap();
}

#[test]
fn oracle_runs_and_rejects_zero_trials() {
    let out = coarsetop(&["oracle", "--trials", "50", "--seed", "7", "--format", "json", "--no-artifact"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let r = Report::from_json(&out.stdout).unwrap();
    assert!(r.params.contains(&("seed".to_string(), "7".to_string())));
    assert!(r.summary.contains(&("disagreements".to_string(), "0".to_string())));
    let again = coarsetop(&["oracle", "--trials", "50", "--seed", "7", "--format", "json", "--no-artifact"]);
    assert_eq!(again.stdout, out.stdout);
    assert_eq!(coarsetop(&["oracle", "--trials", "0", "--no-artifact"]).code, 2);
}

#[test]
fn oscillate_verdicts_and_exit_codes() {
    let out = coarsetop(&["oscillate", "--expr", "sin(log1p(abs(x)))", "--no-artifact"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("verdict: consistent\n"));

    let out = coarsetop(&["oscillate", "--expr", "sin(x)", "--format", "json", "--no-artifact"]);
    assert_eq!(out.code, 3);
    let r = Report::from_json(&out.stdout).unwrap();
    let w = &r.details["verdict"]["witness"];
    assert!(w["x"].as_i64().unwrap().abs() >= 1_000_000);
    assert!(w["gap"].as_f64().unwrap() >= 0.9);
    assert_eq!(r.failures.len(), 1);

    let out = coarsetop(&["oscillate", "--expr", "1", "--format", "json", "--no-artifact"]);
    assert_eq!(out.code, 0);
    let r = Report::from_json(&out.stdout).unwrap();
    let all_zero = r.details["estimates"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|row| row.as_array().unwrap())
        .all(|v| v.as_f64() == Some(0.0));
    assert!(all_zero);

    let out = coarsetop(&["oscillate", "--expr", "sin(sqrt(abs(x)))", "--no-artifact"]);
    assert_eq!(out.code, 4);
}

#[test]
fn oscillate_input_errors() {
    let out = coarsetop(&["oscillate", "--expr", "sin(x", "--no-artifact"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("offset 5"), "{}", out.stderr);
    assert!(out.stderr.ends_with("  sin(x\n       ^\n"), "{:?}", out.stderr);
    assert_eq!(coarsetop(&["oscillate", "--expr", "1/(x-10)", "--no-artifact"]).code, 2);
    assert_eq!(coarsetop(&["oscillate", "--expr", "x", "--widths", "0..3", "--no-artifact"]).code, 2);
    assert_eq!(coarsetop(&["oscillate", "--expr", "x", "--radii", "1e6:1e1", "--no-artifact"]).code, 2);
    assert_eq!(coarsetop(&["oscillate", "--expr", "x", "--tol", "-1", "--no-artifact"]).code, 2);
}

#[test]
fn oscillate_custom_grid() {
    let out = coarsetop(&[
        "oscillate",
        "--expr",
        "cos(log1p(abs(x)))",
        "--widths",
        "1,5",
        "--radii",
        "100,1e4",
        "--samples",
        "256",
        "--seed",
        "3",
        "--no-artifact",
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("  k  R=1e2"), "{}", out.stdout);
    assert!(out.stdout.contains("  seed: 3\n"));
}

#[test]
fn help_exits_zero() {
    let out = coarsetop(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("oscillate"));
    assert_eq!(coarsetop(&["frobnicate"]).code, 2);
}
