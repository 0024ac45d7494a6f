//! End-to-end tests of the `gakit` binary: exit codes, JSON report shape
//! and output determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gakit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn fixture_dir() -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gakit-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("create fixture dir");
    dir
}

fn write_fixture(name: &str, contents: &str) -> String {
    let path = fixture_dir().join(name);
    std::fs::write(&path, contents).expect("write fixture");
    path.to_string_lossy().into_owned()
}

const A123: &str = r#"{"asanuma": {"p": 2, "m": 1, "e": 2, "s": 3}}"#;
const A223: &str = r#"{"asanuma": {"p": 2, "m": 2, "e": 2, "s": 3}}"#;
const PROP_WEIGHTS: &str = r#"{"weights": {"x": 0, "z": 3, "t": 2}, "derive_y": true}"#;

#[test]
fn check_exp_accepts_the_translation_family_map() {
    let algebra = write_fixture("a123.json", A123);
    let map = write_fixture(
        "phi1.json",
        &format!(
            r#"{{"algebra": "{algebra}", "images": {{
                "t": "t + y*U",
                "x": "x + U + t^4*y*U^2 + t^2*y^3*U^4 + y^5*U^6"
            }}}}"#
        ),
    );
    let out = run(&["check-exp", "--map", &map]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["schema"], 1);
    assert_eq!(json["payload"]["status"], "verified");
    assert_eq!(json["payload"]["trivial"], false);
}

#[test]
fn check_exp_rejects_a_corrupted_map() {
    let map = format!(
        r#"{{"algebra": {A123}, "images": {{
            "t": "t + y*U",
            "x": "x + U + t^4*y*U^2 + t^2*y^3*U^4"
        }}}}"#
    );
    let out = run(&["check-exp", "--map", &map]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout_json(&out);
    assert_eq!(json["payload"]["status"], "refuted");
    assert_eq!(json["payload"]["failing_axiom"], "RelationPreservation");
}

#[test]
fn check_exp_detects_a_sign_flip_in_odd_characteristic() {
    // over F_3 the x-image carries genuine signs; the correct map verifies
    let algebra = r#"{"asanuma": {"p": 3, "m": 1, "e": 2, "s": 2}}"#;
    let good = format!(
        r#"{{"algebra": {algebra}, "images": {{
            "t": "t + y*U",
            "x": "x + 2*U + t^3*y^2*U^3 + 2*y^5*U^6"
        }}}}"#
    );
    let out = run(&["check-exp", "--map", &good]);
    assert_eq!(out.status.code(), Some(0));

    // flipping 2*U to U (a sign flip mod 3) must refute
    let flipped = format!(
        r#"{{"algebra": {algebra}, "images": {{
            "t": "t + y*U",
            "x": "x + U + t^3*y^2*U^3 + 2*y^5*U^6"
        }}}}"#
    );
    let out = run(&["check-exp", "--map", &flipped]);
    assert_eq!(out.status.code(), Some(1));
    let json = stdout_json(&out);
    assert_eq!(json["payload"]["status"], "refuted");
    assert!(json["payload"]["failing_axiom"].is_string());
}

#[test]
fn gr_prints_the_graded_relation() {
    let out = run(&["gr", "--algebra", A223, "--weights", PROP_WEIGHTS]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["payload"]["gr_relation"], "t^6 + z^4 + x^2*y");
    assert_eq!(json["payload"]["homogeneous"], false);
    assert_eq!(json["payload"]["weights"]["y"], 12);
}

#[test]
fn normalize_reduces_through_the_relation() {
    let out = run(&["normalize", "--algebra", A223, "--poly", "x^2*y + z^4 + t^6"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["payload"]["normal_form"], "t");
    assert_eq!(json["payload"]["y_free"], true);
}

#[test]
fn count_points_agrees_between_methods() {
    let out = run(&["count-points", "--asanuma", "p=2,m=2,e=2,s=3", "--q", "4", "--jobs", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["payload"]["count"], 64);
    assert_eq!(json["payload"]["methods"]["brute"], 64);
    assert_eq!(json["payload"]["methods"]["stratified"], 64);
    assert_eq!(json["payload"]["agreement"], true);
}

#[test]
fn count_points_batch_mode() {
    let batch = r#"[
        {"asanuma": {"p": 2, "m": 2, "e": 2, "s": 3}, "q": 2},
        {"asanuma": {"p": 3, "m": 2, "e": 2, "s": 2}, "q": 3}
    ]"#;
    let out = run(&["count-points", "--batch", batch]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["payload"]["all_agree"], true);
    assert_eq!(json["payload"]["entries"][0]["count"], 8);
    assert_eq!(json["payload"]["entries"][1]["count"], 27);
}

#[test]
fn invariants_support_weighted_bounds() {
    let map = format!(
        r#"{{"algebra": {A223}, "images": {{
            "t": "t + x^2*U",
            "y": "y + U + t^4*x^2*U^2 + t^2*x^6*U^4 + x^10*U^6"
        }}}}"#
    );
    let weights = r#"{"weights": {"x": 1, "z": 3, "t": 2}, "derive_y": true}"#;
    let out = run(&[
        "invariants", "--map", &map, "--weights", weights, "--degree-bound", "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["payload"]["degree_measure"], "weighted");
    assert_eq!(json["payload"]["y_free"], true);
}

#[test]
fn degree_and_lead_use_the_grading() {
    let out = run(&["degree", "--algebra", A223, "--weights", PROP_WEIGHTS, "--poly", "z^4 + t"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["payload"]["weight_degree"], 12);
    let out = run(&["lead", "--algebra", A223, "--weights", PROP_WEIGHTS, "--poly", "z^4 + t"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["payload"]["leading_form"], "z^4");
}

#[test]
fn induce_gr_reports_the_u_weight() {
    let map = format!(
        r#"{{"algebra": {A223}, "images": {{
            "t": "t + x^2*U",
            "y": "y + U + t^4*x^2*U^2 + t^2*x^6*U^4 + x^10*U^6"
        }}}}"#
    );
    let out = run(&["induce-gr", "--map", &map, "--weights", PROP_WEIGHTS]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["payload"]["u_weight"], -2);
    assert_eq!(json["payload"]["images"]["y"], "x^10*U^6 + x^6*t^2*U^4 + x^2*t^4*U^2 + y");
}

#[test]
fn search_finds_nothing_outside_the_family() {
    let template = r#"{"terms": [
        {"generator": "t", "u_power": 1, "monomial": "1"},
        {"generator": "t", "u_power": 1, "monomial": "z"}
    ]}"#;
    let out = run(&["search", "--algebra", A223, "--template", template]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["payload"]["count"], 0);
    assert_eq!(json["payload"]["candidates"], "4");
}

#[test]
fn derksen_recovers_translation_generators() {
    let out = run(&["derksen", "--translations", "3", "--p", "2", "--degree-bound", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let json = stdout_json(&out);
    assert_eq!(json["payload"]["recovers_all"], true);
}

#[test]
fn verify_iso_exit_codes() {
    let ring = r#"{"p": 5, "vars": ["X", "Y"]}"#;
    let ok = run(&[
        "verify-iso",
        "--source", ring,
        "--target", ring,
        "--fwd", r#"{"images": {"X": "X + Y^2"}}"#,
        "--bwd", r#"{"images": {"X": "X - Y^2"}}"#,
    ]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(stdout_json(&ok)["payload"]["isomorphism_pair"], true);

    let bad = run(&[
        "verify-iso",
        "--source", ring,
        "--target", ring,
        "--fwd", r#"{"images": {"X": "X + Y^2"}}"#,
        "--bwd", r#"{"images": {"X": "X + Y^2"}}"#,
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(stdout_json(&bad)["payload"]["isomorphism_pair"], false);
}

#[test]
fn singular_verdicts_over_extensions() {
    let out = run(&[
        "singular",
        "--p", "2",
        "--vars", "z,t",
        "--poly", "z^2 + t^3 + 1",
        "--point", "z=1,t=0",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["payload"]["verdict"], "singular");

    // same point read inside F_4
    let out = run(&[
        "singular",
        "--p", "2",
        "--q", "4",
        "--vars", "z,t",
        "--poly", "z^2 + t^3 + 1",
        "--point", "z=1,t=w",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["payload"]["verdict"], "smooth_at_point");
}

#[test]
fn smooth_certificate_and_shape_guard() {
    let out = run(&["smooth", "--asanuma", "p=3,m=2,e=2,s=2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["payload"]["dt"], "1");

    // the graded relation is not of the right shape: input error
    let b = r#"{"p": 2, "vars": ["x","y","z","t"], "relation": "x^2*y + z^4 + t^6", "rule_monomial": "x^2*y"}"#;
    let out = run(&["smooth", "--algebra", b]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(run(&["normalize", "--poly", "x"]).status.code(), Some(2));
    assert_eq!(run(&["normalize", "--algebra"]).status.code(), Some(2));
}

#[test]
fn reports_are_deterministic() {
    let args = ["count-points", "--asanuma", "p=2,m=2,e=2,s=3", "--q", "4"];
    let first = run(&args);
    let second = run(&args);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn inline_and_file_inputs_hash_identically() {
    let path = write_fixture("a223-hash.json", A223);
    let from_file = run(&["normalize", "--algebra", &path, "--poly", "y"]);
    let inline = run(&["normalize", "--algebra", A223, "--poly", "y"]);
    let a = stdout_json(&from_file);
    let b = stdout_json(&inline);
    assert_eq!(a["inputs"]["algebra"], b["inputs"]["algebra"]);
    assert_eq!(a["payload"], b["payload"]);
}
