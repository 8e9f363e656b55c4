//! End-to-end checks that every subcommand is a thin adapter: the exit code
//! and output of the binary must match the library verdict on the same
//! input, and emitted JSON must round-trip through the documented schemas.

use std::process::{Command, Output};

use medial_core::group::{in_sigma, oracle_in_sigma_k, GroupSpec, OperationSelector};
use medial_core::rewrite::{verify_trace, DerivationTrace, IdentitySet};
use medial_core::spectral::interchange_basis_decision;
use medial_core::term::parse_identity;
use medial_core::total_color::{is_representable, TotalColor};

fn medial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_medial"))
        .args(args)
        .output()
        .expect("binary should run")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("no exit code")
}

#[test]
fn check_matches_library_verdicts() {
    let cases = [
        ("(xy)(zt)=(xz)(yt)", "2,2,1,0,0,1"),
        ("xy=yx", "2,2,1,0,0,1"),
        ("x=x", "3,2,1,0,0,1"),
        ("(xy)z=(xz)y", "2,1,1,0,0,0"),
    ];
    for (identity, group) in cases {
        let out = medial(&["check", identity, "--variety", "sigma", "--group", group]);
        let e = parse_identity(identity).unwrap();
        let g = GroupSpec::parse(group).unwrap();
        let expected = if in_sigma(&e, &g) { 0 } else { 1 };
        assert_eq!(exit_code(&out), expected, "{identity} over {group}");
    }

    for (identity, k) in [("x(xy)=y", "2,4"), ("x(xy)=y", "1"), ("x(y(z(xy)))=z", "2")] {
        let out = medial(&["check", identity, "--k", k]);
        let e = parse_identity(identity).unwrap();
        let selector = OperationSelector::parse(k).unwrap();
        let expected = if oracle_in_sigma_k(&e, &selector) { 0 } else { 1 };
        assert_eq!(exit_code(&out), expected, "{identity} with K={k}");
    }

    // criterion on an unsupported selection is an error, not a verdict
    let out = medial(&["check", "x=x", "--k", "1,2", "--method", "criterion"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn parse_errors_exit_2() {
    assert_eq!(exit_code(&medial(&["check", "(xy", "--k", "2,4"])), 2);
    assert_eq!(exit_code(&medial(&["represent", "1,2,3"])), 2);
    assert_eq!(exit_code(&medial(&["basis-status", "--group", "2,2,1,0,1,0"])), 2);
    assert_eq!(exit_code(&medial(&["nonsense-subcommand"])), 2);
}

#[test]
fn derive_emits_a_verifiable_trace() {
    let out = medial(&["derive", "(((xy)z)t)u", "--swap", "LLR,R"]);
    assert_eq!(exit_code(&out), 0);
    let trace: DerivationTrace =
        serde_json::from_slice(&out.stdout).expect("trace JSON should parse");
    let verdict = verify_trace(&trace, &IdentitySet::mutation_laws());
    assert!(verdict.ok);
    assert_eq!(verdict.final_term.to_string(), "(((xy)u)t)z");

    // unequal colors are a domain error
    let out = medial(&["derive", "(xy)(zt)", "--swap", "LL,RL"]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn trace_files_round_trip_through_verify() {
    let out = medial(&["derive", "(ab)(cd)", "--swap", "LR,RL"]);
    assert_eq!(exit_code(&out), 0);
    let dir = std::env::temp_dir().join("medial-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("trace.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let out = medial(&["verify-trace", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["ok"], serde_json::json!(true));
    assert_eq!(report["final"], serde_json::json!("(ac)(bd)"));

    // tamper with the rule name: replay must fail with the step index
    let mut trace: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    trace["steps"][0]["rule"] = serde_json::json!("M4");
    std::fs::write(&path, serde_json::to_string(&trace).unwrap()).unwrap();
    let out = medial(&["verify-trace", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 1);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["failed_step"], serde_json::json!(0));
}

#[test]
fn represent_and_witness() {
    for tuple in ["0,0,0,1", "1,1,2,1", "0,1,0,2", "0,0,0,2"] {
        let out = medial(&["represent", tuple]);
        let q = TotalColor::parse(tuple).unwrap();
        assert_eq!(exit_code(&out), if is_representable(&q) { 0 } else { 1 }, "{tuple}");
    }
    let out = medial(&["represent", "1,1,2,1", "--witness"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("v1"), "witness should be printed: {text}");
}

#[test]
fn basis_status_json_matches_library() {
    for group in ["2,2,1,0,0,1", "6,6,1,0,0,1", "6,4,1,0,0,1", "4,2,1,1,2,1"] {
        let out = medial(&["basis-status", "--group", group]);
        let g = GroupSpec::parse(group).unwrap();
        let d = interchange_basis_decision(&g);
        assert_eq!(exit_code(&out), if d.verdict { 0 } else { 1 }, "{group}");
        let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(report["verdict"], serde_json::json!(d.verdict));
        assert_eq!(report["methods"]["congruence"], serde_json::json!(d.congruence));
        assert_eq!(report["methods"]["rank"], serde_json::json!(d.rank_full));
        match d.closed_form {
            Some(v) => assert_eq!(report["methods"]["closed_form"], serde_json::json!(v)),
            None => assert!(report["methods"]["closed_form"].is_null()),
        }
    }
}

#[test]
fn spectrum_reports_exact_determinant() {
    let out = medial(&["spectrum", "--s", "2,2", "--row", "-1,1,1,0"]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["determinant_exact"], serde_json::json!("-3"));
    assert_eq!(report["eigenvalues"].as_array().unwrap().len(), 4);
}

#[test]
fn model_check_table_file() {
    let dir = std::env::temp_dir().join("medial-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("proj2.txt");
    std::fs::write(&path, "2\n0 1\n0 1\n").unwrap();
    let table = path.to_str().unwrap();
    assert_eq!(exit_code(&medial(&["model-check", "--table", table, "x(xy)=y"])), 0);
    assert_eq!(exit_code(&medial(&["model-check", "--table", table, "(xy)(zt)=(ty)(zx)"])), 1);
}

#[test]
fn small_enumeration_reports() {
    let out = medial(&["enumerate", "--rank", "4", "--report", "interchange"]);
    assert_eq!(exit_code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    let out = medial(&["enumerate", "--rank", "5", "--report", "representability"]);
    assert_eq!(exit_code(&out), 0);
    let out = medial(&["enumerate", "--rank", "1", "--report", "closure"]);
    assert_eq!(exit_code(&out), 0);
}

#[test]
fn sigma_term_compress_color_coeffs_lambda() {
    let out = medial(&["sigma-term", "bba", "--var", "x"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "z3(z2(xz1))");
    assert_eq!(exit_code(&medial(&["sigma-term", "ab", "--var", "z2"])), 2);

    assert_eq!(exit_code(&medial(&["compress", "abbb"])), 0);
    assert_eq!(exit_code(&medial(&["compress", "aab"])), 1);
    assert_eq!(exit_code(&medial(&["compress", "abc"])), 2);

    let out = medial(&["color", "(xy)(zt)"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let leaves = report["leaves"].as_array().unwrap();
    assert_eq!(leaves.len(), 4);
    assert_eq!(leaves[0]["color"], serde_json::json!("0,0"));
    assert_eq!(leaves[1]["color"], serde_json::json!("1,1"));

    let out = medial(&["coeffs", "x(xy)"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["coefficients"]["x"]["1,0"], serde_json::json!("1"));
    assert_eq!(report["coefficients"]["x"]["1,1"], serde_json::json!("1"));
    assert_eq!(report["linear"], serde_json::json!(false));

    let out = medial(&["lambda", "(xy)(zt)"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["lambda"], serde_json::json!([0, 0, 2, 2]));
    assert_eq!(report["phi1"], serde_json::json!(1));
    assert_eq!(report["phi2"], serde_json::json!(2));
}

#[test]
fn quad_form_output_verifies() {
    let out = medial(&["quad-form", "(ab)((cd)e)"]);
    assert_eq!(exit_code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let trace: DerivationTrace = serde_json::from_value(report["trace"].clone()).unwrap();
    let verdict = verify_trace(&trace, &IdentitySet::mutation_laws());
    assert!(verdict.ok);
    assert_eq!(verdict.final_term.to_string(), report["result"].as_str().unwrap());

    // missing a color
    assert_eq!(exit_code(&medial(&["quad-form", "(xy)(zt)"])), 2);
}

#[test]
fn search_exit_codes() {
    assert_eq!(
        exit_code(&medial(&["search", "(xy)(zt)=(tz)(yx)", "--rules", "M", "--depth", "2"])),
        0
    );
    assert_eq!(exit_code(&medial(&["search", "xy=yx", "--rules", "M", "--depth", "4"])), 1);
}
