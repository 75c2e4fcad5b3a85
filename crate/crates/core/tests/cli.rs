use std::io::Write as _;
use std::path::PathBuf;

use rbmltt::cli::{main_with, EXIT_FAIL, EXIT_OK, EXIT_USAGE};

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("corpus")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut full = vec!["rbmltt"];
    full.extend_from_slice(args);
    let code = main_with(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn scratch(src: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".rbm").tempfile().unwrap();
    f.write_all(src.as_bytes()).unwrap();
    f
}

#[test]
fn check_prints_signature_with_bound() {
    let (code, out, _) = run(&["check", &corpus("sum.rbm")]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("sum : (n:Nat) ->[0] Vec Nat n ->[3*n+2] Nat ✓"), "{out}");
}

#[test]
fn check_whole_corpus() {
    let files: Vec<String> = ["sum.rbm", "map.rbm", "reverse.rbm", "basics.rbm"].map(corpus).into();
    let mut args = vec!["check"];
    args.extend(files.iter().map(String::as_str));
    let (code, out, err) = run(&args);
    assert_eq!(code, EXIT_OK, "{out}{err}");
}

#[test]
fn run_reports_value_and_cost() {
    let (code, out, _) = run(&["run", &corpus("sum.rbm"), "sum", "2", "[1, 2]"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "3 (cost 7)");
}

#[test]
fn run_trace_lists_ledger() {
    let (code, out, _) = run(&["--trace", "run", &corpus("sum.rbm"), "sum", "2", "[1, 2]"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("vecrec"), "{out}");
    assert!(out.contains("add"), "{out}");
}

#[test]
fn run_rejects_ill_typed_argument() {
    let (code, _, _) = run(&["run", &corpus("sum.rbm"), "sum", "3", "[1, 2]"]);
    assert_eq!(code, EXIT_FAIL);
}

#[test]
fn audit_passes_and_emits_json() {
    let (code, out, _) = run(&["--json", "audit", &corpus("sum.rbm"), "--sizes", "0..8"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let text = v.to_string();
    assert!(text.contains("\"measured\""), "{text}");
}

#[test]
fn empty_size_list_is_a_usage_error() {
    let (code, _, _) = run(&["audit", &corpus("sum.rbm"), "--sizes", ""]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn too_tight_declaration_fails_check() {
    let f = scratch(
        "def sum : (n : Nat) ->[0] (v : Vec Nat n) ->[2*n + 1] Nat := \
         fun n v => vecrec (fun m w => Nat) v { nil => zero; cons m a w ih => add a ih }",
    );
    let (code, out, _) = run(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL, "{out}");
}

#[test]
fn json_check_output_parses_on_failure() {
    let f = scratch("def bad : Nat := zero zero");
    let (code, out, _) = run(&["--json", "check", f.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["errors"].as_u64().is_some_and(|n| n > 0), "{v}");
}

#[test]
fn missing_file_is_a_usage_error() {
    let (code, _, _) = run(&["check", "/nonexistent/nope.rbm"]);
    assert_eq!(code, EXIT_USAGE);
}

#[test]
fn metatheory_small_corpus_passes() {
    let (code, out, _) = run(&["metatheory", "--corpus-size", "200", "--substitution-pairs", "50"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn metatheory_detects_mutation() {
    let (code, out, _) = run(&["metatheory", "--corpus-size", "200", "--substitution-pairs", "20", "--mutation", "unary-add"]);
    assert_eq!(code, EXIT_FAIL, "{out}");
}

#[test]
fn fmt_output_reparses() {
    let (code, out, _) = run(&["fmt", &corpus("basics.rbm")]);
    assert_eq!(code, EXIT_OK);
    let f = scratch(&out);
    let (code, again, _) = run(&["fmt", f.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, again);
}

#[test]
fn cost_model_flag_changes_run_cost() {
    let f = scratch("delta_vecrec = 0\n");
    let (code, out, _) = run(&["--cost-model", f.path().to_str().unwrap(), "run", &corpus("sum.rbm"), "sum", "2", "[1, 2]"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "3 (cost 4)");
}

#[test]
fn costlier_model_breaks_declared_bound() {
    let f = scratch("delta_add = 5\n");
    let (code, out, _) = run(&["--cost-model", f.path().to_str().unwrap(), "check", &corpus("sum.rbm")]);
    assert_eq!(code, EXIT_FAIL, "{out}");
}

#[test]
fn zero_ary_value_costs_nothing() {
    let (code, out, _) = run(&["run", &corpus("basics.rbm"), "two"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.trim(), "2 (cost 0)");
}

#[test]
fn trace_total_matches_cost() {
    let (code, out, _) = run(&["--json", "--trace", "run", &corpus("sum.rbm"), "sum", "3", "[4, 5, 6]"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["cost"], v["ledger"]["total"], "{v}");
    assert_eq!(v["cost"], serde_json::json!(10));
}

#[test]
fn empty_file_checks_silently() {
    let f = scratch("");
    let (code, out, _) = run(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty(), "{out}");
}

#[test]
fn box_budget_violation_is_reported() {
    let f = scratch("def b : Box[0] Nat := box[0] (add 1 1)");
    let (code, out, _) = run(&["check", f.path().to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
    assert!(out.contains("E-BOX-BUDGET"), "{out}");
}
