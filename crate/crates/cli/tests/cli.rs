//! End-to-end runs of the `qu0` binary. Every run writes a report, and
//! every report is validated against the published schema.

use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::OnceLock;
use std::time::Instant;

use serde_json::Value;

fn docs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs")
}

fn example(name: &str) -> PathBuf {
    docs().join("examples").join(name)
}

fn validator() -> &'static jsonschema::Validator {
    static V: OnceLock<jsonschema::Validator> = OnceLock::new();
    V.get_or_init(|| {
        let text = std::fs::read_to_string(docs().join("report.schema.json")).unwrap();
        let schema: Value = serde_json::from_str(&text).unwrap();
        jsonschema::validator_for(&schema).unwrap()
    })
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
    report: Value,
}

fn qu0(args: &[&str]) -> Run {
    let dir = tempfile::tempdir().unwrap();
    let report_path = dir.path().join("report.json");
    let out = Command::new(env!("CARGO_BIN_EXE_qu0"))
        .args(args)
        .arg("--report")
        .arg(&report_path)
        .output()
        .unwrap();
    let code = out.status.code().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let report: Value = match std::fs::read_to_string(&report_path) {
        Ok(t) => serde_json::from_str(&t).unwrap(),
        // clap rejects usage errors before any report exists
        Err(_) => Value::Null,
    };
    if !report.is_null() {
        let errors: Vec<String> = validator()
            .iter_errors(&report)
            .map(|e| format!("{e} at {}", e.instance_path))
            .collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}\n{report:#}");
        assert_eq!(report["exit_code"], code, "{args:?}");
    }
    Run {
        code,
        stdout,
        stderr,
        report,
    }
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

// ---- check ----

#[test]
fn a5_script_is_accepted() {
    let r = qu0(&["check", example("a5.qu0").to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert!(r.stdout.contains("proof vars_defined: accepted"));
    assert_eq!(r.report["status"], "pass");
    assert_eq!(r.report["proofs"][0]["accepted"], true);
}

#[test]
fn taut_step_needs_extended_mode() {
    let path = example("taut.qu0");
    let r = qu0(&["check", path.to_str().unwrap()]);
    assert_eq!(r.code, 1);
    assert!(
        r.stdout.contains("extended-mode rule in kernel mode"),
        "{}",
        r.stdout
    );
    let d = &r.report["diagnostics"][0];
    assert_eq!(d["location"]["line"], 6);
    assert_eq!(d["location"]["step"], 1);
    assert!(d["message"]
        .as_str()
        .unwrap()
        .contains("extended-mode rule in kernel mode"));

    let r = qu0(&["check", "--extended", path.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let trusted = &r.report["proofs"][0]["trusted"];
    assert_eq!(trusted[0]["rule"], "taut");
}

#[test]
fn tactic_lemma1_for_c_checks() {
    let dir = tempfile::tempdir().unwrap();
    let emitted = dir.path().join("lemma1.qu0");
    let r = qu0(&[
        "tactic",
        "lemma1",
        "c_i",
        "--emit",
        emitted.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}{}", r.stdout, r.stderr);
    assert_eq!(r.report["tactic"]["accepted"], true);
    let r = qu0(&["check", emitted.to_str().unwrap()]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("1 of 1 proofs accepted"));
}

#[test]
fn worked_examples_check() {
    for (name, extended) in [
        ("rules.qu0", false),
        ("odefined.qu0", false),
        ("taut.qu0", true),
    ] {
        let path = example(name);
        let mut args = vec!["check", path.to_str().unwrap()];
        if extended {
            args.push("--extended");
        }
        let r = qu0(&args);
        assert_eq!(r.code, 0, "{name}: {}", r.stdout);
    }
}

#[test]
fn rejection_points_at_the_step_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        &dir,
        "bad.qu0",
        "theory t\nconst c : i\n\nproof wrong : \"def(c_i)\"\n  1. \"def(c_i)\"  axiom A5 {x := x_i}\nqed 1\n",
    );
    let r = qu0(&["check", &path]);
    assert_eq!(r.code, 1);
    assert_eq!(r.report["diagnostics"][0]["location"]["line"], 5);
    assert_eq!(r.report["diagnostics"][0]["location"]["proof"], "wrong");
}

#[test]
fn theorem_section_rejections_map_to_the_source_proof() {
    let dir = tempfile::tempdir().unwrap();
    // `em` uses a derived step, so in kernel mode it is rejected on its own
    // and again inside the theorem section of the proof citing it
    let path = write_temp(
        &dir,
        "import.qu0",
        "theory t\nconst q : o\n\nproof em : \"q_o \\/ ~q_o\"\n  1. \"q_o \\/ ~q_o\"  derived taut\nqed 1\n\nproof use [hyps: \"q_o\"] : \"q_o \\/ ~q_o\"\n  1. \"q_o \\/ ~q_o\"  thm em.1\nqed 1\n",
    );
    let r = qu0(&["check", &path]);
    assert_eq!(r.code, 1);
    let diags = r.report["diagnostics"].as_array().unwrap();
    assert_eq!(diags.len(), 2);
    let loc = &diags[1]["location"];
    assert_eq!(loc["proof"], "use");
    assert_eq!(loc["section"], "theorem");
    assert_eq!(loc["line"], 5);
}

#[test]
fn script_errors_exit_2_with_a_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_temp(
        &dir,
        "bad.qu0",
        "theory t\nproof p : \"T\"\n  1. \"T\" bogus\nqed 1\n",
    );
    let r = qu0(&["check", &path]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["status"], "error");
    assert_eq!(r.report["diagnostics"][0]["location"]["line"], 3);
    assert!(r.stderr.contains("line 3"));

    let r = qu0(&["check", "/nonexistent/script.qu0"]);
    assert_eq!(r.code, 2);
    assert_eq!(
        r.report["diagnostics"][0]["location"]["file"],
        "/nonexistent/script.qu0"
    );
}

#[test]
fn usage_errors_exit_2() {
    let r = qu0(&["frobnicate"]);
    assert_eq!(r.code, 2);
    let r = qu0(&["selfcheck", "--mutate", "A7"]);
    assert_eq!(r.code, 2);
    assert_eq!(r.report["command"], "selfcheck");
    let r = qu0(&["tactic", "odefined", "c_i"]);
    assert_eq!(r.code, 2);
}

// ---- eval ----

fn eval(wff: &str) -> Run {
    qu0(&["eval", example("model.json").to_str().unwrap(), wff])
}

#[test]
fn eval_bottom_is_undefined() {
    let r = eval("bot_i");
    assert_eq!((r.code, r.stdout.as_str()), (0, "undefined\n"));
    assert_eq!(r.report["eval"]["defined"], false);
    assert!(r.report["eval"].get("value").is_none());
}

#[test]
fn eval_definedness_of_bottom_is_false() {
    let r = eval("def(bot_i)");
    assert_eq!((r.code, r.stdout.as_str()), (0, "F\n"));
    assert_eq!(r.report["eval"]["value"], "F");
}

#[test]
fn eval_truth() {
    assert_eq!(eval("T").stdout, "T\n");
}

#[test]
fn eval_against_the_model_tables() {
    // s = {a -> b}, c = a, p = {a -> T, b -> F}
    for (wff, want) in [
        ("s_(ii) c_i", "defined: b\n"),
        ("s_(ii) [s_(ii) c_i]", "undefined\n"),
        ("p_(oi) [s_(ii) c_i]", "F\n"),
        ("p_(oi) [s_(ii) [s_(ii) c_i]]", "F\n"),
        ("I x_i. p_(oi) x", "defined: a\n"),
        ("I x_i. ~[p_(oi) x]", "defined: b\n"),
        ("I x_i. x_i = x_i", "undefined\n"),
        ("s_(ii)", "defined: {a -> b}\n"),
        ("exists x_i. p_(oi) x", "T\n"),
        ("forall x_i. p_(oi) x", "F\n"),
    ] {
        assert_eq!(eval(wff).stdout, want, "{wff}");
    }
}

#[test]
fn eval_rejects_open_and_ill_typed_input() {
    assert_eq!(eval("x_i").code, 2);
    assert_eq!(eval("p_(oi) p_(oi)").code, 2);
    let dir = tempfile::tempdir().unwrap();
    let m = write_temp(
        &dir,
        "m.json",
        r#"{"base": ["a"], "types": {"c": "i"}, "constants": {"c": "z"}}"#,
    );
    assert_eq!(qu0(&["eval", &m, "c_i"]).code, 2);
}

#[test]
fn eval_respects_the_cap() {
    let r = qu0(&[
        "--cap",
        "3",
        "eval",
        example("model.json").to_str().unwrap(),
        "forall x_(ii). T",
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("cap"), "{}", r.stderr);
}

// ---- validity ----

#[test]
fn leibniz_instance_is_valid_up_to_two() {
    let r = qu0(&[
        "validity",
        "[x_i = y_i] => [h_(oi) x_i = h_(oi) y_i]",
        "--max-base",
        "2",
    ]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    assert!(r.stdout.contains("1 to 2 individuals"));
    assert_eq!(r.report["validity"]["valid"], true);
}

#[test]
fn falsity_has_a_one_element_counter_model() {
    let r = qu0(&["validity", "F"]);
    assert_eq!(r.code, 1);
    assert_eq!(
        r.report["validity"]["counter_model"]["base"],
        serde_json::json!(["a"])
    );
}

#[test]
fn variables_are_defined() {
    assert_eq!(qu0(&["validity", "def(x_i)"]).code, 0);
}

#[test]
fn counter_models_name_constants_and_variables() {
    let r = qu0(&["validity", "p_(oi) c_i"]);
    assert_eq!(r.code, 1);
    let cm = &r.report["validity"]["counter_model"];
    let names: Vec<&str> = cm["constants"]
        .as_array()
        .unwrap()
        .iter()
        .map(|b| b["name"].as_str().unwrap())
        .collect();
    assert_eq!(names, ["c", "p"]);

    // two distinct individuals are needed
    let r = qu0(&["validity", "x_i = y_i"]);
    assert_eq!(r.code, 1);
    let cm = &r.report["validity"]["counter_model"];
    assert_eq!(cm["base"].as_array().unwrap().len(), 2);
    assert_eq!(cm["assignment"].as_array().unwrap().len(), 2);
}

#[test]
fn validity_needs_type_o() {
    assert_eq!(qu0(&["validity", "c_i"]).code, 2);
}

// ---- selfcheck ----

#[test]
fn selfcheck_default_passes() {
    let r = qu0(&["selfcheck"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let rows = r.report["criteria"].as_array().unwrap();
    assert_eq!(rows.len(), 8);
    assert!(rows.iter().all(|c| c["passed"] == true));
}

#[test]
fn selfcheck_a9_mutation_fails_with_a_counter_model() {
    let r = qu0(&["selfcheck", "--mutate", "A9", "--only", "1,8"]);
    assert_eq!(r.code, 1, "{}", r.stdout);
    let msg = r.report["diagnostics"][0]["message"].as_str().unwrap();
    assert!(msg.contains("A9") && msg.contains("counter-model"), "{msg}");
}

#[test]
fn selfcheck_with_one_individual_passes() {
    let start = Instant::now();
    let r = qu0(&["selfcheck", "--iota-base", "1"]);
    eprintln!(
        "selfcheck --iota-base 1 took {:.1}s",
        start.elapsed().as_secs_f64()
    );
    assert_eq!(r.code, 0, "{}", r.stdout);
}

// ---- tactic ----

#[test]
fn tactics_print_checkable_scripts() {
    let r = qu0(&["tactic", "odefined", "p_(oi) bot_i"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("# kernel check: accepted"));
    assert!(
        r.stdout.contains("proof odefined : \"def(p_(oi) bot_i)\""),
        "{}",
        r.stdout
    );
    assert_eq!(r.report["tactic"]["steps"], 1);
}
