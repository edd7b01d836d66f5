use std::io::Write;
use std::process::Command;

use serde_json::Value;

const SCHEMA: &str = include_str!(concat!(
    env!("CARGO_MANIFEST_DIR"),
    "/schema/certificate.schema.json"
));

fn run(args: &[&str]) -> (Value, String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_doubleplane"))
        .args(args)
        .output()
        .expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 stdout");
    let stderr = String::from_utf8(out.stderr).expect("utf-8 stderr");
    let code = out.status.code().expect("exit code");
    let doc = if stdout.trim_start().starts_with('{') {
        serde_json::from_str(&stdout).expect("stdout parses as JSON")
    } else {
        Value::String(stdout)
    };
    (doc, stderr, code)
}

fn assert_valid(doc: &Value) {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).expect("schema compiles");
    if !validator.is_valid(doc) {
        let errs: Vec<String> = validator
            .iter_errors(doc)
            .map(|e| format!("{e} at {}", e.instance_path))
            .collect();
        panic!("schema violations: {errs:#?}\ndocument: {doc:#}");
    }
}

#[test]
fn tangency_document_validates() {
    let (doc, _, code) = run(&[
        "check-tangency",
        "--B",
        "x*z - y^2",
        "--C",
        "z",
        "--field",
        "F13",
    ]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    let result = &doc["result"];
    assert_eq!(result["kind"], "tangency");
    assert_eq!(result["total"], 2);
    assert_eq!(result["all_even"], true);
    assert_eq!(result["records"][0]["order"], 2);
}

#[test]
fn secant_line_gives_two_transversal_records() {
    let (doc, _, code) = run(&[
        "check-tangency",
        "--B",
        "x*z - y^2",
        "--C",
        "y",
        "--field",
        "F13",
    ]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    let records = doc["result"]["records"].as_array().unwrap();
    assert_eq!(records.len(), 2);
    for r in records {
        assert_eq!(r["order"], 1);
        assert_eq!(r["label"], "transversal");
    }
    assert_eq!(doc["result"]["all_even"], false);
}

#[test]
fn ulrich_verdict_over_f13_and_q() {
    let (doc, _, code) = run(&[
        "verify-ulrich",
        "--B",
        "x^4 - y^4 - z^4",
        "--C",
        "x^2 - y^2 - z^2",
        "--field",
        "F13",
    ]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    assert_eq!(doc["result"]["kind"], "ulrich");
    assert_eq!(doc["result"]["verdict"], "exists");
    assert_eq!(doc["result"]["d_sigma_d"], 4);
    assert_eq!(doc["result"]["genus_d"], 0);

    let (doc, _, code) = run(&[
        "verify-ulrich",
        "--B",
        "x^4 - y^4 - z^4",
        "--C",
        "x^2 - y^2 - z^2",
        "--field",
        "Q",
    ]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    assert_eq!(doc["result"]["kind"], "parity");
    assert_eq!(doc["result"]["verdict"], "exists");
    assert_eq!(doc["result"]["monte_carlo"], true);
    assert_eq!(doc["result"]["rational_contacts"].as_array().unwrap().len(), 4);
}

#[test]
fn split_test_exact_and_monte_carlo() {
    let (doc, _, code) = run(&[
        "split-test",
        "--B",
        "x*z - y^2",
        "--C",
        "z",
        "--field",
        "F13",
        "--mode",
        "exact",
    ]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    assert_eq!(doc["result"]["kind"], "split");
    assert_eq!(doc["result"]["mode"], "exact-parametrized");
    let t = doc["result"]["outcome"]["type"].as_str().unwrap();
    assert!(t == "rational-split" || t == "split-after-quadratic-constant-twist");

    let (doc, _, code) = run(&[
        "split-test",
        "--B",
        "x^4 - y^4 - z^4",
        "--C",
        "x^2 - y^2 - z^2",
        "--field",
        "F13",
        "--n",
        "10",
    ]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    assert_eq!(doc["result"]["mode"], "monte-carlo");
}

#[test]
fn construct_subcommands_produce_certified_bundles() {
    let (doc, _, code) = run(&["construct", "fermat", "--s", "2", "--field", "F13"]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    assert_eq!(doc["result"]["kind"], "instance");
    assert_eq!(doc["result"]["certificate"]["verdict"], "exists");
    assert_eq!(doc["result"]["certificate"]["d_sigma_d"], 4);
    assert_eq!(doc["result"]["construction"]["type"], "fermat");

    let (doc, _, code) = run(&[
        "construct",
        "tangent-line",
        "--B",
        "x*z - y^2",
        "--point",
        "1:0:0",
        "--field",
        "F13",
    ]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    assert_eq!(doc["result"]["construction"]["type"], "tangent-line");
    assert_eq!(doc["result"]["certificate"]["tangency"]["total"], 2);

    let (doc, _, code) = run(&[
        "construct",
        "squared",
        "--C",
        "x",
        "--field",
        "F13",
        "--seed",
        "1",
    ]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    assert_eq!(doc["result"]["construction"]["type"], "squared");
    assert_eq!(doc["result"]["s"], 1);
}

#[test]
fn hunt_document_validates_with_golden_counts() {
    let (doc, _, code) = run(&[
        "hunt-conics",
        "--B",
        "x^4 - y^4 - z^4",
        "--field",
        "F3",
    ]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    assert_eq!(doc["result"]["kind"], "hunt");
    assert_eq!(doc["result"]["conics"], 10);
    assert_eq!(doc["result"]["count"], 4);
}

#[test]
fn identical_requests_reproduce_bytes_up_to_timings() {
    let args = [
        "verify-ulrich",
        "--B",
        "x^4 - y^4 - z^4",
        "--C",
        "x^2 - y^2 - z^2",
        "--field",
        "F13",
        "--seed",
        "7",
    ];
    let (mut a, _, _) = run(&args);
    let (mut b, _, _) = run(&args);
    a.as_object_mut().unwrap().remove("timings");
    b.as_object_mut().unwrap().remove("timings");
    assert_eq!(
        serde_json::to_string_pretty(&a).unwrap(),
        serde_json::to_string_pretty(&b).unwrap()
    );
}

#[test]
fn exit_codes_grade_the_failure() {
    // Unparseable polynomial: input error.
    let (doc, _, code) = run(&["check-tangency", "--B", "x +* y", "--C", "z", "--field", "F13"]);
    assert_eq!(code, 2);
    assert_valid(&doc);
    assert_eq!(doc["error"]["class"], "input");

    // Bad field spec: input error.
    let (_, _, code) = run(&["check-tangency", "--B", "x", "--C", "z", "--field", "G13"]);
    assert_eq!(code, 2);

    // Odd s: precondition.
    let (doc, _, code) = run(&["construct", "fermat", "--s", "3", "--field", "F13"]);
    assert_eq!(code, 3);
    assert_valid(&doc);
    assert_eq!(doc["error"]["code"], "OddS");

    // Degree mismatch: precondition.
    let (doc, _, code) = run(&[
        "verify-ulrich",
        "--B",
        "x^4 - y^4 - z^4",
        "--C",
        "x",
        "--field",
        "F13",
    ]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["code"], "DegreeMismatch");

    // Singular branch curve: precondition.
    let (doc, _, code) = run(&[
        "check-tangency",
        "--B",
        "y^2*z - x^3",
        "--C",
        "z",
        "--field",
        "F13",
    ]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["code"], "BNotSmooth");

    // Enumeration guard: precondition.
    let (doc, _, code) = run(&["hunt-conics", "--B", "x^4 - y^4 - z^4", "--field", "F101"]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["code"], "FieldTooLarge");
}

#[test]
fn forms_file_names_resolve() {
    let mut file = tempfile::NamedTempFile::new().unwrap();
    writeln!(file, "branch = x*z - y^2").unwrap();
    writeln!(file, "section = z").unwrap();
    let path = file.path().to_str().unwrap();

    let (doc, _, code) = run(&[
        "check-tangency",
        "--B",
        "@branch",
        "--C",
        "@section",
        "--field",
        "F13",
        "--forms",
        path,
    ]);
    assert_eq!(code, 0);
    assert_eq!(doc["result"]["total"], 2);

    let (doc, _, code) = run(&[
        "check-tangency",
        "--B",
        "@missing",
        "--C",
        "@section",
        "--field",
        "F13",
        "--forms",
        path,
    ]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["class"], "input");
}

#[test]
fn text_format_is_human_readable() {
    let (doc, _, code) = run(&[
        "check-tangency",
        "--B",
        "x*z - y^2",
        "--C",
        "z",
        "--field",
        "F13",
        "--format",
        "text",
    ]);
    assert_eq!(code, 0);
    let text = doc.as_str().expect("text output");
    assert!(text.contains("all even: yes"));
    assert!(text.contains("simple-tangent"));

    let (_, stderr, code) = run(&[
        "construct",
        "fermat",
        "--s",
        "3",
        "--field",
        "F13",
        "--format",
        "text",
    ]);
    assert_eq!(code, 3);
    assert!(stderr.contains("s must be even"));
}

#[test]
fn extension_field_modulus_is_echoed() {
    let (doc, _, code) = run(&[
        "check-tangency",
        "--B",
        "x*z - y^2",
        "--C",
        "z",
        "--field",
        "F13^2",
    ]);
    assert_eq!(code, 0);
    assert_valid(&doc);
    assert_eq!(doc["field"]["spec"], "F13^2");
    assert_eq!(doc["field"]["characteristic"], 13);
    assert_eq!(doc["field"]["degree"], 2);
    assert!(doc["field"]["modulus"].is_string());
}
