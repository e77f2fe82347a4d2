use algebroid::algebroid::matrix;
use algebroid::cli::document::{parse, Document};
use algebroid::cli::{run, Outcome, EXIT_CHECK_FAILED, EXIT_INPUT_INVALID, EXIT_PASS, EXIT_PRECONDITION};
use algebroid::constructions::fixtures::{s3_embedding, standard_j};
use algebroid::constructions::{fixture, SUITE};
use algebroid::expr::Scalar;
use serde_json::Value;
use std::path::PathBuf;

fn cli(args: &[&str]) -> Outcome {
    let mut full = vec!["algebroid"];
    full.extend_from_slice(args);
    run(full)
}

fn schema() -> jsonschema::Validator {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/report-schema.json");
    let text = std::fs::read_to_string(path).expect("schema file");
    let schema: Value = serde_json::from_str(&text).expect("schema is json");
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("algebroid-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

/// Ambient R^4 over S^3 with the stereographic anchor, plus its projector.
fn s3_files() -> (PathBuf, PathBuf) {
    let pr = algebroid::constructions::fixtures::s3_restriction().unwrap();
    let chart = pr.algebroid.chart().clone();
    let pts = s3_embedding();
    let coords = chart.coords().to_vec();
    let lambda_inv =
        algebroid::expr::parse_with_coords("(1 + u1^2 + u2^2 + u3^2)^2/4", &coords).unwrap();
    let mut b = algebroid::algebroid::Algebroid::builder(chart, 4);
    for (a, pa) in pts.iter().enumerate() {
        b = b.anchor_row(a, coords.iter().map(|u| pa.diff(u).mul(&lambda_inv)).collect());
    }
    let ambient = Document {
        name: "s3_ambient".into(),
        algebroid: b.build().unwrap(),
        j: Some(standard_j(4).matrix().clone()),
        metric: Some(matrix::identity(4)),
        projector: None,
    };
    let doc = scratch("s3_ambient.alg");
    std::fs::write(&doc, ambient.emit()).unwrap();
    let proj = scratch("s3_projector.alg");
    let mut text = String::from("[projector]\n");
    for (k, row) in pr.projector.iter().enumerate() {
        let row: Vec<String> = row.iter().map(Scalar::to_string).collect();
        text.push_str(&format!("{} = {}\n", k + 1, row.join(", ")));
    }
    std::fs::write(&proj, text).unwrap();
    (doc, proj)
}

#[test]
fn every_subcommand_passes_on_some_fixture() {
    let (ambient, proj) = s3_files();
    let (ambient, proj) = (ambient.to_str().unwrap().to_string(), proj.to_str().unwrap().to_string());
    let runs: Vec<Vec<&str>> = vec![
        vec!["validate", "heis_j"],
        vec!["nijenhuis", "flat_r2"],
        vec!["nn-report", "heis_j"],
        vec!["matched-pair", "warped_r4"],
        vec!["levi-civita", "warped_r4", "--complex-frame"],
        vec!["curvature", "conformal_sphere_chart"],
        vec!["sectional", "conformal_sphere_chart", "--direction", "1, x"],
        vec!["kahler-report", "flat_r2"],
        vec!["chern", "conformal_sphere_chart", "--order", "1", "--source", "both"],
        vec!["second-fundamental", "heis_j"],
        vec!["identity-suite", "flat_r4"],
        vec!["prolong", "conformal_sphere_chart"],
        vec!["product", "flat_r2", "conformal_sphere_chart"],
        vec!["restrict", &ambient, "--projector", &proj],
        vec!["fixtures", "--list"],
        vec!["emit", "warped_r4"],
    ];
    let validator = schema();
    for args in runs {
        let out = cli(&args);
        assert_eq!(out.code, EXIT_PASS, "{args:?}: {}{}", out.stdout, out.stderr);
        let json: Value = serde_json::from_str(&out.stdout).expect("json report");
        let errors: Vec<String> = validator.iter_errors(&json).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{args:?}: {errors:?}");
        assert_eq!(json["command"], args[0]);
        assert_eq!(json["status"], "pass");
    }
}

#[test]
fn restrict_reports_flat_and_integrable() {
    let (ambient, proj) = s3_files();
    let out = cli(&["--samples", "10", "restrict", ambient.to_str().unwrap(), "--projector", proj.to_str().unwrap()]);
    let json: Value = serde_json::from_str(&out.stdout).unwrap();
    let flat = json["checks"].as_array().unwrap().iter().find(|c| c["name"] == "flatness_numeric").unwrap();
    assert_eq!(flat["status"], "numeric_pass");
    assert_eq!(flat["evaluated"], 10);
    assert_eq!(json["values"]["restricted_j_integrable"], true);
}

#[test]
fn text_format_and_failures_are_schema_valid() {
    let validator = schema();
    let out = cli(&["validate", "heis_broken"]);
    assert_eq!(out.code, EXIT_CHECK_FAILED);
    let json: Value = serde_json::from_str(&out.stdout).unwrap();
    assert!(validator.is_valid(&json));
    let jacobi = &json["checks"][2];
    assert_eq!(jacobi["status"], "fail");
    assert_eq!(jacobi["witness"]["value"], "-1");

    let text = cli(&["--format", "text", "nijenhuis", "heis_j"]);
    assert_eq!(text.code, EXIT_PASS);
    assert!(text.stdout.contains("integrable = false"));
    assert!(!text.stdout.contains('\u{1b}'));
}

#[test]
fn exit_code_contract() {
    assert_eq!(cli(&["validate", "no_such_fixture"]).code, EXIT_INPUT_INVALID);
    assert_eq!(cli(&["frobnicate", "flat_r2"]).code, EXIT_INPUT_INVALID);
    assert_eq!(cli(&["sectional", "flat_r2", "--direction", "1,2,3"]).code, EXIT_INPUT_INVALID);
    assert_eq!(cli(&["chern", "flat_r2", "--order", "0"]).code, EXIT_INPUT_INVALID);
    let bad = scratch("bad.alg");
    std::fs::write(&bad, "[chart]\ncoords = x\nrank = 2\n[anchor]\n1 = x +* 2\n").unwrap();
    let out = cli(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.code, EXIT_INPUT_INVALID);
    assert!(out.stderr.contains("line 5"), "{}", out.stderr);

    assert_eq!(cli(&["matched-pair", "heis_j"]).code, EXIT_PRECONDITION);
    assert_eq!(cli(&["nijenhuis", "heis_broken"]).code, EXIT_PRECONDITION);
    assert_eq!(cli(&["levi-civita", "heis_broken"]).code, EXIT_PRECONDITION);

    assert_eq!(cli(&["validate", "heis_broken"]).code, EXIT_CHECK_FAILED);
    assert_eq!(cli(&["identity-suite", "heis_j"]).code, EXIT_CHECK_FAILED);
}

#[test]
fn emitted_documents_reload_to_equal_algebroids() {
    for name in SUITE {
        let f = fixture(name).unwrap();
        let out = cli(&["--format", "text", "emit", name]);
        assert_eq!(out.code, EXIT_PASS);
        let path = scratch(&format!("{name}.alg"));
        std::fs::write(&path, &out.stdout).unwrap();
        let doc = parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(doc.algebroid.structure(), f.algebroid.structure(), "{name}");
        assert_eq!(doc.j.as_ref(), f.j.as_ref().map(|j| j.matrix()), "{name}");
        assert_eq!(doc.metric, f.metric, "{name}");
        let again = cli(&["validate", path.to_str().unwrap()]);
        assert_eq!(again.code, EXIT_PASS, "{name}");
    }
}

#[test]
fn reports_are_deterministic_for_a_seed() {
    for args in [
        ["--seed", "7", "identity-suite", "heis_j"],
        ["--seed", "7", "curvature", "warped_r4"],
        ["--seed", "7", "validate", "heis_broken"],
    ] {
        let a = cli(&args);
        let b = cli(&args);
        assert_eq!(a, b);
        assert!(!a.stdout.contains("timing_ms"));
    }
    let json: Value = serde_json::from_str(&cli(&["--seed", "9", "--samples", "3", "validate", "flat_r2"]).stdout).unwrap();
    assert_eq!(json["seed"], 9);
    assert_eq!(json["samples"], 3);
}
