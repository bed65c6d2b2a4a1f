use cubal_cli::{dispatch, parse_document, serialize_document, Outcome};
use proptest::prelude::*;
use std::path::PathBuf;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn run(args: &[&str]) -> Outcome {
    dispatch(&args.iter().map(|s| s.to_string()).collect::<Vec<_>>())
}

fn report(out: &Outcome) -> serde_json::Value {
    serde_json::from_str(&out.stdout).expect("stdout is a JSON report")
}

#[test]
fn homology_of_projective_plane_like_complex() {
    let path = fixture("rp2-like.json");
    let out = run(&["homology", path.to_str().unwrap(), "--degree", "1"]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    let rep = report(&out);
    assert_eq!(rep["status"], "pass");
    assert_eq!(rep["result"]["invariant_factors"], serde_json::json!(["2"]));
    assert_eq!(rep["result"]["free_rank"], serde_json::json!(0));

    let out0 = run(&["homology", path.to_str().unwrap(), "--degree", "0"]);
    let rep0 = report(&out0);
    assert_eq!(rep0["result"]["free_rank"], serde_json::json!(1));
    assert_eq!(rep0["result"]["invariant_factors"], serde_json::json!([]));

    let out2 = run(&["homology", path.to_str().unwrap(), "--degree", "2"]);
    let rep2 = report(&out2);
    assert_eq!(rep2["result"]["description"], "0");
}

#[test]
fn invalid_chain_exits_one() {
    let out = run(&["homology", fixture("invalid-chain.json").to_str().unwrap(), "--degree", "0"]);
    assert_eq!(out.code, 1);
    let rep = report(&out);
    assert_eq!(rep["status"], "fail");
    assert_eq!(rep["violations"][0]["law"], "dd_zero");
}

#[test]
fn malformed_file_exits_two() {
    let out = run(&["homology", fixture("malformed.json").to_str().unwrap(), "--degree", "0"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("syntax error"), "stderr: {}", out.stderr);
}

#[test]
fn missing_file_exits_two() {
    let out = run(&["laws", "/no/such/file.json"]);
    assert_eq!(out.code, 2);
}

#[test]
fn unknown_subcommand_exits_two() {
    let out = run(&["frobnicate", "x.json"]);
    assert_eq!(out.code, 2);
}

#[test]
fn unknown_field_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.json");
    std::fs::write(&path, r#"{"kind":"group","generators":1,"relations":[],"extra":1}"#).unwrap();
    let out = run(&["homology", path.to_str().unwrap(), "--degree", "0"]);
    assert_eq!(out.code, 2);
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("homology"));
}

#[test]
fn laws_of_constant_bundle_pass() {
    let out = run(&["laws", fixture("constant-bundle.json").to_str().unwrap()]);
    assert_eq!(out.code, 0, "stderr: {}{}", out.stderr, out.stdout);
    assert_eq!(report(&out)["status"], "pass");
}

#[test]
fn corrupted_bundle_fails_laws() {
    let text = std::fs::read_to_string(fixture("constant-bundle.json")).unwrap();
    let broken = text.replace("\"conn:1:1\": [[\"1\"]]", "\"conn:1:1\": [[\"3\"]]");
    assert_ne!(text, broken);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, broken).unwrap();
    let out = run(&["laws", path.to_str().unwrap()]);
    assert_eq!(out.code, 1);
    assert_eq!(report(&out)["status"], "fail");
}

#[test]
fn snf_reports_invariant_factors() {
    let out = run(&["snf", fixture("snf-example.json").to_str().unwrap()]);
    assert_eq!(out.code, 0);
    let rep = report(&out);
    assert_eq!(rep["result"]["invariant_factors"], serde_json::json!(["2", "4"]));
}

#[test]
fn nerve_normalize_loop_recovers_homology() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("bundle.json");
    let chain = dir.path().join("back.json");

    let out = run(&[
        "nerve",
        fixture("rp2-like.json").to_str().unwrap(),
        "--max-dim",
        "2",
        "-o",
        bundle.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);

    let out = run(&["laws", bundle.to_str().unwrap()]);
    assert_eq!(out.code, 0, "laws on the built nerve: {}", out.stdout);

    let out = run(&[
        "normalize",
        bundle.to_str().unwrap(),
        "-o",
        chain.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);

    let out = run(&["homology", chain.to_str().unwrap(), "--degree", "1"]);
    assert_eq!(out.code, 0);
    assert_eq!(report(&out)["result"]["invariant_factors"], serde_json::json!(["2"]));
}

#[test]
fn roundtrip_passes_on_fixture() {
    let out = run(&[
        "roundtrip",
        fixture("rp2-like.json").to_str().unwrap(),
        "--max-dim",
        "3",
    ]);
    assert_eq!(out.code, 0, "report: {}{}", out.stdout, out.stderr);
}

#[test]
fn roundtrip_rejects_undersized_truncation() {
    let out = run(&[
        "roundtrip",
        fixture("rp2-like.json").to_str().unwrap(),
        "--max-dim",
        "1",
    ]);
    assert_eq!(out.code, 2);
}

#[test]
fn crossed_conversions_compose() {
    let dir = tempfile::tempdir().unwrap();
    let crossed = dir.path().join("crossed.json");
    let chain = dir.path().join("chain.json");

    let out = run(&[
        "crossed",
        "beta",
        fixture("rp2-like.json").to_str().unwrap(),
        "-o",
        crossed.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);

    let out = run(&[
        "crossed",
        "alpha",
        crossed.to_str().unwrap(),
        "-o",
        chain.to_str().unwrap(),
    ]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);

    let out = run(&["homology", chain.to_str().unwrap(), "--degree", "1"]);
    assert_eq!(report(&out)["result"]["invariant_factors"], serde_json::json!(["2"]));
}

#[test]
fn crossed_alpha_on_checked_in_fixture() {
    let out = run(&["crossed", "alpha", fixture("crossed-example.json").to_str().unwrap()]);
    assert_eq!(out.code, 0, "stderr: {}", out.stderr);
    // Without -o the converted document itself is on stdout.
    let doc: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(doc["kind"], "chain");
    assert_eq!(doc["boundaries"]["1"], serde_json::json!([["2"]]));
}

#[test]
fn documents_serialize_byte_stably() {
    for name in [
        "rp2-like.json",
        "invalid-chain.json",
        "constant-bundle.json",
        "zmod6-group.json",
        "hom-example.json",
        "crossed-example.json",
    ] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let once = serialize_document(&parse_document(&text).unwrap());
        let twice = serialize_document(&parse_document(&once).unwrap());
        assert_eq!(once, twice, "canonical form of {name} must be a fixed point");
    }
}

#[test]
fn numeric_and_string_entries_agree() {
    let with_number = parse_document(r#"{"kind":"group","generators":1,"relations":[[6]]}"#).unwrap();
    let with_string = parse_document(r#"{"kind":"group","generators":1,"relations":[["6"]]}"#).unwrap();
    assert_eq!(serialize_document(&with_number), serialize_document(&with_string));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dispatch_never_panics_on_arbitrary_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..256)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("input.json");
        std::fs::write(&path, &bytes).unwrap();
        for args in [
            vec!["homology", path.to_str().unwrap(), "--degree", "1"],
            vec!["laws", path.to_str().unwrap()],
            vec!["snf", path.to_str().unwrap()],
        ] {
            let out = run(&args);
            prop_assert!((0..=2).contains(&out.code));
        }
    }

    #[test]
    fn dispatch_never_panics_on_json_shaped_input(text in "[\\{\\}\\[\\]:,\"a-z0-9 *.-]{0,160}") {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("input.json");
        std::fs::write(&path, &text).unwrap();
        let out = run(&["normalize", path.to_str().unwrap()]);
        prop_assert!((0..=2).contains(&out.code));
        let out = run(&["crossed", "alpha", path.to_str().unwrap()]);
        prop_assert!((0..=2).contains(&out.code));
    }
}
