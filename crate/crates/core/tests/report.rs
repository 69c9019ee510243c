use contactgeo::report::{parse_spec, resolve_input, spec_hash, spec_of};
use contactgeo::{emit_report, registry, run, Command, Format, ReportDocument, RunConfig, RunError, Sampling, Verdict};
use tempfile::NamedTempFile;

fn cfg(input: &str, command: Command) -> RunConfig {
    RunConfig {
        sampling: Sampling {
            points: 8,
            vectors: 4,
            ..Sampling::default()
        },
        ..RunConfig::new(input, command)
    }
}

fn temp_spec(text: &str) -> NamedTempFile {
    let f = NamedTempFile::with_suffix(".json").unwrap();
    std::fs::write(f.path(), text).unwrap();
    f
}

const COSYMPLECTIC_R3: &str = r#"{
  "manifold": {"dimension": 3, "coordinates": ["a", "b", "c"], "metric": [["1","0","0"],["0","1","0"],["0","0","1"]]},
  "structure": {"phi": [["0","-1","0"],["1","0","0"],["0","0","0"]], "xi": ["0","0","1"], "eta": ["0","0","1"]}
}"#;

#[test]
fn json_report_round_trips() {
    let doc = run(&cfg("catalog:warped_s4", Command::Report)).unwrap();
    assert_eq!(doc.classifications.len(), 2);
    assert_eq!(doc.verifications.len(), registry().len());
    let text = emit_report(&doc, Format::Json);
    let back: ReportDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(back, doc);
    assert_eq!(emit_report(&back, Format::Json), text);
}

#[test]
fn markdown_has_one_row_per_identity() {
    let mut c = cfg("catalog:hopf_like_r5_to_r4", Command::Verify);
    c.identities = vec!["T3.6.*".into(), "O.*".into()];
    let doc = run(&c).unwrap();
    let md = emit_report(&doc, Format::Md);
    for r in &doc.verifications {
        let rows = md
            .lines()
            .filter(|l| l.starts_with(&format!("| {} |", r.identity)))
            .count();
        assert_eq!(rows, 1, "{}", r.identity);
    }
    assert_eq!(doc.verifications.len(), 8);
    assert!(md.contains(&format!("`{}`", doc.spec_sha256)));
}

#[test]
fn classify_of_a_plain_structure() {
    let spec = temp_spec(COSYMPLECTIC_R3);
    let doc = run(&cfg(spec.path().to_str().unwrap(), Command::Classify)).unwrap();
    assert_eq!(doc.classifications.len(), 1);
    assert_eq!(doc.classifications[0].target, "structure");
    assert!(doc.classifications[0]
        .reports
        .iter()
        .all(|r| r.verdict == Verdict::Holds));
    // The file and the catalog entry describe the same structure.
    let cat = resolve_input("catalog:cosymplectic_r3").unwrap();
    assert_eq!(doc.spec_sha256, cat.spec_sha256);
}

#[test]
fn verify_needs_a_submersion() {
    let err = run(&cfg("catalog:sasakian_r5", Command::Verify)).unwrap_err();
    assert!(matches!(err, RunError::Input(_)));
    assert_eq!(err.exit_code(), 1);
}

#[test]
fn input_errors_exit_one() {
    for input in ["catalog:nope", "/nonexistent/spec.json"] {
        let err = run(&cfg(input, Command::Classify)).unwrap_err();
        assert_eq!(err.exit_code(), 1, "{input}: {err}");
    }
    let mut c = cfg("catalog:warped_s4", Command::Verify);
    c.identities = vec!["bogus".into()];
    let err = run(&c).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("P2.1.deta"));
    let mut c = cfg("catalog:warped_s4", Command::Classify);
    c.sampling.tol = -1.0;
    assert_eq!(run(&c).unwrap_err().exit_code(), 1);
}

#[test]
fn schema_errors_exit_one() {
    let extra = COSYMPLECTIC_R3.replace("\"dimension\": 3,", "\"dimension\": 3, \"signature\": 1,");
    let err = parse_spec(&extra).unwrap_err();
    assert_eq!(err.exit_code(), 1);
    assert!(err.to_string().contains("signature"), "{err}");
    let bad_expr = COSYMPLECTIC_R3.replace("\"xi\": [\"0\",\"0\",\"1\"]", "\"xi\": [\"0\",\"0\",\"1 +\"]");
    assert_eq!(parse_spec(&bad_expr).unwrap_err().exit_code(), 1);
    assert_eq!(parse_spec("[1, 2]").unwrap_err().exit_code(), 1);
}

#[test]
fn invariant_violations_exit_two() {
    // φ = diag(1, 1, 0) is not an almost contact structure.
    let broken = COSYMPLECTIC_R3.replace(
        r#"[["0","-1","0"],["1","0","0"],["0","0","0"]]"#,
        r#"[["1","0","0"],["0","1","0"],["0","0","0"]]"#,
    );
    let spec = temp_spec(&broken);
    let err = run(&cfg(spec.path().to_str().unwrap(), Command::Classify)).unwrap_err();
    assert!(matches!(err, RunError::Invariant(_)), "{err}");
    assert_eq!(err.exit_code(), 2);
    let indefinite = COSYMPLECTIC_R3.replace(
        r#"[["1","0","0"],["0","1","0"],["0","0","1"]]"#,
        r#"[["1","0","0"],["0","-1","0"],["0","0","1"]]"#,
    );
    let spec2 = temp_spec(&indefinite);
    let err = run(&cfg(spec2.path().to_str().unwrap(), Command::Classify)).unwrap_err();
    assert_eq!(err.exit_code(), 2, "{err}");
}

#[test]
fn spec_hash_is_stable_under_reformatting() {
    let a = parse_spec(COSYMPLECTIC_R3).unwrap();
    let compact: String = COSYMPLECTIC_R3.split_whitespace().collect();
    let b = parse_spec(&compact).unwrap();
    assert_eq!(spec_hash(&a), spec_hash(&b));
    assert_eq!(spec_hash(&a).len(), 64);
}

#[test]
fn every_catalog_entry_exports_and_reparses() {
    for name in contactgeo::CATALOG_NAMES {
        let r = resolve_input(&format!("catalog:{name}")).unwrap();
        let text = serde_json::to_string_pretty(&spec_of(&r.object)).unwrap();
        let spec = temp_spec(&text);
        let again = resolve_input(spec.path().to_str().unwrap()).unwrap();
        assert_eq!(again.spec_sha256, r.spec_sha256, "{name}");
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let c = cfg("catalog:example31_kt3", Command::Report);
    let a = emit_report(&run(&c).unwrap(), Format::Json);
    let b = emit_report(&run(&c).unwrap(), Format::Json);
    assert_eq!(a, b);
}
