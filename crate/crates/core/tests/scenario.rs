use dgla_core::pipelines::{parse_scenario, run_scenario, validate_scenario};
use dgla_core::Error;

const MINIMAL: &str = r#"{
  "cover": { "type": "p1" },
  "window": 4,
  "sheaves": { "E": { "line_bundle": 1 } },
  "checks": [ { "check": "cohomology", "sheaf": "E", "expect": [2, 0] } ]
}"#;

#[test]
fn minimal_cohomology_scenario() {
    let r = run_scenario(MINIMAL, "minimal", None).unwrap();
    assert!(r.passed());
    assert_eq!(r.schema, 1);
    assert_eq!(r.checks[0].result["dims"], serde_json::json!([2, 0]));
    assert_eq!(r.to_json(), run_scenario(MINIMAL, "minimal", None).unwrap().to_json());
}

#[test]
fn wrong_expectation_fails_the_verdict() {
    let text = MINIMAL.replace("[2, 0]", "[3, 0]");
    let r = run_scenario(&text, "wrong", None).unwrap();
    assert!(!r.passed());
    assert!(r.to_text().contains("[FAIL] #0 cohomology E"));
}

#[test]
fn parse_errors_carry_a_location() {
    let text = MINIMAL.replace(r#""window": 4,"#, r#""window": 4"#);
    match parse_scenario(&text) {
        Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (4, 3)),
        other => panic!("{other:?}"),
    }
    assert_eq!(parse_scenario("{").unwrap_err().exit_code(), 1);
}

#[test]
fn unknown_keys_and_checks_are_rejected() {
    let text = MINIMAL.replace(r#""window": 4,"#, r#""window": 4, "colour": "red","#);
    assert!(matches!(parse_scenario(&text), Err(Error::Parse { .. })));
    let text = MINIMAL.replace(r#""check": "cohomology""#, r#""check": "homology""#);
    assert!(matches!(validate_scenario(&text), Err(Error::UnknownCheck(c)) if c == "homology"));
}

#[test]
fn window_must_exceed_transition_degrees() {
    let text = MINIMAL.replace(r#""line_bundle": 1"#, r#""line_bundle": 3"#);
    assert!(matches!(validate_scenario(&text), Err(Error::InvalidInput(_))));
    let r = run_scenario(&text, "wide", Some(5)).unwrap();
    assert_eq!(r.window, 5);
}

#[test]
fn references_resolve_or_fail() {
    let text = r#"{
      "cover": { "type": "p1" }, "window": 4,
      "sheaves": { "A": { "sum": ["B"] }, "B": { "end": "A" } },
      "checks": []
    }"#;
    assert!(matches!(validate_scenario(text), Err(Error::InvalidInput(m)) if m.contains("itself")));
    let text = MINIMAL.replace(r#""sheaf": "E""#, r#""sheaf": "F""#);
    assert!(matches!(validate_scenario(&text), Err(Error::InvalidInput(_))));
    let text = MINIMAL.replace(r#", "sheaf": "E""#, "");
    assert!(matches!(validate_scenario(&text), Err(Error::InvalidInput(m)) if m.contains("sheaf")));
}

#[test]
fn explicit_transitions_and_finite_covers() {
    let text = r#"{
      "cover": { "type": "finite", "sets": 3, "edges": [[0, 1], [0, 2], [1, 2]], "triangles": [[0, 1, 2]] },
      "window": 2,
      "sheaves": {
        "T": { "transitions": { "rank": 2, "edges": [
          { "edge": [0, 1], "matrix": [["0", "1"], ["1", "0"]] },
          { "edge": [1, 2], "matrix": [["1", "0"], ["0", "1"]] },
          { "edge": [0, 2], "matrix": [["0", "1"], ["1", "0"]] }
        ] } }
      },
      "systems": { "U": { "sheaf": "T", "full": true } },
      "checks": [
        { "check": "cohomology", "sheaf": "T", "expect": [2, 0, 0] },
        { "check": "pair_eu", "system": "U" }
      ]
    }"#;
    let v = validate_scenario(text).unwrap();
    assert_eq!(v.sheaves, vec!["T"]);
    let r = run_scenario(text, "swap", None).unwrap();
    assert!(r.passed(), "{}", r.to_text());
}

#[test]
fn hypothesis_violation_propagates() {
    let text = r#"{
      "cover": { "type": "finite", "sets": 3, "edges": [[0, 1], [0, 2], [1, 2]] },
      "window": 2,
      "sheaves": { "O": { "trivial": 1 } },
      "systems": { "U": { "sheaf": "O", "full": true } },
      "checks": [ { "check": "pair_eu", "system": "U" } ]
    }"#;
    let e = run_scenario(text, "loop", None).unwrap_err();
    assert!(matches!(e, Error::HypothesisViolated(_)));
    assert_eq!(e.exit_code(), 2);
}
