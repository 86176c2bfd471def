use std::os::unix::fs::PermissionsExt;

use super::json::{from_json, to_json};
use super::*;
use crate::ltl::{evaluate, parse_ltl, LassoWord, LtlFormula};

fn p(s: &str) -> LtlFormula {
    parse_ltl(s).unwrap()
}

fn ctx(f: &str, inputs: &[&str], outputs: &[&str]) -> SpecContext {
    SpecContext::new(p(f), inputs.iter().copied(), outputs.iter().copied()).unwrap()
}

fn builtin(c: &SpecContext) -> SynthesisResult {
    synthesize_builtin(c, &BuiltinOptions::default()).unwrap()
}

/// Brute-force check over all short lasso words: every word compatible with
/// the machine satisfies (strategy) or violates (counterstrategy) the formula.
fn assert_by_enumeration(result: &SynthesisResult, c: &SpecContext, positions: usize) {
    let aps = c.variables();
    for w in LassoWord::enumerate(&aps, positions) {
        match result {
            SynthesisResult::Realizable(s) if s.is_compatible(&w) => {
                assert!(evaluate(&c.formula, &w).unwrap(), "strategy allows {w}")
            }
            SynthesisResult::Unrealizable(cs) if cs.is_compatible(&w) => {
                assert!(!evaluate(&c.formula, &w).unwrap(), "counterstrategy allows {w}")
            }
            _ => {}
        }
    }
}

#[test]
fn copying_the_input_needs_one_state() {
    let c = ctx("G (i <-> o)", &["i"], &["o"]);
    let r = builtin(&c);
    let SynthesisResult::Realizable(s) = &r else { panic!("expected realizable, got {r:?}") };
    assert_eq!(s.num_states(), 1);
    assert_eq!(s.step(0, 0), (0, 0));
    assert_eq!(s.step(0, 1), (0, 1));
    assert_by_enumeration(&r, &c, 4);
}

#[test]
fn predicting_the_next_input_is_unrealizable() {
    let c = ctx("G (o <-> X i)", &["i"], &["o"]);
    let r = builtin(&c);
    assert_eq!(r.verdict(), Verdict::Unrealizable);
    assert_by_enumeration(&r, &c, 4);
}

#[test]
fn pure_input_conditions_are_unrealizable() {
    let c = ctx("G i", &["i"], &["o"]);
    let r = builtin(&c);
    assert_eq!(r.verdict(), Verdict::Unrealizable);
    let SynthesisResult::Unrealizable(cs) = &r else { unreachable!() };
    assert_eq!(cs.outputs(), ["o".to_string()]);
}

#[test]
fn falsifying_an_assumption_can_be_realizable() {
    let c = ctx("!F (i1 && o1)", &["i1", "i2"], &["o1", "o2"]);
    let r = builtin(&c);
    assert_eq!(r.verdict(), Verdict::Realizable);
    assert_by_enumeration(&r, &c, 3);
}

#[test]
fn eventually_and_response_properties() {
    for (f, verdict) in [
        ("F o", Verdict::Realizable),
        ("G F o", Verdict::Realizable),
        ("G (i -> F o)", Verdict::Realizable),
        ("G (i -> X o) && G (!i -> X !o)", Verdict::Realizable),
        ("F G i -> G F o", Verdict::Realizable),
        ("G F i <-> G F o", Verdict::Realizable),
        ("G F o && F G !o", Verdict::Unrealizable),
        ("o U i", Verdict::Unrealizable),
    ] {
        let c = ctx(f, &["i"], &["o"]);
        let r = builtin(&c);
        assert_eq!(r.verdict(), verdict, "{f}");
        assert_by_enumeration(&r, &c, 3);
    }
}

#[test]
fn declared_but_unused_propositions_are_covered() {
    let c = ctx("G (i <-> o)", &["i", "j"], &["o", "p"]);
    let SynthesisResult::Realizable(s) = builtin(&c) else { panic!() };
    assert_eq!(s.inputs(), ["i", "j"]);
    assert_eq!(s.outputs(), ["o", "p"]);
    // `p` stays false, `j` is ignored
    for v in 0..4 {
        assert_eq!(s.step(0, v).1, v & 1);
    }
}

#[test]
fn too_many_propositions_give_unknown() {
    let options = BuiltinOptions { max_props: 2, ..Default::default() };
    let c = ctx("G (i <-> o) && F p", &["i"], &["o", "p"]);
    let r = synthesize_builtin(&c, &options).unwrap();
    assert_eq!(r.verdict(), Verdict::Unknown);
}

#[test]
fn exhausted_budget_gives_unknown() {
    let options = BuiltinOptions { node_budget: 1, ..Default::default() };
    let c = ctx("G (i -> X X o) && G (!i -> X X !o)", &["i"], &["o"]);
    assert_eq!(synthesize_builtin(&c, &options).unwrap().verdict(), Verdict::Unknown);
}

#[test]
fn verification_finds_violations() {
    let inputs = vec!["i".to_string()];
    let outputs = vec!["o".to_string()];
    let never = Strategy::constant_false(inputs.clone(), outputs.clone()).unwrap();
    let w = verify(&never, &p("F o")).unwrap().expect("constant false never sets o");
    assert!(!evaluate(&p("F o"), &w).unwrap());
    assert!(never.is_compatible(&w));
    assert!(verify(&never, &p("G !o")).unwrap().is_none());

    let copy = Strategy::new(inputs.clone(), outputs.clone(), 0, vec![vec![(0, 0), (0, 1)]]).unwrap();
    assert!(verify(&copy, &p("G (i <-> o)")).unwrap().is_none());
    assert!(verify(&copy, &p("G o")).unwrap().is_some());

    let always_on = Counterstrategy::new(inputs, outputs, 0, vec![1], vec![vec![0, 0]]).unwrap();
    assert!(verify_counterstrategy(&always_on, &p("F !i")).unwrap().is_none());
    let w = verify_counterstrategy(&always_on, &p("G (i -> o)")).unwrap().unwrap();
    assert!(evaluate(&p("G (i -> o)"), &w).unwrap());
}

#[test]
fn verification_rejects_unknown_propositions() {
    let s = Strategy::constant_false(vec!["i".into()], vec!["o".into()]).unwrap();
    assert!(matches!(verify(&s, &p("F q")), Err(SynthesisError::UnknownProp(q)) if q == "q"));
}

#[test]
fn json_round_trip() {
    for (f, outputs) in [("G (i <-> o)", &["o"][..]), ("G (o <-> X i)", &["o"][..]), ("G (i -> F o1) && G !o2", &["o1", "o2"][..])] {
        let c = ctx(f, &["i"], outputs);
        let r = builtin(&c);
        let text = to_json(&r);
        assert_eq!(from_json(&text).unwrap(), r, "{text}");
    }
    let unknown = SynthesisResult::Unknown("timeout".into());
    assert_eq!(from_json(&to_json(&unknown)).unwrap(), unknown);
}

#[test]
fn json_rejects_inconsistent_machines() {
    let head = r#""states": 1, "initial": 0, "inputs": ["i"], "outputs": ["o"]"#;
    let partial = format!(
        r#"{{"verdict": "realizable", {head}, "transitions": [
            {{"from": 0, "in-valuation": [], "out-valuation": [], "to": 0}}]}}"#
    );
    assert!(matches!(from_json(&partial), Err(SynthesisError::Format(_))));
    let two_emissions = format!(
        r#"{{"verdict": "unrealizable", {head}, "transitions": [
            {{"from": 0, "in-valuation": [], "out-valuation": [], "to": 0}},
            {{"from": 0, "in-valuation": ["i"], "out-valuation": ["o"], "to": 0}}]}}"#
    );
    assert!(matches!(from_json(&two_emissions), Err(SynthesisError::Format(_))));
    let stranger = format!(
        r#"{{"verdict": "realizable", {head}, "transitions": [
            {{"from": 0, "in-valuation": ["x"], "out-valuation": [], "to": 0}}]}}"#
    );
    assert!(matches!(from_json(&stranger), Err(SynthesisError::Format(_))));
    assert!(matches!(from_json("not json"), Err(SynthesisError::Format(_))));
}

/// Writes an executable shell script printing `stdout` and exiting with
/// `status`.
fn fake_tool(dir: &tempfile::TempDir, name: &str, stdout: &str, status: i32) -> String {
    let path = dir.path().join(name);
    let body = format!("#!/bin/sh\ncat <<'JSON'\n{stdout}\nJSON\nexit {status}\n");
    std::fs::write(&path, body).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn external_tool_results_are_checked() {
    let dir = tempfile::tempdir().unwrap();
    let c = ctx("G (i <-> o)", &["i"], &["o"]);
    let good = fake_tool(&dir, "good.sh", &to_json(&builtin(&c)), 0);
    let r = synthesize_external(&c, &good).unwrap();
    assert_eq!(r.verdict(), Verdict::Realizable);

    // a valid machine that does not satisfy the formula
    let never = Strategy::constant_false(vec!["i".into()], vec!["o".into()]).unwrap();
    let wrong = fake_tool(&dir, "wrong.sh", &to_json(&SynthesisResult::Realizable(never)), 0);
    let e = synthesize_external(&ctx("F o", &["i"], &["o"]), &wrong).unwrap_err();
    assert!(matches!(e, SynthesisError::Verification(_)), "{e}");

    let garbage = fake_tool(&dir, "garbage.sh", "{ \"verdict\": ", 0);
    assert!(matches!(synthesize_external(&c, &garbage), Err(SynthesisError::Format(_))));

    let failing = fake_tool(&dir, "failing.sh", "", 3);
    assert!(matches!(synthesize_external(&c, &failing), Err(SynthesisError::Process(_))));

    assert!(matches!(synthesize_external(&c, "   "), Err(SynthesisError::Process(_))));
}

#[test]
fn external_tool_receives_the_spec_file() {
    let dir = tempfile::tempdir().unwrap();
    let seen = dir.path().join("seen.spec");
    let path = dir.path().join("echo.sh");
    let body = format!("#!/bin/sh\ncp \"$2\" {}\necho '{{\"verdict\": \"unknown\", \"reason\": \"'$1'\"}}'\n", seen.display());
    std::fs::write(&path, body).unwrap();
    std::fs::set_permissions(&path, std::fs::Permissions::from_mode(0o755)).unwrap();
    let c = ctx("G (i -> F o)", &["i"], &["o"]);
    let r = synthesize_external(&c, &format!("{} flag", path.display())).unwrap();
    assert_eq!(r, SynthesisResult::Unknown("flag".into()));
    let text = std::fs::read_to_string(seen).unwrap();
    let parsed = crate::ltl::spec_file::parse_spec(&text).unwrap().context();
    assert_eq!(parsed, c);
}
