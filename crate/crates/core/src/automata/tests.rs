use std::collections::BTreeSet;

use super::*;
use crate::ltl::{evaluate, parse_ltl, LassoWord};

pub(crate) fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub(crate) fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Builds an automaton from edges given as propositional formulas.
pub(crate) fn hand_nba(
    aps: &[&str],
    outputs: &[&str],
    states: usize,
    accepting: &[usize],
    edges: &[(usize, &str, usize)],
) -> Nba {
    let aps = names(aps);
    let mut a = Nba::new(aps.clone(), set(outputs)).unwrap();
    for _ in 0..states {
        a.add_state();
    }
    a.set_initial(0);
    for q in accepting {
        a.set_accepting(*q, true);
    }
    for (s, f, d) in edges {
        a.add_edge(*s, propositional_label(&parse_ltl(f).unwrap(), &aps).unwrap(), *d);
    }
    a
}

/// The four-state automaton for `F o1 && G (i -> F o2)`.
pub(crate) fn eventual_response() -> Nba {
    hand_nba(
        &["i", "o1", "o2"],
        &["o1", "o2"],
        4,
        &[2],
        &[
            (0, "(!i && !o1) || (!o1 && o2)", 0),
            (0, "(!i && o1) || (o1 && o2)", 2),
            (0, "i && o1 && !o2", 3),
            (0, "i && !o1 && !o2", 1),
            (1, "!o1 && o2", 0),
            (1, "!o1 && !o2", 1),
            (1, "o1 && o2", 2),
            (1, "o1 && !o2", 3),
            (2, "!i || o2", 2),
            (2, "i && !o2", 3),
            (3, "o2", 2),
            (3, "!o2", 3),
        ],
    )
}

/// Minimal automaton for the projection of `F o1 && G (i -> F o2)` to `{i, o1}`.
pub(crate) fn eventual_response_left() -> Nba {
    hand_nba(&["i", "o1"], &["o1"], 2, &[1], &[(0, "!o1", 0), (0, "o1", 1), (1, "true", 1)])
}

/// Minimal automaton for the projection of `F o1 && G (i -> F o2)` to `{i, o2}`.
pub(crate) fn eventual_response_right() -> Nba {
    hand_nba(
        &["i", "o2"],
        &["o2"],
        2,
        &[0],
        &[(0, "!i || o2", 0), (0, "i && !o2", 1), (1, "!o2", 1), (1, "o2", 0)],
    )
}

/// The five-state automaton for `F o1 || G (i -> F o2)`.
pub(crate) fn disjunctive_example() -> Nba {
    hand_nba(
        &["i", "o1", "o2"],
        &["o1", "o2"],
        5,
        &[2, 3],
        &[
            (0, "!o1", 1),
            (0, "(!i && !o1) || (!o1 && o2)", 3),
            (0, "o1", 2),
            (0, "i && !o1 && !o2", 4),
            (1, "!o1", 1),
            (1, "o1", 2),
            (2, "true", 2),
            (3, "!i || o2", 3),
            (3, "i && !o2", 4),
            (4, "o2", 3),
            (4, "!o2", 4),
        ],
    )
}

fn translate(f: &str, aps: &[&str]) -> Nba {
    ltl_to_nba(&parse_ltl(f).unwrap(), &names(aps)).unwrap()
}

fn words(aps: &[&str], max: usize) -> Vec<LassoWord> {
    LassoWord::enumerate(&names(aps), max).collect()
}

const FORMULAS: &[&str] = &[
    "true",
    "false",
    "a",
    "!a",
    "X a",
    "F a",
    "G a",
    "G F a",
    "F G a",
    "a U b",
    "a R b",
    "!(a U b)",
    "G (a -> F b)",
    "G (a -> X b)",
    "(a U b) U c",
    "a U (b R c)",
    "G F a && G F b",
    "F (a && X !a)",
    "G (a <-> X b)",
    "F o1 && G (i -> F o2)",
    "F o1 || G (i -> F o2)",
    "(G F a -> G F b) && G (c -> F a)",
    "X X a || G (b U c)",
    "G !(a && b) && G F a && G F b",
];

#[test]
fn translation_agrees_with_lasso_semantics() {
    for f in FORMULAS {
        let formula = parse_ltl(f).unwrap();
        let mut aps: Vec<String> = formula.props().into_iter().collect();
        if aps.is_empty() {
            aps.push("a".into());
        }
        let a = ltl_to_nba(&formula, &aps).unwrap();
        let max = if aps.len() >= 3 { 4 } else { 6 };
        for w in LassoWord::enumerate(&aps, max) {
            assert_eq!(a.accepts(&w).unwrap(), evaluate(&formula, &w).unwrap(), "{f} on {w}");
        }
    }
}

#[test]
fn translation_of_true_is_one_state() {
    let a = translate("true", &["a"]);
    assert_eq!(a.num_states(), 1);
    assert!(a.is_accepting(0));
    assert!(a.edges(0).all(|(d, l)| d == 0 && l.is_true()));
}

#[test]
fn eventual_response_is_reproduced() {
    let a = translate("F o1 && G (i -> F o2)", &["i", "o1", "o2"]);
    assert!(equivalent(&a, &eventual_response()).unwrap());
    let b = translate("F o1 || G (i -> F o2)", &["i", "o1", "o2"]);
    assert!(equivalent(&b, &disjunctive_example()).unwrap());
}

#[test]
fn projections_of_eventual_response() {
    let a = eventual_response();
    let left = project(&a, &set(&["i", "o1"])).unwrap();
    let right = project(&a, &set(&["i", "o2"])).unwrap();
    assert_eq!(left.num_states(), 4);
    assert_eq!(left.outputs(), &set(&["o1"]));
    assert!(equivalent(&left, &eventual_response_left()).unwrap());
    assert!(equivalent(&right, &eventual_response_right()).unwrap());
    assert!(reduce(&left).num_states() <= 4);
    // identity projection
    assert_eq!(project(&a, &a.ap_set()).unwrap(), a);
}

#[test]
fn projection_matches_word_projection() {
    // L(π_X A) = { w ∩ X | w ∈ L(A) } checked on small words: every word
    // accepted by the projection has an extension accepted by A and vice versa.
    let a = eventual_response();
    let left = project(&a, &set(&["i", "o1"])).unwrap();
    for w in words(&["i", "o1"], 4) {
        let extended = LassoWord::enumerate(&names(&["o2"]), 4).any(|v| a.accepts(&w.union(&v)).unwrap());
        if extended {
            assert!(left.accepts(&w).unwrap());
        }
    }
}

#[test]
fn composition_of_projections() {
    let composed = compose(&eventual_response_left(), &eventual_response_right()).unwrap();
    assert!(equivalent(&composed, &eventual_response()).unwrap());

    let b = disjunctive_example();
    let bx = project(&b, &set(&["i", "o1"])).unwrap();
    let by = project(&b, &set(&["i", "o2"])).unwrap();
    let universal = Nba::universal(names(&["i", "o1", "o2"]), set(&["o1", "o2"])).unwrap();
    // both projections are universal, hence so are their composition and
    // their intersection
    for c in [&bx, &by] {
        assert!(contains(&universal, c).unwrap());
    }
    let composed = compose(&bx, &by).unwrap();
    assert!(contains(&universal, &composed).unwrap());
    assert!(contains(&composed, &universal).unwrap());
    for c in [composed, intersection(&bx, &by).unwrap()] {
        let w = containment_counterexample(&c, &b).unwrap().expect("split is rejected");
        assert!(c.accepts(&w).unwrap());
        assert!(!b.accepts(&w).unwrap());
    }
}

#[test]
fn compose_with_universal_is_identity() {
    let a = eventual_response();
    let u = Nba::universal(a.aps().to_vec(), BTreeSet::new()).unwrap();
    assert!(equivalent(&compose(&a, &u).unwrap(), &a).unwrap());
}

#[test]
fn plain_product_acceptance_is_stricter_than_intersection() {
    let a = translate("G F a", &["a", "b"]);
    let b = translate("G F b", &["a", "b"]);
    let alternating = LassoWord::from_sets(&["a", "b"], &[], &[&["a"], &["b"]]).unwrap();
    assert!(a.accepts(&alternating).unwrap() && b.accepts(&alternating).unwrap());
    assert!(intersection(&a, &b).unwrap().accepts(&alternating).unwrap());
    let both = translate("G F a && G F b", &["a", "b"]);
    assert!(equivalent(&intersection(&a, &b).unwrap(), &both).unwrap());
    // the accepting states of the two components need not be visited together
    let product = compose(&a, &b).unwrap();
    assert!(contains(&product, &both).unwrap());
}

#[test]
fn complement_partitions_words() {
    let corpus = [
        eventual_response(),
        disjunctive_example(),
        eventual_response_left(),
        eventual_response_right(),
        translate("G F a", &["a"]),
        translate("F G a", &["a"]),
        translate("G (a -> F b)", &["a", "b"]),
        translate("a U b", &["a", "b"]),
        translate("G F a && G F b", &["a", "b"]),
    ];
    for a in &corpus {
        let c = complement(a).unwrap();
        let max = if a.aps().len() >= 3 { 4 } else { 5 };
        for w in LassoWord::enumerate(a.aps(), max) {
            assert_ne!(a.accepts(&w).unwrap(), c.accepts(&w).unwrap(), "{w}");
        }
    }
}

#[test]
fn complement_of_trivial_languages() {
    let u = Nba::universal(names(&["a"]), BTreeSet::new()).unwrap();
    let e = Nba::empty(names(&["a"]), BTreeSet::new()).unwrap();
    assert!(complement(&u).unwrap().is_empty());
    assert!(equivalent(&complement(&e).unwrap(), &u).unwrap());
    let eventually = translate("F o1", &["o1"]);
    let never = translate("G !o1", &["o1"]);
    assert!(equivalent(&complement(&eventually).unwrap(), &never).unwrap());
}

#[test]
fn complement_size_guard() {
    let big = translate("G (a <-> X X X X X b)", &["a", "b"]);
    let tight = ComplementLimits { max_states: 2, ..ComplementLimits::default() };
    assert!(matches!(complement_with(&big, &tight), Err(AutomataError::ComplementBound { .. })));
}

#[test]
fn emptiness_and_certificates() {
    assert!(translate("G o && F !o", &["o"]).is_empty());
    let mut no_acc = Nba::universal(names(&["a"]), BTreeSet::new()).unwrap();
    no_acc.set_accepting(0, false);
    assert!(no_acc.is_empty());
    let a = eventual_response();
    let cert = a.find_accepting_run().unwrap();
    assert!(a.replays(&cert));
    assert!(a.accepts(&cert.word).unwrap());
    let f = parse_ltl("F o1 && G (i -> F o2)").unwrap();
    assert!(evaluate(&f, &cert.word).unwrap());
}

#[test]
fn reduce_removes_unreachable_states_and_preserves_language() {
    let mut a = eventual_response_left();
    let orphan = a.add_state();
    a.set_accepting(orphan, true);
    a.add_edge(orphan, Label::tt(), orphan);
    let r = reduce(&a);
    assert_eq!(r.num_states(), 2);
    assert!(equivalent(&r, &a).unwrap());
    for a in [eventual_response(), disjunctive_example()] {
        assert!(equivalent(&reduce(&a), &a).unwrap());
    }
}

#[test]
fn containment_is_a_preorder_on_samples() {
    let fs = ["G a", "G F a", "F a", "true", "a"];
    let autos: Vec<Nba> = fs.iter().map(|f| translate(f, &["a"])).collect();
    for x in &autos {
        assert!(contains(x, x).unwrap());
    }
    // G a ⊆ G F a ⊆ F a ⊆ true, and a ⊈ G F a
    for k in 0..3 {
        assert!(contains(&autos[k], &autos[k + 1]).unwrap());
    }
    assert!(contains(&autos[0], &autos[2]).unwrap());
    assert!(!contains(&autos[4], &autos[1]).unwrap());
    assert!(!contains(&autos[2], &autos[1]).unwrap());
}

#[test]
fn propositional_labels() {
    let aps = names(&["a", "b"]);
    let l = propositional_label(&parse_ltl("a -> b").unwrap(), &aps).unwrap();
    let expected: Vec<u64> = (0..4).filter(|v| v & 1 == 0 || v & 2 == 2).collect();
    let got: Vec<u64> = (0..4).filter(|v| l.matches(*v)).collect();
    assert_eq!(got, expected);
    assert!(propositional_label(&parse_ltl("X a").unwrap(), &aps).is_err());
}
