//! Specifications and automata shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use modsynth::automata::{ltl_to_nba, propositional_label, Nba};
use modsynth::ltl::{parse_ltl, LtlFormula, SpecContext};

pub struct CorpusSpec {
    pub name: &'static str,
    pub formula: &'static str,
    pub inputs: &'static [&'static str],
    pub outputs: &'static [&'static str],
}

impl CorpusSpec {
    pub fn ctx(&self) -> SpecContext {
        ctx(self.formula, self.inputs, self.outputs)
    }
}

macro_rules! spec {
    ($name:literal, $formula:literal, [$($i:literal),*], [$($o:literal),*]) => {
        CorpusSpec { name: $name, formula: $formula, inputs: &[$($i),*], outputs: &[$($o),*] }
    };
}

/// Hand-written specifications over at most five propositions.
pub const CORPUS: &[CorpusSpec] = &[
    spec!("eventual_response", "F o1 && G (i -> F o2)", ["i"], ["o1", "o2"]),
    spec!("immediate_response", "F o1 && G (i -> o2)", ["i"], ["o1", "o2"]),
    spec!("disjunctive", "F o1 || G (i -> F o2)", ["i"], ["o1", "o2"]),
    spec!("falsifiable_assumption", "F (i1 && o1) -> G (i2 && o2)", ["i1", "i2"], ["o1", "o2"]),
    spec!(
        "input_dependencies",
        "((G i1 -> i2) && (!G i1 -> i3) && (i2 <-> i4) && (i3 <-> !i4)) -> (G i1 <-> o)",
        ["i1", "i2", "i3", "i4"],
        ["o"]
    ),
    spec!("side_conjuncts", "G !(o1 && o2) && G !(i <-> o1) && (G i -> G o2)", ["i"], ["o1", "o2"]),
    spec!("copy_pair", "G (i <-> o1) && G (!i <-> o2)", ["i"], ["o1", "o2"]),
    spec!("predict_next", "G (o1 <-> X i) && G (i2 -> o2)", ["i", "i2"], ["o1", "o2"]),
    spec!("input_only", "G i && G F o", ["i"], ["o"]),
    spec!("mutual_exclusion", "G !(o1 && o2) && G F o1 && G F o2", [], ["o1", "o2"]),
    spec!("response_pair", "G (i1 -> F o1) && G (i2 -> F o2)", ["i1", "i2"], ["o1", "o2"]),
    spec!("fairness_assumption", "G F i -> (G F o1 && G (i -> o2))", ["i"], ["o1", "o2"]),
    spec!("shared_assumption", "G i -> (G (i -> o1) && G (i -> o2))", ["i"], ["o1", "o2"]),
    spec!(
        "free_assumptions",
        "(G F i1 && G F i2) -> (G (o1 <-> X i1) && G (o2 <-> i2))",
        ["i1", "i2"],
        ["o1", "o2"]
    ),
    spec!(
        "free_assumptions_realizable",
        "(G F i1 && G F i2) -> (G (i1 -> F o1) && G (o2 <-> i2))",
        ["i1", "i2"],
        ["o1", "o2"]
    ),
    spec!("contradictory_output", "G F o1 && F G !o1 && G (i -> o2)", ["i"], ["o1", "o2"]),
    spec!("until", "(o1 U i) && G F o2", ["i"], ["o1", "o2"]),
    spec!("several_implications", "(G F i -> G F o1) && (G F j -> (G F o1 && G F o2))", ["i", "j"], ["o1", "o2"]),
    spec!("side_split", "G !(o1 && o3) && (G F i -> (G F o1 && G F o2))", ["i"], ["o1", "o2", "o3"]),
    spec!("shift_2", "G (o1 <-> i1) && G (o2 <-> i2)", ["i1", "i2"], ["o1", "o2"]),
    spec!("delayed_copy", "G (i -> X o1) && G (!i -> X !o1) && F o2", ["i"], ["o1", "o2"]),
    spec!("toggle_and_delay", "G (o1 -> X !o1) && G (!o1 -> X o1) && G (i <-> X o2)", ["i"], ["o1", "o2"]),
    spec!("fair_prediction", "G F i -> G (o <-> X i)", ["i"], ["o"]),
    spec!("conflicting_response", "G (i -> o1) && G (i -> !o1) && F o2", ["i"], ["o1", "o2"]),
    spec!("unused_output", "G (i <-> o1)", ["i"], ["o1", "o2"]),
];

/// Unrealizable corpus entries over at most four propositions.
pub const UNREALIZABLE: &[&str] = &["predict_next", "free_assumptions", "contradictory_output", "until", "conflicting_response"];

pub fn corpus(name: &str) -> &'static CorpusSpec {
    CORPUS.iter().find(|s| s.name == name).unwrap_or_else(|| panic!("no corpus entry {name}"))
}

pub fn p(s: &str) -> LtlFormula {
    parse_ltl(s).unwrap()
}

pub fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn names(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

pub fn ctx(f: &str, inputs: &[&str], outputs: &[&str]) -> SpecContext {
    SpecContext::new(p(f), inputs.iter().copied(), outputs.iter().copied()).unwrap()
}

/// `G (o1 <-> i1) && ... && G (on <-> in)`.
pub fn shift(n: usize) -> SpecContext {
    let conjuncts: Vec<String> = (1..=n).map(|k| format!("G (o{k} <-> i{k})")).collect();
    let inputs: Vec<String> = (1..=n).map(|k| format!("i{k}")).collect();
    let outputs: Vec<String> = (1..=n).map(|k| format!("o{k}")).collect();
    SpecContext::new(p(&conjuncts.join(" && ")), inputs, outputs).unwrap()
}

/// The automaton of `ctx.formula` with the declared outputs marked.
pub fn spec_nba(ctx: &SpecContext) -> Nba {
    ltl_to_nba(&ctx.formula, &ctx.variables()).unwrap().with_outputs(ctx.outputs.clone()).unwrap()
}

/// Builds an automaton with initial state 0 from edges labelled by
/// propositional formulas.
pub fn hand_nba(aps: &[&str], outputs: &[&str], states: usize, accepting: &[usize], edges: &[(usize, &str, usize)]) -> Nba {
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
        a.add_edge(*s, propositional_label(&p(f), &aps).unwrap(), *d);
    }
    a
}

/// Two states: wait for `o1`, then accept forever.
pub fn projection_to_o1() -> Nba {
    hand_nba(&["i", "o1"], &["o1"], 2, &[1], &[(0, "!o1", 0), (0, "o1", 1), (1, "true", 1)])
}

/// Two states: an unanswered request `i` is pending in state 1.
pub fn projection_to_o2() -> Nba {
    hand_nba(&["i", "o2"], &["o2"], 2, &[0], &[(0, "!i || o2", 0), (0, "i && !o2", 1), (1, "!o2", 1), (1, "o2", 0)])
}
