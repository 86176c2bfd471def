//! Model checking of finite-state machines against LTL formulas.

use super::machine::{positions, remap};
use super::{Counterstrategy, Strategy, SynthesisError};
use crate::automata::{find_accepting_lasso, ltl_to_nba, reduce, Nba, DEFAULT_SEARCH_LIMIT};
use crate::ltl::{LassoWord, LtlFormula};

/// Checks that every word compatible with `s` satisfies `formula`.
/// Returns `None` if it does, otherwise a compatible word violating it.
///
/// The word is over the strategy's inputs followed by its outputs. The
/// formula may only mention propositions of the strategy.
pub fn verify(s: &Strategy, formula: &LtlFormula) -> Result<Option<LassoWord>, SynthesisError> {
    let nin = s.inputs().len();
    let steps: Vec<Vec<(usize, u64)>> = (0..s.num_states())
        .map(|q| (0..1u64 << nin).map(|i| { let (t, o) = s.step(q, i); (t, i | o << nin) }).collect())
        .collect();
    witness(s.inputs(), s.outputs(), s.initial(), &steps, &LtlFormula::not(formula.clone()))
}

/// Checks that every word compatible with `c` violates `formula`.
/// Returns `None` if so, otherwise a compatible word satisfying it.
pub fn verify_counterstrategy(c: &Counterstrategy, formula: &LtlFormula) -> Result<Option<LassoWord>, SynthesisError> {
    let nin = c.inputs().len();
    let steps: Vec<Vec<(usize, u64)>> = (0..c.num_states())
        .map(|q| (0..1u64 << c.outputs().len()).map(|o| (c.step(q, o), c.emission(q) | o << nin)).collect())
        .collect();
    witness(c.inputs(), c.outputs(), c.initial(), &steps, formula)
}

/// A word of the machine accepted by the automaton of `target`, if any.
/// `steps[q]` lists successor states with the full valuation (inputs in
/// the low bits, outputs above them) produced on that step.
fn witness(
    inputs: &[String],
    outputs: &[String],
    initial: usize,
    steps: &[Vec<(usize, u64)>],
    target: &LtlFormula,
) -> Result<Option<LassoWord>, SynthesisError> {
    let aps: Vec<String> = inputs.iter().chain(outputs).cloned().collect();
    if let Some(p) = target.props().into_iter().find(|p| !aps.contains(p)) {
        return Err(SynthesisError::UnknownProp(p));
    }
    let props: Vec<String> = target.props().into_iter().collect();
    let nba: Nba = reduce(&ltl_to_nba(target, &props)?);
    let map = positions(&aps, nba.aps());
    let found = find_accepting_lasso(
        nba.initial().iter().map(|q| (initial, *q)),
        |&(m, q)| {
            let mut out = Vec::new();
            for (t, val) in &steps[m] {
                for d in nba.successors(q, remap(*val, &map)) {
                    out.push(((*t, d), *val));
                }
            }
            out
        },
        |(_, q)| nba.is_accepting(*q),
        DEFAULT_SEARCH_LIMIT,
    )
    .ok_or(SynthesisError::SearchLimit(DEFAULT_SEARCH_LIMIT))?;
    Ok(found.map(|lasso| {
        LassoWord::new(
            aps.clone(),
            lasso.prefix.iter().map(|(_, v)| *v).collect(),
            lasso.cycle.iter().map(|(_, v)| *v).collect(),
        )
        .expect("valuations fit the alphabet")
    }))
}
