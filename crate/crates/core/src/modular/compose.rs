//! Product constructions on strategies and counterstrategies.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::ModularError;
use crate::ltl::SpecContext;
use crate::synthesis::{positions, remap, Counterstrategy, Strategy, SynthesisError};

fn sorted_union<'a>(lists: impl IntoIterator<Item = &'a [String]>) -> Vec<String> {
    lists.into_iter().flatten().cloned().collect::<BTreeSet<_>>().into_iter().collect()
}

fn first_shared<'a>(lists: impl IntoIterator<Item = &'a [String]>) -> Option<String> {
    let mut seen = BTreeSet::new();
    lists.into_iter().flatten().find(|p| !seen.insert(*p)).cloned()
}

/// Explores the reachable part of a product machine. `next` maps a state
/// tuple and a letter to the successor tuple; returns the tuples in
/// discovery order and the successor table over state indices.
fn explore<X>(
    initial: Vec<usize>,
    letters: u64,
    mut next: impl FnMut(&[usize], u64) -> (Vec<usize>, X),
) -> (Vec<Vec<usize>>, Vec<Vec<(usize, X)>>) {
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut states = vec![initial.clone()];
    index.insert(initial, 0);
    let mut table = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(s) = queue.pop_front() {
        let tuple = states[s].clone();
        let mut row = Vec::with_capacity(letters as usize);
        for v in 0..letters {
            let (t, x) = next(&tuple, v);
            let id = *index.entry(t.clone()).or_insert_with(|| {
                states.push(t);
                queue.push_back(states.len() - 1);
                states.len() - 1
            });
            row.push((id, x));
        }
        table.push(row);
    }
    (states, table)
}

/// Runs strategies over pairwise disjoint outputs side by side. Each part
/// sees its own inputs; the outputs are the union of the parts' answers.
/// The result is over the sorted union of the parts' inputs and outputs and
/// has only reachable state tuples.
pub fn compose_strategies(parts: &[Strategy]) -> Result<Strategy, ModularError> {
    if let Some(o) = first_shared(parts.iter().map(|s| s.outputs())) {
        return Err(ModularError::OverlappingOutputs(o));
    }
    let inputs = sorted_union(parts.iter().map(|s| s.inputs()));
    let outputs = sorted_union(parts.iter().map(|s| s.outputs()));
    if inputs.len() > crate::synthesis::MAX_MACHINE_PROPS {
        return Err(SynthesisError::Machine("too many inputs for a composed strategy".into()).into());
    }
    let in_maps: Vec<_> = parts.iter().map(|s| positions(&inputs, s.inputs())).collect();
    let out_maps: Vec<_> = parts.iter().map(|s| positions(s.outputs(), &outputs)).collect();
    let initial = parts.iter().map(|s| s.initial()).collect();
    let (_, table) = explore(initial, 1 << inputs.len(), |tuple, v| {
        let mut next = Vec::with_capacity(parts.len());
        let mut out = 0;
        for (k, s) in parts.iter().enumerate() {
            let (t, o) = s.step(tuple[k], remap(v, &in_maps[k]));
            next.push(t);
            out |= remap(o, &out_maps[k]);
        }
        (next, out)
    });
    Ok(Strategy::new(inputs, outputs, 0, table)?)
}

/// Runs counterstrategies over pairwise disjoint inputs side by side: every
/// state emits the union of the parts' emissions, and each part follows the
/// outputs it knows.
pub fn combine_counterstrategies(parts: &[Counterstrategy]) -> Result<Counterstrategy, ModularError> {
    if let Some(i) = first_shared(parts.iter().map(|c| c.inputs())) {
        return Err(ModularError::OverlappingInputs(i));
    }
    let inputs = sorted_union(parts.iter().map(|c| c.inputs()));
    let outputs = sorted_union(parts.iter().map(|c| c.outputs()));
    if outputs.len() > crate::synthesis::MAX_MACHINE_PROPS {
        return Err(SynthesisError::Machine("too many outputs for a combined counterstrategy".into()).into());
    }
    let in_maps: Vec<_> = parts.iter().map(|c| positions(c.inputs(), &inputs)).collect();
    let out_maps: Vec<_> = parts.iter().map(|c| positions(&outputs, c.outputs())).collect();
    let initial = parts.iter().map(|c| c.initial()).collect();
    let (states, table) = explore(initial, 1 << outputs.len(), |tuple, o| {
        let next = parts.iter().enumerate().map(|(k, c)| c.step(tuple[k], remap(o, &out_maps[k]))).collect();
        (next, ())
    });
    let emission = states
        .iter()
        .map(|tuple| parts.iter().enumerate().map(|(k, c)| remap(c.emission(tuple[k]), &in_maps[k])).fold(0, |a, b| a | b))
        .collect();
    let table = table.into_iter().map(|row| row.into_iter().map(|(t, ())| t).collect()).collect();
    Ok(Counterstrategy::new(inputs, outputs, 0, emission, table)?)
}

/// Extends a counterstrategy of a subspecification to all variables of
/// `ctx`: outputs it does not know are ignored and inputs it does not
/// control are emitted false.
pub fn extend_counterstrategy(c: &Counterstrategy, ctx: &SpecContext) -> Result<Counterstrategy, SynthesisError> {
    let inputs: Vec<String> = ctx.inputs.iter().cloned().collect();
    let outputs: Vec<String> = ctx.outputs.iter().cloned().collect();
    c.over(&inputs, &outputs)
}
