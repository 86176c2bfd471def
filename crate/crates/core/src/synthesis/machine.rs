//! Finite-state strategies for the system and the environment.

use std::collections::BTreeSet;

use super::SynthesisError;
use crate::ltl::LassoWord;

/// Largest number of inputs (or outputs) a machine may declare; transition
/// tables are indexed by valuations.
pub const MAX_MACHINE_PROPS: usize = 16;

/// Bit position of every name of `from` inside `to`.
pub(crate) fn positions(from: &[String], to: &[String]) -> Vec<Option<usize>> {
    from.iter().map(|a| to.iter().position(|b| a == b)).collect()
}

/// Re-encodes a valuation over `from` as one over `to`, using the result
/// of [`positions`]`(from, to)`. Names missing from `to` are dropped.
pub(crate) fn remap(val: u64, map: &[Option<usize>]) -> u64 {
    map.iter()
        .enumerate()
        .filter(|(k, _)| val >> k & 1 == 1)
        .filter_map(|(_, t)| t.map(|t| 1u64 << t))
        .fold(0, |a, b| a | b)
}

pub(crate) fn valuation_names(val: u64, names: &[String]) -> Vec<String> {
    names.iter().enumerate().filter(|(k, _)| val >> k & 1 == 1).map(|(_, n)| n.clone()).collect()
}

pub(crate) fn valuation_from_names<S: AsRef<str>>(set: &[S], names: &[String]) -> Result<u64, String> {
    set.iter().try_fold(0u64, |acc, s| {
        let k = names.iter().position(|n| n == s.as_ref()).ok_or_else(|| format!("unknown proposition `{}`", s.as_ref()))?;
        Ok(acc | 1 << k)
    })
}

fn check_names(inputs: &[String], outputs: &[String]) -> Result<(), SynthesisError> {
    if inputs.len() > MAX_MACHINE_PROPS || outputs.len() > MAX_MACHINE_PROPS {
        return Err(SynthesisError::Machine(format!("at most {MAX_MACHINE_PROPS} inputs and outputs are supported")));
    }
    let all: BTreeSet<&String> = inputs.iter().chain(outputs).collect();
    if all.len() != inputs.len() + outputs.len() {
        return Err(SynthesisError::Machine("duplicate or shared proposition names".into()));
    }
    Ok(())
}

/// A Mealy machine for the system: in every step it reads the current input
/// valuation and answers with an output valuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    inputs: Vec<String>,
    outputs: Vec<String>,
    initial: usize,
    /// `table[s][in]` is the successor state and the output valuation.
    table: Vec<Vec<(usize, u64)>>,
}

impl Strategy {
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<String>,
        initial: usize,
        table: Vec<Vec<(usize, u64)>>,
    ) -> Result<Strategy, SynthesisError> {
        check_names(&inputs, &outputs)?;
        let n = table.len();
        if initial >= n {
            return Err(SynthesisError::Machine("initial state out of range".into()));
        }
        let width = 1usize << inputs.len();
        let out_limit = 1u64 << outputs.len();
        for row in &table {
            if row.len() != width {
                return Err(SynthesisError::Machine("transition table is not total over the inputs".into()));
            }
            if row.iter().any(|(t, o)| *t >= n || *o >= out_limit) {
                return Err(SynthesisError::Machine("transition out of range".into()));
            }
        }
        Ok(Strategy { inputs, outputs, initial, table })
    }

    /// The one-state strategy that keeps every output false.
    pub fn constant_false(inputs: Vec<String>, outputs: Vec<String>) -> Result<Strategy, SynthesisError> {
        let width = 1usize << inputs.len();
        Strategy::new(inputs, outputs, 0, vec![vec![(0, 0); width]])
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn num_states(&self) -> usize {
        self.table.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// Successor state and output valuation for input valuation `input`.
    pub fn step(&self, state: usize, input: u64) -> (usize, u64) {
        self.table[state][input as usize]
    }

    /// The same behavior over larger proposition lists: extra inputs are
    /// ignored and extra outputs are kept false. Both lists must contain the
    /// strategy's own propositions.
    pub fn over(&self, inputs: &[String], outputs: &[String]) -> Result<Strategy, SynthesisError> {
        if let Some(p) = self.inputs.iter().find(|p| !inputs.contains(p)) {
            return Err(SynthesisError::Machine(format!("input `{p}` missing from the target")));
        }
        if let Some(p) = self.outputs.iter().find(|p| !outputs.contains(p)) {
            return Err(SynthesisError::Machine(format!("output `{p}` missing from the target")));
        }
        let in_map = positions(inputs, &self.inputs);
        let out_map = positions(&self.outputs, outputs);
        let table = self
            .table
            .iter()
            .map(|row| {
                (0..1u64 << inputs.len())
                    .map(|v| {
                        let (t, o) = row[remap(v, &in_map) as usize];
                        (t, remap(o, &out_map))
                    })
                    .collect()
            })
            .collect();
        Strategy::new(inputs.to_vec(), outputs.to_vec(), self.initial, table)
    }

    /// Whether `word` can be produced against this strategy: at every
    /// position the outputs are the strategy's answer to the inputs.
    /// Propositions missing from the word count as false.
    pub fn is_compatible(&self, word: &LassoWord) -> bool {
        let ins = word.over(&self.inputs);
        let outs = word.over(&self.outputs);
        let mut seen = BTreeSet::new();
        let (mut s, mut k) = (self.initial, 0usize);
        while seen.insert((s, k)) {
            let (t, o) = self.step(s, ins.letter(k));
            if o != outs.letter(k) {
                return false;
            }
            s = t;
            k = word.succ(k);
        }
        true
    }
}

/// A Moore machine for the environment: every state fixes the input
/// valuation, the successor depends on the outputs the system chose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterstrategy {
    inputs: Vec<String>,
    outputs: Vec<String>,
    initial: usize,
    emission: Vec<u64>,
    /// `table[s][out]` is the successor state.
    table: Vec<Vec<usize>>,
}

impl Counterstrategy {
    pub fn new(
        inputs: Vec<String>,
        outputs: Vec<String>,
        initial: usize,
        emission: Vec<u64>,
        table: Vec<Vec<usize>>,
    ) -> Result<Counterstrategy, SynthesisError> {
        check_names(&inputs, &outputs)?;
        let n = table.len();
        if initial >= n || emission.len() != n {
            return Err(SynthesisError::Machine("state count mismatch".into()));
        }
        let width = 1usize << outputs.len();
        if emission.iter().any(|e| *e >= 1u64 << inputs.len()) {
            return Err(SynthesisError::Machine("emission out of range".into()));
        }
        if table.iter().any(|row| row.len() != width || row.iter().any(|t| *t >= n)) {
            return Err(SynthesisError::Machine("transition table is not total over the outputs".into()));
        }
        Ok(Counterstrategy { inputs, outputs, initial, emission, table })
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn num_states(&self) -> usize {
        self.table.len()
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    /// The input valuation emitted in `state`.
    pub fn emission(&self, state: usize) -> u64 {
        self.emission[state]
    }

    pub fn step(&self, state: usize, output: u64) -> usize {
        self.table[state][output as usize]
    }

    /// The same behavior over larger proposition lists: extra inputs are
    /// always emitted false and extra outputs are ignored.
    pub fn over(&self, inputs: &[String], outputs: &[String]) -> Result<Counterstrategy, SynthesisError> {
        if let Some(p) = self.inputs.iter().find(|p| !inputs.contains(p)) {
            return Err(SynthesisError::Machine(format!("input `{p}` missing from the target")));
        }
        if let Some(p) = self.outputs.iter().find(|p| !outputs.contains(p)) {
            return Err(SynthesisError::Machine(format!("output `{p}` missing from the target")));
        }
        let in_map = positions(&self.inputs, inputs);
        let out_map = positions(outputs, &self.outputs);
        let emission = self.emission.iter().map(|e| remap(*e, &in_map)).collect();
        let table = self
            .table
            .iter()
            .map(|row| (0..1u64 << outputs.len()).map(|o| row[remap(o, &out_map) as usize]).collect())
            .collect();
        Counterstrategy::new(inputs.to_vec(), outputs.to_vec(), self.initial, emission, table)
    }

    /// Whether `word` can be produced against this counterstrategy: at every
    /// position the inputs are the ones emitted by the current state.
    pub fn is_compatible(&self, word: &LassoWord) -> bool {
        let ins = word.over(&self.inputs);
        let outs = word.over(&self.outputs);
        let mut seen = BTreeSet::new();
        let (mut s, mut k) = (self.initial, 0usize);
        while seen.insert((s, k)) {
            if self.emission(s) != ins.letter(k) {
                return false;
            }
            s = self.step(s, outs.letter(k));
            k = word.succ(k);
        }
        true
    }
}
