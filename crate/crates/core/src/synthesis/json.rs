//! JSON exchange format for synthesis results.
//!
//! ```json
//! {
//!   "verdict": "realizable",
//!   "states": 1,
//!   "initial": 0,
//!   "inputs": ["i"],
//!   "outputs": ["o"],
//!   "transitions": [
//!     {"from": 0, "on": [], "in-valuation": [], "out-valuation": [], "to": 0},
//!     {"from": 0, "on": ["i"], "in-valuation": ["i"], "out-valuation": ["o"], "to": 0}
//!   ]
//! }
//! ```
//!
//! Valuations list the propositions that are true. Each transition is one
//! step of the machine. `on` is the valuation the machine reacts to: the
//! inputs for a strategy (`"realizable"`), the outputs for a
//! counterstrategy (`"unrealizable"`), whose `in-valuation` must be the
//! same on all transitions leaving a state. `on` may be omitted when
//! reading. An `"unknown"` verdict carries an optional `reason` instead of
//! a machine.

use serde::{Deserialize, Serialize};

use super::machine::{valuation_from_names, valuation_names};
use super::{Counterstrategy, Strategy, SynthesisError, SynthesisResult, Verdict};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    #[serde(default)]
    states: usize,
    #[serde(default)]
    initial: usize,
    #[serde(default)]
    inputs: Vec<String>,
    #[serde(default)]
    outputs: Vec<String>,
    #[serde(default)]
    transitions: Vec<Transition>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Transition {
    from: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    on: Option<Vec<String>>,
    #[serde(rename = "in-valuation")]
    in_valuation: Vec<String>,
    #[serde(rename = "out-valuation")]
    out_valuation: Vec<String>,
    to: usize,
}

pub fn to_json(result: &SynthesisResult) -> String {
    let doc = match result {
        SynthesisResult::Realizable(s) => {
            let (ins, outs) = (s.inputs(), s.outputs());
            let mut transitions = Vec::new();
            for q in 0..s.num_states() {
                for i in 0..1u64 << ins.len() {
                    let (t, o) = s.step(q, i);
                    transitions.push(Transition {
                        from: q,
                        on: Some(valuation_names(i, ins)),
                        in_valuation: valuation_names(i, ins),
                        out_valuation: valuation_names(o, outs),
                        to: t,
                    });
                }
            }
            Document {
                verdict: Verdict::Realizable,
                reason: None,
                states: s.num_states(),
                initial: s.initial(),
                inputs: ins.to_vec(),
                outputs: outs.to_vec(),
                transitions,
            }
        }
        SynthesisResult::Unrealizable(c) => {
            let (ins, outs) = (c.inputs(), c.outputs());
            let mut transitions = Vec::new();
            for q in 0..c.num_states() {
                for o in 0..1u64 << outs.len() {
                    transitions.push(Transition {
                        from: q,
                        on: Some(valuation_names(o, outs)),
                        in_valuation: valuation_names(c.emission(q), ins),
                        out_valuation: valuation_names(o, outs),
                        to: c.step(q, o),
                    });
                }
            }
            Document {
                verdict: Verdict::Unrealizable,
                reason: None,
                states: c.num_states(),
                initial: c.initial(),
                inputs: ins.to_vec(),
                outputs: outs.to_vec(),
                transitions,
            }
        }
        SynthesisResult::Unknown(reason) => Document {
            verdict: Verdict::Unknown,
            reason: Some(reason.clone()),
            states: 0,
            initial: 0,
            inputs: Vec::new(),
            outputs: Vec::new(),
            transitions: Vec::new(),
        },
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    text.push('\n');
    text
}

pub fn from_json(text: &str) -> Result<SynthesisResult, SynthesisError> {
    let doc: Document = serde_json::from_str(text).map_err(|e| SynthesisError::Format(e.to_string()))?;
    let bad = |m: String| SynthesisError::Format(m);
    if doc.verdict == Verdict::Unknown {
        return Ok(SynthesisResult::Unknown(doc.reason.unwrap_or_default()));
    }
    if doc.inputs.len() > super::MAX_MACHINE_PROPS || doc.outputs.len() > super::MAX_MACHINE_PROPS {
        return Err(bad("too many propositions".into()));
    }
    let n = doc.states;
    if n == 0 {
        return Err(bad("a machine needs at least one state".into()));
    }
    let mut steps = Vec::with_capacity(doc.transitions.len());
    for t in &doc.transitions {
        if t.from >= n || t.to >= n {
            return Err(bad(format!("transition {} -> {} leaves the {n} states", t.from, t.to)));
        }
        let i = valuation_from_names(&t.in_valuation, &doc.inputs).map_err(bad)?;
        let o = valuation_from_names(&t.out_valuation, &doc.outputs).map_err(bad)?;
        steps.push((t, i, o));
    }
    match doc.verdict {
        Verdict::Realizable => {
            let width = 1usize << doc.inputs.len();
            let mut table: Vec<Vec<Option<(usize, u64)>>> = vec![vec![None; width]; n];
            for (t, i, o) in steps {
                if let Some(on) = &t.on {
                    if valuation_from_names(on, &doc.inputs).map_err(bad)? != i {
                        return Err(bad("`on` differs from `in-valuation` in a strategy".into()));
                    }
                }
                let slot = &mut table[t.from][i as usize];
                if slot.is_some_and(|old| old != (t.to, o)) {
                    return Err(bad(format!("state {} reacts to one input in two ways", t.from)));
                }
                *slot = Some((t.to, o));
            }
            let table = table
                .into_iter()
                .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad("strategy is not total over the inputs".into()))?;
            Ok(SynthesisResult::Realizable(Strategy::new(doc.inputs, doc.outputs, doc.initial, table)?))
        }
        Verdict::Unrealizable => {
            let width = 1usize << doc.outputs.len();
            let mut emission: Vec<Option<u64>> = vec![None; n];
            let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; width]; n];
            for (t, i, o) in steps {
                if let Some(on) = &t.on {
                    if valuation_from_names(on, &doc.outputs).map_err(bad)? != o {
                        return Err(bad("`on` differs from `out-valuation` in a counterstrategy".into()));
                    }
                }
                if emission[t.from].is_some_and(|e| e != i) {
                    return Err(bad(format!("state {} emits two input valuations", t.from)));
                }
                emission[t.from] = Some(i);
                let slot = &mut table[t.from][o as usize];
                if slot.is_some_and(|old| old != t.to) {
                    return Err(bad(format!("state {} reacts to one output in two ways", t.from)));
                }
                *slot = Some(t.to);
            }
            let emission = emission
                .into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad("a state without transitions has no emission".into()))?;
            let table = table
                .into_iter()
                .map(|row| row.into_iter().collect::<Option<Vec<_>>>())
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| bad("counterstrategy is not total over the outputs".into()))?;
            Ok(SynthesisResult::Unrealizable(Counterstrategy::new(doc.inputs, doc.outputs, doc.initial, emission, table)?))
        }
        Verdict::Unknown => unreachable!("handled above"),
    }
}
