//! Machine-readable summary of a `synth` run.

use std::collections::BTreeSet;
use std::time::Duration;

use modsynth::modular::{Extension, ModularRun};
use modsynth::synthesis::Verdict;
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct PartReport {
    pub index: usize,
    pub formula: String,
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
    pub origin: Vec<usize>,
    pub verdict: Verdict,
    /// Solved by the strategy found while checking its assumptions.
    pub settled: bool,
}

/// Wall-clock times in seconds. Kept apart from everything else so reports
/// can be compared after dropping this one field.
#[derive(Debug, Serialize)]
pub struct TimingReport {
    pub negated_assumptions: f64,
    pub decompose: f64,
    pub synthesize: f64,
    pub assemble: f64,
    pub parts: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct RunReport {
    pub spec: String,
    pub mode: String,
    pub backend: String,
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
    pub unused_outputs: BTreeSet<String>,
    pub negated_assumptions: Option<Verdict>,
    pub subspecifications: usize,
    pub parts: Vec<PartReport>,
    pub refuting_part: Option<usize>,
    pub extension: Option<Extension>,
    pub verdict: Verdict,
    pub timings: TimingReport,
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

impl RunReport {
    pub fn new(spec: &str, backend: &str, run: &ModularRun) -> RunReport {
        RunReport {
            spec: spec.to_string(),
            mode: run.mode.to_string(),
            backend: backend.to_string(),
            inputs: run.ctx.inputs.clone(),
            outputs: run.ctx.outputs.clone(),
            unused_outputs: run.manifest.unused_outputs.clone(),
            negated_assumptions: run.negated_assumptions.as_ref().map(|r| r.verdict()),
            subspecifications: run.parts.len(),
            parts: run
                .parts
                .iter()
                .enumerate()
                .map(|(index, p)| PartReport {
                    index,
                    formula: p.spec.ctx.formula.to_string(),
                    inputs: p.spec.ctx.inputs.clone(),
                    outputs: p.spec.ctx.outputs.clone(),
                    origin: p.spec.origin.clone(),
                    verdict: p.result.verdict(),
                    settled: p.settled,
                })
                .collect(),
            refuting_part: run.refuting_part,
            extension: run.extension,
            verdict: run.verdict(),
            timings: TimingReport {
                negated_assumptions: secs(run.timings.negated_assumptions),
                decompose: secs(run.timings.decompose),
                synthesize: secs(run.timings.synthesize),
                assemble: secs(run.timings.assemble),
                parts: run.parts.iter().map(|p| secs(p.elapsed)).collect(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}
