//! Modular synthesis: decompose, synthesize every part, and assemble a
//! strategy or counterstrategy for the whole specification.

mod compose;

use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::decomposition::{
    decompose_guarded, decompose_ltl, DecompositionError, ImplicationCheck, Manifest, ManifestPart, Mode,
    Subspecification,
};
use crate::ltl::{rewrite_conjunctive, AgStructure, LtlFormula, SpecContext};
use crate::synthesis::{
    verify, verify_counterstrategy, Counterstrategy, Strategy, SynthesisBackend, SynthesisError, SynthesisResult,
    Verdict,
};

pub use compose::{combine_counterstrategies, compose_strategies, extend_counterstrategy};

#[derive(Debug, thiserror::Error)]
pub enum ModularError {
    #[error("subspecification {part}: {source}")]
    Part {
        part: usize,
        #[source]
        source: SynthesisError,
    },
    #[error(transparent)]
    Synthesis(#[from] SynthesisError),
    #[error(transparent)]
    Decomposition(#[from] DecompositionError),
    #[error("output `{0}` is driven by two strategies")]
    OverlappingOutputs(String),
    #[error("input `{0}` is emitted by two counterstrategies")]
    OverlappingInputs(String),
    #[error("mode `{0}` does not apply to LTL synthesis")]
    UnsupportedMode(Mode),
    #[error("assembled result does not verify: {0}")]
    Verification(String),
    #[error("cannot start worker pool: {0}")]
    Pool(String),
}

/// How the counterstrategy of an unrealizable part was turned into one for
/// the whole specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Extension {
    /// Foreign outputs ignored, foreign inputs held false.
    Padded,
    /// Run next to a counterstrategy that keeps the assumptions outside the
    /// part satisfied.
    WithAssumptions,
    /// The padded machine did not refute the whole formula; the backend was
    /// asked for a counterstrategy of the whole specification.
    Monolithic,
}

/// One subspecification and what synthesis said about it.
#[derive(Debug, Clone)]
pub struct PartRun {
    pub spec: Subspecification,
    pub result: SynthesisResult,
    /// Solved while checking whether its assumptions may be dropped.
    pub settled: bool,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Timings {
    pub negated_assumptions: Duration,
    pub decompose: Duration,
    pub synthesize: Duration,
    pub assemble: Duration,
}

#[derive(Debug, Clone)]
pub struct ModularRun {
    pub ctx: SpecContext,
    pub mode: Mode,
    pub manifest: Manifest,
    /// Result of synthesizing the negated assumptions up front, if done.
    pub negated_assumptions: Option<SynthesisResult>,
    pub parts: Vec<PartRun>,
    /// Index of the part whose counterstrategy was extended.
    pub refuting_part: Option<usize>,
    pub extension: Option<Extension>,
    pub result: SynthesisResult,
    pub timings: Timings,
}

impl ModularRun {
    pub fn verdict(&self) -> Verdict {
        self.result.verdict()
    }
}

/// Decomposes `ctx` with `mode` and synthesizes the parts with `backend`
/// on `jobs` worker threads (0 picks the number of cores).
///
/// With [`Mode::LtlOpt`] an assumption is only dropped after the backend
/// found its negation unrealizable within the part. If the negation is
/// realizable, the strategy is checked against the whole part and, on
/// success, solves it.
///
/// The run is realizable iff every part is; the composed strategy is
/// verified against `ctx.formula`. It is unrealizable iff some part is;
/// the first such part's counterstrategy is extended and verified. If
/// neither holds, the run is unknown.
pub fn modular_synthesize(
    ctx: &SpecContext,
    mode: Mode,
    backend: &dyn SynthesisBackend,
    jobs: usize,
) -> Result<ModularRun, ModularError> {
    ctx.validate().map_err(SynthesisError::from)?;
    let start = Instant::now();
    let parts: Vec<(Subspecification, Option<Strategy>)> = match mode {
        Mode::Ltl => decompose_ltl(ctx).into_iter().map(|s| (s, None)).collect(),
        Mode::LtlOpt => {
            let mut guard = |part: &SpecContext, ag: &AgStructure| negated_assumption_check(part, ag, backend);
            decompose_guarded(ctx, &mut guard)?.into_iter().map(|p| (p.spec, p.settled)).collect()
        }
        Mode::Nba => return Err(ModularError::UnsupportedMode(mode)),
    };
    let timings = Timings { decompose: start.elapsed(), ..Default::default() };
    finish(ctx, mode, parts, backend, jobs, timings)
}

/// Modular synthesis for specifications with an implication: first
/// synthesizes the negated assumptions over all variables. A strategy that
/// falsifies the assumptions is returned as soon as it also satisfies the
/// side conjuncts. Otherwise continues as [`modular_synthesize`] with
/// [`Mode::LtlOpt`].
pub fn modular_synthesize_ag(
    ctx: &SpecContext,
    backend: &dyn SynthesisBackend,
    jobs: usize,
) -> Result<ModularRun, ModularError> {
    ctx.validate().map_err(SynthesisError::from)?;
    let ag = AgStructure::from_formula(&ctx.formula);
    if ag.assumptions.is_empty() {
        return modular_synthesize(ctx, Mode::LtlOpt, backend, jobs);
    }
    let start = Instant::now();
    let negated = SpecContext { formula: ag.negated_assumptions(), inputs: ctx.inputs.clone(), outputs: ctx.outputs.clone() };
    let negated_result = backend.synthesize(&negated)?;
    let elapsed = start.elapsed();
    if let SynthesisResult::Realizable(s) = &negated_result {
        let s = s.over(&variables(&ctx.inputs), &variables(&ctx.outputs))?;
        if verify(&s, &ctx.formula)?.is_none() {
            return Ok(ModularRun {
                ctx: ctx.clone(),
                mode: Mode::LtlOpt,
                manifest: Manifest::new(Mode::LtlOpt.to_string(), ctx.inputs.clone(), ctx.outputs.clone(), Vec::new()),
                negated_assumptions: Some(negated_result),
                parts: Vec::new(),
                refuting_part: None,
                extension: None,
                result: SynthesisResult::Realizable(s),
                timings: Timings { negated_assumptions: elapsed, ..Default::default() },
            });
        }
    }
    let mut run = modular_synthesize(ctx, Mode::LtlOpt, backend, jobs)?;
    run.negated_assumptions = Some(negated_result);
    run.timings.negated_assumptions = elapsed;
    Ok(run)
}

fn variables(set: &std::collections::BTreeSet<String>) -> Vec<String> {
    set.iter().cloned().collect()
}

/// Guard for assumption dropping inside one part.
fn negated_assumption_check(
    part: &SpecContext,
    ag: &AgStructure,
    backend: &dyn SynthesisBackend,
) -> Result<ImplicationCheck<Strategy>, ModularError> {
    let negated = SpecContext { formula: ag.negated_assumptions(), inputs: part.inputs.clone(), outputs: part.outputs.clone() };
    Ok(match backend.synthesize(&negated)? {
        SynthesisResult::Unrealizable(_) => ImplicationCheck::Droppable,
        SynthesisResult::Realizable(s) => {
            let s = s.over(&variables(&part.inputs), &variables(&part.outputs))?;
            if verify(&s, &part.formula)?.is_none() {
                ImplicationCheck::Settled(s)
            } else {
                ImplicationCheck::Keep
            }
        }
        SynthesisResult::Unknown(_) => ImplicationCheck::Keep,
    })
}

fn finish(
    ctx: &SpecContext,
    mode: Mode,
    parts: Vec<(Subspecification, Option<Strategy>)>,
    backend: &dyn SynthesisBackend,
    jobs: usize,
    mut timings: Timings,
) -> Result<ModularRun, ModularError> {
    let manifest = Manifest::new(
        mode.to_string(),
        ctx.inputs.clone(),
        ctx.outputs.clone(),
        parts.iter().enumerate().map(|(k, (s, _))| ManifestPart::for_subspec(k, s, "spec")).collect(),
    );

    let start = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| ModularError::Pool(e.to_string()))?;
    let outcomes: Vec<Result<PartRun, ModularError>> = pool.install(|| {
        parts
            .into_par_iter()
            .enumerate()
            .map(|(k, (spec, settled))| {
                let t = Instant::now();
                let (result, settled) = match settled {
                    Some(s) => (SynthesisResult::Realizable(s), true),
                    None => {
                        let r = backend.synthesize(&spec.ctx).map_err(|source| ModularError::Part { part: k, source })?;
                        (r, false)
                    }
                };
                Ok(PartRun { spec, result, settled, elapsed: t.elapsed() })
            })
            .collect()
    });
    let parts = outcomes.into_iter().collect::<Result<Vec<_>, _>>()?;
    timings.synthesize = start.elapsed();

    let start = Instant::now();
    let mut refuting_part = None;
    let mut extension = None;
    let result = if let Some(k) = parts.iter().position(|p| p.result.verdict() == Verdict::Unrealizable) {
        let SynthesisResult::Unrealizable(c) = &parts[k].result else { unreachable!() };
        refuting_part = Some(k);
        let (result, how) = refute_whole(ctx, &parts[k].spec, c, backend)?;
        extension = Some(how);
        result
    } else if let Some((k, SynthesisResult::Unknown(reason))) =
        parts.iter().enumerate().map(|(k, p)| (k, &p.result)).find(|(_, r)| r.verdict() == Verdict::Unknown)
    {
        SynthesisResult::Unknown(format!("subspecification {k}: {reason}"))
    } else {
        let strategies: Vec<Strategy> = parts
            .iter()
            .map(|p| match &p.result {
                SynthesisResult::Realizable(s) => s.clone(),
                _ => unreachable!("all parts are realizable"),
            })
            .collect();
        let composed = compose_strategies(&strategies)?.over(&variables(&ctx.inputs), &variables(&ctx.outputs))?;
        if let Some(w) = verify(&composed, &ctx.formula)? {
            return Err(ModularError::Verification(format!("composed strategy admits the violating word {w}")));
        }
        SynthesisResult::Realizable(composed)
    };
    timings.assemble = start.elapsed();

    Ok(ModularRun {
        ctx: ctx.clone(),
        mode,
        manifest,
        negated_assumptions: None,
        parts,
        refuting_part,
        extension,
        result,
        timings,
    })
}

/// Assumption conjuncts of the implications of `formula` that share no
/// variable with `part`.
fn assumptions_outside(formula: &LtlFormula, part: &SpecContext) -> Vec<LtlFormula> {
    let vars = part.formula.props();
    let mut found: Vec<LtlFormula> = Vec::new();
    for c in rewrite_conjunctive(formula) {
        if let Some(ag) = AgStructure::from_implication(&c) {
            for a in ag.assumptions {
                if a.props().is_disjoint(&vars) && !found.contains(&a) {
                    found.push(a);
                }
            }
        }
    }
    found
}

/// Turns the counterstrategy `c` of the unrealizable part `part` into a
/// verified counterstrategy for `ctx`.
fn refute_whole(
    ctx: &SpecContext,
    part: &Subspecification,
    c: &Counterstrategy,
    backend: &dyn SynthesisBackend,
) -> Result<(SynthesisResult, Extension), ModularError> {
    let padded = extend_counterstrategy(c, ctx)?;
    if verify_counterstrategy(&padded, &ctx.formula)?.is_none() {
        return Ok((SynthesisResult::Unrealizable(padded), Extension::Padded));
    }

    // Holding foreign inputs false may falsify an assumption of another
    // part and with it the whole implication. Keep those assumptions true.
    let outside = assumptions_outside(&ctx.formula, &part.ctx);
    if !outside.is_empty() {
        let formula = LtlFormula::not(LtlFormula::and(outside));
        let keeper = SpecContext::restricted_to_props(formula, &ctx.inputs, &ctx.outputs);
        if let SynthesisResult::Unrealizable(k) = backend.synthesize(&keeper)? {
            let both = combine_counterstrategies(&[c.clone(), k])?;
            let both = extend_counterstrategy(&both, ctx)?;
            if verify_counterstrategy(&both, &ctx.formula)?.is_none() {
                return Ok((SynthesisResult::Unrealizable(both), Extension::WithAssumptions));
            }
        }
    }

    match backend.synthesize(ctx)? {
        SynthesisResult::Unrealizable(m) => {
            let m = extend_counterstrategy(&m, ctx)?;
            if let Some(w) = verify_counterstrategy(&m, &ctx.formula)? {
                return Err(ModularError::Verification(format!("counterstrategy admits the satisfying word {w}")));
            }
            Ok((SynthesisResult::Unrealizable(m), Extension::Monolithic))
        }
        SynthesisResult::Realizable(_) => Err(ModularError::Verification(
            "a subspecification is unrealizable but the whole specification is realizable".into(),
        )),
        SynthesisResult::Unknown(reason) => Ok((
            SynthesisResult::Unknown(format!("no counterstrategy for the whole specification: {reason}")),
            Extension::Monolithic,
        )),
    }
}
