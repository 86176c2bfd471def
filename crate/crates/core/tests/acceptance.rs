//! Acceptance checks, one line per criterion. Runs as its own binary so the
//! pass/fail lines are always printed; exits with status 1 if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use modsynth::automata::{compose, contains, equivalent, project, reduce, Nba};
use modsynth::decomposition::{decompose_ltl, decompose_nba, decompose_spec, Mode, Subspecification};
use modsynth::ltl::{evaluate, rewrite_conjunctive, AgStructure, LassoWord, LtlFormula, SpecContext};
use modsynth::modular::{modular_synthesize, modular_synthesize_ag, ModularRun};
use modsynth::synthesis::{verify, Builtin, BuiltinOptions, SynthesisBackend, SynthesisResult, Verdict};

type Check = fn() -> Result<String, String>;

fn ensure(cond: bool, message: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(message())
    }
}

fn backend() -> Builtin {
    Builtin(BuiltinOptions::default())
}

fn words_at_most(aps: &[String]) -> impl Iterator<Item = LassoWord> + '_ {
    LassoWord::enumerate(aps, 5)
}

fn ms(d: Duration) -> String {
    format!("{:.1} ms", d.as_secs_f64() * 1e3)
}

/// The automaton of `F o1 && G (i -> F o2)` splits into the two hand-entered
/// projections.
fn split_of_eventual_response() -> Result<String, String> {
    let start = Instant::now();
    let a = spec_nba(&corpus("eventual_response").ctx());
    let parts = decompose_nba(&a).map_err(|e| e.to_string())?;
    ensure(parts.len() == 2, || format!("{} subautomata instead of 2", parts.len()))?;
    for part in &parts {
        let expected = if part.outputs().contains("o1") { projection_to_o1() } else { projection_to_o2() };
        ensure(part.outputs() == expected.outputs(), || format!("unexpected outputs {:?}", part.outputs()))?;
        let same = equivalent(part, &expected).map_err(|e| e.to_string())?;
        ensure(same, || format!("part over {:?} differs from the hand-entered automaton", part.outputs()))?;
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {}", ms(elapsed)))?;
    Ok(format!("2 subautomata, both language-equivalent to the hand-entered ones, {}", ms(elapsed)))
}

/// The disjunctive variant cannot be split; its only candidate split
/// composes to the universal language.
fn disjunctive_example_stays_whole() -> Result<String, String> {
    let start = Instant::now();
    let a = spec_nba(&corpus("disjunctive").ctx());
    let parts = decompose_nba(&a).map_err(|e| e.to_string())?;
    ensure(parts.len() == 1 && parts[0] == a, || format!("{} subautomata, expected the input unchanged", parts.len()))?;
    let err = |e: modsynth::automata::AutomataError| e.to_string();
    let left = reduce(&project(&a, &set(&["i", "o1"])).map_err(err)?);
    let right = reduce(&project(&a, &set(&["i", "o2"])).map_err(err)?);
    let composition = compose(&left, &right).map_err(err)?;
    let universal = Nba::universal(composition.aps().to_vec(), composition.outputs().clone()).map_err(err)?;
    ensure(contains(&universal, &composition).map_err(err)?, || "composition is not universal".into())?;
    ensure(contains(&composition, &universal).map_err(err)?, || "universal language not within composition".into())?;
    ensure(!contains(&composition, &a).map_err(err)?, || "rejected split unexpectedly valid".into())?;
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(5), || format!("took {}", ms(elapsed)))?;
    Ok(format!("input returned unchanged, rejected split composes to the universal language, {}", ms(elapsed)))
}

/// Verdict of modular synthesis against monolithic synthesis on the corpus.
fn equirealizability() -> Result<String, String> {
    let backend = backend();
    let mut decided = 0;
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for spec in CORPUS {
        let c = spec.ctx();
        ensure(c.formula.props().len() <= 5, || format!("{} has more than five propositions", spec.name))?;
        let expected = backend.synthesize(&c).map_err(|e| format!("{}: {e}", spec.name))?.verdict();
        if expected == Verdict::Unknown {
            continue;
        }
        decided += 1;
        let runs: [(&str, Result<ModularRun, _>); 3] = [
            ("ltl", modular_synthesize(&c, Mode::Ltl, &backend, 1)),
            ("ltl-opt", modular_synthesize(&c, Mode::LtlOpt, &backend, 1)),
            ("assume-guarantee", modular_synthesize_ag(&c, &backend, 1)),
        ];
        for (how, run) in runs {
            let run = run.map_err(|e| format!("{} ({how}): {e}", spec.name))?;
            checked += 1;
            if run.verdict() != expected {
                mismatches.push(format!("{} ({how}): {} vs {}", spec.name, run.verdict(), expected));
            }
            if let SynthesisResult::Realizable(s) = &run.result {
                let ok = verify(s, &c.formula).map_err(|e| e.to_string())?.is_none();
                ensure(ok, || format!("{} ({how}): composed strategy fails verification", spec.name))?;
            }
        }
    }
    ensure(CORPUS.len() >= 20, || format!("corpus has only {} specifications", CORPUS.len()))?;
    ensure(mismatches.is_empty(), || mismatches.join("; "))?;
    Ok(format!("{decided}/{} specifications decided, {checked} modular runs agree", CORPUS.len()))
}

/// `w |= φ` iff every part holds on `w` restricted to its variables.
fn sublanguages_are_independent(c: &SpecContext, parts: &[Subspecification]) -> Result<usize, String> {
    if parts.len() == 1 && parts[0].ctx.formula == c.formula {
        return Ok(0);
    }
    let aps: Vec<String> = c.formula.props().into_iter().collect();
    let vars: Vec<BTreeSet<String>> = parts.iter().map(|s| s.ctx.formula.props()).collect();
    let mut count = 0;
    for w in words_at_most(&aps) {
        let whole = evaluate(&c.formula, &w).map_err(|e| e.to_string())?;
        let mut all = true;
        for (s, v) in parts.iter().zip(&vars) {
            if !evaluate(&s.ctx.formula, &w.restrict(v)).map_err(|e| e.to_string())? {
                all = false;
                break;
            }
        }
        ensure(whole == all, || format!("word {w}: whole {whole}, parts {all}"))?;
        count += 1;
    }
    Ok(count)
}

fn independent_sublanguages() -> Result<String, String> {
    let mut words = 0;
    let mut decompositions = 0;
    let mut trivial = 0;
    for spec in CORPUS {
        let c = spec.ctx();
        if c.formula.props().len() > 4 {
            continue;
        }
        let parts = decompose_ltl(&c);
        let n = sublanguages_are_independent(&c, &parts).map_err(|e| format!("{}: {e}", spec.name))?;
        decompositions += 1;
        if n == 0 {
            trivial += 1;
        }
        words += n;
    }
    Ok(format!(
        "{decompositions} decompositions ({trivial} single-part), {words} lasso words up to 5 positions, no violations"
    ))
}

/// Drops, in every implication on its own, the assumptions sharing no
/// variable with that implication's guarantees, then splits classically.
fn naive_dropper(c: &SpecContext) -> Vec<Subspecification> {
    let conjuncts = rewrite_conjunctive(&c.formula)
        .into_iter()
        .map(|conj| match AgStructure::from_implication(&conj) {
            Some(mut ag) => {
                let gvars: BTreeSet<String> = ag.guarantees.iter().flat_map(|g| g.props()).collect();
                ag.assumptions.retain(|a| !a.props().is_disjoint(&gvars));
                ag.implication()
            }
            None => conj,
        })
        .collect();
    decompose_ltl(&SpecContext { formula: LtlFormula::and(conjuncts), ..c.clone() })
}

fn assumption_dropping_guardrails() -> Result<String, String> {
    let backend = backend();
    // a falsifiable assumption
    let c = corpus("falsifiable_assumption").ctx();
    let run = modular_synthesize_ag(&c, &backend, 1).map_err(|e| e.to_string())?;
    let negated = run.negated_assumptions.as_ref().map(|r| r.verdict());
    ensure(negated == Some(Verdict::Realizable), || format!("negated assumption gave {negated:?}"))?;
    ensure(run.parts.is_empty(), || "decomposition ran although the assumption is falsifiable".into())?;
    let SynthesisResult::Realizable(s) = &run.result else {
        return Err(format!("verdict {}", run.verdict()));
    };
    ensure(verify(s, &p("G !o1")).map_err(|e| e.to_string())?.is_none(), || "strategy sets o1".into())?;

    // side conjuncts link the assumption to the guarantee
    let c = corpus("side_conjuncts").ctx();
    let run = modular_synthesize_ag(&c, &backend, 1).map_err(|e| e.to_string())?;
    ensure(run.verdict() == Verdict::Realizable, || format!("verdict {}", run.verdict()))?;
    let kept = run.parts.iter().any(|part| {
        rewrite_conjunctive(&part.spec.ctx.formula)
            .iter()
            .filter_map(AgStructure::from_implication)
            .any(|ag| ag.assumptions.contains(&p("G i")))
    });
    ensure(kept, || "assumption G i was dropped".into())?;
    let naive = naive_dropper(&c);
    let naive_formula = LtlFormula::and(naive.iter().map(|s| s.ctx.formula.clone()).collect());
    ensure(!naive_formula.props().is_empty() && !naive_formula.to_string().contains("G i ->"), || {
        format!("naive dropper kept the assumption: {naive_formula}")
    })?;
    let naive_ctx = SpecContext { formula: naive_formula.clone(), ..c.clone() };
    let naive_verdict = backend.synthesize(&naive_ctx).map_err(|e| e.to_string())?.verdict();
    ensure(naive_verdict == Verdict::Unrealizable, || format!("naive dropping gives {naive_verdict}"))?;
    Ok(format!(
        "falsifiable assumption settled up front; side-conjunct example realizable with G i kept, naive dropping yields unrealizable `{naive_formula}`"
    ))
}

fn counterstrategy_extension() -> Result<String, String> {
    let backend = backend();
    let mut compatible = 0;
    for name in UNREALIZABLE {
        let c = corpus(name).ctx();
        let run = modular_synthesize(&c, Mode::LtlOpt, &backend, 1).map_err(|e| format!("{name}: {e}"))?;
        let SynthesisResult::Unrealizable(cs) = &run.result else {
            return Err(format!("{name}: verdict {}", run.verdict()));
        };
        let aps: Vec<String> = cs.inputs().iter().chain(cs.outputs()).cloned().collect();
        ensure(aps.len() <= 4, || format!("{name}: more than four propositions"))?;
        let mut seen = 0;
        for w in words_at_most(&aps) {
            if cs.is_compatible(&w) {
                ensure(!evaluate(&c.formula, &w).map_err(|e| e.to_string())?, || {
                    format!("{name}: compatible word {w} satisfies the formula")
                })?;
                seen += 1;
            }
        }
        ensure(seen > 0, || format!("{name}: no compatible word enumerated"))?;
        compatible += seen;
    }
    Ok(format!("{} unrealizable specifications, {compatible} compatible words, all violate", UNREALIZABLE.len()))
}

fn shift_scaling() -> Result<String, String> {
    let mut times = Vec::new();
    for n in [4, 8, 12] {
        let c = shift(n);
        for mode in [Mode::Ltl, Mode::LtlOpt] {
            let start = Instant::now();
            let parts = decompose_spec(&c, mode);
            let elapsed = start.elapsed();
            ensure(parts.len() == n, || format!("shift {n} ({mode}): {} parts", parts.len()))?;
            ensure(elapsed < Duration::from_millis(100), || format!("shift {n} ({mode}): {}", ms(elapsed)))?;
            if mode == Mode::Ltl {
                times.push(format!("n={n}: {}", ms(elapsed)));
            }
        }
    }
    Ok(format!("n subspecifications for n = 4, 8, 12 ({})", times.join(", ")))
}

fn nba_corpus() -> Vec<(String, Nba)> {
    let mut all: Vec<(String, Nba)> = ["eventual_response", "immediate_response", "disjunctive", "copy_pair", "mutual_exclusion", "shift_2", "unused_output"]
        .iter()
        .map(|name| (name.to_string(), spec_nba(&corpus(name).ctx())))
        .collect();
    all.push(("projection_to_o1".into(), projection_to_o1()));
    all.push(("projection_to_o2".into(), projection_to_o2()));
    all.push(("three_outputs".into(), spec_nba(&ctx("F o1 && G (i -> F o2) && G (o3 <-> i)", &["i"], &["o1", "o2", "o3"]))));
    all
}

fn irreducibility() -> Result<String, String> {
    let mut emitted = 0;
    let corpus = nba_corpus();
    for (name, a) in &corpus {
        let parts = decompose_nba(a).map_err(|e| format!("{name}: {e}"))?;
        for part in &parts {
            let again = decompose_nba(part).map_err(|e| format!("{name}: {e}"))?;
            ensure(again.len() == 1 && &again[0] == part, || {
                format!("{name}: subautomaton over {:?} split again into {}", part.outputs(), again.len())
            })?;
            emitted += 1;
        }
    }
    Ok(format!("{} automata, {emitted} subautomata, every one a fixpoint", corpus.len()))
}

fn main() {
    let criteria: [(&str, Check); 8] = [
        ("eventual response splits into its two projections", split_of_eventual_response),
        ("disjunctive example is not decomposable", disjunctive_example_stays_whole),
        ("modular and monolithic verdicts agree", equirealizability),
        ("decompositions have independent sublanguages", independent_sublanguages),
        ("assumption dropping is guarded", assumption_dropping_guardrails),
        ("extended counterstrategies refute the whole formula", counterstrategy_extension),
        ("shift specifications split into n parts quickly", shift_scaling),
        ("emitted subautomata are irreducible", irreducibility),
    ];
    let mut failed = 0;
    for (k, (title, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {}: PASS {title}: {detail} [{elapsed:.2} s]", k + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {}: FAIL {title}: {reason} [{elapsed:.2} s]", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
