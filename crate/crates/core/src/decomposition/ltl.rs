//! Decomposition of LTL specifications by dependency analysis, with and
//! without dropping assumptions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::graph::{build_dependency_graph, connected_components};
use super::{DecompositionError, Subspecification};
use crate::ltl::{rewrite_conjunctive, AgStructure, LtlFormula, SpecContext};

/// A conjunct together with the indices of the source conjuncts it stems from.
#[derive(Debug, Clone)]
struct Tagged {
    formula: LtlFormula,
    origin: BTreeSet<usize>,
}

impl Tagged {
    fn new(formula: LtlFormula, origin: BTreeSet<usize>) -> Self {
        Tagged { formula, origin }
    }

    fn single(formula: LtlFormula, k: usize) -> Self {
        Tagged { formula, origin: [k].into_iter().collect() }
    }
}

fn emit(parts: &[Tagged], inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Subspecification {
    let formula = LtlFormula::and(parts.iter().map(|t| t.formula.clone()).collect());
    let origin: BTreeSet<usize> = parts.iter().flat_map(|t| t.origin.iter().copied()).collect();
    Subspecification { ctx: SpecContext::restricted_to_props(formula, inputs, outputs), origin: origin.into_iter().collect() }
}

fn first_hit(props: &BTreeSet<String>, sets: &[BTreeSet<String>]) -> Option<usize> {
    sets.iter().position(|s| !s.is_disjoint(props))
}

/// Splits conjuncts by the connected components of the dependency graph
/// over the outputs. Returns the non-empty buckets in order.
fn plain_split(conjuncts: &[Tagged], inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Vec<Vec<Tagged>> {
    let formulas: Vec<LtlFormula> = conjuncts.iter().map(|t| t.formula.clone()).collect();
    let graph = build_dependency_graph(&formulas, outputs);
    let mut sets = connected_components(&graph);
    sets.push(inputs.clone());
    let fallback = sets.len() - 1;
    let mut buckets: Vec<Vec<Tagged>> = vec![Vec::new(); sets.len()];
    for t in conjuncts {
        if t.formula == LtlFormula::True {
            continue;
        }
        // closed conjuncts such as `false` land in the input-only bucket
        let at = first_hit(&t.formula.props(), &sets).unwrap_or(fallback);
        buckets[at].push(t.clone());
    }
    buckets.retain(|b| !b.is_empty());
    buckets
}

/// Classical decomposition: rewrite the formula into conjuncts, group
/// them by the connected components of the output dependency graph, and
/// put conjuncts over inputs only into a final bucket.
///
/// `origin` refers to the conjuncts returned by
/// [`rewrite_conjunctive`] for `ctx.formula`.
pub fn decompose_ltl(ctx: &SpecContext) -> Vec<Subspecification> {
    let conjuncts = top_level(&ctx.formula);
    let buckets = plain_split(&conjuncts, &ctx.inputs, &ctx.outputs);
    if buckets.is_empty() {
        return vec![whole(ctx, &conjuncts)];
    }
    buckets.iter().map(|b| emit(b, &ctx.inputs, &ctx.outputs)).collect()
}

fn top_level(formula: &LtlFormula) -> Vec<Tagged> {
    rewrite_conjunctive(formula).into_iter().enumerate().map(|(k, f)| Tagged::single(f, k)).collect()
}

fn whole(ctx: &SpecContext, conjuncts: &[Tagged]) -> Subspecification {
    Subspecification { ctx: ctx.clone(), origin: (0..conjuncts.len()).collect() }
}

/// Propositions that may not be shared between subspecifications: every
/// output, plus every variable linked to an output through a chain of
/// assumptions that mention both ends of each link.
pub fn decomposition_critical_props(assumptions: &[LtlFormula], outputs: &BTreeSet<String>) -> BTreeSet<String> {
    let mut adjacent: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    for a in assumptions {
        let props = a.props();
        for p in &props {
            adjacent.entry(p.clone()).or_default().extend(props.iter().cloned());
        }
    }
    let mut critical: BTreeSet<String> = outputs.clone();
    let mut queue: VecDeque<String> = outputs.iter().cloned().collect();
    while let Some(p) = queue.pop_front() {
        for q in adjacent.get(&p).into_iter().flatten() {
            if critical.insert(q.clone()) {
                queue.push_back(q.clone());
            }
        }
    }
    critical
}

/// One implication `∧assumptions → ∧guarantees` inside a list of
/// conjuncts: the other conjuncts are side conjuncts, `position` is where
/// the implication sits among them.
struct ImplicationSplit<'a> {
    assumptions: &'a [Tagged],
    guarantees: &'a [Tagged],
    sides: &'a [Tagged],
    position: usize,
}

#[derive(Default, Clone)]
struct Bucket {
    assumptions: BTreeSet<usize>,
    guarantees: Vec<usize>,
    sides: Vec<usize>,
}

impl ImplicationSplit<'_> {
    /// Splits along the components of the dependency graph over the
    /// decomposition-critical propositions, dropping free assumptions from
    /// every bucket that does not share an input with them.
    fn split(&self, inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Vec<Vec<Tagged>> {
        let assumption_formulas: Vec<LtlFormula> = self.assumptions.iter().map(|t| t.formula.clone()).collect();
        let critical = decomposition_critical_props(&assumption_formulas, outputs);
        let tracked: Vec<LtlFormula> = self
            .assumptions
            .iter()
            .chain(self.guarantees)
            .chain(self.sides)
            .map(|t| t.formula.clone())
            .collect();
        let graph = build_dependency_graph(&tracked, &critical);
        let mut sets = connected_components(&graph);
        sets.push(inputs.clone());
        let fallback = sets.len() - 1;
        let critical_props = |f: &LtlFormula| -> BTreeSet<String> { f.props().intersection(&critical).cloned().collect() };

        let mut buckets = vec![Bucket::default(); sets.len()];
        let mut free = Vec::new();
        for (k, a) in self.assumptions.iter().enumerate() {
            let props = critical_props(&a.formula);
            if props.is_empty() {
                free.push(k);
            } else {
                buckets[first_hit(&props, &sets).unwrap_or(fallback)].assumptions.insert(k);
            }
        }
        for (k, g) in self.guarantees.iter().enumerate() {
            let at = first_hit(&critical_props(&g.formula), &sets).unwrap_or(fallback);
            buckets[at].guarantees.push(k);
        }
        for (k, s) in self.sides.iter().enumerate() {
            if s.formula == LtlFormula::True {
                continue;
            }
            let at = first_hit(&critical_props(&s.formula), &sets).unwrap_or(fallback);
            buckets[at].sides.push(k);
        }

        // free assumptions join every bucket with guarantees that shares an
        // input with them, closed under sharing among free assumptions
        for b in buckets.iter_mut().filter(|b| !b.guarantees.is_empty()) {
            let mut props: BTreeSet<String> = b
                .assumptions
                .iter()
                .map(|k| &self.assumptions[*k])
                .chain(b.guarantees.iter().map(|k| &self.guarantees[*k]))
                .chain(b.sides.iter().map(|k| &self.sides[*k]))
                .flat_map(|t| t.formula.props())
                .collect();
            loop {
                let joining: Vec<usize> = free
                    .iter()
                    .copied()
                    .filter(|k| !b.assumptions.contains(k))
                    .filter(|k| !self.assumptions[*k].formula.props().is_disjoint(&props))
                    .collect();
                if joining.is_empty() {
                    break;
                }
                for k in joining {
                    props.extend(self.assumptions[k].formula.props());
                    b.assumptions.insert(k);
                }
            }
        }

        buckets.iter().filter_map(|b| self.render(b)).collect()
    }

    fn render(&self, b: &Bucket) -> Option<Vec<Tagged>> {
        let implication = self.implication_part(b);
        let mut out: Vec<Tagged> = Vec::new();
        for k in b.sides.iter().filter(|k| **k < self.position) {
            out.push(self.sides[*k].clone());
        }
        out.extend(implication);
        for k in b.sides.iter().filter(|k| **k >= self.position) {
            out.push(self.sides[*k].clone());
        }
        (!out.is_empty()).then_some(out)
    }

    fn implication_part(&self, b: &Bucket) -> Vec<Tagged> {
        let assumptions: Vec<&Tagged> = b.assumptions.iter().map(|k| &self.assumptions[*k]).collect();
        let guarantees: Vec<&Tagged> = b.guarantees.iter().map(|k| &self.guarantees[*k]).collect();
        let origin: BTreeSet<usize> =
            assumptions.iter().chain(guarantees.iter()).flat_map(|t| t.origin.iter().copied()).collect();
        let lhs = || LtlFormula::and(assumptions.iter().map(|t| t.formula.clone()).collect());
        let rhs = || LtlFormula::and(guarantees.iter().map(|t| t.formula.clone()).collect());
        match (assumptions.is_empty(), guarantees.is_empty()) {
            (true, true) => Vec::new(),
            // a bound assumption without guarantees in its component
            (false, true) => vec![Tagged::new(LtlFormula::implies(lhs(), LtlFormula::True), origin)],
            (true, false) => guarantees.into_iter().cloned().collect(),
            (false, false) => vec![Tagged::new(LtlFormula::implies(lhs(), rhs()), origin)],
        }
    }
}

/// Decomposition of a strict assume-guarantee specification
/// `∧assumptions → ∧guarantees` with assumption dropping.
///
/// The result is only equirealizable with the input if the negated
/// assumptions are unrealizable; checking that is up to the caller.
/// `origin` indexes the list of assumptions followed by the guarantees.
pub fn decompose_ltl_optimized(
    ag: &AgStructure,
    inputs: &BTreeSet<String>,
    outputs: &BTreeSet<String>,
) -> Result<Vec<Subspecification>, DecompositionError> {
    if !ag.is_strict() {
        return Err(DecompositionError::NotAssumeGuarantee);
    }
    let m = ag.assumptions.len();
    let assumptions: Vec<Tagged> = ag.assumptions.iter().enumerate().map(|(k, f)| Tagged::single(f.clone(), k)).collect();
    let guarantees: Vec<Tagged> =
        ag.guarantees.iter().enumerate().map(|(k, f)| Tagged::single(f.clone(), m + k)).collect();
    let split = ImplicationSplit { assumptions: &assumptions, guarantees: &guarantees, sides: &[], position: 0 };
    let buckets = split.split(inputs, outputs);
    if buckets.is_empty() {
        let ctx = SpecContext::restricted_to_props(ag.to_formula(), inputs, outputs);
        return Ok(vec![Subspecification { ctx, origin: (0..m + guarantees.len()).collect() }]);
    }
    Ok(buckets.iter().map(|b| emit(b, inputs, outputs)).collect())
}

/// What to do with the implication chosen for assumption dropping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImplicationCheck<T> {
    /// The negated assumptions are unrealizable, so dropping is sound.
    Droppable,
    /// Do not drop assumptions of this implication.
    Keep,
    /// The whole subspecification is settled by `T`; stop decomposing it.
    Settled(T),
}

/// A subspecification produced by [`decompose_guarded`], possibly already
/// settled by the guard.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardedPart<T> {
    pub spec: Subspecification,
    pub settled: Option<T>,
}

/// Optimized decomposition of a specification with any number of
/// conjuncts and implications.
///
/// First splits along the output dependency graph. Each part that does not
/// split further is searched for an implication, in order of appearance,
/// whose assumptions can be dropped to split it; `guard` is consulted
/// before dropping and sees the part's context together with the chosen
/// implication (its side conjuncts are the part's other conjuncts). Every
/// part obtained from a split is decomposed again.
///
/// `origin` refers to the conjuncts returned by [`rewrite_conjunctive`]
/// for `ctx.formula`.
pub fn decompose_guarded<T, E>(
    ctx: &SpecContext,
    guard: &mut dyn FnMut(&SpecContext, &AgStructure) -> Result<ImplicationCheck<T>, E>,
) -> Result<Vec<GuardedPart<T>>, E> {
    let conjuncts = top_level(&ctx.formula);
    let mut out = Vec::new();
    refine(&conjuncts, &ctx.inputs, &ctx.outputs, None, guard, &mut out)?;
    if out.is_empty() {
        out.push(GuardedPart { spec: whole(ctx, &conjuncts), settled: None });
    }
    Ok(out)
}

fn refine<T, E>(
    conjuncts: &[Tagged],
    inputs: &BTreeSet<String>,
    outputs: &BTreeSet<String>,
    // origin of the implication to try first
    first: Option<usize>,
    guard: &mut dyn FnMut(&SpecContext, &AgStructure) -> Result<ImplicationCheck<T>, E>,
    out: &mut Vec<GuardedPart<T>>,
) -> Result<(), E> {
    let buckets = plain_split(conjuncts, inputs, outputs);
    if buckets.len() > 1 {
        for b in &buckets {
            refine(b, inputs, outputs, None, guard, out)?;
        }
        return Ok(());
    }
    let Some(part) = buckets.into_iter().next() else {
        return Ok(());
    };
    let mut order: Vec<usize> = (0..part.len()).filter(|k| matches!(part[*k].formula, LtlFormula::Implies(..))).collect();
    if let Some(f) = first {
        if let Some(at) = order.iter().position(|k| part[*k].origin.len() == 1 && part[*k].origin.contains(&f)) {
            let k = order.remove(at);
            order.insert(0, k);
        }
    }
    for k in order {
        let ag = AgStructure::from_implication(&part[k].formula).expect("filtered for implications");
        if ag.guarantees.is_empty() {
            continue;
        }
        let tag = |f: &LtlFormula| Tagged::new(f.clone(), part[k].origin.clone());
        let assumptions: Vec<Tagged> = ag.assumptions.iter().map(tag).collect();
        let guarantees: Vec<Tagged> = ag.guarantees.iter().map(tag).collect();
        let sides: Vec<Tagged> = part.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, t)| t.clone()).collect();
        let split = ImplicationSplit { assumptions: &assumptions, guarantees: &guarantees, sides: &sides, position: k };
        let pieces = split.split(inputs, outputs);
        if pieces.len() < 2 {
            continue;
        }
        let verdict = if assumptions.is_empty() {
            ImplicationCheck::Droppable
        } else {
            let whole = emit(&part, inputs, outputs);
            let mut full = ag.clone();
            full.side_conjuncts = sides.iter().map(|t| t.formula.clone()).collect();
            guard(&whole.ctx, &full)?
        };
        match verdict {
            ImplicationCheck::Droppable => {
                for p in &pieces {
                    refine(p, inputs, outputs, None, guard, out)?;
                }
                return Ok(());
            }
            ImplicationCheck::Keep => continue,
            ImplicationCheck::Settled(t) => {
                out.push(GuardedPart { spec: emit(&part, inputs, outputs), settled: Some(t) });
                return Ok(());
            }
        }
    }
    out.push(GuardedPart { spec: emit(&part, inputs, outputs), settled: None });
    Ok(())
}

/// Optimized decomposition of `side ∧ (∧assumptions → ∧guarantees)`,
/// trying the given implication first and the implications among the side
/// conjuncts afterwards. Assumptions are dropped without any realizability
/// check, see [`decompose_guarded`] for the checked variant.
///
/// `origin` refers to the side conjuncts followed by the implication.
pub fn decompose_ltl_conjuncts(
    ag: &AgStructure,
    inputs: &BTreeSet<String>,
    outputs: &BTreeSet<String>,
) -> Result<Vec<Subspecification>, DecompositionError> {
    let has_implication = !ag.assumptions.is_empty()
        || ag.side_conjuncts.iter().any(|c| matches!(c, LtlFormula::Implies(..)));
    if !has_implication {
        return Err(DecompositionError::NoImplication);
    }
    let mut conjuncts: Vec<Tagged> =
        ag.side_conjuncts.iter().enumerate().map(|(k, f)| Tagged::single(f.clone(), k)).collect();
    let main = conjuncts.len();
    conjuncts.push(Tagged::single(ag.implication(), main));
    let mut out = Vec::new();
    let mut always = |_: &SpecContext, _: &AgStructure| Ok::<_, std::convert::Infallible>(ImplicationCheck::<()>::Droppable);
    refine(&conjuncts, inputs, outputs, Some(main), &mut always, &mut out).unwrap_or_else(|e| match e {});
    if out.is_empty() {
        let ctx = SpecContext::restricted_to_props(ag.to_formula(), inputs, outputs);
        return Ok(vec![Subspecification { ctx, origin: (0..conjuncts.len()).collect() }]);
    }
    Ok(out.into_iter().map(|p| p.spec).collect())
}
