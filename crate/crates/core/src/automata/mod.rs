//! Nondeterministic Büchi automata with symbolic edge labels.
//!
//! Edge labels are Boolean constraints ([`Label`]) over the automaton's
//! proposition list, so projection is plain existential quantification on
//! labels and never enumerates letters.

mod complement;
mod graph;
pub mod hoa;
mod label;
mod reduce;
mod translate;

use std::collections::{BTreeMap, BTreeSet};

use crate::ltl::{LassoError, LassoWord, LtlFormula};

pub use complement::{complement, complement_with, contains, containment_counterexample, equivalent, ComplementLimits};
pub use graph::Lasso;
pub use label::{Cube, Label};
pub use reduce::reduce;
pub use translate::ltl_to_nba;

pub(crate) use graph::{find_accepting_lasso, Explored};

/// Upper bound on the number of product nodes explored by searches.
pub const DEFAULT_SEARCH_LIMIT: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutomataError {
    #[error("`{0}` is not a propositional formula")]
    NotPropositional(String),
    #[error("proposition `{0}` is not part of the automaton's alphabet")]
    UnknownProp(String),
    #[error("at most {0} propositions are supported by this operation")]
    TooManyProps(usize),
    #[error("automaton has {states} states after reduction, above the complementation bound of {limit}")]
    ComplementBound { states: usize, limit: usize },
    #[error("{what} exceeded the limit of {limit} states")]
    StateLimit { what: &'static str, limit: usize },
    #[error("invalid automaton: {0}")]
    Invalid(String),
    #[error(transparent)]
    Lasso(#[from] LassoError),
}

/// A nondeterministic Büchi automaton over valuations of `aps`.
///
/// Valuations are bitmasks where bit `k` stands for `aps[k]`. Propositions
/// listed in `outputs` are controlled by the system; all others are inputs.
/// Between any two states there is at most one edge, whose label is the
/// disjunction of everything added for that pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nba {
    aps: Vec<String>,
    outputs: BTreeSet<String>,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
    edges: Vec<BTreeMap<usize, Label>>,
}

/// An accepting run: states visited by the prefix and by the repeated loop,
/// together with the word the run reads.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunCertificate {
    pub prefix_states: Vec<usize>,
    pub cycle_states: Vec<usize>,
    pub word: LassoWord,
}

impl Nba {
    pub fn new(aps: Vec<String>, outputs: BTreeSet<String>) -> Result<Nba, AutomataError> {
        if aps.len() > 64 {
            return Err(AutomataError::TooManyProps(64));
        }
        let distinct: BTreeSet<&String> = aps.iter().collect();
        if distinct.len() != aps.len() {
            return Err(AutomataError::Invalid("duplicate proposition".into()));
        }
        if let Some(o) = outputs.iter().find(|o| !aps.contains(o)) {
            return Err(AutomataError::UnknownProp(o.clone()));
        }
        Ok(Nba { aps, outputs, initial: BTreeSet::new(), accepting: BTreeSet::new(), edges: Vec::new() })
    }

    /// One accepting state with a `true` self-loop.
    pub fn universal(aps: Vec<String>, outputs: BTreeSet<String>) -> Result<Nba, AutomataError> {
        let mut a = Nba::new(aps, outputs)?;
        let q = a.add_state();
        a.set_initial(q);
        a.set_accepting(q, true);
        a.add_edge(q, Label::tt(), q);
        Ok(a)
    }

    /// One non-accepting initial state without edges.
    pub fn empty(aps: Vec<String>, outputs: BTreeSet<String>) -> Result<Nba, AutomataError> {
        let mut a = Nba::new(aps, outputs)?;
        let q = a.add_state();
        a.set_initial(q);
        Ok(a)
    }

    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    pub fn outputs(&self) -> &BTreeSet<String> {
        &self.outputs
    }

    pub fn inputs(&self) -> BTreeSet<String> {
        self.aps.iter().filter(|a| !self.outputs.contains(*a)).cloned().collect()
    }

    pub fn ap_set(&self) -> BTreeSet<String> {
        self.aps.iter().cloned().collect()
    }

    /// Replaces the input/output classification.
    pub fn with_outputs(mut self, outputs: BTreeSet<String>) -> Result<Nba, AutomataError> {
        if let Some(o) = outputs.iter().find(|o| !self.aps.contains(o)) {
            return Err(AutomataError::UnknownProp(o.clone()));
        }
        self.outputs = outputs;
        Ok(self)
    }

    pub fn num_states(&self) -> usize {
        self.edges.len()
    }

    pub fn add_state(&mut self) -> usize {
        self.edges.push(BTreeMap::new());
        self.edges.len() - 1
    }

    pub fn set_initial(&mut self, q: usize) {
        self.initial.insert(q);
    }

    pub fn set_accepting(&mut self, q: usize, accepting: bool) {
        if accepting {
            self.accepting.insert(q);
        } else {
            self.accepting.remove(&q);
        }
    }

    /// Adds `label` to the edge `src → dst`. `false` labels add nothing.
    pub fn add_edge(&mut self, src: usize, label: Label, dst: usize) {
        if label.is_false() {
            return;
        }
        let slot = self.edges[src].entry(dst).or_insert_with(Label::ff);
        *slot = slot.or(&label);
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn is_accepting(&self, q: usize) -> bool {
        self.accepting.contains(&q)
    }

    /// Outgoing edges of `q` as `(target, label)`, ordered by target.
    pub fn edges(&self, q: usize) -> impl Iterator<Item = (usize, &Label)> {
        self.edges[q].iter().map(|(d, l)| (*d, l))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(|e| e.len()).sum()
    }

    /// Targets of `q` reading `letter`.
    pub fn successors(&self, q: usize, letter: u64) -> impl Iterator<Item = usize> + '_ {
        self.edges[q].iter().filter(move |(_, l)| l.matches(letter)).map(|(d, _)| *d)
    }

    /// Bit mask covering all propositions.
    pub fn letter_mask(&self) -> u64 {
        if self.aps.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.aps.len()) - 1
        }
    }

    /// True if there is a single initial state and the labels leaving each
    /// state are pairwise disjoint.
    pub fn is_deterministic(&self) -> bool {
        if self.initial.len() > 1 {
            return false;
        }
        self.edges.iter().all(|out| {
            let labels: Vec<&Label> = out.values().collect();
            (0..labels.len()).all(|i| (0..i).all(|j| !labels[i].intersects(labels[j])))
        })
    }

    /// Decides whether the automaton accepts `word`. The word must mention
    /// every proposition of the automaton; further propositions are ignored.
    pub fn accepts(&self, word: &LassoWord) -> Result<bool, AutomataError> {
        if let Some(p) = self.aps.iter().find(|a| !word.aps().contains(a)) {
            return Err(AutomataError::UnknownProp(p.clone()));
        }
        let w = word.over(&self.aps);
        let found = find_accepting_lasso(
            self.initial.iter().map(|&q| (q, 0usize)),
            |&(q, k)| {
                let letter = w.letter(k);
                let next = w.succ(k);
                self.successors(q, letter).map(|d| ((d, next), ())).collect()
            },
            |(q, _)| self.is_accepting(*q),
            usize::MAX,
        )
        .expect("no limit");
        Ok(found.is_some())
    }

    /// An accepting run if the language is non-empty.
    pub fn find_accepting_run(&self) -> Option<RunCertificate> {
        let lasso = find_accepting_lasso(
            self.initial.iter().copied(),
            |&q| self.edges(q).map(|(d, l)| (d, l.min_letter().expect("edges are satisfiable"))).collect(),
            |q| self.is_accepting(*q),
            usize::MAX,
        )
        .expect("no limit")?;
        Some(self.certificate(lasso))
    }

    fn certificate(&self, lasso: Lasso<usize, u64>) -> RunCertificate {
        let word = LassoWord::new(
            self.aps.clone(),
            lasso.prefix.iter().map(|(_, l)| *l).collect(),
            lasso.cycle.iter().map(|(_, l)| *l).collect(),
        )
        .expect("letters are within the alphabet");
        RunCertificate {
            prefix_states: lasso.prefix.into_iter().map(|(q, _)| q).collect(),
            cycle_states: lasso.cycle.into_iter().map(|(q, _)| q).collect(),
            word,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.find_accepting_run().is_none()
    }

    /// Checks that a certificate is an accepting run of this automaton.
    pub fn replays(&self, cert: &RunCertificate) -> bool {
        let states: Vec<usize> = cert.prefix_states.iter().chain(cert.cycle_states.iter()).copied().collect();
        if states.is_empty() || cert.cycle_states.is_empty() || !self.initial.contains(&states[0]) {
            return false;
        }
        if cert.word.positions() != states.len() || cert.word.aps() != self.aps.as_slice() {
            return false;
        }
        let ok_steps = (0..states.len()).all(|k| {
            let next = states[cert.word.succ(k)];
            self.edges[states[k]].get(&next).is_some_and(|l| l.matches(cert.word.letter(k)))
        });
        ok_steps && cert.cycle_states.iter().any(|q| self.is_accepting(*q))
    }

    /// Bit position of every proposition of `self` inside `target`.
    fn bit_map(&self, target: &[String]) -> Vec<Option<usize>> {
        self.aps.iter().map(|a| target.iter().position(|t| t == a)).collect()
    }

    /// Re-encodes labels over a new proposition list. Propositions missing
    /// from `target` are quantified away.
    fn relabel(&self, target: Vec<String>) -> Nba {
        let map = self.bit_map(&target);
        let outputs = self.outputs.iter().filter(|o| target.contains(o)).cloned().collect();
        let edges = self
            .edges
            .iter()
            .map(|out| {
                let mut m: BTreeMap<usize, Label> = BTreeMap::new();
                for (d, l) in out {
                    let l = l.remap(&map);
                    if !l.is_false() {
                        m.insert(*d, l);
                    }
                }
                m
            })
            .collect();
        Nba { aps: target, outputs, initial: self.initial.clone(), accepting: self.accepting.clone(), edges }
    }

    /// Renames/reorders the alphabet to `target`, which must contain every
    /// proposition of the automaton.
    pub fn over(&self, target: &[String]) -> Result<Nba, AutomataError> {
        if let Some(p) = self.aps.iter().find(|a| !target.contains(a)) {
            return Err(AutomataError::UnknownProp(p.clone()));
        }
        if target.len() > 64 {
            return Err(AutomataError::TooManyProps(64));
        }
        Ok(self.relabel(target.to_vec()))
    }
}

/// The label admitting exactly the valuations of `aps` that satisfy the
/// propositional formula `f`.
pub fn propositional_label(f: &LtlFormula, aps: &[String]) -> Result<Label, AutomataError> {
    let rec = |g: &LtlFormula| propositional_label(g, aps);
    Ok(match f {
        LtlFormula::True => Label::tt(),
        LtlFormula::False => Label::ff(),
        LtlFormula::Ap(name) => {
            let bit = aps.iter().position(|a| a == name).ok_or_else(|| AutomataError::UnknownProp(name.clone()))?;
            Label::literal(bit, true)
        }
        LtlFormula::Not(g) => rec(g)?.negate(),
        LtlFormula::And(gs) => gs.iter().try_fold(Label::tt(), |acc, g| Ok::<_, AutomataError>(acc.and(&rec(g)?)))?,
        LtlFormula::Or(gs) => gs.iter().try_fold(Label::ff(), |acc, g| Ok::<_, AutomataError>(acc.or(&rec(g)?)))?,
        LtlFormula::Implies(a, b) => rec(a)?.negate().or(&rec(b)?),
        LtlFormula::Iff(a, b) => {
            let (a, b) = (rec(a)?, rec(b)?);
            a.and(&b).or(&a.negate().and(&b.negate()))
        }
        _ => return Err(AutomataError::NotPropositional(f.to_string())),
    })
}

/// Projection of `a` to the propositions in `keep`: same states, every
/// label existentially quantified over the propositions outside `keep`.
pub fn project(a: &Nba, keep: &BTreeSet<String>) -> Result<Nba, AutomataError> {
    if let Some(p) = keep.iter().find(|p| !a.aps.contains(p)) {
        return Err(AutomataError::UnknownProp(p.clone()));
    }
    let target: Vec<String> = a.aps.iter().filter(|x| keep.contains(*x)).cloned().collect();
    Ok(a.relabel(target))
}

fn union_alphabet(a1: &Nba, a2: &Nba) -> Result<(Vec<String>, BTreeSet<String>), AutomataError> {
    let mut aps = a1.aps.clone();
    for p in &a2.aps {
        if !aps.contains(p) {
            aps.push(p.clone());
        }
    }
    if aps.len() > 64 {
        return Err(AutomataError::TooManyProps(64));
    }
    let outputs = a1.outputs.union(&a2.outputs).cloned().collect();
    Ok((aps, outputs))
}

/// Parallel composition: product states, a transition iff both components
/// admit the letter restricted to their propositions, accepting states
/// `F1 × F2`.
///
/// Requiring both components to be accepting at the same time
/// under-approximates the intersection of the two languages when both have
/// non-trivial acceptance; use [`intersection`] for the exact product.
pub fn compose(a1: &Nba, a2: &Nba) -> Result<Nba, AutomataError> {
    product(a1, a2, false)
}

/// Exact intersection over the union alphabet: a two-copy product that
/// alternately waits for an accepting state of each operand.
pub fn intersection(a1: &Nba, a2: &Nba) -> Result<Nba, AutomataError> {
    product(a1, a2, true)
}

fn product(a1: &Nba, a2: &Nba, exact: bool) -> Result<Nba, AutomataError> {
    let (aps, outputs) = union_alphabet(a1, a2)?;
    let l1 = a1.relabel(aps.clone());
    let l2 = a2.relabel(aps.clone());
    let mut out = Nba::new(aps, outputs)?;
    // state key: (q1, q2, copy)
    let mut index: BTreeMap<(usize, usize, u8), usize> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::new();
    let mut intern = |key: (usize, usize, u8), out: &mut Nba, queue: &mut std::collections::VecDeque<(usize, usize, u8)>| {
        *index.entry(key).or_insert_with(|| {
            let id = out.add_state();
            let acc = if exact { key.2 == 0 && l1.is_accepting(key.0) } else { l1.is_accepting(key.0) && l2.is_accepting(key.1) };
            out.set_accepting(id, acc);
            queue.push_back(key);
            id
        })
    };
    for &q1 in &l1.initial {
        for &q2 in &l2.initial {
            let id = intern((q1, q2, 0), &mut out, &mut queue);
            out.set_initial(id);
        }
    }
    while let Some(key @ (q1, q2, copy)) = queue.pop_front() {
        let src = intern(key, &mut out, &mut queue);
        let next_copy = if !exact {
            0
        } else if copy == 0 && l1.is_accepting(q1) {
            1
        } else if copy == 1 && l2.is_accepting(q2) {
            0
        } else {
            copy
        };
        for (d1, lab1) in l1.edges(q1) {
            for (d2, lab2) in l2.edges(q2) {
                let lab = lab1.and(lab2);
                if lab.is_false() {
                    continue;
                }
                let dst = intern((d1, d2, next_copy), &mut out, &mut queue);
                out.add_edge(src, lab, dst);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
pub(crate) mod tests;
