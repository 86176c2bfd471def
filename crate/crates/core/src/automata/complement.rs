//! Complementation and language containment.
//!
//! Deterministic automata are complemented with the two-copy co-Büchi
//! construction. Everything else goes through the rank-based construction
//! with tight level rankings: a subset phase followed by a guessed jump into
//! a ranking phase, where runs are accepting iff the set of even-ranked
//! states still being tracked empties infinitely often.

use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{intersection, reduce, AutomataError, Cube, Label, Nba};
use crate::ltl::LassoWord;

/// Bounds keeping the exponential constructions at desk scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComplementLimits {
    /// Maximum number of states of the (reduced) input automaton.
    pub max_states: usize,
    /// Maximum number of states explored in the result.
    pub max_result_states: usize,
    /// Maximum alphabet size; letters are enumerated explicitly.
    pub max_aps: usize,
}

impl Default for ComplementLimits {
    fn default() -> Self {
        ComplementLimits { max_states: 12, max_result_states: 200_000, max_aps: 10 }
    }
}

/// Complement with the default [`ComplementLimits`].
pub fn complement(a: &Nba) -> Result<Nba, AutomataError> {
    complement_with(a, &ComplementLimits::default())
}

pub fn complement_with(a: &Nba, limits: &ComplementLimits) -> Result<Nba, AutomataError> {
    let r = reduce(a);
    if r.accepting().is_empty() {
        return Nba::universal(a.aps().to_vec(), a.outputs().clone());
    }
    if r.num_states() > limits.max_states {
        return Err(AutomataError::ComplementBound { states: r.num_states(), limit: limits.max_states });
    }
    let out = if r.is_deterministic() { complement_deterministic(&r) } else { complement_ranked(&r, limits)? };
    Ok(reduce(&out))
}

fn complement_deterministic(a: &Nba) -> Nba {
    let n = a.num_states();
    let sink = n;
    // completed transition relation
    let mut rows: Vec<Vec<(usize, Label)>> = (0..n)
        .map(|q| {
            let mut row: Vec<(usize, Label)> = a.edges(q).map(|(d, l)| (d, l.clone())).collect();
            let covered = row.iter().fold(Label::ff(), |acc, (_, l)| acc.or(l));
            let missing = covered.negate();
            if !missing.is_false() {
                row.push((sink, missing));
            }
            row
        })
        .collect();
    rows.push(vec![(sink, Label::tt())]);
    let rejecting = |q: usize| q == sink || !a.is_accepting(q);

    let mut out = Nba::new(a.aps().to_vec(), a.outputs().clone()).expect("same alphabet");
    // copy 0: states 0..=n, copy 1: states n+1..=2n+1 (only rejecting ones used)
    for _ in 0..2 * (n + 1) {
        out.add_state();
    }
    let second = |q: usize| n + 1 + q;
    for &q in a.initial() {
        out.set_initial(q);
    }
    for (q, row) in rows.iter().enumerate() {
        for (d, l) in row {
            out.add_edge(q, l.clone(), *d);
            if rejecting(*d) {
                out.add_edge(q, l.clone(), second(*d));
                if rejecting(q) {
                    out.add_edge(second(q), l.clone(), second(*d));
                }
            }
        }
        if rejecting(q) {
            out.set_accepting(second(q), true);
        }
    }
    out
}

const NO_RANK: u8 = u8::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Macro {
    Subset(u64),
    Ranked { ranks: Vec<u8>, tracked: u64 },
}

fn complement_ranked(a: &Nba, limits: &ComplementLimits) -> Result<Nba, AutomataError> {
    let n = a.num_states();
    let m = a.aps().len();
    if m > limits.max_aps {
        return Err(AutomataError::TooManyProps(limits.max_aps));
    }
    if n > 64 {
        return Err(AutomataError::ComplementBound { states: n, limit: 64 });
    }
    let letters = 1u64 << m;
    let mask = a.letter_mask();
    let accepting_mask: u64 = a.accepting().iter().fold(0, |acc, q| acc | 1 << q);
    // succ[q][letter] as a state mask
    let succ: Vec<Vec<u64>> = (0..n)
        .map(|q| {
            (0..letters).map(|l| a.successors(q, l).fold(0u64, |acc, d| acc | 1 << d)).collect()
        })
        .collect();
    let image = |set: u64, letter: u64| -> u64 {
        let mut out = 0;
        for q in bits(set) {
            out |= succ[q][letter as usize];
        }
        out
    };

    let mut index: HashMap<Macro, usize> = HashMap::new();
    let mut order: Vec<Macro> = Vec::new();
    let mut queue = VecDeque::new();
    let mut edges: BTreeMap<(usize, usize), Vec<Cube>> = BTreeMap::new();
    let mut intern = |mac: Macro, order: &mut Vec<Macro>, queue: &mut VecDeque<usize>| -> Result<usize, AutomataError> {
        if let Some(&id) = index.get(&mac) {
            return Ok(id);
        }
        if order.len() >= limits.max_result_states {
            return Err(AutomataError::StateLimit { what: "complementation", limit: limits.max_result_states });
        }
        let id = order.len();
        index.insert(mac.clone(), id);
        order.push(mac);
        queue.push_back(id);
        Ok(id)
    };
    let init_set = a.initial().iter().fold(0u64, |acc, q| acc | 1 << q);
    intern(Macro::Subset(init_set), &mut order, &mut queue)?;

    while let Some(src) = queue.pop_front() {
        let mac = order[src].clone();
        for letter in 0..letters {
            let cube = Cube::minterm(letter, mask);
            let mut targets = Vec::new();
            match &mac {
                Macro::Subset(set) => {
                    let next = image(*set, letter);
                    targets.push(Macro::Subset(next));
                    let bound: Vec<u8> = (0..n).map(|q| if next >> q & 1 == 1 { u8::MAX - 1 } else { NO_RANK }).collect();
                    for ranks in tight_rankings(&bound, accepting_mask) {
                        let tracked = even_states(&ranks);
                        targets.push(Macro::Ranked { ranks, tracked });
                    }
                }
                Macro::Ranked { ranks, tracked } => {
                    let set = (0..n).filter(|q| ranks[*q] != NO_RANK).fold(0u64, |acc, q| acc | 1 << q);
                    let mut bound = vec![NO_RANK; n];
                    for q in bits(set) {
                        for d in bits(succ[q][letter as usize]) {
                            bound[d] = bound[d].min(ranks[q]);
                        }
                    }
                    for next in tight_rankings(&bound, accepting_mask) {
                        let even = even_states(&next);
                        let next_tracked = if *tracked != 0 { image(*tracked, letter) & even } else { even };
                        targets.push(Macro::Ranked { ranks: next, tracked: next_tracked });
                    }
                }
            }
            for t in targets {
                let dst = intern(t, &mut order, &mut queue)?;
                edges.entry((src, dst)).or_default().push(cube);
            }
        }
    }

    let mut out = Nba::new(a.aps().to_vec(), a.outputs().clone())?;
    for (id, mac) in order.iter().enumerate() {
        out.add_state();
        if let Macro::Ranked { tracked: 0, .. } = mac {
            out.set_accepting(id, true);
        }
    }
    out.set_initial(0);
    for ((s, d), cubes) in edges {
        out.add_edge(s, Label::from_cubes(cubes), d);
    }
    Ok(out)
}

fn bits(set: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |q| set >> q & 1 == 1)
}

fn even_states(ranks: &[u8]) -> u64 {
    ranks
        .iter()
        .enumerate()
        .filter(|(_, r)| **r != NO_RANK && **r % 2 == 0)
        .fold(0, |acc, (q, _)| acc | 1 << q)
}

/// All tight rankings below `bound` (states with `NO_RANK` are absent):
/// accepting states get even ranks, the maximal rank is odd and every odd
/// rank up to it is used. The empty level ranking is tight.
fn tight_rankings(bound: &[u8], accepting: u64) -> Vec<Vec<u8>> {
    let present: Vec<usize> = (0..bound.len()).filter(|q| bound[*q] != NO_RANK).collect();
    if present.is_empty() {
        return vec![bound.to_vec()];
    }
    let non_accepting = present.iter().filter(|q| accepting >> **q & 1 == 0).count();
    let mut out = Vec::new();
    if non_accepting == 0 {
        return out;
    }
    let max_bound = present.iter().map(|q| bound[*q]).max().unwrap_or(0);
    let mut top = 1u8;
    while (top as usize) <= 2 * non_accepting - 1 && top <= max_bound {
        let mut ranks = bound.to_vec();
        assign(&present, 0, bound, accepting, top, 0, &mut ranks, &mut out);
        top += 2;
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn assign(
    present: &[usize],
    k: usize,
    bound: &[u8],
    accepting: u64,
    top: u8,
    used_odd: u64,
    ranks: &mut Vec<u8>,
    out: &mut Vec<Vec<u8>>,
) {
    let odd_needed = (top as u32 + 1) / 2;
    if k == present.len() {
        if used_odd.count_ones() == odd_needed {
            out.push(ranks.clone());
        }
        return;
    }
    let missing = odd_needed - used_odd.count_ones();
    let free = present[k..].iter().filter(|q| accepting >> **q & 1 == 0).count() as u32;
    if missing > free {
        return;
    }
    let q = present[k];
    let is_acc = accepting >> q & 1 == 1;
    let hi = bound[q].min(top);
    for r in 0..=hi {
        if is_acc && r % 2 == 1 {
            continue;
        }
        ranks[q] = r;
        let used = if r % 2 == 1 { used_odd | 1 << (r / 2) } else { used_odd };
        assign(present, k + 1, bound, accepting, top, used, ranks, out);
    }
    ranks[q] = bound[q];
}

/// Decides `L(a1) ⊆ L(a2)`.
pub fn contains(a1: &Nba, a2: &Nba) -> Result<bool, AutomataError> {
    Ok(containment_counterexample(a1, a2)?.is_none())
}

/// A word accepted by `a1` but not by `a2`, if there is one. The word is
/// over the union of both alphabets.
pub fn containment_counterexample(a1: &Nba, a2: &Nba) -> Result<Option<LassoWord>, AutomataError> {
    let r1 = reduce(a1);
    if r1.accepting().is_empty() {
        return Ok(None);
    }
    let comp = complement(a2)?;
    let product = intersection(&r1, &comp)?;
    Ok(product.find_accepting_run().map(|c| c.word))
}

/// Language equivalence, by containment in both directions.
pub fn equivalent(a1: &Nba, a2: &Nba) -> Result<bool, AutomataError> {
    Ok(contains(a1, a2)? && contains(a2, a1)?)
}
