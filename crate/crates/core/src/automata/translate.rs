//! Tableau translation from LTL to Büchi automata.
//!
//! The formula is brought into negation normal form; a state is the set of
//! obligations that must hold from the current position on. Expanding a
//! state yields terms (letter constraint, obligations for the next
//! position, untils whose fulfilment was postponed). This gives a
//! generalized Büchi automaton with one acceptance set per until, which is
//! then degeneralized with a level counter and reduced.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use super::{reduce, AutomataError, Cube, Label, Nba};
use crate::ltl::LtlFormula;

const MAX_TABLEAU_STATES: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Node {
    True,
    False,
    Lit(usize, bool),
    And(Vec<usize>),
    Or(Vec<usize>),
    Next(usize),
    Until(usize, usize),
    Release(usize, usize),
}

#[derive(Default)]
struct Arena {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
}

impl Arena {
    fn intern(&mut self, n: Node) -> usize {
        if let Some(&id) = self.index.get(&n) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(n.clone());
        self.index.insert(n, id);
        id
    }

    fn tt(&mut self) -> usize {
        self.intern(Node::True)
    }

    fn ff(&mut self) -> usize {
        self.intern(Node::False)
    }

    fn junction(&mut self, parts: Vec<usize>, conj: bool) -> usize {
        let (unit, zero) = if conj { (Node::True, Node::False) } else { (Node::False, Node::True) };
        let mut flat = BTreeSet::new();
        for p in parts {
            match &self.nodes[p] {
                n if *n == unit => {}
                n if *n == zero => return self.intern(zero),
                Node::And(cs) if conj => flat.extend(cs.iter().copied()),
                Node::Or(cs) if !conj => flat.extend(cs.iter().copied()),
                _ => {
                    flat.insert(p);
                }
            }
        }
        match flat.len() {
            0 => self.intern(unit),
            1 => flat.into_iter().next().unwrap(),
            _ => {
                let v: Vec<usize> = flat.into_iter().collect();
                self.intern(if conj { Node::And(v) } else { Node::Or(v) })
            }
        }
    }

    fn next(&mut self, a: usize) -> usize {
        match self.nodes[a] {
            Node::True | Node::False => a,
            _ => self.intern(Node::Next(a)),
        }
    }

    fn until(&mut self, a: usize, b: usize) -> usize {
        match (&self.nodes[a], &self.nodes[b]) {
            (_, Node::True) | (_, Node::False) => b,
            (Node::False, _) => b,
            _ => self.intern(Node::Until(a, b)),
        }
    }

    fn release(&mut self, a: usize, b: usize) -> usize {
        match (&self.nodes[a], &self.nodes[b]) {
            (_, Node::True) | (_, Node::False) => b,
            (Node::True, _) => b,
            _ => self.intern(Node::Release(a, b)),
        }
    }

    /// Negation normal form of `f` (or of `¬f` when `neg`).
    fn nnf(&mut self, f: &LtlFormula, neg: bool, aps: &[String]) -> Result<usize, AutomataError> {
        Ok(match f {
            LtlFormula::True if neg => self.ff(),
            LtlFormula::True => self.tt(),
            LtlFormula::False if neg => self.tt(),
            LtlFormula::False => self.ff(),
            LtlFormula::Ap(name) => {
                let bit = aps.iter().position(|a| a == name).ok_or_else(|| AutomataError::UnknownProp(name.clone()))?;
                self.intern(Node::Lit(bit, !neg))
            }
            LtlFormula::Not(g) => self.nnf(g, !neg, aps)?,
            LtlFormula::And(gs) | LtlFormula::Or(gs) => {
                let parts = gs.iter().map(|g| self.nnf(g, neg, aps)).collect::<Result<Vec<_>, _>>()?;
                let conj = matches!(f, LtlFormula::And(_)) != neg;
                self.junction(parts, conj)
            }
            LtlFormula::Implies(a, b) => {
                let na = self.nnf(a, !neg, aps)?;
                let b = self.nnf(b, neg, aps)?;
                // ¬(a → b) = a ∧ ¬b
                self.junction(vec![na, b], neg)
            }
            LtlFormula::Iff(a, b) => {
                let pa = self.nnf(a, false, aps)?;
                let na = self.nnf(a, true, aps)?;
                let pb = self.nnf(b, neg, aps)?;
                let nb = self.nnf(b, !neg, aps)?;
                let both = self.junction(vec![pa, pb], true);
                let neither = self.junction(vec![na, nb], true);
                self.junction(vec![both, neither], false)
            }
            LtlFormula::Next(g) => {
                let g = self.nnf(g, neg, aps)?;
                self.next(g)
            }
            LtlFormula::Eventually(g) => {
                let g = self.nnf(g, neg, aps)?;
                if neg {
                    let ff = self.ff();
                    self.release(ff, g)
                } else {
                    let tt = self.tt();
                    self.until(tt, g)
                }
            }
            LtlFormula::Globally(g) => {
                let g = self.nnf(g, neg, aps)?;
                if neg {
                    let tt = self.tt();
                    self.until(tt, g)
                } else {
                    let ff = self.ff();
                    self.release(ff, g)
                }
            }
            LtlFormula::Until(a, b) | LtlFormula::Release(a, b) => {
                let a = self.nnf(a, neg, aps)?;
                let b = self.nnf(b, neg, aps)?;
                if matches!(f, LtlFormula::Until(..)) != neg {
                    self.until(a, b)
                } else {
                    self.release(a, b)
                }
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Term {
    cube: Cube,
    next: Vec<usize>,
    postponed: u64,
}

struct Tableau<'a> {
    arena: &'a Arena,
    until_bit: HashMap<usize, u32>,
}

impl Tableau<'_> {
    fn expand(&mut self, state: &[usize]) -> Result<Vec<Term>, AutomataError> {
        let mut out = Vec::new();
        self.expand_rec(state.to_vec(), BTreeSet::new(), Cube::TRUE, BTreeSet::new(), 0, &mut out)?;
        out.sort();
        out.dedup();
        // drop terms dominated by a weaker one
        let snapshot = out.clone();
        out.retain(|t| {
            !snapshot.iter().any(|s| {
                s != t
                    && t.cube.implies(&s.cube)
                    && s.postponed & !t.postponed == 0
                    && s.next.iter().all(|n| t.next.binary_search(n).is_ok())
            })
        });
        Ok(out)
    }

    fn expand_rec(
        &mut self,
        mut todo: Vec<usize>,
        mut done: BTreeSet<usize>,
        mut cube: Cube,
        mut next: BTreeSet<usize>,
        mut postponed: u64,
        out: &mut Vec<Term>,
    ) -> Result<(), AutomataError> {
        while let Some(f) = todo.pop() {
            if !done.insert(f) {
                continue;
            }
            match &self.arena.nodes[f] {
                Node::True => {}
                Node::False => return Ok(()),
                Node::Lit(bit, positive) => {
                    let lit = if *positive { Cube { pos: 1 << bit, neg: 0 } } else { Cube { pos: 0, neg: 1 << bit } };
                    match cube.and(&lit) {
                        Some(c) => cube = c,
                        None => return Ok(()),
                    }
                }
                Node::And(cs) => todo.extend(cs.iter().copied()),
                Node::Or(cs) => {
                    for c in cs {
                        let mut t = todo.clone();
                        t.push(*c);
                        self.expand_rec(t, done.clone(), cube, next.clone(), postponed, out)?;
                    }
                    return Ok(());
                }
                Node::Next(g) => {
                    next.insert(*g);
                }
                Node::Until(a, b) => {
                    let bit = self.until_bit_of(f)?;
                    let mut t = todo.clone();
                    t.push(*b);
                    self.expand_rec(t, done.clone(), cube, next.clone(), postponed, out)?;
                    todo.push(*a);
                    next.insert(f);
                    postponed |= 1 << bit;
                }
                Node::Release(a, b) => {
                    let mut t = todo.clone();
                    t.push(*a);
                    t.push(*b);
                    self.expand_rec(t, done.clone(), cube, next.clone(), postponed, out)?;
                    todo.push(*b);
                    next.insert(f);
                }
            }
        }
        out.push(Term { cube, next: next.into_iter().collect(), postponed });
        Ok(())
    }

    fn until_bit_of(&mut self, f: usize) -> Result<u32, AutomataError> {
        let n = self.until_bit.len() as u32;
        let bit = *self.until_bit.entry(f).or_insert(n);
        if bit >= 64 {
            return Err(AutomataError::StateLimit { what: "until subformulas in the translation", limit: 64 });
        }
        Ok(bit)
    }
}

/// Translates `formula` into a Büchi automaton over `aps` (all of which are
/// treated as inputs; see [`Nba::with_outputs`]).
///
/// The result accepts exactly the words over `aps` satisfying the formula.
pub fn ltl_to_nba(formula: &LtlFormula, aps: &[String]) -> Result<Nba, AutomataError> {
    let mut arena = Arena::default();
    if aps.len() > 64 {
        return Err(AutomataError::TooManyProps(64));
    }
    let root = arena.nnf(formula, false, aps)?;
    let mut tab = Tableau { arena: &arena, until_bit: HashMap::new() };

    // generalized automaton over obligation sets
    let init: Vec<usize> = vec![root];
    let mut states: Vec<Vec<usize>> = vec![init.clone()];
    let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(init, 0)]);
    let mut trans: Vec<Vec<(Cube, usize, u64)>> = Vec::new();
    let mut k = 0;
    while k < states.len() {
        let terms = tab.expand(&states[k].clone())?;
        let mut row = Vec::with_capacity(terms.len());
        for t in terms {
            let id = match index.get(&t.next) {
                Some(&id) => id,
                None => {
                    if states.len() >= MAX_TABLEAU_STATES {
                        return Err(AutomataError::StateLimit { what: "LTL translation", limit: MAX_TABLEAU_STATES });
                    }
                    index.insert(t.next.clone(), states.len());
                    states.push(t.next.clone());
                    states.len() - 1
                }
            };
            row.push((t.cube, id, t.postponed));
        }
        trans.push(row);
        k += 1;
    }

    let sets = tab.until_bit.len() as u32;
    let mut nba = Nba::new(aps.to_vec(), BTreeSet::new())?;
    let mut ids: BTreeMap<(usize, u32), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    let mut intern = |key: (usize, u32), nba: &mut Nba, queue: &mut VecDeque<(usize, u32)>| {
        *ids.entry(key).or_insert_with(|| {
            let id = nba.add_state();
            nba.set_accepting(id, key.1 == sets);
            queue.push_back(key);
            id
        })
    };
    let start = intern((0, 0), &mut nba, &mut queue);
    nba.set_initial(start);
    while let Some(key @ (q, level)) = queue.pop_front() {
        let src = intern(key, &mut nba, &mut queue);
        let base = if level == sets { 0 } else { level };
        for (cube, dst, postponed) in &trans[q] {
            let mut l = base;
            while l < sets && postponed >> l & 1 == 0 {
                l += 1;
            }
            let d = intern((*dst, l), &mut nba, &mut queue);
            nba.add_edge(src, Label::from_cube(*cube), d);
        }
    }
    Ok(reduce(&nba))
}
