use std::collections::BTreeSet;
use std::fmt;

use super::LtlFormula;

/// An ultimately periodic word `prefix · cycle^ω` over valuations of `aps`.
///
/// Valuations are bitmasks: bit `k` set means `aps[k]` is true.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LassoWord {
    aps: Vec<String>,
    prefix: Vec<u64>,
    cycle: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LassoError {
    #[error("the loop of a lasso word must be non-empty")]
    EmptyLoop,
    #[error("valuation {0:#b} mentions bits beyond the {1} declared propositions")]
    OutOfRange(u64, usize),
    #[error("proposition `{0}` is not part of the word's alphabet")]
    UnknownProp(String),
    #[error("at most 64 propositions are supported")]
    TooManyProps,
}

impl LassoWord {
    pub fn new(aps: Vec<String>, prefix: Vec<u64>, cycle: Vec<u64>) -> Result<Self, LassoError> {
        if cycle.is_empty() {
            return Err(LassoError::EmptyLoop);
        }
        if aps.len() > 64 {
            return Err(LassoError::TooManyProps);
        }
        let limit = full_mask(aps.len());
        if let Some(&bad) = prefix.iter().chain(cycle.iter()).find(|v| **v & !limit != 0) {
            return Err(LassoError::OutOfRange(bad, aps.len()));
        }
        Ok(LassoWord { aps, prefix, cycle })
    }

    /// Builds a word from valuations given as lists of true propositions.
    pub fn from_sets(aps: &[&str], prefix: &[&[&str]], cycle: &[&[&str]]) -> Result<Self, LassoError> {
        let aps: Vec<String> = aps.iter().map(|s| s.to_string()).collect();
        let encode = |vals: &[&[&str]]| -> Result<Vec<u64>, LassoError> {
            vals.iter()
                .map(|val| {
                    val.iter().try_fold(0u64, |acc, name| {
                        let idx = aps
                            .iter()
                            .position(|a| a == name)
                            .ok_or_else(|| LassoError::UnknownProp(name.to_string()))?;
                        Ok(acc | 1 << idx)
                    })
                })
                .collect()
        };
        let prefix = encode(prefix)?;
        let cycle = encode(cycle)?;
        LassoWord::new(aps, prefix, cycle)
    }

    pub fn aps(&self) -> &[String] {
        &self.aps
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[u64] {
        &self.cycle
    }

    /// Number of distinct positions, `|prefix| + |loop|`.
    pub fn positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Valuation at position `k` of the infinite unrolling.
    pub fn letter(&self, k: usize) -> u64 {
        if k < self.prefix.len() {
            self.prefix[k]
        } else {
            self.cycle[(k - self.prefix.len()) % self.cycle.len()]
        }
    }

    /// Successor of a position in the folded representation.
    pub fn succ(&self, k: usize) -> usize {
        if k + 1 < self.positions() {
            k + 1
        } else {
            self.prefix.len()
        }
    }

    /// The true propositions at position `k`.
    pub fn valuation(&self, k: usize) -> BTreeSet<&str> {
        let v = self.letter(k);
        self.aps
            .iter()
            .enumerate()
            .filter(|(i, _)| v >> i & 1 == 1)
            .map(|(_, a)| a.as_str())
            .collect()
    }

    /// Re-encodes the word over `target` propositions: names outside the
    /// word's alphabet are false, names outside `target` are forgotten.
    pub fn over(&self, target: &[String]) -> LassoWord {
        let map: Vec<Option<usize>> = target.iter().map(|t| self.aps.iter().position(|a| a == t)).collect();
        let conv = |v: &u64| {
            map.iter()
                .enumerate()
                .filter_map(|(ti, si)| si.filter(|si| v >> si & 1 == 1).map(|_| 1u64 << ti))
                .fold(0, |a, b| a | b)
        };
        LassoWord {
            aps: target.to_vec(),
            prefix: self.prefix.iter().map(conv).collect(),
            cycle: self.cycle.iter().map(conv).collect(),
        }
    }

    /// `w ∩ X`: restriction to the propositions of `keep`, preserving the
    /// word's own order.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> LassoWord {
        let target: Vec<String> = self.aps.iter().filter(|a| keep.contains(*a)).cloned().collect();
        self.over(&target)
    }

    /// Letter-wise union `w1 ∪ w2` over the union of both alphabets.
    pub fn union(&self, other: &LassoWord) -> LassoWord {
        let mut aps = self.aps.clone();
        for a in &other.aps {
            if !aps.contains(a) {
                aps.push(a.clone());
            }
        }
        let lhs = self.over(&aps);
        let rhs = other.over(&aps);
        let p = lhs.prefix.len().max(rhs.prefix.len());
        let l = lcm(lhs.cycle.len(), rhs.cycle.len());
        let prefix = (0..p).map(|k| lhs.letter(k) | rhs.letter(k)).collect();
        let cycle = (p..p + l).map(|k| lhs.letter(k) | rhs.letter(k)).collect();
        LassoWord { aps, prefix, cycle }
    }

    /// Every lasso word over `aps` with `1 <= |loop|` and
    /// `|prefix| + |loop| <= max_positions`.
    pub fn enumerate(aps: &[String], max_positions: usize) -> impl Iterator<Item = LassoWord> + '_ {
        let letters = 1u64 << aps.len();
        (1..=max_positions).flat_map(move |total| {
            (1..=total).flat_map(move |cycle_len| {
                let prefix_len = total - cycle_len;
                let count = letters.pow(total as u32);
                (0..count).map(move |mut code| {
                    let mut vals = Vec::with_capacity(total);
                    for _ in 0..total {
                        vals.push(code % letters);
                        code /= letters;
                    }
                    let cycle = vals.split_off(prefix_len);
                    LassoWord { aps: aps.to_vec(), prefix: vals, cycle }
                })
            })
        })
    }
}

impl fmt::Display for LassoWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |f: &mut fmt::Formatter<'_>, k: usize| -> fmt::Result {
            let names: Vec<&str> = self.valuation(k).into_iter().collect();
            write!(f, "{{{}}}", names.join(","))
        };
        for k in 0..self.prefix.len() {
            show(f, k)?;
            write!(f, " ")?;
        }
        write!(f, "(")?;
        for k in self.prefix.len()..self.positions() {
            if k > self.prefix.len() {
                write!(f, " ")?;
            }
            show(f, k)?;
        }
        write!(f, ")^w")
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Decides whether the infinite unrolling of `word` satisfies `formula`.
///
/// Every subformula is evaluated at each of the `|prefix| + |loop|`
/// positions; `U` is the least and `R` the greatest fixpoint of its
/// one-step unfolding over the folded successor relation.
pub fn evaluate(formula: &LtlFormula, word: &LassoWord) -> Result<bool, LassoError> {
    if let Some(p) = formula.props().into_iter().find(|p| !word.aps.contains(p)) {
        return Err(LassoError::UnknownProp(p));
    }
    Ok(eval_all(formula, word)[0])
}

fn eval_all(formula: &LtlFormula, w: &LassoWord) -> Vec<bool> {
    let n = w.positions();
    match formula {
        LtlFormula::True => vec![true; n],
        LtlFormula::False => vec![false; n],
        LtlFormula::Ap(name) => {
            let idx = w.aps.iter().position(|a| a == name).expect("checked by evaluate");
            (0..n).map(|k| w.letter(k) >> idx & 1 == 1).collect()
        }
        LtlFormula::Not(f) => eval_all(f, w).into_iter().map(|b| !b).collect(),
        LtlFormula::And(fs) => fs.iter().fold(vec![true; n], |acc, f| {
            acc.iter().zip(eval_all(f, w)).map(|(a, b)| *a && b).collect()
        }),
        LtlFormula::Or(fs) => fs.iter().fold(vec![false; n], |acc, f| {
            acc.iter().zip(eval_all(f, w)).map(|(a, b)| *a || b).collect()
        }),
        LtlFormula::Implies(a, b) => {
            let (a, b) = (eval_all(a, w), eval_all(b, w));
            a.iter().zip(b).map(|(a, b)| !a || b).collect()
        }
        LtlFormula::Iff(a, b) => {
            let (a, b) = (eval_all(a, w), eval_all(b, w));
            a.iter().zip(b).map(|(a, b)| *a == b).collect()
        }
        LtlFormula::Next(f) => {
            let inner = eval_all(f, w);
            (0..n).map(|k| inner[w.succ(k)]).collect()
        }
        LtlFormula::Until(a, b) => until(&eval_all(a, w), &eval_all(b, w), w),
        LtlFormula::Release(a, b) => release(&eval_all(a, w), &eval_all(b, w), w),
        LtlFormula::Eventually(f) => until(&vec![true; n], &eval_all(f, w), w),
        LtlFormula::Globally(f) => release(&vec![false; n], &eval_all(f, w), w),
    }
}

fn until(lhs: &[bool], rhs: &[bool], w: &LassoWord) -> Vec<bool> {
    let n = lhs.len();
    let mut val = vec![false; n];
    loop {
        let mut changed = false;
        for k in (0..n).rev() {
            let v = rhs[k] || (lhs[k] && val[w.succ(k)]);
            if v != val[k] {
                val[k] = v;
                changed = true;
            }
        }
        if !changed {
            return val;
        }
    }
}

fn release(lhs: &[bool], rhs: &[bool], w: &LassoWord) -> Vec<bool> {
    let n = lhs.len();
    let mut val = vec![true; n];
    loop {
        let mut changed = false;
        for k in (0..n).rev() {
            let v = rhs[k] && (lhs[k] || val[w.succ(k)]);
            if v != val[k] {
                val[k] = v;
                changed = true;
            }
        }
        if !changed {
            return val;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;

    fn eval(f: &str, aps: &[&str], prefix: &[&[&str]], cycle: &[&[&str]]) -> bool {
        let w = LassoWord::from_sets(aps, prefix, cycle).unwrap();
        evaluate(&parse_ltl(f).unwrap(), &w).unwrap()
    }

    #[test]
    fn basic_examples() {
        assert!(eval("G a", &["a"], &[], &[&["a"]]));
        assert!(!eval("F o1", &["o1"], &[&[]], &[&[]]));
        assert!(eval("G (i -> F o2)", &["i", "o2"], &[], &[&["i"], &["o2"]]));
    }

    #[test]
    fn temporal_operators_on_prefix_and_loop() {
        let aps = &["a", "b"];
        // a a (b)^w
        assert!(eval("a U b", aps, &[&["a"], &["a"]], &[&["b"]]));
        assert!(!eval("a U b", aps, &[&["a"], &[]], &[&["b"]]));
        assert!(eval("F G b", aps, &[&["a"], &[]], &[&["b"]]));
        assert!(!eval("G F a", aps, &[&["a"], &[]], &[&["b"]]));
        assert!(eval("G F a", aps, &[], &[&["b"], &["a"]]));
        assert!(eval("X X b", aps, &[&["a"], &[]], &[&["b"]]));
        assert!(!eval("X b", aps, &[&["a"], &[]], &[&["b"]]));
        // b R a: a holds until and including the first b, or forever
        assert!(eval("b R a", aps, &[], &[&["a"]]));
        assert!(eval("b R a", aps, &[&["a"], &["a", "b"]], &[&[]]));
        assert!(!eval("b R a", aps, &[&["a"], &["b"]], &[&[]]));
        assert!(eval("a <-> !b", aps, &[&["a"]], &[&[]]));
        assert!(!eval("a <-> !b", aps, &[&["a", "b"]], &[&[]]));
    }

    #[test]
    fn missing_proposition_is_an_error() {
        let w = LassoWord::from_sets(&["a"], &[], &[&["a"]]).unwrap();
        assert_eq!(
            evaluate(&parse_ltl("a && b").unwrap(), &w),
            Err(LassoError::UnknownProp("b".into()))
        );
    }

    #[test]
    fn construction_errors() {
        assert_eq!(LassoWord::new(vec!["a".into()], vec![], vec![]), Err(LassoError::EmptyLoop));
        assert!(matches!(
            LassoWord::new(vec!["a".into()], vec![], vec![2]),
            Err(LassoError::OutOfRange(2, 1))
        ));
    }

    #[test]
    fn enumeration_counts() {
        let aps = vec!["a".to_string()];
        // total 1: 1 split * 2; total 2: 2 splits * 4; total 3: 3 * 8
        assert_eq!(LassoWord::enumerate(&aps, 3).count(), 2 + 8 + 24);
    }

    #[test]
    fn union_and_restrict() {
        let w1 = LassoWord::from_sets(&["a"], &[&["a"]], &[&[], &["a"]]).unwrap();
        let w2 = LassoWord::from_sets(&["b"], &[], &[&["b"], &[], &[]]).unwrap();
        let u = w1.union(&w2);
        for k in 0..20 {
            let a = w1.letter(k) & 1 == 1;
            let b = w2.letter(k) & 1 == 1;
            assert_eq!(u.letter(k), (a as u64) | (b as u64) << 1);
        }
        let back = u.restrict(&["a".to_string()].into());
        for k in 0..20 {
            assert_eq!(back.letter(k), w1.letter(k));
        }
    }
}
