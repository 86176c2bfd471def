//! Linear temporal logic: syntax trees, parsing and printing, conjunctive
//! rewriting and evaluation on ultimately periodic words.

mod ag;
mod lasso;
mod parser;
mod rewrite;
pub mod spec_file;

use std::collections::BTreeSet;
use std::fmt;

pub use ag::AgStructure;
pub use lasso::{evaluate, LassoError, LassoWord};
pub use parser::{parse_ltl, parse_ltl_declared, ParseError};
pub use rewrite::rewrite_conjunctive;

/// An LTL formula.
///
/// `And`/`Or` are n-ary. The parser always produces flat lists; use
/// [`LtlFormula::normalize`] after building nested lists by hand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LtlFormula {
    True,
    False,
    Ap(String),
    Not(Box<LtlFormula>),
    And(Vec<LtlFormula>),
    Or(Vec<LtlFormula>),
    Implies(Box<LtlFormula>, Box<LtlFormula>),
    Iff(Box<LtlFormula>, Box<LtlFormula>),
    Next(Box<LtlFormula>),
    Until(Box<LtlFormula>, Box<LtlFormula>),
    Release(Box<LtlFormula>, Box<LtlFormula>),
    Eventually(Box<LtlFormula>),
    Globally(Box<LtlFormula>),
}

impl LtlFormula {
    pub fn ap(name: impl Into<String>) -> Self {
        LtlFormula::Ap(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: LtlFormula) -> Self {
        LtlFormula::Not(Box::new(f))
    }

    pub fn next(f: LtlFormula) -> Self {
        LtlFormula::Next(Box::new(f))
    }

    pub fn eventually(f: LtlFormula) -> Self {
        LtlFormula::Eventually(Box::new(f))
    }

    pub fn globally(f: LtlFormula) -> Self {
        LtlFormula::Globally(Box::new(f))
    }

    pub fn implies(lhs: LtlFormula, rhs: LtlFormula) -> Self {
        LtlFormula::Implies(Box::new(lhs), Box::new(rhs))
    }

    pub fn iff(lhs: LtlFormula, rhs: LtlFormula) -> Self {
        LtlFormula::Iff(Box::new(lhs), Box::new(rhs))
    }

    pub fn until(lhs: LtlFormula, rhs: LtlFormula) -> Self {
        LtlFormula::Until(Box::new(lhs), Box::new(rhs))
    }

    pub fn release(lhs: LtlFormula, rhs: LtlFormula) -> Self {
        LtlFormula::Release(Box::new(lhs), Box::new(rhs))
    }

    /// Conjunction of `parts`; `True` for an empty list, the element itself
    /// for a singleton.
    pub fn and(parts: Vec<LtlFormula>) -> Self {
        match parts.len() {
            0 => LtlFormula::True,
            1 => parts.into_iter().next().unwrap(),
            _ => LtlFormula::And(parts),
        }
    }

    /// Disjunction of `parts`; `False` for an empty list.
    pub fn or(parts: Vec<LtlFormula>) -> Self {
        match parts.len() {
            0 => LtlFormula::False,
            1 => parts.into_iter().next().unwrap(),
            _ => LtlFormula::Or(parts),
        }
    }

    /// The atomic propositions occurring in the formula. `true` and `false`
    /// contribute nothing.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_props(&mut out);
        out
    }

    fn collect_props(&self, out: &mut BTreeSet<String>) {
        match self {
            LtlFormula::True | LtlFormula::False => {}
            LtlFormula::Ap(name) => {
                out.insert(name.clone());
            }
            LtlFormula::Not(f)
            | LtlFormula::Next(f)
            | LtlFormula::Eventually(f)
            | LtlFormula::Globally(f) => f.collect_props(out),
            LtlFormula::And(fs) | LtlFormula::Or(fs) => {
                for f in fs {
                    f.collect_props(out);
                }
            }
            LtlFormula::Implies(a, b)
            | LtlFormula::Iff(a, b)
            | LtlFormula::Until(a, b)
            | LtlFormula::Release(a, b) => {
                a.collect_props(out);
                b.collect_props(out);
            }
        }
    }

    /// Flattens nested `And`/`Or` lists and collapses singleton lists.
    pub fn normalize(&self) -> LtlFormula {
        match self {
            LtlFormula::True | LtlFormula::False | LtlFormula::Ap(_) => self.clone(),
            LtlFormula::Not(f) => LtlFormula::not(f.normalize()),
            LtlFormula::Next(f) => LtlFormula::next(f.normalize()),
            LtlFormula::Eventually(f) => LtlFormula::eventually(f.normalize()),
            LtlFormula::Globally(f) => LtlFormula::globally(f.normalize()),
            LtlFormula::And(fs) => {
                let mut flat = Vec::with_capacity(fs.len());
                for f in fs {
                    match f.normalize() {
                        LtlFormula::And(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                LtlFormula::and(flat)
            }
            LtlFormula::Or(fs) => {
                let mut flat = Vec::with_capacity(fs.len());
                for f in fs {
                    match f.normalize() {
                        LtlFormula::Or(inner) => flat.extend(inner),
                        other => flat.push(other),
                    }
                }
                LtlFormula::or(flat)
            }
            LtlFormula::Implies(a, b) => LtlFormula::implies(a.normalize(), b.normalize()),
            LtlFormula::Iff(a, b) => LtlFormula::iff(a.normalize(), b.normalize()),
            LtlFormula::Until(a, b) => LtlFormula::until(a.normalize(), b.normalize()),
            LtlFormula::Release(a, b) => LtlFormula::release(a.normalize(), b.normalize()),
        }
    }

    /// Number of nodes in the syntax tree.
    pub fn size(&self) -> usize {
        match self {
            LtlFormula::True | LtlFormula::False | LtlFormula::Ap(_) => 1,
            LtlFormula::Not(f)
            | LtlFormula::Next(f)
            | LtlFormula::Eventually(f)
            | LtlFormula::Globally(f) => 1 + f.size(),
            LtlFormula::And(fs) | LtlFormula::Or(fs) => 1 + fs.iter().map(|f| f.size()).sum::<usize>(),
            LtlFormula::Implies(a, b)
            | LtlFormula::Iff(a, b)
            | LtlFormula::Until(a, b)
            | LtlFormula::Release(a, b) => 1 + a.size() + b.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            LtlFormula::Implies(..) | LtlFormula::Iff(..) => 1,
            LtlFormula::Or(_) => 2,
            LtlFormula::And(_) => 3,
            LtlFormula::Until(..) | LtlFormula::Release(..) => 4,
            LtlFormula::Not(_)
            | LtlFormula::Next(_)
            | LtlFormula::Eventually(_)
            | LtlFormula::Globally(_) => 5,
            LtlFormula::True | LtlFormula::False | LtlFormula::Ap(_) => 6,
        }
    }

    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, parens: bool) -> fmt::Result {
        if parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for LtlFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prec = self.precedence();
        match self {
            LtlFormula::True => write!(f, "true"),
            LtlFormula::False => write!(f, "false"),
            LtlFormula::Ap(name) => write!(f, "{name}"),
            LtlFormula::Not(c) => {
                write!(f, "!")?;
                c.fmt_child(f, c.precedence() < prec)
            }
            LtlFormula::Next(c) | LtlFormula::Eventually(c) | LtlFormula::Globally(c) => {
                let op = match self {
                    LtlFormula::Next(_) => "X",
                    LtlFormula::Eventually(_) => "F",
                    _ => "G",
                };
                write!(f, "{op} ")?;
                c.fmt_child(f, c.precedence() < prec)
            }
            LtlFormula::And(cs) | LtlFormula::Or(cs) => {
                let op = if matches!(self, LtlFormula::And(_)) { " && " } else { " || " };
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{op}")?;
                    }
                    c.fmt_child(f, c.precedence() <= prec)?;
                }
                Ok(())
            }
            LtlFormula::Implies(a, b)
            | LtlFormula::Iff(a, b)
            | LtlFormula::Until(a, b)
            | LtlFormula::Release(a, b) => {
                let op = match self {
                    LtlFormula::Implies(..) => "->",
                    LtlFormula::Iff(..) => "<->",
                    LtlFormula::Until(..) => "U",
                    _ => "R",
                };
                // right-associative
                a.fmt_child(f, a.precedence() <= prec)?;
                write!(f, " {op} ")?;
                b.fmt_child(f, b.precedence() < prec)
            }
        }
    }
}

/// A formula together with its declared inputs and outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecContext {
    pub formula: LtlFormula,
    pub inputs: BTreeSet<String>,
    pub outputs: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContextError {
    #[error("proposition `{0}` is declared both as input and output")]
    Overlap(String),
    #[error("proposition `{0}` occurs in the formula but is not declared")]
    Undeclared(String),
}

impl SpecContext {
    /// Builds a context, checking that inputs and outputs are disjoint and
    /// cover the formula's propositions.
    pub fn new<I, O, S>(formula: LtlFormula, inputs: I, outputs: O) -> Result<Self, ContextError>
    where
        I: IntoIterator<Item = S>,
        O: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let ctx = SpecContext {
            formula,
            inputs: inputs.into_iter().map(Into::into).collect(),
            outputs: outputs.into_iter().map(Into::into).collect(),
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<(), ContextError> {
        if let Some(p) = self.inputs.intersection(&self.outputs).next() {
            return Err(ContextError::Overlap(p.clone()));
        }
        for p in self.formula.props() {
            if !self.inputs.contains(&p) && !self.outputs.contains(&p) {
                return Err(ContextError::Undeclared(p));
            }
        }
        Ok(())
    }

    /// All declared variables, inputs first.
    pub fn variables(&self) -> Vec<String> {
        self.inputs.iter().chain(self.outputs.iter()).cloned().collect()
    }

    /// Restricts inputs and outputs to those occurring in the formula.
    pub fn restricted_to_props(formula: LtlFormula, inputs: &BTreeSet<String>, outputs: &BTreeSet<String>) -> Self {
        let props = formula.props();
        SpecContext {
            inputs: inputs.intersection(&props).cloned().collect(),
            outputs: outputs.intersection(&props).cloned().collect(),
            formula,
        }
    }
}

/// Variables removed from a context by [`narrow_context`].
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Narrowed {
    pub dropped_inputs: BTreeSet<String>,
    pub dropped_outputs: BTreeSet<String>,
}

/// Narrows the declared variables to those the formula mentions. Dropped
/// outputs are later driven constantly false.
pub fn narrow_context(ctx: &SpecContext) -> (SpecContext, Narrowed) {
    let props = ctx.formula.props();
    let narrowed = SpecContext {
        formula: ctx.formula.clone(),
        inputs: ctx.inputs.intersection(&props).cloned().collect(),
        outputs: ctx.outputs.intersection(&props).cloned().collect(),
    };
    let dropped = Narrowed {
        dropped_inputs: ctx.inputs.difference(&props).cloned().collect(),
        dropped_outputs: ctx.outputs.difference(&props).cloned().collect(),
    };
    (narrowed, dropped)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LtlFormula {
        parse_ltl(s).unwrap()
    }

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn props_of_eventual_response() {
        assert_eq!(p("F o1 && G (i -> F o2)").props(), set(&["i", "o1", "o2"]));
        assert_eq!(LtlFormula::True.props(), set(&[]));
        assert_eq!(p("!(a && true)").props(), set(&["a"]));
    }

    #[test]
    fn display_parenthesizes_by_precedence() {
        assert_eq!(p("a U (b R c)").to_string(), "a U b R c");
        assert_eq!(p("(a U b) U c").to_string(), "(a U b) U c");
        assert_eq!(p("!(a && b) || X c").to_string(), "!(a && b) || X c");
        assert_eq!(p("(a -> b) -> c").to_string(), "(a -> b) -> c");
        assert_eq!(p("G (i -> F o2)").to_string(), "G (i -> F o2)");
    }

    #[test]
    fn normalize_flattens() {
        let f = LtlFormula::And(vec![
            LtlFormula::ap("a"),
            LtlFormula::And(vec![LtlFormula::ap("b"), LtlFormula::ap("c")]),
        ]);
        assert_eq!(f.normalize(), p("a && b && c"));
        assert_eq!(LtlFormula::Or(vec![LtlFormula::ap("a")]).normalize(), p("a"));
    }

    #[test]
    fn narrow_drops_unused() {
        let ctx = SpecContext::new(p("F o"), ["i"], ["o", "p"]).unwrap();
        let (n, d) = narrow_context(&ctx);
        assert!(n.inputs.is_empty());
        assert_eq!(n.outputs, set(&["o"]));
        assert_eq!(d.dropped_outputs, set(&["p"]));
        assert_eq!(d.dropped_inputs, set(&["i"]));

        let ctx = SpecContext::new(p("G (i <-> o)"), ["i"], ["o"]).unwrap();
        let (n, d) = narrow_context(&ctx);
        assert_eq!(n, ctx);
        assert_eq!(d, Narrowed::default());

        let ctx = SpecContext::new(p("G (i <-> o)"), ["i", "j"], ["o"]).unwrap();
        let (_, d) = narrow_context(&ctx);
        assert_eq!(d.dropped_inputs, set(&["j"]));
        assert!(d.dropped_outputs.is_empty());
    }

    #[test]
    fn context_validation() {
        assert_eq!(
            SpecContext::new(p("a"), ["a"], ["a"]).unwrap_err(),
            ContextError::Overlap("a".into())
        );
        assert_eq!(
            SpecContext::new(p("a && b"), ["a"], Vec::<&str>::new()).unwrap_err(),
            ContextError::Undeclared("b".into())
        );
    }
}
