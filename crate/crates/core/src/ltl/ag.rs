use super::{rewrite_conjunctive, LtlFormula};

/// A specification `side ∧ (∧assumptions → ∧guarantees)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AgStructure {
    pub assumptions: Vec<LtlFormula>,
    pub guarantees: Vec<LtlFormula>,
    pub side_conjuncts: Vec<LtlFormula>,
}

impl AgStructure {
    /// Splits a formula into conjuncts and takes the first implication
    /// among them as the assume-guarantee pair. Without an implication all
    /// conjuncts become guarantees.
    pub fn from_formula(formula: &LtlFormula) -> Self {
        let conjuncts: Vec<LtlFormula> =
            rewrite_conjunctive(formula).into_iter().filter(|c| *c != LtlFormula::True).collect();
        match conjuncts.iter().position(|c| matches!(c, LtlFormula::Implies(..))) {
            Some(k) => {
                let mut side = conjuncts;
                let main = side.remove(k);
                let mut ag = AgStructure::from_implication(&main).expect("position found an implication");
                ag.side_conjuncts = side;
                ag
            }
            None => AgStructure { guarantees: conjuncts, ..Default::default() },
        }
    }

    /// `(a → g)` as an assume-guarantee pair with no side conjuncts.
    pub fn from_implication(formula: &LtlFormula) -> Option<Self> {
        match formula {
            LtlFormula::Implies(lhs, rhs) => Some(AgStructure {
                assumptions: split_nontrivial(lhs),
                guarantees: split_nontrivial(rhs),
                side_conjuncts: Vec::new(),
            }),
            _ => None,
        }
    }

    pub fn is_strict(&self) -> bool {
        self.side_conjuncts.is_empty()
    }

    /// The implication part alone. An empty guarantee list is rendered as
    /// `true`; an empty assumption list yields just the guarantees.
    pub fn implication(&self) -> LtlFormula {
        let guarantees = LtlFormula::and(self.guarantees.clone());
        if self.assumptions.is_empty() {
            guarantees
        } else {
            LtlFormula::implies(LtlFormula::and(self.assumptions.clone()), guarantees)
        }
    }

    /// `¬(∧assumptions)`.
    pub fn negated_assumptions(&self) -> LtlFormula {
        LtlFormula::not(LtlFormula::and(self.assumptions.clone()))
    }

    /// The formula this structure stands for.
    pub fn to_formula(&self) -> LtlFormula {
        let mut parts = self.side_conjuncts.clone();
        if !self.assumptions.is_empty() || !self.guarantees.is_empty() {
            match self.implication() {
                LtlFormula::And(gs) if self.assumptions.is_empty() => parts.extend(gs),
                other => parts.push(other),
            }
        }
        LtlFormula::and(parts)
    }

    pub fn is_empty(&self) -> bool {
        self.assumptions.is_empty() && self.guarantees.is_empty() && self.side_conjuncts.is_empty()
    }
}

fn split_nontrivial(f: &LtlFormula) -> Vec<LtlFormula> {
    rewrite_conjunctive(f).into_iter().filter(|c| *c != LtlFormula::True).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ltl::parse_ltl;

    fn p(s: &str) -> LtlFormula {
        parse_ltl(s).unwrap()
    }

    #[test]
    fn from_formula_picks_first_implication() {
        let ag = AgStructure::from_formula(&p("G !(o1 && o2) && G !(i <-> o1) && (G i -> G o2)"));
        assert_eq!(ag.assumptions, vec![p("G i")]);
        assert_eq!(ag.guarantees, vec![p("G o2")]);
        assert_eq!(ag.side_conjuncts, vec![p("G !(o1 && o2)"), p("G !(i <-> o1)")]);
    }

    #[test]
    fn assumptions_and_guarantees_are_split() {
        let ag = AgStructure::from_formula(&p("G (a && b) -> (G o1 && F o2)"));
        assert_eq!(ag.assumptions, vec![p("G a"), p("G b")]);
        assert_eq!(ag.guarantees, vec![p("G o1"), p("F o2")]);
        assert!(ag.is_strict());
    }

    #[test]
    fn plain_conjunction_becomes_guarantees() {
        let ag = AgStructure::from_formula(&p("F o1 && G (i -> o2)"));
        assert!(ag.assumptions.is_empty());
        assert_eq!(ag.guarantees.len(), 2);
        assert_eq!(ag.to_formula(), p("F o1 && G (i -> o2)"));
    }

    #[test]
    fn rendering() {
        let ag = AgStructure {
            assumptions: vec![p("F (i1 && o1)")],
            guarantees: vec![],
            side_conjuncts: vec![],
        };
        assert_eq!(ag.to_formula(), p("F (i1 && o1) -> true"));
        assert_eq!(ag.negated_assumptions(), p("!F (i1 && o1)"));
        let ag = AgStructure {
            assumptions: vec![p("G i")],
            guarantees: vec![p("G o2")],
            side_conjuncts: vec![p("G !(o1 && o2)")],
        };
        assert_eq!(ag.to_formula(), p("G !(o1 && o2) && (G i -> G o2)"));
    }
}
