use super::LtlFormula;

/// Rewrites `formula` into as many top-level conjuncts as the rule set
/// allows and returns them in order of appearance.
///
/// Rules, applied to fixpoint:
/// * nested conjunctions are flattened,
/// * `G (a && b)` becomes `G a && G b`,
/// * `X (a && b)` becomes `X a && X b`,
/// * `a R (b && c)` becomes `(a R b) && (a R c)`.
///
/// `F` and `U` are not distributed and `<->` is left alone. `true`
/// conjuncts are dropped; a formula without any other conjunct yields
/// `[true]`.
pub fn rewrite_conjunctive(formula: &LtlFormula) -> Vec<LtlFormula> {
    let mut out = Vec::new();
    split(formula, &mut out);
    if out.is_empty() {
        out.push(LtlFormula::True);
    }
    out
}

fn split(formula: &LtlFormula, out: &mut Vec<LtlFormula>) {
    match formula {
        LtlFormula::True => {}
        LtlFormula::And(parts) => {
            for p in parts {
                split(p, out);
            }
        }
        LtlFormula::Globally(body) => wrap_each(body, out, LtlFormula::globally),
        LtlFormula::Next(body) => wrap_each(body, out, LtlFormula::next),
        LtlFormula::Release(lhs, rhs) => {
            wrap_each(rhs, out, |c| LtlFormula::release((**lhs).clone(), c))
        }
        other => out.push(other.clone()),
    }
}

fn wrap_each(body: &LtlFormula, out: &mut Vec<LtlFormula>, wrap: impl Fn(LtlFormula) -> LtlFormula) {
    let mut inner = Vec::new();
    split(body, &mut inner);
    if inner.is_empty() {
        // G true, X true and a R true are all equivalent to true.
        return;
    }
    out.extend(inner.into_iter().map(wrap));
}
