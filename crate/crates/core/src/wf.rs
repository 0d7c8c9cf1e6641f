//! Normal-form predicates.
//!
//! These are the executable criteria every stage is held to: negation
//! normal form ([`wf_negations_of_literals`]) and conjunctive normal form
//! ([`wf_conjunctions_of_disjunctions`], via [`wf_disjunctions`]).

use crate::error::{Error, Result};
use crate::formula::{FormulaWi, FormulaWiKind};

pub const NNF: &str = "wf_negations_of_literals";
pub const CNF: &str = "wf_conjunctions_of_disjunctions";
pub const DISJUNCTIONS: &str = "wf_disjunctions";

/// Every `Neg` node guards an atom or a constant.
pub fn wf_negations_of_literals(phi: &FormulaWi) -> bool {
    match phi.kind() {
        FormulaWiKind::Neg(inner) => inner.is_leaf() && wf_negations_of_literals(inner),
        FormulaWiKind::And(a, b) | FormulaWiKind::Or(a, b) => {
            wf_negations_of_literals(a) && wf_negations_of_literals(b)
        }
        FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => true,
    }
}

/// No `And` occurs below an `Or`.
pub fn wf_conjunctions_of_disjunctions(phi: &FormulaWi) -> bool {
    match phi.kind() {
        FormulaWiKind::And(a, b) => wf_conjunctions_of_disjunctions(a) && wf_conjunctions_of_disjunctions(b),
        FormulaWiKind::Or(a, b) => wf_disjunctions(a) && wf_disjunctions(b),
        FormulaWiKind::Neg(a) => wf_conjunctions_of_disjunctions(a),
        FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => true,
    }
}

/// No `And` anywhere in the tree.
pub fn wf_disjunctions(phi: &FormulaWi) -> bool {
    match phi.kind() {
        FormulaWiKind::And(..) => false,
        FormulaWiKind::Or(a, b) => wf_disjunctions(a) && wf_disjunctions(b),
        FormulaWiKind::Neg(a) => wf_disjunctions(a),
        FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => true,
    }
}

/// Both normal-form predicates hold: the shape `cnfc` and `distr` produce.
pub fn is_cnf(phi: &FormulaWi) -> bool {
    wf_negations_of_literals(phi) && wf_conjunctions_of_disjunctions(phi)
}

/// The implication "CNF-shaped, negations on literals only, and not a
/// conjunction at the root, hence a single clause". Vacuously true when an
/// antecedent fails.
pub fn check_aux_lemma(phi: &FormulaWi) -> bool {
    let antecedent = wf_conjunctions_of_disjunctions(phi) && wf_negations_of_literals(phi) && !phi.is_and();
    !antecedent || wf_disjunctions(phi)
}

/// Sizes are never negative; checked as the stronger `size >= 1`.
pub fn check_size_positive(phi: &FormulaWi) -> bool {
    phi.size() >= 1
}

pub(crate) fn require(holds: bool, function: &'static str, predicate: &'static str) -> Result<()> {
    if holds {
        Ok(())
    } else {
        Err(Error::PreconditionViolation { function, predicate })
    }
}

pub(crate) fn require_nnf(function: &'static str, phi: &FormulaWi) -> Result<()> {
    require(wf_negations_of_literals(phi), function, NNF)
}

pub(crate) fn require_cnf(function: &'static str, phi: &FormulaWi) -> Result<()> {
    require_nnf(function, phi)?;
    require(wf_conjunctions_of_disjunctions(phi), function, CNF)
}

pub(crate) fn ensure(holds: bool, function: &'static str, predicate: &'static str) -> Result<()> {
    if holds {
        Ok(())
    } else {
        Err(Error::PostconditionViolation { function, predicate })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_wi;

    fn f(text: &str) -> FormulaWi {
        parse_wi(text).unwrap()
    }

    #[test]
    fn negations_of_literals_examples() {
        assert!(wf_negations_of_literals(&f("~p")));
        assert!(!wf_negations_of_literals(&f("~(p & q)")));
        assert!(wf_negations_of_literals(&f("~p & (q | ~r)")));
        assert!(!wf_negations_of_literals(&f("~~p")));
        assert!(!wf_negations_of_literals(&f("p | ~(q | r)")));
        assert!(wf_negations_of_literals(&f("~true")));
    }

    #[test]
    fn conjunctions_of_disjunctions_examples() {
        assert!(wf_conjunctions_of_disjunctions(&f("(p | q) & r")));
        assert!(!wf_conjunctions_of_disjunctions(&f("p | q & r")));
        assert!(wf_conjunctions_of_disjunctions(&f("~p")));
        // The predicate alone does not look inside negations for Or.
        assert!(wf_conjunctions_of_disjunctions(&f("~(p & q)")));
        assert!(!wf_conjunctions_of_disjunctions(&f("p | ~(q & r)")));
    }

    #[test]
    fn disjunctions_examples() {
        assert!(wf_disjunctions(&f("p | ~q")));
        assert!(!wf_disjunctions(&f("p & q")));
        assert!(wf_disjunctions(&f("(p | q) | r")));
        assert!(!wf_disjunctions(&f("~(p & q)")));
    }

    #[test]
    fn aux_lemma_examples() {
        assert!(check_aux_lemma(&f("p | q")));
        assert!(check_aux_lemma(&f("p & q")));
        assert!(check_aux_lemma(&f("p | q & r")));
    }

    #[test]
    fn aux_lemma_needs_the_nnf_antecedent() {
        // ~(p & q) is CNF-shaped and not a conjunction, yet contains an And;
        // the lemma is saved only by the NNF antecedent failing.
        let phi = f("~(p & q)");
        assert!(wf_conjunctions_of_disjunctions(&phi));
        assert!(!phi.is_and());
        assert!(!wf_disjunctions(&phi));
        assert!(!wf_negations_of_literals(&phi));
        assert!(check_aux_lemma(&phi));
    }

    #[test]
    fn require_reports_the_failing_predicate() {
        assert_eq!(
            require_cnf("distr", &f("p | q & r")),
            Err(Error::PreconditionViolation {
                function: "distr",
                predicate: CNF
            })
        );
        assert_eq!(
            require_cnf("distr", &f("~~p")),
            Err(Error::PreconditionViolation {
                function: "distr",
                predicate: NNF
            })
        );
        assert!(require_cnf("distr", &f("(p | ~q) & r")).is_ok());
    }
}
