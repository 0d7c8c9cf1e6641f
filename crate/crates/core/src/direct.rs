//! Direct-style pipeline: plain structural recursion, one match arm per
//! rewriting law.
//!
//! The unadorned functions trust their callers. The `*_with` variants take
//! [`Options`] and enforce the output budget and, in checked mode, the
//! pre- and postconditions of each stage.

use crate::budget;
use crate::error::Result;
use crate::formula::{Formula, FormulaKind, FormulaWi, FormulaWiKind};
use crate::wf;
use crate::Options;

/// Eliminates implications with `A -> B  ==  ~A | B`; homomorphic
/// everywhere else.
pub fn impl_free(phi: &Formula) -> FormulaWi {
    match phi.kind() {
        FormulaKind::Neg(a) => FormulaWi::neg(impl_free(a)),
        FormulaKind::Or(a, b) => FormulaWi::or(impl_free(a), impl_free(b)),
        FormulaKind::And(a, b) => FormulaWi::and(impl_free(a), impl_free(b)),
        FormulaKind::Impl(a, b) => FormulaWi::or(FormulaWi::neg(impl_free(a)), impl_free(b)),
        FormulaKind::Const(b) => FormulaWi::constant(*b),
        FormulaKind::Var(x) => FormulaWi::atom(x.clone()),
    }
}

#[inline]
fn decreasing(arg: &FormulaWi, redex: &FormulaWi) {
    debug_assert!(arg.size() < redex.size(), "nnfc: size must decrease");
}

/// Negation normal form: double negations cancel and De Morgan's laws push
/// negations onto atoms.
pub fn nnfc(phi: &FormulaWi) -> FormulaWi {
    use FormulaWiKind::*;
    match phi.kind() {
        Neg(inner) => match inner.kind() {
            Neg(a) => {
                decreasing(a, phi);
                nnfc(a)
            }
            And(a, b) => {
                let (na, nb) = (FormulaWi::neg(a.clone()), FormulaWi::neg(b.clone()));
                decreasing(&na, phi);
                decreasing(&nb, phi);
                FormulaWi::or(nnfc(&na), nnfc(&nb))
            }
            Or(a, b) => {
                let (na, nb) = (FormulaWi::neg(a.clone()), FormulaWi::neg(b.clone()));
                decreasing(&na, phi);
                decreasing(&nb, phi);
                FormulaWi::and(nnfc(&na), nnfc(&nb))
            }
            Var(_) | Const(_) => phi.clone(),
        },
        Or(a, b) => FormulaWi::or(nnfc(a), nnfc(b)),
        And(a, b) => FormulaWi::and(nnfc(a), nnfc(b)),
        Var(_) | Const(_) => phi.clone(),
    }
}

/// `A | (B & C)  ==  (A | B) & (A | C)`, splitting a left conjunction
/// before a right one.
pub fn distr(phi1: &FormulaWi, phi2: &FormulaWi) -> FormulaWi {
    let measure = phi1.size() + phi2.size();
    if let FormulaWiKind::And(a, b) = phi1.kind() {
        debug_assert!(a.size() + phi2.size() < measure && b.size() + phi2.size() < measure);
        return FormulaWi::and(distr(a, phi2), distr(b, phi2));
    }
    if let FormulaWiKind::And(a, b) = phi2.kind() {
        debug_assert!(phi1.size() + a.size() < measure && phi1.size() + b.size() < measure);
        return FormulaWi::and(distr(phi1, a), distr(phi1, b));
    }
    FormulaWi::or(phi1.clone(), phi2.clone())
}

/// Conjunctive normal form of a formula already in negation normal form.
pub fn cnfc(phi: &FormulaWi) -> FormulaWi {
    match phi.kind() {
        FormulaWiKind::Or(a, b) => distr(&cnfc(a), &cnfc(b)),
        FormulaWiKind::And(a, b) => FormulaWi::and(cnfc(a), cnfc(b)),
        _ => phi.clone(),
    }
}

/// `cnfc(nnfc(impl_free(phi)))` under the default options.
pub fn to_cnf(phi: &Formula) -> Result<FormulaWi> {
    to_cnf_with(phi, &Options::default())
}

pub fn nnfc_with(phi: &FormulaWi, options: &Options) -> Result<FormulaWi> {
    let out = nnfc(phi);
    if options.checked {
        wf::ensure(wf::wf_negations_of_literals(&out), "nnfc", wf::NNF)?;
    }
    Ok(out)
}

pub fn distr_with(phi1: &FormulaWi, phi2: &FormulaWi, options: &Options) -> Result<FormulaWi> {
    if options.checked {
        wf::require_cnf("distr", phi1)?;
        wf::require_cnf("distr", phi2)?;
    }
    budget::check(budget::predicted_distr_size(phi1, phi2), options.max_nodes)?;
    let out = distr(phi1, phi2);
    if options.checked {
        ensure_cnf("distr", &out)?;
    }
    Ok(out)
}

pub fn cnfc_with(phi: &FormulaWi, options: &Options) -> Result<FormulaWi> {
    if options.checked {
        wf::require_nnf("cnfc", phi)?;
    }
    budget::check(budget::predicted_cnfc_size(phi), options.max_nodes)?;
    let out = cnfc(phi);
    if options.checked {
        ensure_cnf("cnfc", &out)?;
    }
    Ok(out)
}

pub fn to_cnf_with(phi: &Formula, options: &Options) -> Result<FormulaWi> {
    let nnf = nnfc_with(&impl_free(phi), options)?;
    cnfc_with(&nnf, options)
}

pub(crate) fn ensure_cnf(function: &'static str, phi: &FormulaWi) -> Result<()> {
    wf::ensure(wf::wf_negations_of_literals(phi), function, wf::NNF)?;
    wf::ensure(wf::wf_conjunctions_of_disjunctions(phi), function, wf::CNF)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::syntax::{parse, parse_wi};

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    fn w(text: &str) -> FormulaWi {
        parse_wi(text).unwrap()
    }

    #[test]
    fn impl_free_examples() {
        assert_eq!(impl_free(&f("p -> q")), w("~p | q"));
        assert_eq!(impl_free(&f("p")), w("p"));
        assert_eq!(impl_free(&f("(p -> q) -> r")), w("~(~p | q) | r"));
        assert_eq!(impl_free(&f("~(a & true) | false")), w("~(a & true) | false"));
    }

    #[test]
    fn nnfc_examples() {
        assert_eq!(nnfc(&w("~~p")), w("p"));
        assert_eq!(nnfc(&w("~(p & q)")), w("~p | ~q"));
        assert_eq!(nnfc(&w("~(p | q & r)")), w("~p & (~q | ~r)"));
        assert_eq!(nnfc(&w("~~~p")), w("~p"));
        assert_eq!(nnfc(&w("~true")), w("~true"));
    }

    #[test]
    fn distr_examples() {
        assert_eq!(distr(&w("a"), &w("b & c")), w("(a | b) & (a | c)"));
        assert_eq!(distr(&w("a"), &w("b")), w("a | b"));
        assert_eq!(
            distr(&w("a & b"), &w("c & d")),
            w("((a | c) & (a | d)) & ((b | c) & (b | d))")
        );
    }

    #[test]
    fn cnfc_examples() {
        assert_eq!(cnfc(&w("p | q & r")), w("(p | q) & (p | r)"));
        assert_eq!(cnfc(&w("p")), w("p"));
        assert_eq!(cnfc(&w("p & (q | r)")), w("p & (q | r)"));
    }

    #[test]
    fn to_cnf_examples() {
        assert_eq!(to_cnf(&f("~(p -> q)")).unwrap(), w("p & ~q"));
        assert_eq!(to_cnf(&f("true")).unwrap(), w("true"));
        assert_eq!(to_cnf(&f("p -> q")).unwrap(), w("~p | q"));
    }

    #[test]
    fn constants_are_never_folded() {
        assert_eq!(to_cnf(&f("p | true & false")).unwrap(), w("(p | true) & (p | false)"));
    }

    #[test]
    fn checked_mode_enforces_preconditions() {
        let checked = Options::checked();
        assert_eq!(
            cnfc_with(&w("~(p & q)"), &checked),
            Err(Error::PreconditionViolation {
                function: "cnfc",
                predicate: wf::NNF
            })
        );
        assert_eq!(
            distr_with(&w("p | q & r"), &w("s"), &checked),
            Err(Error::PreconditionViolation {
                function: "distr",
                predicate: wf::CNF
            })
        );
        // Unchecked mode trusts the caller.
        assert!(cnfc_with(&w("~(p & q)"), &Options::default()).is_ok());
    }

    #[test]
    fn budget_is_enforced_before_building() {
        let mut phi = f("a0 & b0");
        for i in 1..40 {
            phi = Formula::or(phi, f(&format!("a{i} & b{i}")));
        }
        match to_cnf(&phi) {
            Err(Error::OutputBudgetExceeded { limit, predicted }) => {
                assert_eq!(limit, crate::DEFAULT_MAX_NODES);
                assert!(predicted > limit);
            }
            other => panic!("{other:?}"),
        }
        let small = Options {
            max_nodes: 4,
            ..Options::default()
        };
        assert!(matches!(
            to_cnf_with(&f("p | q & r"), &small),
            Err(Error::OutputBudgetExceeded { predicted: 7, limit: 4 })
        ));
        assert!(to_cnf_with(&f("p | q & r"), &Options { max_nodes: 7, ..small }).is_ok());
    }
}
