//! Post relations and stack well-formedness.
//!
//! A post relation `post(k, phi, result)` states that applying the stack
//! `k` to the value `phi` yields `result`, where each frame's pending work
//! is computed by the direct-style function. Each checker folds `phi`
//! through the frames from the top down and compares the final value with
//! `result` at `Id`.

use super::{CnfcFrame, CnfcKont, DistrFrame, DistrKont, ImplFrame, ImplKont, NnfcFrame, NnfcKont};
use crate::direct;
use crate::formula::FormulaWi;
use crate::wf::{is_cnf, wf_negations_of_literals};

pub fn check_impl_post(k: &ImplKont, phi: &FormulaWi, result: &FormulaWi) -> bool {
    let value = k.top_down().fold(phi.clone(), |hole, frame| match frame {
        ImplFrame::Neg(_) => FormulaWi::neg(hole),
        ImplFrame::OrLeft(p) => FormulaWi::or(hole, direct::impl_free(p)),
        ImplFrame::OrRight(d) => FormulaWi::or(d.clone(), hole),
        ImplFrame::AndLeft(p) => FormulaWi::and(hole, direct::impl_free(p)),
        ImplFrame::AndRight(d) => FormulaWi::and(d.clone(), hole),
        ImplFrame::ImplLeft(p) => FormulaWi::or(FormulaWi::neg(hole), direct::impl_free(p)),
        ImplFrame::ImplRight(d) => FormulaWi::or(FormulaWi::neg(d.clone()), hole),
    });
    value == *result
}

pub fn check_nnfc_post(k: &NnfcKont, phi: &FormulaWi, result: &FormulaWi) -> bool {
    let value = k.top_down().fold(phi.clone(), |hole, frame| match frame {
        NnfcFrame::NegNeg(_) => hole,
        NnfcFrame::NegAndLeft(p) => FormulaWi::or(hole, direct::nnfc(&FormulaWi::neg(p.clone()))),
        NnfcFrame::NegOrLeft(p) => FormulaWi::and(hole, direct::nnfc(&FormulaWi::neg(p.clone()))),
        NnfcFrame::AndLeft(p) => FormulaWi::and(hole, direct::nnfc(p)),
        NnfcFrame::OrLeft(p) => FormulaWi::or(hole, direct::nnfc(p)),
        NnfcFrame::NegAndRight(d) | NnfcFrame::OrRight(d) => FormulaWi::or(d.clone(), hole),
        NnfcFrame::NegOrRight(d) | NnfcFrame::AndRight(d) => FormulaWi::and(d.clone(), hole),
    });
    value == *result
}

pub fn check_cnfc_post(k: &CnfcKont, phi: &FormulaWi, result: &FormulaWi) -> bool {
    let value = k.top_down().fold(phi.clone(), |hole, frame| match frame {
        CnfcFrame::OrLeft(p) => direct::distr(&hole, &direct::cnfc(p)),
        CnfcFrame::OrRight(d) => direct::distr(d, &hole),
        CnfcFrame::AndLeft(p) => FormulaWi::and(hole, direct::cnfc(p)),
        CnfcFrame::AndRight(d) => FormulaWi::and(d.clone(), hole),
    });
    value == *result
}

/// The same relation for the `distr` stack: a pending pair is distributed
/// and conjoined on the right, a finished half on the left.
pub fn check_distr_post(k: &DistrKont, phi: &FormulaWi, result: &FormulaWi) -> bool {
    let value = k.top_down().fold(phi.clone(), |hole, frame| match frame {
        DistrFrame::Left(a, b) => FormulaWi::and(hole, direct::distr(a, b)),
        DistrFrame::Right(d) => FormulaWi::and(d.clone(), hole),
    });
    value == *result
}

/// Left frames hold unconverted input, which need only be in NNF; right
/// frames hold converted output, which must also be in CNF.
pub fn check_wf_cnfc_kont(k: &CnfcKont) -> bool {
    k.top_down().all(|frame| match frame {
        CnfcFrame::OrLeft(p) | CnfcFrame::AndLeft(p) => wf_negations_of_literals(p),
        CnfcFrame::OrRight(d) | CnfcFrame::AndRight(d) => is_cnf(d),
    })
}

pub fn check_wf_distr_kont(k: &DistrKont) -> bool {
    k.top_down().all(|frame| match frame {
        DistrFrame::Left(a, b) => is_cnf(a) && is_cnf(b),
        DistrFrame::Right(d) => is_cnf(d),
    })
}
