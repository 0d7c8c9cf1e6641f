//! Continuation-passing pipeline.
//!
//! Every function takes the rest of the computation as a boxed closure and
//! only ever calls in tail position. The answer type `R` is generic: each
//! `*_cps` function returns `k` applied to the direct-style result.
//!
//! Rust does not eliminate tail calls, so every call and every continuation
//! application adds a host frame until the final answer returns. The host
//! stack is grown on demand and the number of nested calls is bounded by
//! [`Options::max_cps_depth`]; exceeding it yields
//! [`Error::CpsDepthExceeded`].
//!
//! Every recursive call below is a tail call; none of them does work after
//! the callee returns.

use std::cell::Cell;

use crate::budget;
use crate::direct::ensure_cnf;
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind, FormulaWi, FormulaWiKind};
use crate::wf;
use crate::Options;

type Kont<'a, R> = Box<dyn FnOnce(FormulaWi) -> Result<R> + 'a>;

const RED_ZONE: usize = 128 * 1024;
const SEGMENT: usize = 8 * 1024 * 1024;

struct Depth {
    calls: Cell<usize>,
    limit: usize,
}

impl Depth {
    fn new(limit: usize) -> Depth {
        Depth {
            calls: Cell::new(0),
            limit,
        }
    }

    fn enter(&self) -> Result<()> {
        let calls = self.calls.get() + 1;
        if calls > self.limit {
            return Err(Error::CpsDepthExceeded { limit: self.limit });
        }
        self.calls.set(calls);
        Ok(())
    }

    fn apply<R>(&self, k: Kont<'_, R>, value: FormulaWi) -> Result<R> {
        self.enter()?;
        stacker::maybe_grow(RED_ZONE, SEGMENT, || k(value))
    }
}

fn impl_free_k<'a, R: 'a>(cx: &'a Depth, phi: &'a Formula, k: Kont<'a, R>) -> Result<R> {
    cx.enter()?;
    stacker::maybe_grow(RED_ZONE, SEGMENT, move || match phi.kind() {
        FormulaKind::Neg(a) => impl_free_k(cx, a, Box::new(move |con| cx.apply(k, FormulaWi::neg(con)))),
        FormulaKind::Or(a, b) => impl_free_k(
            cx,
            a,
            Box::new(move |con| impl_free_k(cx, b, Box::new(move |con1| cx.apply(k, FormulaWi::or(con, con1))))),
        ),
        FormulaKind::And(a, b) => impl_free_k(
            cx,
            a,
            Box::new(move |con| impl_free_k(cx, b, Box::new(move |con1| cx.apply(k, FormulaWi::and(con, con1))))),
        ),
        FormulaKind::Impl(a, b) => impl_free_k(
            cx,
            a,
            Box::new(move |con| {
                impl_free_k(
                    cx,
                    b,
                    Box::new(move |con1| cx.apply(k, FormulaWi::or(FormulaWi::neg(con), con1))),
                )
            }),
        ),
        FormulaKind::Const(b) => cx.apply(k, FormulaWi::constant(*b)),
        FormulaKind::Var(x) => cx.apply(k, FormulaWi::atom(x.clone())),
    })
}

fn nnfc_k<'a, R: 'a>(cx: &'a Depth, phi: FormulaWi, k: Kont<'a, R>) -> Result<R> {
    use FormulaWiKind::*;
    cx.enter()?;
    stacker::maybe_grow(RED_ZONE, SEGMENT, move || match phi.kind() {
        Neg(inner) => match inner.kind() {
            Neg(a) => nnfc_k(cx, a.clone(), Box::new(move |con| cx.apply(k, con))),
            And(a, b) => {
                let nb = FormulaWi::neg(b.clone());
                nnfc_k(
                    cx,
                    FormulaWi::neg(a.clone()),
                    Box::new(move |con| nnfc_k(cx, nb, Box::new(move |con1| cx.apply(k, FormulaWi::or(con, con1))))),
                )
            }
            Or(a, b) => {
                let nb = FormulaWi::neg(b.clone());
                nnfc_k(
                    cx,
                    FormulaWi::neg(a.clone()),
                    Box::new(move |con| nnfc_k(cx, nb, Box::new(move |con1| cx.apply(k, FormulaWi::and(con, con1))))),
                )
            }
            Var(_) | Const(_) => cx.apply(k, phi.clone()),
        },
        Or(a, b) => {
            let b = b.clone();
            nnfc_k(
                cx,
                a.clone(),
                Box::new(move |con| nnfc_k(cx, b, Box::new(move |con1| cx.apply(k, FormulaWi::or(con, con1))))),
            )
        }
        And(a, b) => {
            let b = b.clone();
            nnfc_k(
                cx,
                a.clone(),
                Box::new(move |con| nnfc_k(cx, b, Box::new(move |con1| cx.apply(k, FormulaWi::and(con, con1))))),
            )
        }
        Var(_) | Const(_) => cx.apply(k, phi.clone()),
    })
}

fn distr_k<'a, R: 'a>(cx: &'a Depth, phi1: FormulaWi, phi2: FormulaWi, k: Kont<'a, R>) -> Result<R> {
    cx.enter()?;
    stacker::maybe_grow(RED_ZONE, SEGMENT, move || {
        if let FormulaWiKind::And(a, b) = phi1.kind() {
            let b = b.clone();
            let rhs = phi2.clone();
            return distr_k(
                cx,
                a.clone(),
                phi2,
                Box::new(move |con| distr_k(cx, b, rhs, Box::new(move |con1| cx.apply(k, FormulaWi::and(con, con1))))),
            );
        }
        if let FormulaWiKind::And(a, b) = phi2.kind() {
            let b = b.clone();
            let lhs = phi1.clone();
            return distr_k(
                cx,
                phi1,
                a.clone(),
                Box::new(move |con| distr_k(cx, lhs, b, Box::new(move |con1| cx.apply(k, FormulaWi::and(con, con1))))),
            );
        }
        cx.apply(k, FormulaWi::or(phi1, phi2))
    })
}

fn cnfc_k<'a, R: 'a>(cx: &'a Depth, phi: FormulaWi, k: Kont<'a, R>) -> Result<R> {
    cx.enter()?;
    stacker::maybe_grow(RED_ZONE, SEGMENT, move || match phi.kind() {
        FormulaWiKind::Or(a, b) => {
            let b = b.clone();
            cnfc_k(
                cx,
                a.clone(),
                Box::new(move |con| cnfc_k(cx, b, Box::new(move |con1| distr_k(cx, con, con1, k)))),
            )
        }
        FormulaWiKind::And(a, b) => {
            let b = b.clone();
            cnfc_k(
                cx,
                a.clone(),
                Box::new(move |con| cnfc_k(cx, b, Box::new(move |con1| cx.apply(k, FormulaWi::and(con, con1))))),
            )
        }
        _ => cx.apply(k, phi.clone()),
    })
}

fn lift<'a, R: 'a>(k: impl FnOnce(FormulaWi) -> R + 'a) -> Kont<'a, R> {
    Box::new(move |x| Ok(k(x)))
}

/// A CPS engine instance carrying its options.
#[derive(Debug, Clone, Copy, Default)]
pub struct Cps {
    pub options: Options,
}

impl Cps {
    pub fn new(options: Options) -> Cps {
        Cps { options }
    }

    fn depth(&self) -> Depth {
        Depth::new(self.options.max_cps_depth)
    }

    pub fn impl_free<R>(&self, phi: &Formula, k: impl FnOnce(FormulaWi) -> R) -> Result<R> {
        let cx = self.depth();
        impl_free_k(&cx, phi, lift(k))
    }

    pub fn nnfc<R>(&self, phi: &FormulaWi, k: impl FnOnce(FormulaWi) -> R) -> Result<R> {
        let cx = self.depth();
        nnfc_k(&cx, phi.clone(), lift(k))
    }

    /// In checked mode both operands must be in CNF. The output budget is
    /// always enforced.
    pub fn distr<R>(&self, phi1: &FormulaWi, phi2: &FormulaWi, k: impl FnOnce(FormulaWi) -> R) -> Result<R> {
        if self.options.checked {
            wf::require_cnf("distr", phi1)?;
            wf::require_cnf("distr", phi2)?;
        }
        budget::check(budget::predicted_distr_size(phi1, phi2), self.options.max_nodes)?;
        let cx = self.depth();
        distr_k(&cx, phi1.clone(), phi2.clone(), lift(k))
    }

    /// In checked mode `phi` must be in negation normal form. The output
    /// budget is always enforced.
    pub fn cnfc<R>(&self, phi: &FormulaWi, k: impl FnOnce(FormulaWi) -> R) -> Result<R> {
        if self.options.checked {
            wf::require_nnf("cnfc", phi)?;
        }
        budget::check(budget::predicted_cnfc_size(phi), self.options.max_nodes)?;
        let cx = self.depth();
        cnfc_k(&cx, phi.clone(), lift(k))
    }

    pub fn to_cnf(&self, phi: &Formula) -> Result<FormulaWi> {
        let wi = self.impl_free(phi, |x| x)?;
        let nnf = self.nnfc(&wi, |x| x)?;
        if self.options.checked {
            wf::ensure(wf::wf_negations_of_literals(&nnf), "nnfc", wf::NNF)?;
        }
        let out = self.cnfc(&nnf, |x| x)?;
        if self.options.checked {
            ensure_cnf("cnfc", &out)?;
        }
        Ok(out)
    }
}

pub fn impl_free_cps<R>(phi: &Formula, k: impl FnOnce(FormulaWi) -> R) -> Result<R> {
    Cps::default().impl_free(phi, k)
}

pub fn nnfc_cps<R>(phi: &FormulaWi, k: impl FnOnce(FormulaWi) -> R) -> Result<R> {
    Cps::default().nnfc(phi, k)
}

pub fn distr_cps<R>(phi1: &FormulaWi, phi2: &FormulaWi, k: impl FnOnce(FormulaWi) -> R) -> Result<R> {
    Cps::default().distr(phi1, phi2, k)
}

pub fn cnfc_cps<R>(phi: &FormulaWi, k: impl FnOnce(FormulaWi) -> R) -> Result<R> {
    Cps::default().cnfc(phi, k)
}

/// The CPS pipeline with identity continuations.
pub fn to_cnf_cps(phi: &Formula) -> Result<FormulaWi> {
    Cps::default().to_cnf(phi)
}

pub fn to_cnf_cps_with(phi: &Formula, options: &Options) -> Result<FormulaWi> {
    Cps::new(*options).to_cnf(phi)
}
