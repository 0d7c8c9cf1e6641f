//! Memoised evaluation of checked-mode obligations.
//!
//! Checked mode evaluates a post relation for every recorded state and the
//! well-formedness of every intermediate stack. Evaluated naively each of
//! those costs time proportional to the formulas involved, which makes a
//! run quadratic in its length. [`Memo`] evaluates the same relations and
//! predicates exactly, but shares work between them:
//!
//! * formulas are hash-consed, so structural equality of canonical nodes is
//!   pointer equality;
//! * the direct-style functions a frame stands for are cached per node;
//! * normal-form predicates are cached per node and computed from the
//!   children's cached values.
//!
//! Every node used as a cache key is kept alive by the cache itself, so a
//! node address is never reused while it is a key.

use std::collections::HashMap;
use std::fmt;

use super::{CnfcFrame, CnfcKont, DistrFrame, DistrKont, ImplFrame, ImplKont, NnfcFrame, NnfcKont};
use crate::direct;
use crate::error::Result;
use crate::formula::{Formula, FormulaWi, FormulaWiKind, Ident};
use crate::wf::{self, CNF, NNF};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Key {
    Var(Ident),
    Const(bool),
    Neg(usize),
    And(usize, usize),
    Or(usize, usize),
}

#[derive(Clone, Copy)]
struct Flags {
    nnf: bool,
    cnf: bool,
    disjunctions: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Unary {
    Nnfc,
    NnfcNeg,
    Cnfc,
}

#[derive(Clone, Default)]
pub(crate) struct Memo {
    /// Any node seen so far, by address, with its canonical twin.
    canonical: HashMap<usize, (FormulaWi, FormulaWi)>,
    /// Canonical nodes by structure.
    table: HashMap<Key, FormulaWi>,
    flags: HashMap<usize, (FormulaWi, Flags)>,
    /// Keyed by canonical addresses, which `table` keeps alive.
    distr: HashMap<(usize, usize), FormulaWi>,
    unary: HashMap<(Unary, usize), FormulaWi>,
    impl_free: HashMap<usize, (Formula, FormulaWi)>,
}

impl fmt::Debug for Memo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Memo").field("nodes", &self.table.len()).finish_non_exhaustive()
    }
}

fn id(phi: &FormulaWi) -> usize {
    phi.node_id()
}

impl Memo {
    /// The canonical node structurally equal to `phi`.
    pub(crate) fn canonical(&mut self, phi: &FormulaWi) -> FormulaWi {
        if let Some((_, c)) = self.canonical.get(&id(phi)) {
            return c.clone();
        }
        // Post-order: a node is interned once both children are.
        let mut work = vec![(phi.clone(), false)];
        while let Some((node, expanded)) = work.pop() {
            if self.canonical.contains_key(&id(&node)) {
                continue;
            }
            let children: Vec<&FormulaWi> = match node.kind() {
                FormulaWiKind::Neg(a) => vec![a],
                FormulaWiKind::And(a, b) | FormulaWiKind::Or(a, b) => vec![a, b],
                FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => Vec::new(),
            };
            if !expanded && children.iter().any(|c| !self.canonical.contains_key(&id(c))) {
                let pending: Vec<FormulaWi> = children.into_iter().cloned().collect();
                work.push((node, true));
                work.extend(pending.into_iter().map(|c| (c, false)));
                continue;
            }
            let c = match node.kind() {
                FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => self.make(node.kind().clone()),
                FormulaWiKind::Neg(a) => {
                    let a = self.lookup(a);
                    self.make(FormulaWiKind::Neg(a))
                }
                FormulaWiKind::And(a, b) => {
                    let (a, b) = (self.lookup(a), self.lookup(b));
                    self.make(FormulaWiKind::And(a, b))
                }
                FormulaWiKind::Or(a, b) => {
                    let (a, b) = (self.lookup(a), self.lookup(b));
                    self.make(FormulaWiKind::Or(a, b))
                }
            };
            self.canonical.insert(id(&node), (node, c));
        }
        self.canonical[&id(phi)].1.clone()
    }

    fn lookup(&self, phi: &FormulaWi) -> FormulaWi {
        self.canonical[&id(phi)].1.clone()
    }

    /// Builds a node from canonical children and returns its canonical form.
    fn make(&mut self, kind: FormulaWiKind) -> FormulaWi {
        let key = match &kind {
            FormulaWiKind::Var(x) => Key::Var(x.clone()),
            FormulaWiKind::Const(b) => Key::Const(*b),
            FormulaWiKind::Neg(a) => Key::Neg(id(a)),
            FormulaWiKind::And(a, b) => Key::And(id(a), id(b)),
            FormulaWiKind::Or(a, b) => Key::Or(id(a), id(b)),
        };
        if let Some(c) = self.table.get(&key) {
            return c.clone();
        }
        let c = FormulaWi::new(kind);
        self.table.insert(key, c.clone());
        self.canonical.insert(id(&c), (c.clone(), c.clone()));
        c
    }

    pub(crate) fn equal(&mut self, a: &FormulaWi, b: &FormulaWi) -> bool {
        let (a, b) = (self.canonical(a), self.canonical(b));
        id(&a) == id(&b)
    }

    /// `direct::distr` on canonical arguments.
    fn distr(&mut self, a: &FormulaWi, b: &FormulaWi) -> FormulaWi {
        if let Some(r) = self.distr.get(&(id(a), id(b))) {
            return r.clone();
        }
        let r = if let FormulaWiKind::And(a1, a2) = a.kind() {
            let (l, r) = (self.distr(a1, b), self.distr(a2, b));
            self.make(FormulaWiKind::And(l, r))
        } else if let FormulaWiKind::And(b1, b2) = b.kind() {
            let (l, r) = (self.distr(a, b1), self.distr(a, b2));
            self.make(FormulaWiKind::And(l, r))
        } else {
            self.make(FormulaWiKind::Or(a.clone(), b.clone()))
        };
        self.distr.insert((id(a), id(b)), r.clone());
        r
    }

    /// `direct::cnfc` on a canonical argument.
    fn cnfc(&mut self, phi: &FormulaWi) -> FormulaWi {
        if let Some(r) = self.unary.get(&(Unary::Cnfc, id(phi))) {
            return r.clone();
        }
        let r = match phi.kind() {
            FormulaWiKind::Or(a, b) => {
                let (a, b) = (self.cnfc(a), self.cnfc(b));
                self.distr(&a, &b)
            }
            FormulaWiKind::And(a, b) => {
                let (a, b) = (self.cnfc(a), self.cnfc(b));
                self.make(FormulaWiKind::And(a, b))
            }
            _ => phi.clone(),
        };
        self.unary.insert((Unary::Cnfc, id(phi)), r.clone());
        r
    }

    fn nnfc(&mut self, op: Unary, phi: &FormulaWi) -> FormulaWi {
        let phi = self.canonical(phi);
        if let Some(r) = self.unary.get(&(op, id(&phi))) {
            return r.clone();
        }
        let r = match op {
            Unary::NnfcNeg => direct::nnfc(&FormulaWi::neg(phi.clone())),
            _ => direct::nnfc(&phi),
        };
        let r = self.canonical(&r);
        self.unary.insert((op, id(&phi)), r.clone());
        r
    }

    fn impl_free(&mut self, phi: &Formula) -> FormulaWi {
        if let Some((_, r)) = self.impl_free.get(&phi.node_id()) {
            return r.clone();
        }
        let r = self.canonical(&direct::impl_free(phi));
        self.impl_free.insert(phi.node_id(), (phi.clone(), r.clone()));
        r
    }

    fn flags(&mut self, phi: &FormulaWi) -> Flags {
        if let Some((_, f)) = self.flags.get(&id(phi)) {
            return *f;
        }
        let mut work = vec![(phi.clone(), false)];
        while let Some((node, expanded)) = work.pop() {
            if self.flags.contains_key(&id(&node)) {
                continue;
            }
            let children: Vec<FormulaWi> = match node.kind() {
                FormulaWiKind::Neg(a) => vec![a.clone()],
                FormulaWiKind::And(a, b) | FormulaWiKind::Or(a, b) => vec![a.clone(), b.clone()],
                FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => Vec::new(),
            };
            if !expanded && children.iter().any(|c| !self.flags.contains_key(&id(c))) {
                work.push((node, true));
                work.extend(children.into_iter().map(|c| (c, false)));
                continue;
            }
            let of = |memo: &Memo, c: &FormulaWi| memo.flags[&id(c)].1;
            // Mirrors the recursive definitions in `wf`.
            let f = match node.kind() {
                FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => Flags {
                    nnf: true,
                    cnf: true,
                    disjunctions: true,
                },
                FormulaWiKind::Neg(a) => {
                    let fa = of(self, a);
                    Flags {
                        nnf: a.is_leaf() && fa.nnf,
                        cnf: fa.cnf,
                        disjunctions: fa.disjunctions,
                    }
                }
                FormulaWiKind::And(a, b) => {
                    let (fa, fb) = (of(self, a), of(self, b));
                    Flags {
                        nnf: fa.nnf && fb.nnf,
                        cnf: fa.cnf && fb.cnf,
                        disjunctions: false,
                    }
                }
                FormulaWiKind::Or(a, b) => {
                    let (fa, fb) = (of(self, a), of(self, b));
                    Flags {
                        nnf: fa.nnf && fb.nnf,
                        cnf: fa.disjunctions && fb.disjunctions,
                        disjunctions: fa.disjunctions && fb.disjunctions,
                    }
                }
            };
            self.flags.insert(id(&node), (node, f));
        }
        self.flags[&id(phi)].1
    }

    pub(crate) fn is_nnf(&mut self, phi: &FormulaWi) -> bool {
        self.flags(phi).nnf
    }

    pub(crate) fn is_cnf(&mut self, phi: &FormulaWi) -> bool {
        let f = self.flags(phi);
        f.nnf && f.cnf
    }

    /// Same outcome as `wf::require_nnf`.
    pub(crate) fn require_nnf(&mut self, function: &'static str, phi: &FormulaWi) -> Result<()> {
        let holds = self.is_nnf(phi);
        wf::require(holds, function, NNF)
    }

    /// Same outcome as `wf::require_cnf`.
    pub(crate) fn require_cnf(&mut self, function: &'static str, phi: &FormulaWi) -> Result<()> {
        let f = self.flags(phi);
        wf::require(f.nnf, function, NNF)?;
        wf::require(f.cnf, function, CNF)
    }

    /// `post::check_impl_post`; `descend` applies `impl_free` to `phi` first.
    pub(crate) fn impl_post(&mut self, k: &ImplKont, phi: &Formula, result: &FormulaWi) -> bool {
        let hole = self.impl_free(phi);
        self.impl_post_value(k, hole, result)
    }

    pub(crate) fn impl_post_value(&mut self, k: &ImplKont, phi: FormulaWi, result: &FormulaWi) -> bool {
        let mut hole = self.canonical(&phi);
        for frame in k.top_down() {
            let kind = match frame {
                ImplFrame::Neg(_) => FormulaWiKind::Neg(hole),
                ImplFrame::OrLeft(p) => FormulaWiKind::Or(hole, self.impl_free(p)),
                ImplFrame::OrRight(d) => FormulaWiKind::Or(self.canonical(d), hole),
                ImplFrame::AndLeft(p) => FormulaWiKind::And(hole, self.impl_free(p)),
                ImplFrame::AndRight(d) => FormulaWiKind::And(self.canonical(d), hole),
                ImplFrame::ImplLeft(p) => {
                    let neg = self.make(FormulaWiKind::Neg(hole));
                    FormulaWiKind::Or(neg, self.impl_free(p))
                }
                ImplFrame::ImplRight(d) => {
                    let d = self.canonical(d);
                    let neg = self.make(FormulaWiKind::Neg(d));
                    FormulaWiKind::Or(neg, hole)
                }
            };
            hole = self.make(kind);
        }
        self.equal(&hole, result)
    }

    /// `post::check_nnfc_post`; `descend` applies `nnfc` to `phi` first.
    pub(crate) fn nnfc_post(&mut self, k: &NnfcKont, phi: &FormulaWi, descend: bool, result: &FormulaWi) -> bool {
        let mut hole = if descend {
            self.nnfc(Unary::Nnfc, phi)
        } else {
            self.canonical(phi)
        };
        for frame in k.top_down() {
            let kind = match frame {
                NnfcFrame::NegNeg(_) => continue,
                NnfcFrame::NegAndLeft(p) => FormulaWiKind::Or(hole, self.nnfc(Unary::NnfcNeg, p)),
                NnfcFrame::NegOrLeft(p) => FormulaWiKind::And(hole, self.nnfc(Unary::NnfcNeg, p)),
                NnfcFrame::AndLeft(p) => FormulaWiKind::And(hole, self.nnfc(Unary::Nnfc, p)),
                NnfcFrame::OrLeft(p) => FormulaWiKind::Or(hole, self.nnfc(Unary::Nnfc, p)),
                NnfcFrame::NegAndRight(d) | NnfcFrame::OrRight(d) => FormulaWiKind::Or(self.canonical(d), hole),
                NnfcFrame::NegOrRight(d) | NnfcFrame::AndRight(d) => FormulaWiKind::And(self.canonical(d), hole),
            };
            hole = self.make(kind);
        }
        self.equal(&hole, result)
    }

    /// `post::check_cnfc_post`; `descend` applies `cnfc` to `phi` first.
    pub(crate) fn cnfc_post(&mut self, k: &CnfcKont, phi: &FormulaWi, descend: bool, result: &FormulaWi) -> bool {
        let mut hole = self.canonical(phi);
        if descend {
            hole = self.cnfc(&hole);
        }
        for frame in k.top_down() {
            hole = match frame {
                CnfcFrame::OrLeft(p) => {
                    let p = self.canonical(p);
                    let p = self.cnfc(&p);
                    self.distr(&hole, &p)
                }
                CnfcFrame::OrRight(d) => {
                    let d = self.canonical(d);
                    self.distr(&d, &hole)
                }
                CnfcFrame::AndLeft(p) => {
                    let p = self.canonical(p);
                    let p = self.cnfc(&p);
                    self.make(FormulaWiKind::And(hole, p))
                }
                CnfcFrame::AndRight(d) => {
                    let d = self.canonical(d);
                    self.make(FormulaWiKind::And(d, hole))
                }
            };
        }
        self.equal(&hole, result)
    }

    /// `post::check_distr_post`; `Some((a, b))` stands for `distr(a, b)`.
    pub(crate) fn distr_post(&mut self, k: &DistrKont, value: DistrValue<'_>, result: &FormulaWi) -> bool {
        let mut hole = match value {
            DistrValue::Pending(a, b) => {
                let (a, b) = (self.canonical(a), self.canonical(b));
                self.distr(&a, &b)
            }
            DistrValue::Done(phi) => self.canonical(phi),
        };
        for frame in k.top_down() {
            let kind = match frame {
                DistrFrame::Left(a, b) => {
                    let (a, b) = (self.canonical(a), self.canonical(b));
                    FormulaWiKind::And(hole, self.distr(&a, &b))
                }
                DistrFrame::Right(d) => FormulaWiKind::And(self.canonical(d), hole),
            };
            hole = self.make(kind);
        }
        self.equal(&hole, result)
    }

    /// `post::check_wf_cnfc_kont`.
    pub(crate) fn wf_cnfc_kont(&mut self, k: &CnfcKont) -> bool {
        k.top_down().all(|frame| match frame {
            CnfcFrame::OrLeft(p) | CnfcFrame::AndLeft(p) => self.is_nnf(p),
            CnfcFrame::OrRight(d) | CnfcFrame::AndRight(d) => self.is_cnf(d),
        })
    }

    /// `post::check_wf_distr_kont`.
    pub(crate) fn wf_distr_kont(&mut self, k: &DistrKont) -> bool {
        k.top_down().all(|frame| match frame {
            DistrFrame::Left(a, b) => self.is_cnf(a) && self.is_cnf(b),
            DistrFrame::Right(d) => self.is_cnf(d),
        })
    }
}

/// States recorded by a checked machine, and the cache used to verify them.
#[derive(Debug, Clone)]
pub(crate) struct History<K, C> {
    pub(crate) states: Vec<(K, C)>,
    pub(crate) memo: Memo,
}

impl<K, C> History<K, C> {
    pub(crate) fn new() -> Self {
        History {
            states: Vec::new(),
            memo: Memo::default(),
        }
    }

    pub(crate) fn push(&mut self, state: (K, C)) {
        self.states.push(state);
    }

    #[cfg(test)]
    pub(crate) fn len(&self) -> usize {
        self.states.len()
    }
}

pub(crate) enum DistrValue<'a> {
    Pending(&'a FormulaWi, &'a FormulaWi),
    Done(&'a FormulaWi),
}
