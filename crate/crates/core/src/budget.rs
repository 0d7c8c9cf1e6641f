//! Output-size prediction for `distr` and `cnfc`.
//!
//! CNF conversion by distribution is exponential in the worst case. The
//! exact size of the result can be computed from clause counts alone, so
//! every engine checks the budget before building anything.
//!
//! For a formula in the shape `cnfc` returns, an `And`-tree over `n`
//! clauses whose sizes sum to `s`, the total size is `n - 1 + s`.
//! Distributing two such formulas pairs every clause of one with every
//! clause of the other.

use crate::error::{Error, Result};
use crate::formula::{FormulaWi, FormulaWiKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Clauses {
    count: u64,
    total_size: u64,
}

impl Clauses {
    fn size(self) -> u64 {
        (self.count - 1).saturating_add(self.total_size)
    }

    fn distribute(self, other: Clauses) -> Clauses {
        let count = self.count.saturating_mul(other.count);
        let total_size = count
            .saturating_add(other.count.saturating_mul(self.total_size))
            .saturating_add(self.count.saturating_mul(other.total_size));
        Clauses { count, total_size }
    }
}

/// Clauses seen by `distr`: the operand split along `And` nodes only.
fn conjuncts(phi: &FormulaWi) -> Clauses {
    match phi.kind() {
        FormulaWiKind::And(a, b) => {
            let (l, r) = (conjuncts(a), conjuncts(b));
            Clauses {
                count: l.count.saturating_add(r.count),
                total_size: l.total_size.saturating_add(r.total_size),
            }
        }
        _ => Clauses {
            count: 1,
            total_size: phi.size(),
        },
    }
}

fn cnfc_clauses(phi: &FormulaWi) -> Clauses {
    match phi.kind() {
        FormulaWiKind::And(a, b) => {
            let (l, r) = (cnfc_clauses(a), cnfc_clauses(b));
            Clauses {
                count: l.count.saturating_add(r.count),
                total_size: l.total_size.saturating_add(r.total_size),
            }
        }
        FormulaWiKind::Or(a, b) => cnfc_clauses(a).distribute(cnfc_clauses(b)),
        _ => Clauses {
            count: 1,
            total_size: phi.size(),
        },
    }
}

/// Exact size of `distr(phi1, phi2)`, saturating at `u64::MAX`.
pub fn predicted_distr_size(phi1: &FormulaWi, phi2: &FormulaWi) -> u64 {
    conjuncts(phi1).distribute(conjuncts(phi2)).size()
}

/// Exact size of `cnfc(phi)`, saturating at `u64::MAX`.
pub fn predicted_cnfc_size(phi: &FormulaWi) -> u64 {
    cnfc_clauses(phi).size()
}

pub(crate) fn check(predicted: u64, limit: u64) -> Result<()> {
    if predicted > limit {
        Err(Error::OutputBudgetExceeded { predicted, limit })
    } else {
        Ok(())
    }
}
