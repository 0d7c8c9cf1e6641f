//! Truth-table equivalence.
//!
//! Both formulas are compiled to postfix programs over bit vectors, so one
//! pass evaluates 64 valuations at once. Valuations are numbered by
//! treating atom `j` (in first-occurrence order) as bit `j` and are visited
//! from the all-true valuation downwards; the first one on which the
//! formulas differ is the counterexample.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind, FormulaWi, FormulaWiKind, Ident, Valuation};

/// Default bound on the number of distinct atoms, i.e. `2^20` valuations.
pub const DEFAULT_MAX_ATOMS: usize = 20;

/// A valuation on which two formulas disagree, listing every atom of either
/// formula in first-occurrence order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    assignments: Vec<(Ident, bool)>,
}

impl Counterexample {
    pub fn iter(&self) -> impl Iterator<Item = (&Ident, bool)> {
        self.assignments.iter().map(|(x, b)| (x, *b))
    }

    /// As a total valuation; atoms not listed map to `false`.
    pub fn valuation(&self) -> Valuation {
        self.assignments.iter().cloned().collect()
    }
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (x, b)) in self.assignments.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}={b}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Counterexample(Counterexample),
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Atoms of `phi` in first-occurrence (left-to-right) order.
pub fn atoms(phi: &Formula) -> Vec<Ident> {
    let mut table = AtomTable::default();
    table.collect(phi);
    table.atoms
}

pub fn atoms_wi(phi: &FormulaWi) -> Vec<Ident> {
    let mut table = AtomTable::default();
    table.collect(phi);
    table.atoms
}

/// Decides `forall v. eval(v, phi) = eval_wi(v, psi)` with the default atom
/// limit.
pub fn equivalent(phi: &Formula, psi: &FormulaWi) -> Result<Equivalence> {
    equivalent_with_limit(phi, psi, DEFAULT_MAX_ATOMS)
}

pub fn equivalent_with_limit(phi: &Formula, psi: &FormulaWi, max_atoms: usize) -> Result<Equivalence> {
    decide(phi, psi, max_atoms)
}

/// Equivalence of two implication-free formulas.
pub fn equivalent_wi(phi: &FormulaWi, psi: &FormulaWi) -> Result<Equivalence> {
    decide(phi, psi, DEFAULT_MAX_ATOMS)
}

/// Equivalence of two formulas that may both contain implications.
pub fn equivalent_formulas(phi: &Formula, psi: &Formula) -> Result<Equivalence> {
    decide(phi, psi, DEFAULT_MAX_ATOMS)
}

fn decide(phi: &impl Tree, psi: &impl Tree, max_atoms: usize) -> Result<Equivalence> {
    let mut table = AtomTable::default();
    table.collect(phi);
    table.collect(psi);
    let n = table.atoms.len();
    // Beyond 63 atoms the valuation index no longer fits in a u64.
    if n > max_atoms || n > 63 {
        return Err(Error::TooManyAtoms {
            count: n,
            limit: max_atoms.min(63),
        });
    }
    let (left, right) = (table.compile(phi), table.compile(psi));
    let total: u64 = 1 << n;
    let mask = if total >= 64 { u64::MAX } else { (1 << total) - 1 };
    let mut inputs = vec![0u64; n];
    let mut scratch = Vec::new();
    let mut base = total.saturating_sub(64) & !63;
    loop {
        for (j, word) in inputs.iter_mut().enumerate() {
            *word = if j < 6 {
                LOW_BITS[j]
            } else if base >> j & 1 == 1 {
                u64::MAX
            } else {
                0
            };
        }
        let diff = (run(&left, &inputs, &mut scratch) ^ run(&right, &inputs, &mut scratch)) & mask;
        if diff != 0 {
            let index = base + 63 - u64::from(diff.leading_zeros());
            let assignments = table.atoms.iter().enumerate().map(|(j, x)| (x.clone(), index >> j & 1 == 1)).collect();
            return Ok(Equivalence::Counterexample(Counterexample { assignments }));
        }
        if base == 0 {
            return Ok(Equivalence::Equivalent);
        }
        base -= 64;
    }
}

/// `LOW_BITS[j]` has bit `i` set iff bit `j` of `i` is set.
const LOW_BITS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[derive(Debug, Clone, Copy)]
enum Op {
    Var(usize),
    Const(bool),
    Not,
    And,
    Or,
    Impl,
}

fn run(program: &[Op], inputs: &[u64], stack: &mut Vec<u64>) -> u64 {
    stack.clear();
    for op in program {
        let value = match *op {
            Op::Var(j) => inputs[j],
            Op::Const(b) => {
                if b {
                    u64::MAX
                } else {
                    0
                }
            }
            Op::Not => !stack.pop().expect("operand"),
            Op::And | Op::Or | Op::Impl => {
                let b = stack.pop().expect("operand");
                let a = stack.pop().expect("operand");
                match op {
                    Op::And => a & b,
                    Op::Or => a | b,
                    _ => !a | b,
                }
            }
        };
        stack.push(value);
    }
    stack.pop().expect("program leaves one value")
}

enum View<'a, T> {
    Var(&'a Ident),
    Const(bool),
    Not(&'a T),
    Binary(Op, &'a T, &'a T),
}

trait Tree: Sized {
    fn view(&self) -> View<'_, Self>;
}

impl Tree for Formula {
    fn view(&self) -> View<'_, Self> {
        match self.kind() {
            FormulaKind::Var(x) => View::Var(x),
            FormulaKind::Const(b) => View::Const(*b),
            FormulaKind::Neg(a) => View::Not(a),
            FormulaKind::And(a, b) => View::Binary(Op::And, a, b),
            FormulaKind::Or(a, b) => View::Binary(Op::Or, a, b),
            FormulaKind::Impl(a, b) => View::Binary(Op::Impl, a, b),
        }
    }
}

impl Tree for FormulaWi {
    fn view(&self) -> View<'_, Self> {
        match self.kind() {
            FormulaWiKind::Var(x) => View::Var(x),
            FormulaWiKind::Const(b) => View::Const(*b),
            FormulaWiKind::Neg(a) => View::Not(a),
            FormulaWiKind::And(a, b) => View::Binary(Op::And, a, b),
            FormulaWiKind::Or(a, b) => View::Binary(Op::Or, a, b),
        }
    }
}

#[derive(Default)]
struct AtomTable {
    atoms: Vec<Ident>,
    index: HashMap<Ident, usize>,
}

impl AtomTable {
    fn collect<T: Tree>(&mut self, root: &T) {
        let mut todo = vec![root];
        while let Some(node) = todo.pop() {
            match node.view() {
                View::Var(x) => {
                    if !self.index.contains_key(x) {
                        self.index.insert(x.clone(), self.atoms.len());
                        self.atoms.push(x.clone());
                    }
                }
                View::Const(_) => {}
                View::Not(a) => todo.push(a),
                View::Binary(_, a, b) => {
                    todo.push(b);
                    todo.push(a);
                }
            }
        }
    }

    fn compile<T: Tree>(&self, root: &T) -> Vec<Op> {
        enum Task<'a, T> {
            Visit(&'a T),
            Emit(Op),
        }
        let mut program = Vec::new();
        let mut todo = vec![Task::Visit(root)];
        while let Some(task) = todo.pop() {
            match task {
                Task::Emit(op) => program.push(op),
                Task::Visit(node) => match node.view() {
                    View::Var(x) => program.push(Op::Var(self.index[x])),
                    View::Const(b) => program.push(Op::Const(b)),
                    View::Not(a) => {
                        todo.push(Task::Emit(Op::Not));
                        todo.push(Task::Visit(a));
                    }
                    View::Binary(op, a, b) => {
                        todo.push(Task::Emit(op));
                        todo.push(Task::Visit(b));
                        todo.push(Task::Visit(a));
                    }
                },
            }
        }
        program
    }
}
