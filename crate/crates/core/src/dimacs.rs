//! DIMACS CNF export, plus a reader for checking exports.
//!
//! Export is the only place where constants are simplified away: a clause
//! containing `true` (or `~false`) is dropped, and `false` (or `~true`)
//! literals are removed from their clause. A clause that becomes empty makes
//! the whole document the canonical unsatisfiable one, a single empty
//! clause. Atoms are numbered from 1 in first-occurrence order, counting
//! atoms of dropped clauses too.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{FormulaWi, FormulaWiKind, Ident};
use crate::oracle::atoms_wi;
use crate::wf;

/// A CNF in DIMACS form. Literal `i` stands for `atoms[i - 1]`, `-i` for
/// its negation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dimacs {
    pub atoms: Vec<Ident>,
    pub clauses: Vec<Vec<i64>>,
}

impl fmt::Display for Dimacs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.atoms.len(), self.clauses.len())?;
        for clause in &self.clauses {
            for lit in clause {
                write!(f, "{lit} ")?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

enum Literal {
    Atom(i64),
    Const(bool),
}

/// Exports `phi`, which must be in negation and conjunctive normal form.
pub fn to_dimacs(phi: &FormulaWi) -> Result<Dimacs> {
    if !wf::wf_negations_of_literals(phi) {
        return Err(Error::NotInCnf { predicate: wf::NNF });
    }
    if !wf::wf_conjunctions_of_disjunctions(phi) {
        return Err(Error::NotInCnf { predicate: wf::CNF });
    }
    let atoms = atoms_wi(phi);
    let numbers: HashMap<&Ident, i64> = atoms.iter().zip(1..).collect();
    let number = |x: &Ident| numbers[x];
    let literal = |lit: &FormulaWi| match lit.kind() {
        FormulaWiKind::Var(x) => Literal::Atom(number(x)),
        FormulaWiKind::Const(b) => Literal::Const(*b),
        FormulaWiKind::Neg(inner) => match inner.kind() {
            FormulaWiKind::Var(x) => Literal::Atom(-number(x)),
            FormulaWiKind::Const(b) => Literal::Const(!*b),
            _ => unreachable!("checked to be in NNF"),
        },
        _ => unreachable!("checked to be in CNF"),
    };

    let mut clauses = Vec::new();
    for clause in flatten(phi, and_parts) {
        let mut lits = Vec::new();
        let mut satisfied = false;
        for lit in flatten(clause, or_parts) {
            match literal(lit) {
                Literal::Atom(l) => lits.push(l),
                Literal::Const(true) => satisfied = true,
                Literal::Const(false) => {}
            }
        }
        if satisfied {
            continue;
        }
        if lits.is_empty() {
            return Ok(Dimacs {
                atoms,
                clauses: vec![Vec::new()],
            });
        }
        clauses.push(lits);
    }
    Ok(Dimacs { atoms, clauses })
}

fn and_parts(kind: &FormulaWiKind) -> Option<(&FormulaWi, &FormulaWi)> {
    match kind {
        FormulaWiKind::And(a, b) => Some((a, b)),
        _ => None,
    }
}

fn or_parts(kind: &FormulaWiKind) -> Option<(&FormulaWi, &FormulaWi)> {
    match kind {
        FormulaWiKind::Or(a, b) => Some((a, b)),
        _ => None,
    }
}

/// Leaves of the maximal tree of `split` nodes at the root, left to right.
fn flatten(root: &FormulaWi, split: fn(&FormulaWiKind) -> Option<(&FormulaWi, &FormulaWi)>) -> Vec<&FormulaWi> {
    let mut out = Vec::new();
    let mut todo = vec![root];
    while let Some(node) = todo.pop() {
        match split(node.kind()) {
            Some((a, b)) => {
                todo.push(b);
                todo.push(a);
            }
            None => out.push(node),
        }
    }
    out
}

/// A parsed DIMACS document: variables are anonymous.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseSet {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

/// Reads a DIMACS CNF document. Comment lines start with `c`.
pub fn parse(text: &str) -> Result<ClauseSet> {
    let err = |line: usize, message: String| Error::Dimacs { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        last_line = line_no;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(err(line_no, "duplicate header".into()));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| err(line_no, format!("bad header `{trimmed}`")))?);
            continue;
        }
        let Some((num_vars, _)) = header else {
            return Err(err(line_no, "clause before header".into()));
        };
        for token in trimmed.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| err(line_no, format!("bad literal `{token}`")))?;
            if lit == 0 {
                clauses.push(std::mem::take(&mut current));
            } else if lit.unsigned_abs() > num_vars as u64 {
                return Err(err(line_no, format!("literal {lit} exceeds {num_vars} variables")));
            } else {
                current.push(lit);
            }
        }
    }
    let Some((num_vars, num_clauses)) = header else {
        return Err(err(last_line, "missing header".into()));
    };
    if !current.is_empty() {
        return Err(err(last_line, "unterminated clause".into()));
    }
    if clauses.len() != num_clauses {
        return Err(err(
            last_line,
            format!("header declares {num_clauses} clauses, found {}", clauses.len()),
        ));
    }
    Ok(ClauseSet { num_vars, clauses })
}

/// Rebuilds a formula from `set`, naming variable `i` by `atoms[i - 1]`.
/// Clauses and literals nest to the left; no clauses gives `true` and an
/// empty clause `false`.
pub fn reimport(set: &ClauseSet, atoms: &[Ident]) -> Result<FormulaWi> {
    if set.num_vars > atoms.len() {
        return Err(Error::Dimacs {
            line: 0,
            message: format!("{} variables but only {} names", set.num_vars, atoms.len()),
        });
    }
    let literal = |lit: i64| {
        let atom = FormulaWi::atom(atoms[lit.unsigned_abs() as usize - 1].clone());
        if lit < 0 {
            FormulaWi::neg(atom)
        } else {
            atom
        }
    };
    let clause = |lits: &[i64]| {
        lits.iter()
            .map(|&l| literal(l))
            .reduce(FormulaWi::or)
            .unwrap_or_else(|| FormulaWi::constant(false))
    };
    Ok(set
        .clauses
        .iter()
        .map(|c| clause(c))
        .reduce(FormulaWi::and)
        .unwrap_or_else(|| FormulaWi::constant(true)))
}
