//! Test corpora: exhaustive enumeration by height and random generation.
//!
//! Height counts a leaf as 1, so `~p` has height 2 and `p & (q | r)` height 3.
//!
//! Every engine and predicate in this crate treats leaves parametrically:
//! replacing leaves by other leaves commutes with conversion, and logical
//! equivalence is closed under substitution. Checking one formula whose
//! leaves are pairwise distinct atoms therefore covers every formula of the
//! same shape. [`shapes`] enumerates exactly those representatives.

use rand::Rng;

use crate::formula::{Formula, FormulaKind, FormulaWi, FormulaWiKind, Ident};

/// All formulas of height at most `max_height` built from `leaves`, in
/// order of increasing height.
pub fn formulas(max_height: usize, leaves: &[Formula]) -> Vec<Formula> {
    let mut all = Vec::new();
    for_each_formula(max_height, leaves, |phi| all.push(phi.clone()));
    all
}

/// Like [`formulas`], but formulas of the greatest height are passed to `f`
/// one at a time instead of being stored.
pub fn for_each_formula(max_height: usize, leaves: &[Formula], mut f: impl FnMut(&Formula)) {
    enumerate(
        max_height,
        leaves,
        |a| Formula::neg(a.clone()),
        &[Formula::and, Formula::or, Formula::implies],
        &mut f,
    );
}

pub fn formulas_wi(max_height: usize, leaves: &[FormulaWi]) -> Vec<FormulaWi> {
    let mut all = Vec::new();
    for_each_formula_wi(max_height, leaves, |phi| all.push(phi.clone()));
    all
}

pub fn for_each_formula_wi(max_height: usize, leaves: &[FormulaWi], mut f: impl FnMut(&FormulaWi)) {
    enumerate(
        max_height,
        leaves,
        |a| FormulaWi::neg(a.clone()),
        &[FormulaWi::and, FormulaWi::or],
        &mut f,
    );
}

fn enumerate<T: Clone>(
    max_height: usize,
    leaves: &[T],
    neg: impl Fn(&T) -> T,
    binary: &[fn(T, T) -> T],
    f: &mut dyn FnMut(&T),
) {
    if max_height == 0 {
        return;
    }
    // `below` holds every formula of height < h, `exact` those of height
    // h - 1 (a suffix of `below`).
    let mut below: Vec<T> = Vec::new();
    let mut exact: Vec<T> = leaves.to_vec();
    for h in 1..=max_height {
        let last = h == max_height;
        if last {
            for phi in &below {
                f(phi);
            }
        }
        let mut next = Vec::new();
        let mut emit = |phi: T| {
            if last {
                f(&phi);
            } else {
                next.push(phi);
            }
        };
        if h == 1 {
            for leaf in leaves {
                emit(leaf.clone());
            }
        } else {
            let shorter = below.len() - exact.len();
            for a in &exact {
                emit(neg(a));
            }
            for op in binary {
                // Left child of height h - 1, right child of any smaller height.
                for a in &exact {
                    for b in &below {
                        emit(op(a.clone(), b.clone()));
                    }
                }
                // Left child strictly shorter, right child of height h - 1.
                for a in &below[..shorter] {
                    for b in &exact {
                        emit(op(a.clone(), b.clone()));
                    }
                }
            }
        }
        if !last {
            if h > 1 {
                exact = next;
            }
            below.extend(exact.iter().cloned());
        }
    }
}

/// Renames the leaves of `phi` left to right as `x0`, `x1`, ...
pub fn relabel(phi: &Formula) -> Formula {
    let mut counter = 0;
    relabel_with(phi, &mut counter)
}

fn relabel_with(phi: &Formula, counter: &mut usize) -> Formula {
    match phi.kind() {
        FormulaKind::Var(_) | FormulaKind::Const(_) => {
            let leaf = Formula::atom(atom_name(*counter));
            *counter += 1;
            leaf
        }
        FormulaKind::Neg(a) => Formula::neg(relabel_with(a, counter)),
        FormulaKind::And(a, b) => {
            let a = relabel_with(a, counter);
            Formula::and(a, relabel_with(b, counter))
        }
        FormulaKind::Or(a, b) => {
            let a = relabel_with(a, counter);
            Formula::or(a, relabel_with(b, counter))
        }
        FormulaKind::Impl(a, b) => {
            let a = relabel_with(a, counter);
            Formula::implies(a, relabel_with(b, counter))
        }
    }
}

fn atom_name(i: usize) -> Ident {
    Ident::new(&format!("x{i}")).expect("valid identifier")
}

/// One representative per formula shape of height at most `max_height`:
/// every leaf a distinct atom, named left to right `x0`, `x1`, ...
pub fn shapes(max_height: usize) -> Vec<Formula> {
    formulas(max_height, &[Formula::var("x")]).iter().map(relabel).collect()
}

/// Parameters of [`random_formula`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomConfig {
    pub max_height: usize,
    /// Atoms are drawn from `x0 .. x{atoms - 1}`.
    pub atoms: usize,
    /// Chance that an inner position becomes a leaf early.
    pub leaf_probability: f64,
    /// Chance that a leaf is a constant rather than an atom.
    pub constant_probability: f64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_height: 8,
            atoms: 8,
            leaf_probability: 0.3,
            constant_probability: 0.05,
        }
    }
}

pub fn random_formula<R: Rng + ?Sized>(rng: &mut R, config: &RandomConfig) -> Formula {
    random_at(rng, config, config.max_height.max(1))
}

fn random_at<R: Rng + ?Sized>(rng: &mut R, config: &RandomConfig, height: usize) -> Formula {
    if height == 1 || rng.random_bool(config.leaf_probability) {
        return if config.atoms == 0 || rng.random_bool(config.constant_probability) {
            Formula::constant(rng.random())
        } else {
            Formula::atom(atom_name(rng.random_range(0..config.atoms)))
        };
    }
    match rng.random_range(0..4) {
        0 => Formula::neg(random_at(rng, config, height - 1)),
        op => {
            let a = random_at(rng, config, height - 1);
            let b = random_at(rng, config, height - 1);
            match op {
                1 => Formula::and(a, b),
                2 => Formula::or(a, b),
                _ => Formula::implies(a, b),
            }
        }
    }
}

/// A random implication-free formula, drawn like [`random_formula`] from
/// negation, conjunction and disjunction.
pub fn random_formula_wi<R: Rng + ?Sized>(rng: &mut R, config: &RandomConfig) -> FormulaWi {
    random_wi_at(rng, config, config.max_height.max(1))
}

fn random_wi_at<R: Rng + ?Sized>(rng: &mut R, config: &RandomConfig, height: usize) -> FormulaWi {
    if height == 1 || rng.random_bool(config.leaf_probability) {
        return if config.atoms == 0 || rng.random_bool(config.constant_probability) {
            FormulaWi::constant(rng.random())
        } else {
            FormulaWi::atom(atom_name(rng.random_range(0..config.atoms)))
        };
    }
    match rng.random_range(0..3) {
        0 => FormulaWi::neg(random_wi_at(rng, config, height - 1)),
        op => {
            let a = random_wi_at(rng, config, height - 1);
            let b = random_wi_at(rng, config, height - 1);
            if op == 1 {
                FormulaWi::and(a, b)
            } else {
                FormulaWi::or(a, b)
            }
        }
    }
}

/// Height of an implication-free formula, counting a leaf as 1.
pub fn height_wi(phi: &FormulaWi) -> usize {
    match phi.kind() {
        FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => 1,
        FormulaWiKind::Neg(a) => 1 + height_wi(a),
        FormulaWiKind::And(a, b) | FormulaWiKind::Or(a, b) => 1 + height_wi(a).max(height_wi(b)),
    }
}
