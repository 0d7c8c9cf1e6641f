//! Formula trees, valuations and their semantics.
//!
//! [`Formula`] is the full propositional language, implication included.
//! [`FormulaWi`] has no implication constructor and is what every pipeline
//! stage after `impl_free` works with.
//!
//! Both are immutable trees of reference-counted nodes: cloning is O(1) and
//! subtrees may be shared. Equality is structural. Dropping and comparing
//! use explicit work lists, so arbitrarily deep formulas are fine.

use std::collections::BTreeMap;
use std::fmt;
use std::mem;
use std::str::FromStr;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::syntax;

/// Name of a propositional atom: `[A-Za-z_][A-Za-z0-9_]*`, except the
/// keywords `true` and `false`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ident(Arc<str>);

impl Ident {
    pub fn new(name: &str) -> Result<Ident> {
        if is_valid_ident(name) {
            Ok(Ident(Arc::from(name)))
        } else {
            Err(Error::InvalidIdent(name.to_owned()))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

pub fn is_valid_ident(name: &str) -> bool {
    let mut chars = name.chars();
    let head_ok = matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_');
    head_ok
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
        && name != "true"
        && name != "false"
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Ident {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ident::new(s)
    }
}

impl Serialize for Ident {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Ident {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(deserializer)?;
        Ident::new(&name).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Formula

/// A propositional formula, possibly containing implications.
#[derive(Clone)]
pub struct Formula(Arc<FormulaKind>);

#[derive(Debug, Clone)]
pub enum FormulaKind {
    Var(Ident),
    Const(bool),
    And(Formula, Formula),
    Or(Formula, Formula),
    Impl(Formula, Formula),
    Neg(Formula),
}

impl Formula {
    pub fn new(kind: FormulaKind) -> Formula {
        Formula(Arc::new(kind))
    }

    pub fn kind(&self) -> &FormulaKind {
        &self.0
    }

    /// Address of the root node; stable while any clone is alive.
    pub(crate) fn node_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Atom with the given name.
    ///
    /// # Panics
    ///
    /// If `name` is not a valid identifier. Use [`Formula::atom`] with a
    /// checked [`Ident`] for untrusted names.
    pub fn var(name: &str) -> Formula {
        let id = Ident::new(name).unwrap_or_else(|_| panic!("invalid identifier `{name}`"));
        Formula::atom(id)
    }

    pub fn atom(id: Ident) -> Formula {
        Formula::new(FormulaKind::Var(id))
    }

    pub fn constant(value: bool) -> Formula {
        Formula::new(FormulaKind::Const(value))
    }

    pub fn and(lhs: Formula, rhs: Formula) -> Formula {
        Formula::new(FormulaKind::And(lhs, rhs))
    }

    pub fn or(lhs: Formula, rhs: Formula) -> Formula {
        Formula::new(FormulaKind::Or(lhs, rhs))
    }

    pub fn implies(lhs: Formula, rhs: Formula) -> Formula {
        Formula::new(FormulaKind::Impl(lhs, rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: Formula) -> Formula {
        Formula::new(FormulaKind::Neg(inner))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind(), FormulaKind::Var(_) | FormulaKind::Const(_))
    }

    /// Longest root-to-leaf path, counted in nodes (a leaf has height 1).
    pub fn height(&self) -> usize {
        let mut best = 0;
        let mut work = vec![(self, 1)];
        while let Some((phi, h)) = work.pop() {
            best = best.max(h);
            match phi.kind() {
                FormulaKind::And(a, b) | FormulaKind::Or(a, b) | FormulaKind::Impl(a, b) => {
                    work.push((a, h + 1));
                    work.push((b, h + 1));
                }
                FormulaKind::Neg(a) => work.push((a, h + 1)),
                FormulaKind::Var(_) | FormulaKind::Const(_) => {}
            }
        }
        best
    }

    pub fn contains_implication(&self) -> bool {
        let mut work = vec![self];
        while let Some(phi) = work.pop() {
            match phi.kind() {
                FormulaKind::Impl(..) => return true,
                FormulaKind::And(a, b) | FormulaKind::Or(a, b) => {
                    work.push(a);
                    work.push(b);
                }
                FormulaKind::Neg(a) => work.push(a),
                FormulaKind::Var(_) | FormulaKind::Const(_) => {}
            }
        }
        false
    }

    fn detach_children(&mut self, out: &mut Vec<Formula>) {
        if let Some(kind) = Arc::get_mut(&mut self.0) {
            match kind {
                FormulaKind::And(a, b) | FormulaKind::Or(a, b) | FormulaKind::Impl(a, b) => {
                    detach(a, out);
                    detach(b, out);
                }
                FormulaKind::Neg(a) => detach(a, out),
                FormulaKind::Var(_) | FormulaKind::Const(_) => {}
            }
        }
    }

    fn placeholder() -> Formula {
        static LEAF: OnceLock<Formula> = OnceLock::new();
        LEAF.get_or_init(|| Formula::constant(true)).clone()
    }
}

fn detach(slot: &mut Formula, out: &mut Vec<Formula>) {
    if !slot.is_leaf() && Arc::strong_count(&slot.0) == 1 {
        out.push(mem::replace(slot, Formula::placeholder()));
    }
}

impl Drop for Formula {
    fn drop(&mut self) {
        let mut pending = Vec::new();
        self.detach_children(&mut pending);
        while let Some(mut phi) = pending.pop() {
            phi.detach_children(&mut pending);
        }
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        use FormulaKind::*;
        let mut work = vec![(self, other)];
        while let Some((a, b)) = work.pop() {
            if Arc::ptr_eq(&a.0, &b.0) {
                continue;
            }
            match (a.kind(), b.kind()) {
                (Var(x), Var(y)) if x == y => {}
                (Const(x), Const(y)) if x == y => {}
                (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) | (Impl(a1, a2), Impl(b1, b2)) => {
                    work.push((a2, b2));
                    work.push((a1, b1));
                }
                (Neg(a1), Neg(b1)) => work.push((a1, b1)),
                _ => return false,
            }
        }
        true
    }
}

impl Eq for Formula {}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Formula({:?})", syntax::print(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&syntax::print(self))
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        syntax::parse(s)
    }
}

// ---------------------------------------------------------------------------
// FormulaWi

/// An implication-free formula. Every node caches its [`size`].
#[derive(Clone)]
pub struct FormulaWi(Arc<WiNode>);

struct WiNode {
    kind: FormulaWiKind,
    size: u64,
}

#[derive(Debug, Clone)]
pub enum FormulaWiKind {
    Var(Ident),
    Const(bool),
    And(FormulaWi, FormulaWi),
    Or(FormulaWi, FormulaWi),
    Neg(FormulaWi),
}

impl FormulaWi {
    pub fn new(kind: FormulaWiKind) -> FormulaWi {
        let size = match &kind {
            FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => 1,
            FormulaWiKind::Neg(a) => a.size().saturating_add(1),
            FormulaWiKind::And(a, b) | FormulaWiKind::Or(a, b) => a.size().saturating_add(b.size()).saturating_add(1),
        };
        FormulaWi(Arc::new(WiNode { kind, size }))
    }

    pub fn kind(&self) -> &FormulaWiKind {
        &self.0.kind
    }

    /// Address of the root node; stable while any clone is alive.
    pub(crate) fn node_id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    /// Number of constructors in the tree; see [`size`].
    pub fn size(&self) -> u64 {
        self.0.size
    }

    /// # Panics
    ///
    /// If `name` is not a valid identifier.
    pub fn var(name: &str) -> FormulaWi {
        let id = Ident::new(name).unwrap_or_else(|_| panic!("invalid identifier `{name}`"));
        FormulaWi::atom(id)
    }

    pub fn atom(id: Ident) -> FormulaWi {
        FormulaWi::new(FormulaWiKind::Var(id))
    }

    pub fn constant(value: bool) -> FormulaWi {
        FormulaWi::new(FormulaWiKind::Const(value))
    }

    pub fn and(lhs: FormulaWi, rhs: FormulaWi) -> FormulaWi {
        FormulaWi::new(FormulaWiKind::And(lhs, rhs))
    }

    pub fn or(lhs: FormulaWi, rhs: FormulaWi) -> FormulaWi {
        FormulaWi::new(FormulaWiKind::Or(lhs, rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: FormulaWi) -> FormulaWi {
        FormulaWi::new(FormulaWiKind::Neg(inner))
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self.kind(), FormulaWiKind::Var(_) | FormulaWiKind::Const(_))
    }

    pub fn is_and(&self) -> bool {
        matches!(self.kind(), FormulaWiKind::And(..))
    }

    /// Reinjects into the full formula language.
    pub fn to_formula(&self) -> Formula {
        match self.kind() {
            FormulaWiKind::Var(x) => Formula::atom(x.clone()),
            FormulaWiKind::Const(b) => Formula::constant(*b),
            FormulaWiKind::And(a, b) => Formula::and(a.to_formula(), b.to_formula()),
            FormulaWiKind::Or(a, b) => Formula::or(a.to_formula(), b.to_formula()),
            FormulaWiKind::Neg(a) => Formula::neg(a.to_formula()),
        }
    }

    fn detach_children(&mut self, out: &mut Vec<FormulaWi>) {
        if let Some(node) = Arc::get_mut(&mut self.0) {
            match &mut node.kind {
                FormulaWiKind::And(a, b) | FormulaWiKind::Or(a, b) => {
                    detach_wi(a, out);
                    detach_wi(b, out);
                }
                FormulaWiKind::Neg(a) => detach_wi(a, out),
                FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => {}
            }
        }
    }

    fn placeholder() -> FormulaWi {
        static LEAF: OnceLock<FormulaWi> = OnceLock::new();
        LEAF.get_or_init(|| FormulaWi::constant(true)).clone()
    }
}

fn detach_wi(slot: &mut FormulaWi, out: &mut Vec<FormulaWi>) {
    if !slot.is_leaf() && Arc::strong_count(&slot.0) == 1 {
        out.push(mem::replace(slot, FormulaWi::placeholder()));
    }
}

impl Drop for FormulaWi {
    fn drop(&mut self) {
        let mut pending = Vec::new();
        self.detach_children(&mut pending);
        while let Some(mut phi) = pending.pop() {
            phi.detach_children(&mut pending);
        }
    }
}

impl PartialEq for FormulaWi {
    fn eq(&self, other: &FormulaWi) -> bool {
        use FormulaWiKind::*;
        let mut work = vec![(self, other)];
        while let Some((a, b)) = work.pop() {
            if Arc::ptr_eq(&a.0, &b.0) {
                continue;
            }
            if a.size() != b.size() {
                return false;
            }
            match (a.kind(), b.kind()) {
                (Var(x), Var(y)) if x == y => {}
                (Const(x), Const(y)) if x == y => {}
                (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) => {
                    work.push((a2, b2));
                    work.push((a1, b1));
                }
                (Neg(a1), Neg(b1)) => work.push((a1, b1)),
                _ => return false,
            }
        }
        true
    }
}

impl Eq for FormulaWi {}

impl fmt::Debug for FormulaWi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormulaWi({:?})", syntax::print_wi(self))
    }
}

impl fmt::Display for FormulaWi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&syntax::print_wi(self))
    }
}

impl FromStr for FormulaWi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        syntax::parse_wi(s)
    }
}

impl From<&FormulaWi> for Formula {
    fn from(phi: &FormulaWi) -> Formula {
        phi.to_formula()
    }
}

impl TryFrom<&Formula> for FormulaWi {
    type Error = Error;

    fn try_from(phi: &Formula) -> Result<FormulaWi> {
        Ok(match phi.kind() {
            FormulaKind::Var(x) => FormulaWi::atom(x.clone()),
            FormulaKind::Const(b) => FormulaWi::constant(*b),
            FormulaKind::And(a, b) => FormulaWi::and(a.try_into()?, b.try_into()?),
            FormulaKind::Or(a, b) => FormulaWi::or(a.try_into()?, b.try_into()?),
            FormulaKind::Neg(a) => FormulaWi::neg(a.try_into()?),
            FormulaKind::Impl(..) => return Err(Error::ContainsImplication),
        })
    }
}

// ---------------------------------------------------------------------------
// Semantics

/// A total assignment of truth values to atoms: explicit entries plus a
/// default for every atom not listed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Valuation {
    assignments: BTreeMap<Ident, bool>,
    default: bool,
}

impl Valuation {
    /// Empty valuation mapping every atom to `default`.
    pub fn new(default: bool) -> Valuation {
        Valuation {
            assignments: BTreeMap::new(),
            default,
        }
    }

    pub fn with(mut self, atom: Ident, value: bool) -> Valuation {
        self.set(atom, value);
        self
    }

    pub fn set(&mut self, atom: Ident, value: bool) {
        self.assignments.insert(atom, value);
    }

    pub fn get(&self, atom: &Ident) -> bool {
        self.assignments.get(atom).copied().unwrap_or(self.default)
    }

    pub fn default_value(&self) -> bool {
        self.default
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Ident, bool)> {
        self.assignments.iter().map(|(k, v)| (k, *v))
    }
}

impl FromIterator<(Ident, bool)> for Valuation {
    fn from_iter<I: IntoIterator<Item = (Ident, bool)>>(iter: I) -> Self {
        Valuation {
            assignments: iter.into_iter().collect(),
            default: false,
        }
    }
}

pub fn eval(v: &Valuation, phi: &Formula) -> bool {
    match phi.kind() {
        FormulaKind::Var(x) => v.get(x),
        FormulaKind::Const(b) => *b,
        FormulaKind::And(a, b) => eval(v, a) && eval(v, b),
        FormulaKind::Or(a, b) => eval(v, a) || eval(v, b),
        FormulaKind::Impl(a, b) => !eval(v, a) || eval(v, b),
        FormulaKind::Neg(a) => !eval(v, a),
    }
}

pub fn eval_wi(v: &Valuation, phi: &FormulaWi) -> bool {
    match phi.kind() {
        FormulaWiKind::Var(x) => v.get(x),
        FormulaWiKind::Const(b) => *b,
        FormulaWiKind::And(a, b) => eval_wi(v, a) && eval_wi(v, b),
        FormulaWiKind::Or(a, b) => eval_wi(v, a) || eval_wi(v, b),
        FormulaWiKind::Neg(a) => !eval_wi(v, a),
    }
}

/// Constructor count: leaves count 1, `Neg` adds 1 to its operand, binary
/// connectives add 1 to the sum of both operands. Always at least 1.
pub fn size(phi: &FormulaWi) -> u64 {
    phi.size()
}
