//! Exhaustive checks over small formula spaces. The larger sweeps live in
//! the CLI crate's acceptance suite.

use propcnf::corpus::{self, formulas, formulas_wi, shapes};
use propcnf::machine::{self, TraceEvent};
use propcnf::oracle;
use propcnf::{direct, syntax, wf, Engine, Formula, FormulaWi, FormulaWiKind, Options};

fn literal_leaves() -> Vec<Formula> {
    ["p", "q", "r", "true", "false"].iter().map(|t| syntax::parse(t).unwrap()).collect()
}

#[test]
fn every_small_formula_converts_correctly_on_every_engine() {
    let all = formulas(3, &literal_leaves());
    assert_eq!(all.len(), 21_765);
    let checked = Options::checked();
    for phi in &all {
        let expected = direct::to_cnf(phi).unwrap();
        assert!(wf::is_cnf(&expected), "{phi}");
        assert!(oracle::equivalent(phi, &expected).unwrap().is_equivalent(), "{phi}");
        for engine in Engine::ALL {
            assert_eq!(engine.to_cnf(phi, &checked).unwrap(), expected, "{} on {phi}", engine.name());
        }
        assert_eq!(syntax::parse(&phi.to_string()).unwrap(), *phi);
    }
}

#[test]
fn shape_representatives_cover_their_substitution_instances() {
    // Converting an instance equals instantiating the converted shape.
    let leaves = literal_leaves();
    for shape in shapes(3) {
        let converted = direct::to_cnf(&shape).unwrap();
        let atoms = oracle::atoms(&shape);
        for seed in 0..4usize {
            let pick: Vec<FormulaWi> = (0..atoms.len())
                .map(|i| FormulaWi::try_from(&leaves[(i * 7 + seed * 3) % leaves.len()]).unwrap())
                .collect();
            let instance = substitute(&shape, &atoms, &pick);
            let expected = substitute_wi(&converted, &atoms, &pick);
            assert_eq!(direct::to_cnf(&instance).unwrap(), expected, "{shape}");
        }
    }
}

fn substitute(phi: &Formula, atoms: &[propcnf::Ident], by: &[FormulaWi]) -> Formula {
    use propcnf::FormulaKind::*;
    match phi.kind() {
        Var(x) => Formula::from(&by[atoms.iter().position(|a| a == x).unwrap()]),
        Const(b) => Formula::constant(*b),
        Neg(a) => Formula::neg(substitute(a, atoms, by)),
        And(a, b) => Formula::and(substitute(a, atoms, by), substitute(b, atoms, by)),
        Or(a, b) => Formula::or(substitute(a, atoms, by), substitute(b, atoms, by)),
        Impl(a, b) => Formula::implies(substitute(a, atoms, by), substitute(b, atoms, by)),
    }
}

fn substitute_wi(phi: &FormulaWi, atoms: &[propcnf::Ident], by: &[FormulaWi]) -> FormulaWi {
    match phi.kind() {
        FormulaWiKind::Var(x) => by[atoms.iter().position(|a| a == x).unwrap()].clone(),
        FormulaWiKind::Const(b) => FormulaWi::constant(*b),
        FormulaWiKind::Neg(a) => FormulaWi::neg(substitute_wi(a, atoms, by)),
        FormulaWiKind::And(a, b) => FormulaWi::and(substitute_wi(a, atoms, by), substitute_wi(b, atoms, by)),
        FormulaWiKind::Or(a, b) => FormulaWi::or(substitute_wi(a, atoms, by), substitute_wi(b, atoms, by)),
    }
}

#[test]
fn predicates_ignore_leaf_labels() {
    let leaves: Vec<FormulaWi> = ["p", "q", "true"].iter().map(|t| syntax::parse_wi(t).unwrap()).collect();
    let x = FormulaWi::var("x");
    for phi in formulas_wi(3, &leaves) {
        let shape = erase(&phi, &x);
        assert_eq!(wf::wf_negations_of_literals(&phi), wf::wf_negations_of_literals(&shape));
        assert_eq!(wf::wf_conjunctions_of_disjunctions(&phi), wf::wf_conjunctions_of_disjunctions(&shape));
        assert_eq!(wf::wf_disjunctions(&phi), wf::wf_disjunctions(&shape));
        assert_eq!(wf::check_aux_lemma(&phi), wf::check_aux_lemma(&shape));
        assert_eq!(phi.size(), shape.size());
    }
}

fn erase(phi: &FormulaWi, leaf: &FormulaWi) -> FormulaWi {
    match phi.kind() {
        FormulaWiKind::Var(_) | FormulaWiKind::Const(_) => leaf.clone(),
        FormulaWiKind::Neg(a) => FormulaWi::neg(erase(a, leaf)),
        FormulaWiKind::And(a, b) => FormulaWi::and(erase(a, leaf), erase(b, leaf)),
        FormulaWiKind::Or(a, b) => FormulaWi::or(erase(a, leaf), erase(b, leaf)),
    }
}

#[test]
fn disjunction_free_formulas_are_conjunctive() {
    let leaves: Vec<FormulaWi> = ["a", "b"].iter().map(|t| syntax::parse_wi(t).unwrap()).collect();
    for phi in formulas_wi(4, &leaves) {
        if wf::wf_disjunctions(&phi) {
            assert!(wf::wf_conjunctions_of_disjunctions(&phi), "{phi}");
        }
        assert!(wf::check_aux_lemma(&phi), "{phi}");
    }
}

#[test]
fn every_small_trace_replays() {
    for phi in formulas(3, &[Formula::var("p"), Formula::var("q")]) {
        let mut events: Vec<TraceEvent> = Vec::new();
        let out = machine::to_cnf_machine(&phi, &Options::default(), Some(&mut events)).unwrap();
        assert_eq!(machine::replay(&events).unwrap(), out, "{phi}");
    }
}

#[test]
fn random_corpus_is_within_budget() {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
    let config = corpus::RandomConfig::default();
    for _ in 0..200 {
        let phi = corpus::random_formula(&mut rng, &config);
        let out = direct::to_cnf(&phi).unwrap();
        assert!(oracle::equivalent(&phi, &out).unwrap().is_equivalent());
    }
}
