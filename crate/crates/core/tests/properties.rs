use proptest::prelude::*;
use propcnf::cps::Cps;
use propcnf::machine::{self, TraceEvent};
use propcnf::oracle::{self, Equivalence};
use propcnf::{dimacs, direct, syntax, wf};
use propcnf::{eval, eval_wi, Engine, Error, Formula, FormulaWi, Ident, Options, Valuation};

fn leaf() -> impl Strategy<Value = Formula> {
    prop_oneof![
        8 => prop::sample::select(vec!["p", "q", "r", "s", "t"]).prop_map(Formula::var),
        1 => any::<bool>().prop_map(Formula::constant),
    ]
}

fn formula() -> impl Strategy<Value = Formula> {
    leaf().prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::implies(a, b)),
        ]
    })
}

fn formula_wi() -> impl Strategy<Value = FormulaWi> {
    formula().prop_map(|phi| direct::impl_free(&phi))
}

fn valuation(atoms: &[Ident], bits: u32) -> Valuation {
    atoms.iter().enumerate().map(|(i, x)| (x.clone(), bits >> i & 1 == 1)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn print_then_parse_is_identity(phi in formula()) {
        let text = syntax::print(&phi);
        prop_assert_eq!(syntax::parse(&text).unwrap(), phi);
    }

    #[test]
    fn impl_free_preserves_semantics(phi in formula(), bits in any::<u32>()) {
        let out = direct::impl_free(&phi);
        let v = valuation(&oracle::atoms(&phi), bits);
        prop_assert_eq!(eval(&v, &phi), eval_wi(&v, &out));
    }

    #[test]
    fn nnfc_yields_negation_normal_form(phi in formula_wi()) {
        let out = direct::nnfc(&phi);
        prop_assert!(wf::wf_negations_of_literals(&out));
        prop_assert!(oracle::equivalent_wi(&phi, &out).unwrap().is_equivalent());
    }

    #[test]
    fn to_cnf_meets_its_contract(phi in formula()) {
        let out = direct::to_cnf(&phi).unwrap();
        prop_assert!(wf::wf_negations_of_literals(&out));
        prop_assert!(wf::wf_conjunctions_of_disjunctions(&out));
        prop_assert!(oracle::equivalent(&phi, &out).unwrap().is_equivalent());
    }

    #[test]
    fn engines_agree_in_checked_mode(phi in formula()) {
        let options = Options::checked();
        let results: Vec<_> = Engine::ALL.iter().map(|e| e.to_cnf(&phi, &options).unwrap()).collect();
        prop_assert_eq!(&results[0], &results[1]);
        prop_assert_eq!(&results[0], &results[2]);
    }

    #[test]
    fn engines_fail_alike_on_budget(phi in formula(), limit in 1u64..40) {
        let options = Options { max_nodes: limit, ..Options::default() };
        let results: Vec<_> = Engine::ALL.iter().map(|e| e.to_cnf(&phi, &options)).collect();
        prop_assert_eq!(&results[0], &results[1]);
        prop_assert_eq!(&results[0], &results[2]);
        if let Ok(out) = &results[0] {
            prop_assert!(out.size() <= limit);
        }
    }

    #[test]
    fn distr_preserves_semantics(a in formula(), b in formula()) {
        let a = direct::to_cnf(&a).unwrap();
        let b = direct::to_cnf(&b).unwrap();
        let out = direct::distr_with(&a, &b, &Options::checked()).unwrap();
        let disjunction = FormulaWi::or(a.clone(), b.clone());
        prop_assert!(oracle::equivalent_wi(&disjunction, &out).unwrap().is_equivalent());
        let machine = machine::distr_machine(&a, &b, &Options::checked(), None).unwrap();
        prop_assert_eq!(&machine, &out);
        prop_assert_eq!(&Cps::default().distr(&a, &b, |x| x).unwrap(), &out);
    }

    #[test]
    fn cps_applies_its_continuation_once(phi in formula()) {
        let cps = Cps::default();
        let wi = direct::impl_free(&phi);
        prop_assert_eq!(cps.impl_free(&phi, |x| x.size()).unwrap(), wi.size());
        let nnf = direct::nnfc(&wi);
        prop_assert_eq!(cps.nnfc(&wi, |x| x.to_string()).unwrap(), nnf.to_string());
        let mut seen = Vec::new();
        cps.cnfc(&nnf, |x| seen.push(x)).unwrap();
        prop_assert_eq!(seen, vec![direct::cnfc(&nnf)]);
    }

    #[test]
    fn machine_traces_replay(phi in formula()) {
        let mut events: Vec<TraceEvent> = Vec::new();
        let out = machine::to_cnf_machine(&phi, &Options::default(), Some(&mut events)).unwrap();
        prop_assert!(events.iter().enumerate().all(|(i, e)| e.step == i as u64));
        let last = events.last().unwrap();
        prop_assert_eq!(last.stack.len(), 1);
        prop_assert_eq!(machine::replay(&events).unwrap(), out);
    }

    #[test]
    fn normal_form_lemmas(phi in formula_wi()) {
        prop_assert!(wf::check_aux_lemma(&phi));
        prop_assert!(wf::check_size_positive(&phi));
        // A formula with no conjunction at all is trivially conjunctive.
        if wf::wf_disjunctions(&phi) {
            prop_assert!(wf::wf_conjunctions_of_disjunctions(&phi));
        }
    }

    #[test]
    fn oracle_accepts_the_identity_embedding(phi in formula_wi()) {
        prop_assert!(oracle::equivalent(&Formula::from(&phi), &phi).unwrap().is_equivalent());
    }

    #[test]
    fn counterexamples_are_genuine(phi in formula(), psi in formula_wi()) {
        if let Equivalence::Counterexample(c) = oracle::equivalent(&phi, &psi).unwrap() {
            let v = c.valuation();
            prop_assert_ne!(eval(&v, &phi), eval_wi(&v, &psi));
        }
    }

    #[test]
    fn dimacs_round_trip(phi in formula()) {
        let cnf = direct::to_cnf(&phi).unwrap();
        let doc = dimacs::to_dimacs(&cnf).unwrap();
        let set = dimacs::parse(&doc.to_string()).unwrap();
        let back = dimacs::reimport(&set, &doc.atoms).unwrap();
        prop_assert!(oracle::equivalent_wi(&cnf, &back).unwrap().is_equivalent());
    }
}

#[test]
fn checked_mode_reports_bad_preconditions_on_every_engine() {
    let bad = syntax::parse_wi("~(p & q)").unwrap();
    let options = Options::checked();
    let expected = Err(Error::PreconditionViolation {
        function: "cnfc",
        predicate: wf::NNF,
    });
    assert_eq!(direct::cnfc_with(&bad, &options), expected);
    assert_eq!(Cps { options }.cnfc(&bad, |x| x), expected);
    assert_eq!(machine::cnfc_machine(&bad, &options, None), expected);
}
