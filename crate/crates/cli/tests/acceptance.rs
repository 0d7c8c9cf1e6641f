//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.
//!
//! Exhaustive sweeps over "all formulas of height h over n atoms" run on
//! shape representatives (every leaf a distinct atom). Conversion commutes
//! with renaming leaves and equivalence is closed under substitution, so a
//! representative stands for every formula of its shape. Literal sweeps over
//! concrete atoms and constants run alongside as a cross-check.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use propcnf::corpus::{self, RandomConfig};
use propcnf::oracle;
use propcnf::{cps, dimacs, direct, machine, syntax, wf, Engine, Error, Formula, FormulaWi, Options};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SHAPE_HEIGHT: usize = 4;
const LITERAL_HEIGHT: usize = 3;
const RANDOM_FORMULAS: usize = 10_000;
const RANDOM_SEED: u64 = 0x5eed;
const LEMMA_SHAPE_HEIGHT: usize = 5;
const LEMMA_LITERAL_HEIGHT: usize = 4;
const RANDOM_LEMMA_FORMULAS: usize = 100_000;
const NEG_CHAIN_DEPTH: usize = 100_000;
const NEG_CHAIN_LIMIT: Duration = Duration::from_secs(5);
/// Soft bound for the semantic sweep; exceeding it is reported, not failed.
const SWEEP_TARGET: Duration = Duration::from_secs(60);

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: u32, name: &str, ok: bool, detail: String) {
        if !ok {
            self.failures += 1;
        }
        println!("{} {id}. {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }
}

/// Failures per check across the main corpus; the first offender of each
/// kind is kept for the report.
#[derive(Default)]
struct Tally {
    cases: usize,
    semantic: Failures,
    normal_form: Failures,
    agreement: Failures,
    checked: Failures,
    round_trip: Failures,
    dimacs_cases: usize,
}

#[derive(Default)]
struct Failures {
    count: usize,
    first: Option<String>,
}

impl Failures {
    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.count += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn summary(&self, cases: usize) -> String {
        match &self.first {
            None => format!("0 failures in {cases} cases"),
            Some(first) => format!("{} failures in {cases} cases, first: {first}", self.count),
        }
    }
}

impl Tally {
    fn visit(&mut self, phi: &Formula, exhaustive: bool) {
        self.cases += 1;
        let out = match direct::to_cnf(phi) {
            Ok(out) => out,
            Err(e) => {
                let text = format!("{phi}: {e}");
                self.semantic.record(false, || text.clone());
                self.normal_form.record(false, || text.clone());
                return;
            }
        };

        let equivalent = matches!(oracle::equivalent(phi, &out), Ok(e) if e.is_equivalent());
        self.semantic.record(equivalent, || phi.to_string());

        let nnf = direct::nnfc(&direct::impl_free(phi));
        let normal = wf::wf_negations_of_literals(&out)
            && wf::wf_conjunctions_of_disjunctions(&out)
            && wf::wf_negations_of_literals(&nnf);
        self.normal_form.record(normal, || phi.to_string());

        let plain = Options::default();
        let by_cps = cps::to_cnf_cps(phi);
        let by_machine = machine::to_cnf_machine(phi, &plain, None);
        let agree = by_cps.as_ref() == Ok(&out) && by_machine.as_ref() == Ok(&out);
        self.agreement.record(agree, || phi.to_string());

        let checked = Options::checked();
        let mut violation = None;
        for engine in Engine::ALL {
            match engine.to_cnf(phi, &checked) {
                Ok(r) if r == out => {}
                Ok(r) => violation = Some(format!("{}: {phi} gave {r}", engine.name())),
                Err(e) => violation = Some(format!("{}: {phi}: {e}", engine.name())),
            }
        }
        self.checked.record(violation.is_none(), || violation.unwrap_or_default());

        let printed = syntax::parse(&syntax::print(phi)).ok();
        let mut round_trip = printed.as_ref() == Some(phi);
        if exhaustive {
            self.dimacs_cases += 1;
            round_trip &= dimacs_round_trip(&out);
        }
        self.round_trip.record(round_trip, || phi.to_string());
    }
}

fn dimacs_round_trip(cnf: &FormulaWi) -> bool {
    let Ok(doc) = dimacs::to_dimacs(cnf) else { return false };
    let Ok(set) = dimacs::parse(&doc.to_string()) else { return false };
    let Ok(back) = dimacs::reimport(&set, &doc.atoms) else { return false };
    matches!(oracle::equivalent_wi(cnf, &back), Ok(e) if e.is_equivalent())
}

fn main() -> ExitCode {
    let mut report = Report { failures: 0 };

    let started = Instant::now();
    let mut tally = Tally::default();
    let shapes = corpus::shapes(SHAPE_HEIGHT);
    for phi in &shapes {
        tally.visit(phi, true);
    }
    let literal_leaves: Vec<Formula> = ["p", "q", "r", "true", "false"]
        .iter()
        .map(|t| syntax::parse(t).expect("leaf"))
        .collect();
    let literals = corpus::formulas(LITERAL_HEIGHT, &literal_leaves);
    for phi in &literals {
        tally.visit(phi, true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let config = RandomConfig::default();
    // Draws whose CNF exceeds the output budget are a declared error, not a
    // conversion; they are counted separately and must fail alike everywhere.
    let mut converted = 0;
    let mut over_budget = 0;
    while converted < RANDOM_FORMULAS {
        let phi = corpus::random_formula(&mut rng, &config);
        if let Err(e @ Error::OutputBudgetExceeded { .. }) = direct::to_cnf(&phi) {
            over_budget += 1;
            let alike = Engine::ALL.iter().all(|engine| engine.to_cnf(&phi, &Options::default()) == Err(e.clone()));
            tally.agreement.record(alike, || format!("{phi}: engines disagree on {e}"));
            continue;
        }
        tally.visit(&phi, false);
        converted += 1;
    }
    let elapsed = started.elapsed();
    let corpus_note = format!(
        "{} shapes of height <= {SHAPE_HEIGHT}, {} formulas of height <= {LITERAL_HEIGHT} over p,q,r,true,false, \
         {RANDOM_FORMULAS} random (height <= {}, <= {} atoms; {over_budget} further draws over the \
         output budget); {:.1}s{}",
        shapes.len(),
        literals.len(),
        config.max_height,
        config.atoms,
        elapsed.as_secs_f64(),
        if elapsed > SWEEP_TARGET { " (over the 60s target)" } else { "" },
    );
    println!("corpus: {corpus_note}");

    let cases = tally.cases;
    report.line(1, "semantic preservation", tally.semantic.count == 0, tally.semantic.summary(cases));
    report.line(2, "normal-form postconditions", tally.normal_form.count == 0, tally.normal_form.summary(cases));
    report.line(3, "three-engine agreement", tally.agreement.count == 0, tally.agreement.summary(cases));
    let (ok, detail) = lemmas();
    report.line(4, "lemma suite", ok, detail);
    report.line(5, "checked-mode obligations", tally.checked.count == 0, tally.checked.summary(cases));
    let (ok, detail) = neg_chain();
    report.line(6, "constant-space machine", ok, detail);
    let detail = format!(
        "{} (DIMACS on {} exhaustive cases)",
        tally.round_trip.summary(cases),
        tally.dimacs_cases
    );
    report.line(7, "round trips", tally.round_trip.count == 0, detail);
    let (ok, detail) = cli_examples();
    report.line(8, "CLI contract", ok, detail);

    if report.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn lemmas() -> (bool, String) {
    let started = Instant::now();
    let mut failures = Failures::default();
    let mut check = |phi: &FormulaWi| {
        let ok = wf::check_aux_lemma(phi)
            && wf::check_size_positive(phi)
            && (!wf::wf_disjunctions(phi) || wf::wf_conjunctions_of_disjunctions(phi));
        failures.record(ok, || phi.to_string());
    };
    let mut shapes = 0usize;
    corpus::for_each_formula_wi(LEMMA_SHAPE_HEIGHT, &[FormulaWi::var("x")], |phi| {
        shapes += 1;
        check(phi);
    });
    let leaves: Vec<FormulaWi> = ["p", "q", "r"].iter().map(|t| FormulaWi::var(t)).collect();
    let mut literal = 0usize;
    corpus::for_each_formula_wi(LEMMA_LITERAL_HEIGHT, &leaves, |phi| {
        literal += 1;
        check(phi);
    });
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let config = RandomConfig::default();
    for _ in 0..RANDOM_LEMMA_FORMULAS {
        check(&corpus::random_formula_wi(&mut rng, &config));
    }
    let cases = shapes + literal + RANDOM_LEMMA_FORMULAS;
    let detail = format!(
        "{} ({shapes} shapes of height <= {LEMMA_SHAPE_HEIGHT}, {literal} of height <= {LEMMA_LITERAL_HEIGHT} \
         over p,q,r, {RANDOM_LEMMA_FORMULAS} random; {:.1}s)",
        failures.summary(cases),
        started.elapsed().as_secs_f64()
    );
    (failures.count == 0, detail)
}

fn neg_chain() -> (bool, String) {
    let mut phi = Formula::var("p");
    for _ in 0..NEG_CHAIN_DEPTH {
        phi = Formula::neg(phi);
    }
    let started = Instant::now();
    let out = machine::to_cnf_machine(&phi, &Options::default(), None);
    let elapsed = started.elapsed();
    // An even number of negations collapses to the atom.
    let expected = if NEG_CHAIN_DEPTH.is_multiple_of(2) { "p" } else { "~p" };
    let correct = matches!(&out, Ok(r) if r.to_string() == expected);
    let detail = format!(
        "depth {NEG_CHAIN_DEPTH} in {:.3}s (limit {}s), result {}",
        elapsed.as_secs_f64(),
        NEG_CHAIN_LIMIT.as_secs(),
        match &out {
            Ok(r) => r.to_string(),
            Err(e) => e.to_string(),
        }
    );
    (correct && elapsed <= NEG_CHAIN_LIMIT, detail)
}

struct Example {
    args: &'static [&'static str],
    code: i32,
    stdout: Option<&'static str>,
}

const EXAMPLES: &[Example] = &[
    Example { args: &["convert", "p -> q"], code: 0, stdout: Some("~p | q\n") },
    Example { args: &["convert", "~(p -> q)"], code: 0, stdout: Some("p & ~q\n") },
    Example { args: &["convert", "p", "--trace", "t.jsonl", "--engine", "direct"], code: 3, stdout: Some("") },
    Example { args: &["equiv", "p -> q", "~p | q"], code: 0, stdout: None },
    Example { args: &["equiv", "p", "~p"], code: 4, stdout: Some("p=true\n") },
    Example { args: &["equiv", "p & q", "q & p"], code: 0, stdout: None },
    Example { args: &["check", "(p | ~q) & r", "--cnf"], code: 0, stdout: None },
    Example { args: &["check", "~(p & q)", "--nnf"], code: 6, stdout: Some("wf_negations_of_literals\n") },
    Example { args: &["check", "p -> q", "--cnf"], code: 1, stdout: Some("") },
];

fn cli_examples() -> (bool, String) {
    let dir = tempfile::tempdir().expect("temporary directory");
    let mut failures = Failures::default();
    for example in EXAMPLES {
        let output = Command::new(env!("CARGO_BIN_EXE_propcnf"))
            .args(example.args)
            .current_dir(dir.path())
            .output()
            .expect("run propcnf");
        let stdout = String::from_utf8_lossy(&output.stdout);
        let ok = output.status.code() == Some(example.code) && example.stdout.is_none_or(|s| s == stdout);
        failures.record(ok, || {
            format!("{:?} exited {:?} printing {stdout:?}", example.args, output.status.code())
        });
    }
    // The refused trace must not leave a file behind.
    let no_trace = !dir.path().join("t.jsonl").exists();
    failures.record(no_trace, || "trace file written for a refused engine".to_string());
    (failures.count == 0, failures.summary(EXAMPLES.len()))
}
