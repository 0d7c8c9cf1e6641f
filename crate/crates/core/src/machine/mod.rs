//! Defunctionalized pipeline: a first-order stack machine.
//!
//! Each CPS continuation becomes a frame in an explicit stack ([`Kont`]),
//! and each pair of "run" and "apply" functions becomes one small-step
//! transition over a state `{mode, focus, stack}`:
//!
//! * in `descend` mode the machine inspects the focus formula and either
//!   pushes a frame and descends into a subformula, or switches to `apply`
//!   with a finished value;
//! * in `apply` mode it pops the top frame and resumes the pending work it
//!   records.
//!
//! A state in `apply` mode with the empty (`Id`) stack is final. The loop
//! never recurses on the host stack, so input depth is bounded only by
//! memory.
//!
//! In checked mode a machine additionally verifies the stack
//! well-formedness invariants at every step and, once finished, that every
//! visited state satisfies its post relation ([`post`]). Both are quadratic
//! or worse and intended for tests.

mod cnfc;
mod distr;
mod impl_free;
mod memo;
mod nnfc;
pub mod post;
mod replay;
mod trace;

pub use cnfc::{CnfcControl, CnfcFrame, CnfcKont, CnfcMachine};
pub use distr::{DistrControl, DistrFrame, DistrKont, DistrMachine};
pub use impl_free::{ImplControl, ImplFrame, ImplFreeMachine, ImplKont};
pub use nnfc::{NnfcControl, NnfcFrame, NnfcKont, NnfcMachine};
pub use post::{
    check_cnfc_post, check_distr_post, check_impl_post, check_nnfc_post, check_wf_cnfc_kont, check_wf_distr_kont,
};
pub use replay::replay;
pub use trace::{read_json_lines, FrameDescriptor, JsonLines, Mode, Snapshot, Stage, TraceEvent, TraceSink};

use crate::budget;
use crate::direct::ensure_cnf;
use crate::error::Result;
use crate::formula::{Formula, FormulaWi};
use crate::Options;

/// A continuation stack. The empty stack is the identity continuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Kont<F> {
    // Bottom first; the top frame is last.
    frames: Vec<F>,
}

impl<F> Default for Kont<F> {
    fn default() -> Self {
        Kont::id()
    }
}

impl<F> Kont<F> {
    pub fn id() -> Kont<F> {
        Kont { frames: Vec::new() }
    }

    /// Builds a stack from frames listed top first.
    pub fn from_top_down(frames: Vec<F>) -> Kont<F> {
        let mut frames = frames;
        frames.reverse();
        Kont { frames }
    }

    pub fn is_id(&self) -> bool {
        self.frames.is_empty()
    }

    /// Number of frames above `Id`.
    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn push(&mut self, frame: F) {
        self.frames.push(frame);
    }

    pub fn pop(&mut self) -> Option<F> {
        self.frames.pop()
    }

    pub fn top(&self) -> Option<&F> {
        self.frames.last()
    }

    /// Frames from the top of the stack down to (excluding) `Id`.
    pub fn top_down(&self) -> impl Iterator<Item = &F> {
        self.frames.iter().rev()
    }
}

/// Common interface of the stage machines.
pub trait Machine {
    fn stage(&self) -> Stage;

    /// In `apply` mode with the identity continuation.
    fn is_final(&self) -> bool;

    /// Performs one transition. A final machine does not move.
    fn step(&mut self) -> Result<()>;

    /// Renders the current state. Only called when a trace is wanted.
    fn snapshot(&self) -> Snapshot;
}

/// Numbers and forwards trace events; a no-op without a sink.
pub(crate) struct Tracer<'s> {
    sink: Option<&'s mut dyn TraceSink>,
    next_step: u64,
}

impl<'s> Tracer<'s> {
    pub(crate) fn new(sink: Option<&'s mut dyn TraceSink>) -> Tracer<'s> {
        Tracer { sink, next_step: 0 }
    }

    fn emit(&mut self, machine: &dyn Machine) {
        if let Some(sink) = self.sink.as_deref_mut() {
            let Snapshot {
                stage,
                mode,
                focus,
                stack,
            } = machine.snapshot();
            sink.record(TraceEvent {
                step: self.next_step,
                stage,
                mode,
                focus,
                depth: stack.len(),
                stack,
            });
        }
        self.next_step += 1;
    }

    pub(crate) fn drive(&mut self, machine: &mut dyn Machine) -> Result<()> {
        loop {
            self.emit(machine);
            if machine.is_final() {
                return Ok(());
            }
            machine.step()?;
        }
    }
}

pub fn impl_free_machine(phi: &Formula, options: &Options, sink: Option<&mut dyn TraceSink>) -> Result<FormulaWi> {
    ImplFreeMachine::new(phi.clone(), options.checked).run(&mut Tracer::new(sink))
}

pub fn nnfc_machine(phi: &FormulaWi, options: &Options, sink: Option<&mut dyn TraceSink>) -> Result<FormulaWi> {
    NnfcMachine::new(phi.clone(), options.checked).run(&mut Tracer::new(sink))
}

/// Distributes `phi1 | phi2`. In checked mode both operands must be in CNF.
pub fn distr_machine(
    phi1: &FormulaWi,
    phi2: &FormulaWi,
    options: &Options,
    sink: Option<&mut dyn TraceSink>,
) -> Result<FormulaWi> {
    budget::check(budget::predicted_distr_size(phi1, phi2), options.max_nodes)?;
    DistrMachine::new(phi1.clone(), phi2.clone(), options.checked)?.run(&mut Tracer::new(sink))
}

/// In checked mode `phi` must be in negation normal form.
pub fn cnfc_machine(phi: &FormulaWi, options: &Options, sink: Option<&mut dyn TraceSink>) -> Result<FormulaWi> {
    budget::check(budget::predicted_cnfc_size(phi), options.max_nodes)?;
    CnfcMachine::new(phi.clone(), options.checked)?.run(&mut Tracer::new(sink))
}

/// The whole pipeline on the machine. A trace, if requested, covers all
/// three stages with one contiguous step numbering.
pub fn to_cnf_machine(phi: &Formula, options: &Options, sink: Option<&mut dyn TraceSink>) -> Result<FormulaWi> {
    let mut tracer = Tracer::new(sink);
    let wi = ImplFreeMachine::new(phi.clone(), options.checked).run(&mut tracer)?;
    let nnf = NnfcMachine::new(wi, options.checked).run(&mut tracer)?;
    budget::check(budget::predicted_cnfc_size(&nnf), options.max_nodes)?;
    let out = CnfcMachine::new(nnf, options.checked)?.run(&mut tracer)?;
    if options.checked {
        ensure_cnf("to_cnf", &out)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::direct;
    use crate::error::Error;
    use crate::syntax::{parse, parse_wi};

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    fn w(text: &str) -> FormulaWi {
        parse_wi(text).unwrap()
    }

    fn traced<T>(run: impl FnOnce(&mut dyn TraceSink) -> Result<T>) -> (T, Vec<TraceEvent>) {
        let mut events: Vec<TraceEvent> = Vec::new();
        let out = run(&mut events).unwrap();
        (out, events)
    }

    fn shape(events: &[TraceEvent]) -> Vec<(Mode, String, Vec<String>)> {
        events
            .iter()
            .map(|e| (e.mode, e.focus.clone(), e.stack.iter().map(|d| d.frame.clone()).collect()))
            .collect()
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn impl_free_var_takes_two_events() {
        let opts = Options::default();
        let (out, events) = traced(|sink| impl_free_machine(&f("p"), &opts, Some(sink)));
        assert_eq!(out, w("p"));
        assert_eq!(
            shape(&events),
            vec![
                (Mode::Descend, "p".into(), s(&["KImpl_Id"])),
                (Mode::Apply, "p".into(), s(&["KImpl_Id"])),
            ]
        );
    }

    #[test]
    fn impl_free_neg_pushes_and_pops_its_frame() {
        let opts = Options::default();
        let (out, events) = traced(|sink| impl_free_machine(&f("~p"), &opts, Some(sink)));
        assert_eq!(out, w("~p"));
        assert_eq!(
            shape(&events),
            vec![
                (Mode::Descend, "~p".into(), s(&["KImpl_Id"])),
                (Mode::Descend, "p".into(), s(&["KImpl_Neg", "KImpl_Id"])),
                (Mode::Apply, "p".into(), s(&["KImpl_Neg", "KImpl_Id"])),
                (Mode::Apply, "~p".into(), s(&["KImpl_Id"])),
            ]
        );
        // The frame keeps the negated subformula even though apply ignores it.
        assert_eq!(events[1].stack[0].payload, s(&["p"]));
    }

    #[test]
    fn impl_free_implication() {
        let opts = Options::default();
        let (out, events) = traced(|sink| impl_free_machine(&f("p -> q"), &opts, Some(sink)));
        assert_eq!(out, w("~p | q"));
        let frames: Vec<_> = events.iter().filter_map(|e| e.stack.first().map(|d| d.frame.as_str())).collect();
        assert!(frames.contains(&"KImpl_ImplLeft"));
        assert!(frames.contains(&"KImpl_ImplRight"));
    }

    #[test]
    fn nnfc_examples() {
        let opts = Options::default();
        assert_eq!(nnfc_machine(&w("~~p"), &opts, None).unwrap(), w("p"));
        assert_eq!(nnfc_machine(&w("p"), &opts, None).unwrap(), w("p"));
        let (out, events) = traced(|sink| nnfc_machine(&w("~(p | q)"), &opts, Some(sink)));
        assert_eq!(out, w("~p & ~q"));
        let tops: Vec<_> = events.iter().map(|e| e.stack[0].frame.as_str()).collect();
        assert!(tops.contains(&"KNnfc_NegOrLeft"));
        assert!(tops.contains(&"KNnfc_NegOrRight"));
    }

    #[test]
    fn distr_and_cnfc_match_direct() {
        let opts = Options::checked();
        for (a, b) in [("a", "b & c"), ("a", "b"), ("a & b", "c & d"), ("a | b", "(c | d) & ~e")] {
            let (a, b) = (w(a), w(b));
            assert_eq!(distr_machine(&a, &b, &opts, None).unwrap(), direct::distr(&a, &b));
        }
        for text in ["p | q & r", "p", "p & (q | r)", "(a & b) | (c & d) | ~e"] {
            let phi = w(text);
            assert_eq!(cnfc_machine(&phi, &opts, None).unwrap(), direct::cnfc(&phi));
        }
    }

    #[test]
    fn to_cnf_examples_with_trace_lengths() {
        let opts = Options::checked();
        for (input, expected, steps) in [("~(p -> q)", "p & ~q", 22), ("true", "true", 6), ("p -> q", "~p | q", 20)] {
            let (out, events) = traced(|sink| to_cnf_machine(&f(input), &opts, Some(sink)));
            assert_eq!(out, w(expected), "{input}");
            assert_eq!(events.len(), steps, "{input}");
            let last = events.last().unwrap();
            assert_eq!(last.mode, Mode::Apply);
            assert_eq!(last.stage, Stage::Cnfc);
            assert_eq!(last.focus, expected);
            assert_eq!(shape(&events[events.len() - 1..])[0].2, s(&["KCnfc_Id"]));
            assert!(events.iter().enumerate().all(|(i, e)| e.step == i as u64));
        }
    }

    #[test]
    fn distr_runs_nested_inside_cnfc() {
        let opts = Options::default();
        let (_, events) = traced(|sink| cnfc_machine(&w("p | q & r"), &opts, Some(sink)));
        let distr_events: Vec<_> = events.iter().filter(|e| e.stage == Stage::Distr).collect();
        assert!(!distr_events.is_empty());
        for e in distr_events {
            assert_eq!(e.stack.last().unwrap().frame, "KCnfc_Id");
            assert!(e.stack.iter().any(|d| d.frame == "KDistr_Id"));
        }
    }

    #[test]
    fn checked_mode_rejects_bad_inputs() {
        let opts = Options::checked();
        assert!(matches!(
            cnfc_machine(&w("~(p & q)"), &opts, None),
            Err(Error::PreconditionViolation { function: "cnfc", .. })
        ));
        assert!(matches!(
            distr_machine(&w("p | q & r"), &w("s"), &opts, None),
            Err(Error::PreconditionViolation { function: "distr", .. })
        ));
    }

    #[test]
    fn machines_can_be_stepped_by_hand() {
        let mut m = ImplFreeMachine::new(f("p & q"), false);
        let mut steps = 0;
        while !m.is_final() {
            m.step().unwrap();
            steps += 1;
        }
        assert_eq!(m.result(), Some(&w("p & q")));
        // Descend and, descend p, apply p, descend q, apply q, apply and.
        assert_eq!(steps, 5);
        m.step().unwrap();
        assert_eq!(m.result(), Some(&w("p & q")));
    }

    #[test]
    fn deep_negation_chain_runs_in_constant_host_stack() {
        let mut phi = Formula::var("p");
        for _ in 0..100_000 {
            phi = Formula::neg(phi);
        }
        let out = std::thread::Builder::new()
            .stack_size(256 * 1024)
            .spawn(move || to_cnf_machine(&phi, &Options::default(), None))
            .unwrap()
            .join()
            .unwrap()
            .unwrap();
        assert_eq!(out, w("p"));
    }
}
