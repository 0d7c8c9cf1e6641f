//! Forward replay of a recorded trace.
//!
//! Every event is turned back into a machine state, stepped once, and the
//! rendered successor compared with the next event. Stage hand-offs
//! (`impl_free` to `nnfc` to `cnfc`) are checked the same way against a
//! fresh machine started on the previous stage's result.

use super::{
    CnfcControl, CnfcFrame, CnfcKont, CnfcMachine, DistrControl, DistrFrame, DistrKont, DistrMachine, FrameDescriptor,
    ImplControl, ImplFrame, ImplFreeMachine, ImplKont, Machine, Mode, NnfcControl, NnfcFrame, NnfcKont, NnfcMachine,
    Snapshot, Stage, TraceEvent,
};
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaWi, FormulaWiKind};
use crate::syntax::{parse, parse_wi};

/// Replays `events` and returns the result formula of the final event.
pub fn replay(events: &[TraceEvent]) -> Result<FormulaWi> {
    let Some(last) = events.last() else {
        return Err(fail(0, "empty trace"));
    };
    for (i, event) in events.iter().enumerate() {
        if event.step != i as u64 {
            return Err(fail(i as u64, format!("expected step {i}, found {}", event.step)));
        }
        if event.depth != event.stack.len() {
            return Err(fail(event.step, "depth does not match the stack"));
        }
    }
    for pair in events.windows(2) {
        let (current, next) = (&pair[0], &pair[1]);
        let mut machine = rebuild(current)?;
        let expected = if machine.is_final() {
            let result = parse_wi(&current.focus).map_err(|e| fail(current.step, e.to_string()))?;
            match current.stage {
                Stage::ImplFree => NnfcMachine::new(result, false).snapshot(),
                Stage::Nnfc => CnfcMachine::new(result, false)?.snapshot(),
                Stage::Cnfc | Stage::Distr => {
                    return Err(fail(next.step, "events follow the final state"));
                }
            }
        } else {
            machine.step().map_err(|e| fail(current.step, e.to_string()))?;
            machine.snapshot()
        };
        let found = Snapshot {
            stage: next.stage,
            mode: next.mode,
            focus: next.focus.clone(),
            stack: next.stack.clone(),
        };
        if expected != found {
            return Err(fail(next.step, "state does not follow from the previous one"));
        }
    }
    if !rebuild(last)?.is_final() {
        return Err(fail(last.step, "trace ends before a final state"));
    }
    parse_wi(&last.focus).map_err(|e| fail(last.step, e.to_string()))
}

fn fail(step: u64, message: impl Into<String>) -> Error {
    Error::Replay {
        step,
        message: message.into(),
    }
}

struct Frames<'a> {
    step: u64,
    rest: &'a [FrameDescriptor],
}

impl<'a> Frames<'a> {
    fn next(&mut self) -> Option<&'a FrameDescriptor> {
        let (first, rest) = self.rest.split_first()?;
        self.rest = rest;
        Some(first)
    }

    fn formula(&self, text: &str) -> Result<Formula> {
        parse(text).map_err(|e| fail(self.step, e.to_string()))
    }

    fn formula_wi(&self, text: &str) -> Result<FormulaWi> {
        parse_wi(text).map_err(|e| fail(self.step, e.to_string()))
    }

    fn payload<'d>(&self, d: &'d FrameDescriptor, arity: usize) -> Result<&'d [String]> {
        if d.payload.len() == arity {
            Ok(&d.payload)
        } else {
            Err(fail(self.step, format!("{} takes {arity} payload(s)", d.frame)))
        }
    }

    /// Collects frames up to and including `id`, listed top first.
    fn until<F>(&mut self, id: &str, mut frame: impl FnMut(&Self, &FrameDescriptor) -> Result<F>) -> Result<Vec<F>> {
        let mut frames = Vec::new();
        loop {
            let Some(d) = self.next() else {
                return Err(fail(self.step, format!("stack does not end in {id}")));
            };
            if d.frame == id {
                self.payload(d, 0)?;
                return Ok(frames);
            }
            frames.push(frame(self, d)?);
        }
    }

    fn end(&self) -> Result<()> {
        match self.rest.first() {
            None => Ok(()),
            Some(d) => Err(fail(self.step, format!("unexpected frame {} below the stack", d.frame))),
        }
    }

    fn impl_kont(&mut self) -> Result<ImplKont> {
        let frames = self.until("KImpl_Id", |s, d| {
            let [p] = s.payload(d, 1)? else { unreachable!() };
            Ok(match d.frame.as_str() {
                "KImpl_Neg" => ImplFrame::Neg(s.formula(p)?),
                "KImpl_OrLeft" => ImplFrame::OrLeft(s.formula(p)?),
                "KImpl_AndLeft" => ImplFrame::AndLeft(s.formula(p)?),
                "KImpl_ImplLeft" => ImplFrame::ImplLeft(s.formula(p)?),
                "KImpl_OrRight" => ImplFrame::OrRight(s.formula_wi(p)?),
                "KImpl_AndRight" => ImplFrame::AndRight(s.formula_wi(p)?),
                "KImpl_ImplRight" => ImplFrame::ImplRight(s.formula_wi(p)?),
                other => return Err(fail(s.step, format!("unknown frame {other}"))),
            })
        })?;
        Ok(ImplKont::from_top_down(frames))
    }

    fn nnfc_kont(&mut self) -> Result<NnfcKont> {
        let frames = self.until("KNnfc_Id", |s, d| {
            let [p] = s.payload(d, 1)? else { unreachable!() };
            let p = s.formula_wi(p)?;
            Ok(match d.frame.as_str() {
                "KNnfc_NegNeg" => NnfcFrame::NegNeg(p),
                "KNnfc_NegAndLeft" => NnfcFrame::NegAndLeft(p),
                "KNnfc_NegAndRight" => NnfcFrame::NegAndRight(p),
                "KNnfc_NegOrLeft" => NnfcFrame::NegOrLeft(p),
                "KNnfc_NegOrRight" => NnfcFrame::NegOrRight(p),
                "KNnfc_AndLeft" => NnfcFrame::AndLeft(p),
                "KNnfc_AndRight" => NnfcFrame::AndRight(p),
                "KNnfc_OrLeft" => NnfcFrame::OrLeft(p),
                "KNnfc_OrRight" => NnfcFrame::OrRight(p),
                other => return Err(fail(s.step, format!("unknown frame {other}"))),
            })
        })?;
        Ok(NnfcKont::from_top_down(frames))
    }

    fn distr_kont(&mut self) -> Result<DistrKont> {
        let frames = self.until("KDistr_Id", |s, d| match d.frame.as_str() {
            "KDistr_Left" => {
                let [a, b] = s.payload(d, 2)? else { unreachable!() };
                Ok(DistrFrame::Left(s.formula_wi(a)?, s.formula_wi(b)?))
            }
            "KDistr_Right" => {
                let [p] = s.payload(d, 1)? else { unreachable!() };
                Ok(DistrFrame::Right(s.formula_wi(p)?))
            }
            other => Err(fail(s.step, format!("unknown frame {other}"))),
        })?;
        Ok(DistrKont::from_top_down(frames))
    }

    fn cnfc_kont(&mut self) -> Result<CnfcKont> {
        let frames = self.until("KCnfc_Id", |s, d| {
            let [p] = s.payload(d, 1)? else { unreachable!() };
            let p = s.formula_wi(p)?;
            Ok(match d.frame.as_str() {
                "KCnfc_OrLeft" => CnfcFrame::OrLeft(p),
                "KCnfc_OrRight" => CnfcFrame::OrRight(p),
                "KCnfc_AndLeft" => CnfcFrame::AndLeft(p),
                "KCnfc_AndRight" => CnfcFrame::AndRight(p),
                other => return Err(fail(s.step, format!("unknown frame {other}"))),
            })
        })?;
        Ok(CnfcKont::from_top_down(frames))
    }
}

fn rebuild(event: &TraceEvent) -> Result<Box<dyn Machine>> {
    let mut frames = Frames {
        step: event.step,
        rest: &event.stack,
    };
    let machine: Box<dyn Machine> = match event.stage {
        Stage::ImplFree => {
            let stack = frames.impl_kont()?;
            let control = match event.mode {
                Mode::Descend => ImplControl::Descend(frames.formula(&event.focus)?),
                Mode::Apply => ImplControl::Apply(frames.formula_wi(&event.focus)?),
            };
            Box::new(ImplFreeMachine::from_state(control, stack, false))
        }
        Stage::Nnfc => {
            let stack = frames.nnfc_kont()?;
            let focus = frames.formula_wi(&event.focus)?;
            let control = match event.mode {
                Mode::Descend => NnfcControl::Descend(focus),
                Mode::Apply => NnfcControl::Apply(focus),
            };
            Box::new(NnfcMachine::from_state(control, stack, false))
        }
        Stage::Cnfc => {
            let stack = frames.cnfc_kont()?;
            let focus = frames.formula_wi(&event.focus)?;
            let control = match event.mode {
                Mode::Descend => CnfcControl::Descend(focus),
                Mode::Apply => CnfcControl::Apply(focus),
            };
            Box::new(CnfcMachine::from_state(control, stack, false)?)
        }
        Stage::Distr => {
            let stack = frames.distr_kont()?;
            let focus = frames.formula_wi(&event.focus)?;
            let control = match (event.mode, focus.kind()) {
                (Mode::Descend, FormulaWiKind::Or(a, b)) => DistrControl::Descend(a.clone(), b.clone()),
                (Mode::Descend, _) => return Err(fail(event.step, "distr focus is not a pair")),
                (Mode::Apply, _) => DistrControl::Apply(focus),
            };
            let inner = DistrMachine::from_state(control, stack, false)?;
            if frames.rest.is_empty() {
                Box::new(inner)
            } else {
                let outer = frames.cnfc_kont()?;
                Box::new(CnfcMachine::from_state(CnfcControl::Distr(Box::new(inner)), outer, false)?)
            }
        }
    };
    frames.end()?;
    Ok(machine)
}
