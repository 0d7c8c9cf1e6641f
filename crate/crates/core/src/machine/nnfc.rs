use super::memo::History;
use super::{FrameDescriptor, Kont, Machine, Mode, Snapshot, Stage, Tracer};
use crate::error::{Error, Result};
use crate::formula::{FormulaWi, FormulaWiKind};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NnfcFrame {
    /// Saves the formula under the double negation; apply never reads it.
    NegNeg(FormulaWi),
    NegAndLeft(FormulaWi),
    NegAndRight(FormulaWi),
    NegOrLeft(FormulaWi),
    NegOrRight(FormulaWi),
    AndLeft(FormulaWi),
    AndRight(FormulaWi),
    OrLeft(FormulaWi),
    OrRight(FormulaWi),
}

impl NnfcFrame {
    pub fn name(&self) -> &'static str {
        match self {
            NnfcFrame::NegNeg(_) => "KNnfc_NegNeg",
            NnfcFrame::NegAndLeft(_) => "KNnfc_NegAndLeft",
            NnfcFrame::NegAndRight(_) => "KNnfc_NegAndRight",
            NnfcFrame::NegOrLeft(_) => "KNnfc_NegOrLeft",
            NnfcFrame::NegOrRight(_) => "KNnfc_NegOrRight",
            NnfcFrame::AndLeft(_) => "KNnfc_AndLeft",
            NnfcFrame::AndRight(_) => "KNnfc_AndRight",
            NnfcFrame::OrLeft(_) => "KNnfc_OrLeft",
            NnfcFrame::OrRight(_) => "KNnfc_OrRight",
        }
    }

    pub fn payload(&self) -> &FormulaWi {
        match self {
            NnfcFrame::NegNeg(p)
            | NnfcFrame::NegAndLeft(p)
            | NnfcFrame::NegAndRight(p)
            | NnfcFrame::NegOrLeft(p)
            | NnfcFrame::NegOrRight(p)
            | NnfcFrame::AndLeft(p)
            | NnfcFrame::AndRight(p)
            | NnfcFrame::OrLeft(p)
            | NnfcFrame::OrRight(p) => p,
        }
    }

    pub(crate) fn describe(&self) -> FrameDescriptor {
        FrameDescriptor::new(self.name(), vec![self.payload().to_string()])
    }
}

pub type NnfcKont = Kont<NnfcFrame>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NnfcControl {
    Descend(FormulaWi),
    Apply(FormulaWi),
}

/// Small-step `nnfc`.
#[derive(Debug, Clone)]
pub struct NnfcMachine {
    control: NnfcControl,
    stack: NnfcKont,
    history: Option<History<NnfcKont, NnfcControl>>,
}

impl NnfcMachine {
    pub fn new(phi: FormulaWi, checked: bool) -> NnfcMachine {
        NnfcMachine::from_state(NnfcControl::Descend(phi), NnfcKont::id(), checked)
    }

    pub fn from_state(control: NnfcControl, stack: NnfcKont, checked: bool) -> NnfcMachine {
        NnfcMachine {
            control,
            stack,
            history: checked.then(History::new),
        }
    }

    pub fn control(&self) -> &NnfcControl {
        &self.control
    }

    pub fn stack(&self) -> &NnfcKont {
        &self.stack
    }

    pub fn result(&self) -> Option<&FormulaWi> {
        match &self.control {
            NnfcControl::Apply(phi) if self.stack.is_id() => Some(phi),
            _ => None,
        }
    }

    pub(crate) fn run(mut self, tracer: &mut Tracer) -> Result<FormulaWi> {
        tracer.drive(&mut self)?;
        match self.control {
            NnfcControl::Apply(phi) => Ok(phi),
            NnfcControl::Descend(_) => unreachable!("drive stops only at a final state"),
        }
    }

    fn descend(&mut self, phi: FormulaWi) -> NnfcControl {
        use FormulaWiKind::*;
        let (frame, next) = match phi.kind() {
            Neg(inner) => match inner.kind() {
                Neg(a) => (NnfcFrame::NegNeg(a.clone()), a.clone()),
                And(a, b) => (NnfcFrame::NegAndLeft(b.clone()), FormulaWi::neg(a.clone())),
                Or(a, b) => (NnfcFrame::NegOrLeft(b.clone()), FormulaWi::neg(a.clone())),
                Var(_) | Const(_) => return NnfcControl::Apply(phi),
            },
            Or(a, b) => (NnfcFrame::OrLeft(b.clone()), a.clone()),
            And(a, b) => (NnfcFrame::AndLeft(b.clone()), a.clone()),
            Var(_) | Const(_) => return NnfcControl::Apply(phi),
        };
        self.stack.push(frame);
        NnfcControl::Descend(next)
    }

    fn apply(&mut self, phi: FormulaWi) -> NnfcControl {
        let (frame, next) = match self.stack.pop() {
            None | Some(NnfcFrame::NegNeg(_)) => return NnfcControl::Apply(phi),
            Some(NnfcFrame::NegAndLeft(p)) => (NnfcFrame::NegAndRight(phi), FormulaWi::neg(p)),
            Some(NnfcFrame::NegOrLeft(p)) => (NnfcFrame::NegOrRight(phi), FormulaWi::neg(p)),
            Some(NnfcFrame::AndLeft(p)) => (NnfcFrame::AndRight(phi), p),
            Some(NnfcFrame::OrLeft(p)) => (NnfcFrame::OrRight(phi), p),
            Some(NnfcFrame::NegAndRight(d) | NnfcFrame::OrRight(d)) => {
                return NnfcControl::Apply(FormulaWi::or(d, phi))
            }
            Some(NnfcFrame::NegOrRight(d) | NnfcFrame::AndRight(d)) => {
                return NnfcControl::Apply(FormulaWi::and(d, phi))
            }
        };
        self.stack.push(frame);
        NnfcControl::Descend(next)
    }

    fn verify_history(&mut self, result: &FormulaWi) -> Result<()> {
        let Some(History { states, memo }) = &mut self.history else { return Ok(()) };
        for (i, (k, control)) in states.iter().enumerate() {
            let holds = match control {
                NnfcControl::Descend(phi) => memo.nnfc_post(k, phi, true, result),
                NnfcControl::Apply(phi) => memo.nnfc_post(k, phi, false, result),
            };
            if !holds {
                return Err(Error::PostRelationViolation {
                    stage: Stage::Nnfc,
                    step: i as u64,
                    predicate: "nnfc_post",
                });
            }
        }
        Ok(())
    }
}

impl Machine for NnfcMachine {
    fn stage(&self) -> Stage {
        Stage::Nnfc
    }

    fn is_final(&self) -> bool {
        self.result().is_some()
    }

    fn step(&mut self) -> Result<()> {
        if self.is_final() {
            return Ok(());
        }
        if let Some(history) = &mut self.history {
            history.push((self.stack.clone(), self.control.clone()));
        }
        let control = std::mem::replace(&mut self.control, NnfcControl::Apply(FormulaWi::constant(true)));
        self.control = match control {
            NnfcControl::Descend(phi) => self.descend(phi),
            NnfcControl::Apply(phi) => self.apply(phi),
        };
        if let Some(result) = self.result().cloned() {
            if let Some(history) = &mut self.history {
                history.push((self.stack.clone(), self.control.clone()));
            }
            self.verify_history(&result)?;
        }
        Ok(())
    }

    fn snapshot(&self) -> Snapshot {
        let (mode, focus) = match &self.control {
            NnfcControl::Descend(phi) => (Mode::Descend, phi.to_string()),
            NnfcControl::Apply(phi) => (Mode::Apply, phi.to_string()),
        };
        let mut stack: Vec<_> = self.stack.top_down().map(NnfcFrame::describe).collect();
        stack.push(FrameDescriptor::new("KNnfc_Id", Vec::new()));
        Snapshot {
            stage: Stage::Nnfc,
            mode,
            focus,
            stack,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_wi;

    #[test]
    fn double_negation_frame_is_pushed_and_popped() {
        let mut m = NnfcMachine::new(parse_wi("~~p").unwrap(), true);
        m.step().unwrap();
        assert_eq!(m.stack().top(), Some(&NnfcFrame::NegNeg(FormulaWi::var("p"))));
        assert_eq!(m.control(), &NnfcControl::Descend(FormulaWi::var("p")));
        while !m.is_final() {
            m.step().unwrap();
        }
        assert_eq!(m.result(), Some(&FormulaWi::var("p")));
    }

    #[test]
    fn negated_literals_are_values() {
        for text in ["~p", "~true", "p", "false"] {
            let m = NnfcMachine::new(parse_wi(text).unwrap(), false);
            let mut m2 = m.clone();
            m2.step().unwrap();
            assert!(m2.is_final(), "{text}");
        }
    }
}
