use super::memo::{DistrValue, History};
use super::{FrameDescriptor, Kont, Machine, Mode, Snapshot, Stage, Tracer};
use crate::error::{Error, Result};
use crate::formula::{FormulaWi, FormulaWiKind};
use crate::wf;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistrFrame {
    /// A pending pair still to be distributed.
    Left(FormulaWi, FormulaWi),
    Right(FormulaWi),
}

impl DistrFrame {
    pub fn name(&self) -> &'static str {
        match self {
            DistrFrame::Left(..) => "KDistr_Left",
            DistrFrame::Right(_) => "KDistr_Right",
        }
    }

    pub(crate) fn describe(&self) -> FrameDescriptor {
        let payload = match self {
            DistrFrame::Left(a, b) => vec![a.to_string(), b.to_string()],
            DistrFrame::Right(d) => vec![d.to_string()],
        };
        FrameDescriptor::new(self.name(), payload)
    }
}

pub type DistrKont = Kont<DistrFrame>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistrControl {
    Descend(FormulaWi, FormulaWi),
    Apply(FormulaWi),
}

/// Small-step `distr`. When both operands split, the left one goes first;
/// in the right-split case the pending frame keeps the whole left operand.
#[derive(Debug, Clone)]
pub struct DistrMachine {
    control: DistrControl,
    stack: DistrKont,
    steps: u64,
    history: Option<History<DistrKont, DistrControl>>,
}

impl DistrMachine {
    /// In checked mode both operands must be in CNF.
    pub fn new(phi1: FormulaWi, phi2: FormulaWi, checked: bool) -> Result<DistrMachine> {
        if checked {
            wf::require_cnf("distr", &phi1)?;
            wf::require_cnf("distr", &phi2)?;
        }
        DistrMachine::from_state(DistrControl::Descend(phi1, phi2), DistrKont::id(), checked)
    }

    /// In checked mode the state must satisfy the step invariants.
    pub fn from_state(control: DistrControl, stack: DistrKont, checked: bool) -> Result<DistrMachine> {
        let mut machine = DistrMachine {
            control,
            stack,
            steps: 0,
            history: checked.then(History::new),
        };
        machine.check_state()?;
        Ok(machine)
    }

    pub fn control(&self) -> &DistrControl {
        &self.control
    }

    pub fn stack(&self) -> &DistrKont {
        &self.stack
    }

    pub fn result(&self) -> Option<&FormulaWi> {
        match &self.control {
            DistrControl::Apply(phi) if self.stack.is_id() => Some(phi),
            _ => None,
        }
    }

    pub(crate) fn into_result(self) -> Option<FormulaWi> {
        match self.control {
            DistrControl::Apply(phi) if self.stack.is_id() => Some(phi),
            _ => None,
        }
    }

    pub(crate) fn run(mut self, tracer: &mut Tracer) -> Result<FormulaWi> {
        tracer.drive(&mut self)?;
        Ok(self.into_result().expect("drive stops only at a final state"))
    }

    pub(crate) fn snapshot_frames(&self) -> Vec<FrameDescriptor> {
        let mut stack: Vec<_> = self.stack.top_down().map(DistrFrame::describe).collect();
        stack.push(FrameDescriptor::new("KDistr_Id", Vec::new()));
        stack
    }

    fn transition(&mut self) {
        let control = std::mem::replace(&mut self.control, DistrControl::Apply(FormulaWi::constant(true)));
        self.control = match control {
            DistrControl::Descend(phi1, phi2) => {
                if let FormulaWiKind::And(a, b) = phi1.kind() {
                    self.stack.push(DistrFrame::Left(b.clone(), phi2.clone()));
                    DistrControl::Descend(a.clone(), phi2)
                } else if let FormulaWiKind::And(a, b) = phi2.kind() {
                    self.stack.push(DistrFrame::Left(phi1.clone(), b.clone()));
                    DistrControl::Descend(phi1, a.clone())
                } else {
                    DistrControl::Apply(FormulaWi::or(phi1, phi2))
                }
            }
            DistrControl::Apply(phi) => match self.stack.pop() {
                None => DistrControl::Apply(phi),
                Some(DistrFrame::Left(a, b)) => {
                    self.stack.push(DistrFrame::Right(phi));
                    DistrControl::Descend(a, b)
                }
                Some(DistrFrame::Right(d)) => DistrControl::Apply(FormulaWi::and(d, phi)),
            },
        };
    }

    fn check_state(&mut self) -> Result<()> {
        let Some(History { memo, .. }) = &mut self.history else { return Ok(()) };
        match &self.control {
            DistrControl::Descend(a, b) => {
                memo.require_cnf("distr_desf_cps", a)?;
                memo.require_cnf("distr_desf_cps", b)?;
            }
            DistrControl::Apply(phi) => memo.require_cnf("distr_apply", phi)?,
        }
        if !memo.wf_distr_kont(&self.stack) {
            return Err(Error::StackInvariantViolation {
                stage: Stage::Distr,
                step: self.steps,
                predicate: "wf_distr_kont",
            });
        }
        Ok(())
    }

    fn verify_history(&mut self, result: &FormulaWi) -> Result<()> {
        let Some(History { states, memo }) = &mut self.history else { return Ok(()) };
        for (i, (k, control)) in states.iter().enumerate() {
            let value = match control {
                DistrControl::Descend(a, b) => DistrValue::Pending(a, b),
                DistrControl::Apply(phi) => DistrValue::Done(phi),
            };
            let holds = memo.distr_post(k, value, result);
            if !holds {
                return Err(Error::PostRelationViolation {
                    stage: Stage::Distr,
                    step: i as u64,
                    predicate: "distr_post",
                });
            }
        }
        Ok(())
    }
}

impl Machine for DistrMachine {
    fn stage(&self) -> Stage {
        Stage::Distr
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
        self.transition();
        self.steps += 1;
        self.check_state()?;
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
            DistrControl::Descend(a, b) => (Mode::Descend, FormulaWi::or(a.clone(), b.clone()).to_string()),
            DistrControl::Apply(phi) => (Mode::Apply, phi.to_string()),
        };
        Snapshot {
            stage: Stage::Distr,
            mode,
            focus,
            stack: self.snapshot_frames(),
        }
    }
}
