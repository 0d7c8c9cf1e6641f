use super::distr::{DistrControl, DistrKont, DistrMachine};
use super::memo::History;
use super::{FrameDescriptor, Kont, Machine, Mode, Snapshot, Stage, Tracer};
use crate::error::{Error, Result};
use crate::formula::{FormulaWi, FormulaWiKind};
use crate::wf;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CnfcFrame {
    OrLeft(FormulaWi),
    OrRight(FormulaWi),
    AndLeft(FormulaWi),
    AndRight(FormulaWi),
}

impl CnfcFrame {
    pub fn name(&self) -> &'static str {
        match self {
            CnfcFrame::OrLeft(_) => "KCnfc_OrLeft",
            CnfcFrame::OrRight(_) => "KCnfc_OrRight",
            CnfcFrame::AndLeft(_) => "KCnfc_AndLeft",
            CnfcFrame::AndRight(_) => "KCnfc_AndRight",
        }
    }

    pub fn payload(&self) -> &FormulaWi {
        match self {
            CnfcFrame::OrLeft(p) | CnfcFrame::OrRight(p) | CnfcFrame::AndLeft(p) | CnfcFrame::AndRight(p) => p,
        }
    }

    pub(crate) fn describe(&self) -> FrameDescriptor {
        FrameDescriptor::new(self.name(), vec![self.payload().to_string()])
    }
}

pub type CnfcKont = Kont<CnfcFrame>;

#[derive(Debug, Clone)]
pub enum CnfcControl {
    Descend(FormulaWi),
    Apply(FormulaWi),
    /// Distributing the two converted halves of a disjunction. When the
    /// nested machine finishes, its result is applied to the cnfc stack.
    Distr(Box<DistrMachine>),
}

/// Small-step `cnfc`, running `distr` as a nested machine.
#[derive(Debug, Clone)]
pub struct CnfcMachine {
    control: CnfcControl,
    stack: CnfcKont,
    checked: bool,
    steps: u64,
    history: Option<History<CnfcKont, CnfcControl>>,
}

impl CnfcMachine {
    /// In checked mode `phi` must be in negation normal form.
    pub fn new(phi: FormulaWi, checked: bool) -> Result<CnfcMachine> {
        if checked {
            wf::require_nnf("cnfc", &phi)?;
        }
        CnfcMachine::from_state(CnfcControl::Descend(phi), CnfcKont::id(), checked)
    }

    /// In checked mode the state must satisfy the step invariants.
    pub fn from_state(control: CnfcControl, stack: CnfcKont, checked: bool) -> Result<CnfcMachine> {
        let mut machine = CnfcMachine {
            control,
            stack,
            checked,
            steps: 0,
            history: checked.then(History::new),
        };
        machine.check_state()?;
        Ok(machine)
    }

    pub fn control(&self) -> &CnfcControl {
        &self.control
    }

    pub fn stack(&self) -> &CnfcKont {
        &self.stack
    }

    pub fn result(&self) -> Option<&FormulaWi> {
        match &self.control {
            CnfcControl::Apply(phi) if self.stack.is_id() => Some(phi),
            _ => None,
        }
    }

    pub(crate) fn run(mut self, tracer: &mut Tracer) -> Result<FormulaWi> {
        tracer.drive(&mut self)?;
        match self.control {
            CnfcControl::Apply(phi) => Ok(phi),
            _ => unreachable!("drive stops only at a final state"),
        }
    }

    fn transition(&mut self) -> Result<()> {
        let control = std::mem::replace(&mut self.control, CnfcControl::Apply(FormulaWi::constant(true)));
        self.control = match control {
            CnfcControl::Descend(phi) => match phi.kind() {
                FormulaWiKind::Or(a, b) => {
                    self.stack.push(CnfcFrame::OrLeft(b.clone()));
                    CnfcControl::Descend(a.clone())
                }
                FormulaWiKind::And(a, b) => {
                    self.stack.push(CnfcFrame::AndLeft(b.clone()));
                    CnfcControl::Descend(a.clone())
                }
                _ => CnfcControl::Apply(phi),
            },
            CnfcControl::Apply(phi) => match self.stack.pop() {
                None => CnfcControl::Apply(phi),
                Some(CnfcFrame::OrLeft(p)) => {
                    self.stack.push(CnfcFrame::OrRight(phi));
                    CnfcControl::Descend(p)
                }
                Some(CnfcFrame::OrRight(d)) => {
                    let inner = DistrMachine::from_state(DistrControl::Descend(d, phi), DistrKont::id(), self.checked)?;
                    CnfcControl::Distr(Box::new(inner))
                }
                Some(CnfcFrame::AndLeft(p)) => {
                    self.stack.push(CnfcFrame::AndRight(phi));
                    CnfcControl::Descend(p)
                }
                Some(CnfcFrame::AndRight(d)) => CnfcControl::Apply(FormulaWi::and(d, phi)),
            },
            CnfcControl::Distr(mut inner) => {
                if inner.is_final() {
                    CnfcControl::Apply(inner.into_result().expect("final distr machine has a result"))
                } else {
                    inner.step()?;
                    CnfcControl::Distr(inner)
                }
            }
        };
        Ok(())
    }

    fn check_state(&mut self) -> Result<()> {
        let Some(History { memo, .. }) = &mut self.history else { return Ok(()) };
        match &self.control {
            CnfcControl::Descend(phi) => memo.require_nnf("cnfc_desf_cps", phi)?,
            CnfcControl::Apply(phi) => memo.require_cnf("cnfc_apply", phi)?,
            CnfcControl::Distr(_) => {}
        }
        if !memo.wf_cnfc_kont(&self.stack) {
            return Err(Error::StackInvariantViolation {
                stage: Stage::Cnfc,
                step: self.steps,
                predicate: "wf_cnfc_kont",
            });
        }
        Ok(())
    }

    fn record(&mut self) {
        if let Some(history) = &mut self.history {
            // The nested distr machine checks its own post relation.
            if !matches!(self.control, CnfcControl::Distr(_)) {
                history.push((self.stack.clone(), self.control.clone()));
            }
        }
    }

    fn verify_history(&mut self, result: &FormulaWi) -> Result<()> {
        let Some(History { states, memo }) = &mut self.history else { return Ok(()) };
        for (i, (k, control)) in states.iter().enumerate() {
            let holds = match control {
                CnfcControl::Descend(phi) => memo.cnfc_post(k, phi, true, result),
                CnfcControl::Apply(phi) => memo.cnfc_post(k, phi, false, result),
                CnfcControl::Distr(_) => true,
            };
            if !holds {
                return Err(Error::PostRelationViolation {
                    stage: Stage::Cnfc,
                    step: i as u64,
                    predicate: "cnfc_post",
                });
            }
        }
        Ok(())
    }
}

impl Machine for CnfcMachine {
    fn stage(&self) -> Stage {
        match self.control {
            CnfcControl::Distr(_) => Stage::Distr,
            _ => Stage::Cnfc,
        }
    }

    fn is_final(&self) -> bool {
        self.result().is_some()
    }

    fn step(&mut self) -> Result<()> {
        if self.is_final() {
            return Ok(());
        }
        self.record();
        self.transition()?;
        self.steps += 1;
        self.check_state()?;
        if let Some(result) = self.result().cloned() {
            self.record();
            self.verify_history(&result)?;
        }
        Ok(())
    }

    fn snapshot(&self) -> Snapshot {
        let cnfc_frames = self
            .stack
            .top_down()
            .map(CnfcFrame::describe)
            .chain(std::iter::once(FrameDescriptor::new("KCnfc_Id", Vec::new())));
        match &self.control {
            CnfcControl::Distr(inner) => {
                let Snapshot { mode, focus, stack, .. } = inner.snapshot();
                Snapshot {
                    stage: Stage::Distr,
                    mode,
                    focus,
                    stack: stack.into_iter().chain(cnfc_frames).collect(),
                }
            }
            CnfcControl::Descend(phi) | CnfcControl::Apply(phi) => Snapshot {
                stage: Stage::Cnfc,
                mode: if matches!(self.control, CnfcControl::Descend(_)) {
                    Mode::Descend
                } else {
                    Mode::Apply
                },
                focus: phi.to_string(),
                stack: cnfc_frames.collect(),
            },
        }
    }
}
