use super::memo::History;
use super::{FrameDescriptor, Kont, Machine, Mode, Snapshot, Stage, Tracer};
use crate::error::{Error, Result};
use crate::formula::{Formula, FormulaKind, FormulaWi};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImplFrame {
    /// The payload is the negated subformula; apply never reads it.
    Neg(Formula),
    OrLeft(Formula),
    OrRight(FormulaWi),
    AndLeft(Formula),
    AndRight(FormulaWi),
    ImplLeft(Formula),
    ImplRight(FormulaWi),
}

impl ImplFrame {
    pub fn name(&self) -> &'static str {
        match self {
            ImplFrame::Neg(_) => "KImpl_Neg",
            ImplFrame::OrLeft(_) => "KImpl_OrLeft",
            ImplFrame::OrRight(_) => "KImpl_OrRight",
            ImplFrame::AndLeft(_) => "KImpl_AndLeft",
            ImplFrame::AndRight(_) => "KImpl_AndRight",
            ImplFrame::ImplLeft(_) => "KImpl_ImplLeft",
            ImplFrame::ImplRight(_) => "KImpl_ImplRight",
        }
    }

    pub(crate) fn describe(&self) -> FrameDescriptor {
        let payload = match self {
            ImplFrame::Neg(p) | ImplFrame::OrLeft(p) | ImplFrame::AndLeft(p) | ImplFrame::ImplLeft(p) => {
                p.to_string()
            }
            ImplFrame::OrRight(d) | ImplFrame::AndRight(d) | ImplFrame::ImplRight(d) => d.to_string(),
        };
        FrameDescriptor::new(self.name(), vec![payload])
    }
}

pub type ImplKont = Kont<ImplFrame>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ImplControl {
    Descend(Formula),
    Apply(FormulaWi),
}

/// Small-step `impl_free`.
#[derive(Debug, Clone)]
pub struct ImplFreeMachine {
    control: ImplControl,
    stack: ImplKont,
    history: Option<History<ImplKont, ImplControl>>,
}

impl ImplFreeMachine {
    pub fn new(phi: Formula, checked: bool) -> ImplFreeMachine {
        ImplFreeMachine::from_state(ImplControl::Descend(phi), ImplKont::id(), checked)
    }

    /// Resumes from an arbitrary state. Post relations, when checked, are
    /// verified for the states visited from here on.
    pub fn from_state(control: ImplControl, stack: ImplKont, checked: bool) -> ImplFreeMachine {
        ImplFreeMachine {
            control,
            stack,
            history: checked.then(History::new),
        }
    }

    pub fn control(&self) -> &ImplControl {
        &self.control
    }

    pub fn stack(&self) -> &ImplKont {
        &self.stack
    }

    pub fn result(&self) -> Option<&FormulaWi> {
        match &self.control {
            ImplControl::Apply(phi) if self.stack.is_id() => Some(phi),
            _ => None,
        }
    }

    pub(crate) fn run(mut self, tracer: &mut Tracer) -> Result<FormulaWi> {
        tracer.drive(&mut self)?;
        match self.control {
            ImplControl::Apply(phi) => Ok(phi),
            ImplControl::Descend(_) => unreachable!("drive stops only at a final state"),
        }
    }

    fn transition(&mut self) {
        let control = std::mem::replace(&mut self.control, ImplControl::Apply(FormulaWi::constant(true)));
        self.control = match control {
            ImplControl::Descend(phi) => match phi.kind() {
                FormulaKind::Neg(a) => {
                    self.stack.push(ImplFrame::Neg(a.clone()));
                    ImplControl::Descend(a.clone())
                }
                FormulaKind::Or(a, b) => {
                    self.stack.push(ImplFrame::OrLeft(b.clone()));
                    ImplControl::Descend(a.clone())
                }
                FormulaKind::And(a, b) => {
                    self.stack.push(ImplFrame::AndLeft(b.clone()));
                    ImplControl::Descend(a.clone())
                }
                FormulaKind::Impl(a, b) => {
                    self.stack.push(ImplFrame::ImplLeft(b.clone()));
                    ImplControl::Descend(a.clone())
                }
                FormulaKind::Const(b) => ImplControl::Apply(FormulaWi::constant(*b)),
                FormulaKind::Var(x) => ImplControl::Apply(FormulaWi::atom(x.clone())),
            },
            ImplControl::Apply(phi) => match self.stack.pop() {
                None => ImplControl::Apply(phi),
                Some(ImplFrame::Neg(_)) => ImplControl::Apply(FormulaWi::neg(phi)),
                Some(ImplFrame::OrLeft(p)) => {
                    self.stack.push(ImplFrame::OrRight(phi));
                    ImplControl::Descend(p)
                }
                Some(ImplFrame::OrRight(d)) => ImplControl::Apply(FormulaWi::or(d, phi)),
                Some(ImplFrame::AndLeft(p)) => {
                    self.stack.push(ImplFrame::AndRight(phi));
                    ImplControl::Descend(p)
                }
                Some(ImplFrame::AndRight(d)) => ImplControl::Apply(FormulaWi::and(d, phi)),
                Some(ImplFrame::ImplLeft(p)) => {
                    self.stack.push(ImplFrame::ImplRight(phi));
                    ImplControl::Descend(p)
                }
                Some(ImplFrame::ImplRight(d)) => ImplControl::Apply(FormulaWi::or(FormulaWi::neg(d), phi)),
            },
        };
    }

    fn verify_history(&mut self, result: &FormulaWi) -> Result<()> {
        let Some(History { states, memo }) = &mut self.history else { return Ok(()) };
        for (i, (k, control)) in states.iter().enumerate() {
            let holds = match control {
                ImplControl::Descend(phi) => memo.impl_post(k, phi, result),
                ImplControl::Apply(phi) => memo.impl_post_value(k, phi.clone(), result),
            };
            if !holds {
                return Err(Error::PostRelationViolation {
                    stage: Stage::ImplFree,
                    step: i as u64,
                    predicate: "impl_post",
                });
            }
        }
        Ok(())
    }
}

impl Machine for ImplFreeMachine {
    fn stage(&self) -> Stage {
        Stage::ImplFree
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
            ImplControl::Descend(phi) => (Mode::Descend, phi.to_string()),
            ImplControl::Apply(phi) => (Mode::Apply, phi.to_string()),
        };
        let mut stack: Vec<_> = self.stack.top_down().map(ImplFrame::describe).collect();
        stack.push(FrameDescriptor::new("KImpl_Id", Vec::new()));
        Snapshot {
            stage: Stage::ImplFree,
            mode,
            focus,
            stack,
        }
    }
}
