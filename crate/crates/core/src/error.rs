use std::fmt;

use crate::machine::Stage;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid identifier `{0}`")]
    InvalidIdent(String),

    #[error(transparent)]
    Syntax(#[from] SyntaxError),

    #[error("formula contains an implication")]
    ContainsImplication,

    #[error("{function}: precondition `{predicate}` does not hold")]
    PreconditionViolation {
        function: &'static str,
        predicate: &'static str,
    },

    #[error("{function}: postcondition `{predicate}` does not hold")]
    PostconditionViolation {
        function: &'static str,
        predicate: &'static str,
    },

    #[error("{stage} machine, step {step}: stack invariant `{predicate}` does not hold")]
    StackInvariantViolation {
        stage: Stage,
        step: u64,
        predicate: &'static str,
    },

    #[error("{stage} machine, step {step}: post relation `{predicate}` does not hold")]
    PostRelationViolation {
        stage: Stage,
        step: u64,
        predicate: &'static str,
    },

    #[error("output would have {predicted} nodes, over the budget of {limit}")]
    OutputBudgetExceeded { predicted: u64, limit: u64 },

    #[error("CPS engine exceeded its call depth bound of {limit}")]
    CpsDepthExceeded { limit: usize },

    #[error("{count} atoms exceed the oracle limit of {limit}")]
    TooManyAtoms { count: usize, limit: usize },

    #[error("formula is not in CNF: `{predicate}` fails")]
    NotInCnf { predicate: &'static str },

    #[error("malformed DIMACS input at line {line}: {message}")]
    Dimacs { line: usize, message: String },

    #[error("trace replay failed at step {step}: {message}")]
    Replay { step: u64, message: String },
}

/// A parse failure: where it happened and what would have been accepted.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct SyntaxError {
    /// Byte offset into the input.
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "syntax error at byte {}: expected ", self.offset)?;
        match self.expected.as_slice() {
            [] => f.write_str("nothing")?,
            [only] => f.write_str(only)?,
            many => write!(f, "one of {}", many.join(", "))?,
        }
        write!(f, ", found {}", self.found)
    }
}
