//! Propositional formula normalization.
//!
//! Converts arbitrary propositional formulas to conjunctive normal form
//! through the pipeline `cnfc ∘ nnfc ∘ impl_free`, available in three
//! interchangeable engines:
//!
//! * [`direct`]: plain structural recursion,
//! * [`cps`]: continuation-passing style with boxed closures,
//! * [`machine`]: a first-order stack machine with explicit continuation
//!   frames, single-step execution and trace emission.
//!
//! The normal-form criteria are executable predicates in [`wf`], and
//! [`oracle`] decides semantic equivalence by exhaustive truth tables.
//!
//! ```
//! use propcnf::{direct, syntax};
//!
//! let phi = syntax::parse("~(p -> q)").unwrap();
//! let cnf = direct::to_cnf(&phi).unwrap();
//! assert_eq!(cnf.to_string(), "p & ~q");
//! ```

pub mod budget;
pub mod corpus;
pub mod cps;
pub mod dimacs;
pub mod direct;
mod error;
pub mod formula;
pub mod machine;
pub mod oracle;
pub mod syntax;
pub mod wf;

pub use error::{Error, Result, SyntaxError};
pub use formula::{eval, eval_wi, size, Formula, FormulaKind, FormulaWi, FormulaWiKind, Ident, Valuation};

/// Default output budget, in formula nodes.
pub const DEFAULT_MAX_NODES: u64 = 1_000_000;

/// Default bound on nested calls in the CPS engine.
pub const DEFAULT_MAX_CPS_DEPTH: usize = 1_000_000;

/// Runtime configuration shared by all engines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Verify preconditions, postconditions, post relations and stack
    /// invariants while converting. Quadratic or worse; meant for tests.
    pub checked: bool,
    /// Largest CNF (in nodes) a conversion may produce.
    pub max_nodes: u64,
    /// Largest number of nested calls the CPS engine may make.
    pub max_cps_depth: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            checked: false,
            max_nodes: DEFAULT_MAX_NODES,
            max_cps_depth: DEFAULT_MAX_CPS_DEPTH,
        }
    }
}

impl Options {
    pub fn checked() -> Self {
        Options {
            checked: true,
            ..Options::default()
        }
    }
}

/// Selects which engine performs a conversion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Engine {
    Direct,
    Cps,
    Machine,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Direct, Engine::Cps, Engine::Machine];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Direct => "direct",
            Engine::Cps => "cps",
            Engine::Machine => "machine",
        }
    }

    /// Runs the full pipeline on `phi`.
    pub fn to_cnf(self, phi: &Formula, options: &Options) -> Result<FormulaWi> {
        match self {
            Engine::Direct => direct::to_cnf_with(phi, options),
            Engine::Cps => cps::to_cnf_cps_with(phi, options),
            Engine::Machine => machine::to_cnf_machine(phi, options, None),
        }
    }
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "direct" => Ok(Engine::Direct),
            "cps" => Ok(Engine::Cps),
            "machine" => Ok(Engine::Machine),
            other => Err(format!("unknown engine `{other}`")),
        }
    }
}
