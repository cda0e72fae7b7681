//! Crate-wide error type and structured proof-check failures.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// An exhaustive oracle refused to run past its configured scale cap.
    #[error("oracle cap exceeded: {what} is {actual}, cap is {limit}")]
    CapExceeded {
        what: &'static str,
        actual: u64,
        limit: u64,
    },

    /// A proof step failed validation. `step` is the offending step id.
    #[error("step {step}: {kind}")]
    Check { step: u64, kind: CheckKind },

    /// An operation defined only for false QBFs was handed a true one.
    #[error("formula is not false")]
    NotFalse,

    #[error("{0}")]
    Invalid(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }

    pub fn check(step: u64, kind: CheckKind) -> Self {
        Error::Check { step, kind }
    }

    /// Process exit code for the CLI: 3 for cap errors, 2 for bad input,
    /// 1 for everything that means "verification failed".
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 3,
            Error::Parse { .. } | Error::Invalid(_) => 2,
            _ => 1,
        }
    }
}

/// What exactly went wrong inside a proof checker.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CheckKind {
    #[error("step id references an undefined or later step ({0})")]
    DanglingRef(u64),
    #[error("duplicate step id")]
    DuplicateId,
    #[error("axiom does not match matrix clause {0}")]
    AxiomMismatch(usize),
    #[error("axiom index {0} out of range")]
    AxiomOutOfRange(usize),
    #[error("derived clause is tautological")]
    Tautology,
    #[error("pivot variable {0} missing from an antecedent")]
    PivotMissing(u32),
    #[error("resolvent does not match the stated clause")]
    ResolventMismatch,
    #[error("resolution over universal pivot {0} is forbidden in Q-Res mode")]
    UniversalPivot(u32),
    #[error("reduction removes a non-universal literal on variable {0}")]
    ReduceExistential(u32),
    #[error(
        "reduction blocked: variable {blocked} is not right of existential variable {witness}"
    )]
    ReduceBlocked { blocked: u32, witness: u32 },
    #[error("reduction assigns variables outside the rightmost universal block")]
    ReduceNotRightmost,
    #[error("reduction assignment is empty")]
    ReduceEmpty,
    #[error("weakening does not extend the antecedent")]
    WeakenNotSuperset,
    #[error("stated line does not match the rule's result")]
    LineMismatch,
    #[error("negative multiplier in linear combination")]
    NegativeMultiplier,
    #[error("division by {divisor} does not divide coefficient of variable {var}")]
    NotDivisible { divisor: String, var: u32 },
    #[error("division by a non-positive constant")]
    NonPositiveDivisor,
    #[error("lines over different fields cannot be combined")]
    FieldMismatch,
    #[error("conclusion is not the required contradiction")]
    WrongConclusion,
    #[error("declared premises do not semantically entail the line")]
    NotEntailed,
    #[error("line is not semantically equivalent to the reduced premise")]
    NotEquivalent,
    #[error("unknown variable {0}")]
    UnknownVar(u32),
    #[error("{0}")]
    Other(String),
}
