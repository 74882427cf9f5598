//! Exit codes and the error type that carries them.

use std::fmt::Display;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;
pub const EXIT_NONE: i32 = 10;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Exit {
    pub code: i32,
    pub message: String,
}

impl Exit {
    pub fn new(code: i32, message: impl Display) -> Self {
        Exit { code, message: message.to_string() }
    }

    pub fn usage(message: impl Display) -> Self {
        Self::new(EXIT_USAGE, message)
    }

    pub fn invalid(message: impl Display) -> Self {
        Self::new(EXIT_VALIDATION, message)
    }

    pub fn internal(message: impl Display) -> Self {
        Self::new(EXIT_INTERNAL, message)
    }
}

impl From<efx_core::oracle::OracleError> for Exit {
    fn from(e: efx_core::oracle::OracleError) -> Self {
        match e {
            efx_core::oracle::OracleError::BudgetExceeded { .. } => Exit::new(EXIT_BUDGET, e),
            _ => Exit::invalid(e),
        }
    }
}

impl From<efx_core::SolveError> for Exit {
    fn from(e: efx_core::SolveError) -> Self {
        use efx_core::SolveError::*;
        match e {
            Oracle(o) => o.into(),
            PreconditionViolated { .. } | NonTermination { .. } => Exit::internal(e),
            _ => Exit::invalid(e),
        }
    }
}

impl From<efx_core::json::JsonError> for Exit {
    fn from(e: efx_core::json::JsonError) -> Self {
        Exit::invalid(e)
    }
}

impl From<efx_reductions::ReductionError> for Exit {
    fn from(e: efx_reductions::ReductionError) -> Self {
        Exit::invalid(e)
    }
}

impl From<efx_core::fairness::CheckError> for Exit {
    fn from(e: efx_core::fairness::CheckError) -> Self {
        Exit::invalid(e)
    }
}
