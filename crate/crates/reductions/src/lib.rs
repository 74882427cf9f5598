//! Compilers from (3,B2)-SAT and Circuit-SAT into EFX instances on graphs,
//! with certificate translation in both directions.
//!
//! The SAT compiler produces mixed orientation instances where a satisfying
//! assignment exists iff an EFX⁺₋ orientation does. The circuit compiler
//! produces goods instances with priceless edges where the circuit can output
//! True iff an EFX⁰₀ allocation exists.

pub mod bundle;
pub mod circuit;
pub mod compile;
pub mod gadgets;
pub mod sat;

pub use bundle::{EdgeRole, GadgetInfo, GadgetKind, Params, ReductionBundle, ReductionMap, SignalEdge, Source};
pub use circuit::{eliminate_and, parse_circuit, Circuit, Gate, Op, WireId};
pub use compile::{allocation_to_circuit_assignment, build_circuit_allocation_instance, circuit_assignment_to_allocation};
pub use gadgets::{check_priceless_preconditions, priceless_bound, StandaloneGadget};
pub use sat::{
    build_chore_anchor_gadget, build_sat_orientation_instance, orientation_to_sat_assignment, parse_sat3b2,
    random_satisfiable, sat_assignment_to_orientation, Sat3B2Formula,
};

use efx_core::{AllocationError, BuildError, Notion};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReductionError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("clause {clause} does not have three distinct literals")]
    NotThreeDistinctLiterals { clause: usize },
    #[error("variable {var} occurs {pos} times positive and {neg} times negative (need 2 and 2)")]
    OccurrenceCountViolated { var: usize, pos: usize, neg: usize },
    #[error("header declares {declared} clauses, found {found}")]
    ClauseCount { declared: usize, found: usize },
    #[error("wire {0:?} is part of a cycle")]
    CycleDetected(String),
    #[error("wire {0:?} is used but never driven")]
    UndrivenWire(String),
    #[error("wire {0:?} is driven more than once")]
    MultipleDrivers(String),
    #[error("circuit declares no output")]
    MissingOutput,
    #[error("gate {0:?} is an AND gate; eliminate AND gates first")]
    ContainsAnd(String),
    #[error("expected {expected} input values, got {got}")]
    WrongAssignmentLength { expected: usize, got: usize },
    #[error("assignment does not satisfy clause {clause}")]
    NotSatisfying { clause: usize },
    #[error("assignment makes the circuit output False")]
    OutputFalse,
    #[error("certificate is not an orientation: {0}")]
    NotAnOrientation(String),
    #[error("certificate fails the {0} checker")]
    NotEfx(Notion),
    #[error("priceless precondition violated: {0}")]
    PricelessPrecondition(String),
    #[error("map does not describe a {0} reduction")]
    WrongSource(&'static str),
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Allocation(#[from] AllocationError),
}
