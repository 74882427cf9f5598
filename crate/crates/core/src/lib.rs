//! Fair division of indivisible items on graphs: agents are vertices and
//! every item is an edge that only its two endpoints can care about.
//!
//! The crate provides the instance model with exact rational values,
//! checkers for envy-freeness and eight EFX relaxations, polynomial-time
//! solvers and deciders for the tractable cases, and an exhaustive oracle.

pub mod alloc;
pub mod error;
pub mod fairness;
pub mod generate;
pub mod goods_chores;
pub mod json;
pub mod mixed_allocation;
pub mod mixed_orientation;
pub mod model;
pub mod notion;
pub mod oracle;
pub mod value;

pub use error::SolveError;
pub use alloc::{Allocation, AllocationError, DecideResult, Orientation};
pub use model::{AdditiveValuation, AgentId, BuildError, Edge, EdgeId, Instance, InstanceKind, SignClass, Valuation};
pub use notion::Notion;
pub use value::Value;
