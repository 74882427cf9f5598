//! The `--trace` step log.

use efx_core::mixed_allocation::TraceStep;
use efx_core::AgentId;
use serde::{Deserialize, Serialize};

/// Bumped whenever a field changes meaning.
pub const TRACE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    /// `initial`, `property2-take-all`, `property2-swap`, `property3-case1..3`, `property8-rotation`.
    pub op: String,
    pub agents: Vec<AgentId>,
    /// Properties (1)-(8) that held before and after the step.
    pub before: Vec<u8>,
    pub after: Vec<u8>,
    /// Whether the partial allocation after the step is EFX⁰₋.
    pub efx0minus: bool,
    /// Owner of each edge after the step; `null` for unallocated edges.
    pub owners: Vec<Option<AgentId>>,
}

impl From<&TraceStep> for Step {
    fn from(t: &TraceStep) -> Self {
        Step {
            op: t.op.to_string(),
            agents: t.agents.clone(),
            before: t.before.iter().collect(),
            after: t.after.iter().collect(),
            efx0minus: t.efx0minus,
            owners: t.owners.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveTrace {
    pub version: u32,
    pub notion: String,
    pub mode: String,
    /// Which procedure produced the result.
    pub method: String,
    /// Part 1 steps of the EFX⁰₋ procedure; empty for every other method.
    pub steps: Vec<Step>,
    /// Final owner of each edge.
    pub owners: Vec<Option<AgentId>>,
    /// Checker verdict on the final allocation.
    pub verified: bool,
}

impl SolveTrace {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }
}
