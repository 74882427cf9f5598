//! What a compiled instance means: names, edge roles and the source problem.

use efx_core::{AgentId, EdgeId, Instance};
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, WireId};
use crate::sat::Sat3B2Formula;
use crate::ReductionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GadgetKind {
    Or,
    Not,
    Wire,
    Terminator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum EdgeRole {
    /// `(a_i^T, a_i^F)`.
    Variable { var: usize },
    /// Clause vertex to the literal's variable vertex.
    Literal { clause: usize, var: usize, positive: bool },
    /// One of the three chore edges among the Δ agents.
    Triangle,
    /// Chore edge from `agent` to the first Δ agent.
    Penalty { agent: AgentId },
    /// Priceless edge carrying signal `signal`; the upper endpoint holds it when True.
    Signal { signal: usize },
    /// Edge internal to a gadget.
    Gadget { gadget: usize, kind: GadgetKind, local: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Params {
    pub priceless: Option<i64>,
    pub eps1: Option<i64>,
    pub eps2: Option<i64>,
}

/// A priceless edge standing for one Boolean signal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignalEdge {
    pub name: String,
    pub upper: AgentId,
    pub lower: AgentId,
    pub edge: EdgeId,
    /// The circuit wire it carries; `None` for copies made by WIRE gadgets.
    pub wire: Option<WireId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetInfo {
    pub kind: GadgetKind,
    /// Input signals, in gate operand order.
    pub inputs: Vec<usize>,
    /// Output signal; for the terminator, the signal it forces True.
    pub output: usize,
    /// Agents created for this gadget alone.
    pub internal: Vec<AgentId>,
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Source {
    Sat3b2 {
        formula: Sat3B2Formula,
    },
    Circuit {
        circuit: Circuit,
        signals: Vec<SignalEdge>,
        gadgets: Vec<GadgetInfo>,
    },
}

/// Everything needed to translate certificates, minus the instance itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionMap {
    pub source: Source,
    pub vertex_names: Vec<String>,
    pub edge_roles: Vec<EdgeRole>,
    pub params: Params,
}

impl ReductionMap {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone)]
pub struct ReductionBundle {
    pub instance: Instance,
    pub map: ReductionMap,
}

impl ReductionBundle {
    pub fn formula(&self) -> Result<&Sat3B2Formula, ReductionError> {
        match &self.map.source {
            Source::Sat3b2 { formula } => Ok(formula),
            _ => Err(ReductionError::WrongSource("(3,B2)-SAT")),
        }
    }

    pub fn circuit_parts(&self) -> Result<(&Circuit, &[SignalEdge], &[GadgetInfo]), ReductionError> {
        match &self.map.source {
            Source::Circuit { circuit, signals, gadgets } => Ok((circuit, signals, gadgets)),
            _ => Err(ReductionError::WrongSource("circuit")),
        }
    }
}

/// Incrementally collects named vertices, edges and their roles.
#[derive(Debug, Default)]
pub(crate) struct Builder {
    pub names: Vec<String>,
    pub pairs: Vec<(AgentId, AgentId)>,
    /// `(value to first endpoint, value to second endpoint)`; `None` marks a priceless edge.
    pub vals: Vec<Option<(i64, i64)>>,
    pub roles: Vec<EdgeRole>,
}

impl Builder {
    pub fn vertex(&mut self, name: impl Into<String>) -> AgentId {
        self.names.push(name.into());
        self.names.len() - 1
    }

    pub fn edge(&mut self, u: AgentId, v: AgentId, val: Option<(i64, i64)>, role: EdgeRole) -> EdgeId {
        self.pairs.push((u, v));
        self.vals.push(val);
        self.roles.push(role);
        self.pairs.len() - 1
    }

    /// Builds the instance, replacing priceless markers by the computed bound,
    /// which is returned when any priceless edge exists.
    pub fn build(&self) -> Result<(Instance, Option<i64>), ReductionError> {
        let bound = 1 + self.vals.iter().flatten().map(|&(a, b)| a.abs().max(b.abs())).sum::<i64>();
        // from_pairs wants (lower id, higher id) order.
        let ordered: Vec<(i64, i64)> = self
            .pairs
            .iter()
            .zip(&self.vals)
            .map(|(&(u, v), val)| {
                let (a, b) = val.unwrap_or((bound, bound));
                if u < v {
                    (a, b)
                } else {
                    (b, a)
                }
            })
            .collect();
        let instance = Instance::from_pairs(self.names.len(), &self.pairs, &ordered)?;
        Ok((instance, self.vals.iter().any(Option::is_none).then_some(bound)))
    }

    pub fn finish(self, source: Source, mut params: Params) -> Result<ReductionBundle, ReductionError> {
        let (instance, bound) = self.build()?;
        params.priceless = bound;
        Ok(ReductionBundle {
            instance,
            map: ReductionMap { source, vertex_names: self.names, edge_roles: self.roles, params },
        })
    }
}
