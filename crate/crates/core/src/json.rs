//! JSON forms of instances and allocations.
//!
//! Instance: `{"agents": n, "edges": [{"id","u","v"}], "values": [{"agent","edge","num","den"}]}`.
//! Allocation: `{"owner": {"<edge>": agent}}` with unallocated edges left out.
//! Values are exact integer fractions and the writers are deterministic, so
//! equal inputs always give byte-identical output.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::alloc::{Allocation, AllocationError};
use crate::model::{AgentId, BuildError, EdgeId, Instance, Valuation};
use crate::value::Value;

#[derive(Debug, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("edge ids must be exactly 0..{m}, found {found:?}")]
    EdgeIds { m: usize, found: Vec<EdgeId> },
    #[error("value for agent {agent} on edge {edge} has zero denominator")]
    ZeroDenominator { agent: AgentId, edge: EdgeId },
    #[error("owner key {0:?} is not an edge id")]
    BadKey(String),
    #[error("owner map names edge {edge}, instance has {m} edges")]
    UnknownEdge { edge: EdgeId, m: usize },
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Allocation(#[from] AllocationError),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    id: EdgeId,
    u: AgentId,
    v: AgentId,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ValueDoc {
    agent: AgentId,
    edge: EdgeId,
    num: i128,
    #[serde(default = "one")]
    den: i128,
}

fn one() -> i128 {
    1
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    agents: usize,
    edges: Vec<EdgeDoc>,
    #[serde(default)]
    values: Vec<ValueDoc>,
}

/// Writes every incident value, edge by edge, lower endpoint first.
pub fn instance_to_json<V: Valuation>(inst: &Instance<V>) -> String {
    let mut values = Vec::with_capacity(2 * inst.m());
    for ed in inst.edges() {
        for a in [ed.u, ed.v] {
            let x = inst.value_of_edge(a, ed.id);
            values.push(ValueDoc { agent: a, edge: ed.id, num: x.numer(), den: x.denom() });
        }
    }
    let doc = InstanceDoc {
        agents: inst.n(),
        edges: inst.edges().iter().map(|e| EdgeDoc { id: e.id, u: e.u, v: e.v }).collect(),
        values,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn instance_from_json(text: &str) -> Result<Instance, JsonError> {
    let mut doc: InstanceDoc = serde_json::from_str(text)?;
    doc.edges.sort_by_key(|e| e.id);
    if doc.edges.iter().enumerate().any(|(k, e)| e.id != k) {
        return Err(JsonError::EdgeIds { m: doc.edges.len(), found: doc.edges.iter().map(|e| e.id).collect() });
    }
    let pairs: Vec<(AgentId, AgentId)> = doc.edges.iter().map(|e| (e.u, e.v)).collect();
    let mut entries = Vec::with_capacity(doc.values.len());
    for v in &doc.values {
        if v.den == 0 {
            return Err(JsonError::ZeroDenominator { agent: v.agent, edge: v.edge });
        }
        entries.push((v.agent, v.edge, Value::new(v.num, v.den)));
    }
    Ok(Instance::additive(doc.agents, &pairs, entries)?)
}

struct OwnerMap<'a>(&'a Allocation);

impl Serialize for OwnerMap<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let owners = self.0.owners();
        let mut map = s.serialize_map(Some(owners.iter().flatten().count()))?;
        // Numeric key order, so "10" comes after "9".
        for (e, o) in owners.iter().enumerate() {
            if let Some(a) = o {
                map.serialize_entry(&e.to_string(), a)?;
            }
        }
        map.end()
    }
}

#[derive(Serialize)]
struct AllocationOut<'a> {
    owner: OwnerMap<'a>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AllocationIn {
    owner: BTreeMap<String, AgentId>,
}

pub fn allocation_to_json(alloc: &Allocation) -> String {
    let mut s = serde_json::to_string_pretty(&AllocationOut { owner: OwnerMap(alloc) }).expect("plain data serializes");
    s.push('\n');
    s
}

/// Parses an allocation for `inst`; edges missing from the map stay unallocated.
pub fn allocation_from_json<V: Valuation>(text: &str, inst: &Instance<V>) -> Result<Allocation, JsonError> {
    let doc: AllocationIn = serde_json::from_str(text)?;
    let mut owners = vec![None; inst.m()];
    for (k, a) in doc.owner {
        let e: EdgeId = k.parse().map_err(|_| JsonError::BadKey(k.clone()))?;
        if e >= inst.m() {
            return Err(JsonError::UnknownEdge { edge: e, m: inst.m() });
        }
        owners[e] = Some(a);
    }
    let alloc = Allocation::from_partial(inst.n(), &owners)?;
    alloc.validate(inst)?;
    Ok(alloc)
}
