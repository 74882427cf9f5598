use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::value::Value;

pub type AgentId = usize;
pub type EdgeId = usize;

/// An item shared by two distinct agents. Endpoints are stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: EdgeId,
    pub u: AgentId,
    pub v: AgentId,
}

impl Edge {
    pub fn has(&self, a: AgentId) -> bool {
        self.u == a || self.v == a
    }

    /// The endpoint that is not `a`. `a` must be an endpoint.
    pub fn other(&self, a: AgentId) -> AgentId {
        debug_assert!(self.has(a));
        if self.u == a {
            self.v
        } else {
            self.u
        }
    }
}

/// Marginal-sign class of an edge for one agent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SignClass {
    Good,
    Chore,
    Dummy,
}

impl SignClass {
    pub fn of(v: Value) -> Self {
        if v.is_positive() {
            SignClass::Good
        } else if v.is_negative() {
            SignClass::Chore
        } else {
            SignClass::Dummy
        }
    }

    pub fn is_chore(self) -> bool {
        self == SignClass::Chore
    }

    pub fn is_good(self) -> bool {
        self == SignClass::Good
    }
}

/// Valuation contract used by every checker and solver.
///
/// Implementations must be sign consistent: adding an edge of class Good
/// strictly increases the value of any set, a Chore strictly decreases it and
/// a Dummy leaves it unchanged. Non-incident edges are always Dummy.
pub trait Valuation: Sync {
    fn value(&self, agent: AgentId, bundle: &[EdgeId]) -> Value;
    fn sign(&self, agent: AgentId, edge: EdgeId) -> SignClass;
}

/// Additive valuation with one entry per (endpoint, edge) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveValuation {
    endpoints: Vec<(AgentId, AgentId)>,
    table: Vec<[Value; 2]>,
}

impl AdditiveValuation {
    /// Value of a single edge to `agent`; zero when not incident.
    pub fn entry(&self, agent: AgentId, edge: EdgeId) -> Value {
        let (u, v) = self.endpoints[edge];
        if agent == u {
            self.table[edge][0]
        } else if agent == v {
            self.table[edge][1]
        } else {
            Value::ZERO
        }
    }
}

impl Valuation for AdditiveValuation {
    fn value(&self, agent: AgentId, bundle: &[EdgeId]) -> Value {
        let mut num: i128 = 0;
        let mut rest = Value::ZERO;
        let mut all_int = true;
        for &e in bundle {
            let x = self.entry(agent, e);
            if x.denom() == 1 && all_int {
                num += x.numer();
            } else {
                all_int = false;
                rest += x;
            }
        }
        Value::int(num) + rest
    }

    fn sign(&self, agent: AgentId, edge: EdgeId) -> SignClass {
        SignClass::of(self.entry(agent, edge))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BuildError {
    #[error("instance must have at least one agent")]
    EmptyAgentSet,
    #[error("edge {edge} is a self-loop on agent {agent}")]
    SelfLoop { edge: EdgeId, agent: AgentId },
    #[error("edge {edge} repeats the endpoint pair of edge {first}")]
    DuplicateEdge { edge: EdgeId, first: EdgeId },
    #[error("edge {edge} has endpoint {agent} outside 0..{n}")]
    EndpointOutOfRange { edge: EdgeId, agent: AgentId, n: usize },
    #[error("value given for agent {agent} on non-incident edge {edge}")]
    NonIncidentValue { agent: AgentId, edge: EdgeId },
    #[error("value given for unknown edge {edge}")]
    UnknownEdge { edge: EdgeId },
    #[error("value for agent {agent} on edge {edge} given twice")]
    DuplicateValue { agent: AgentId, edge: EdgeId },
}

/// Goods / chores / mixed classification of an instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum InstanceKind {
    GoodsInstance,
    ChoresInstance,
    MixedInstance,
}

impl fmt::Display for InstanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            InstanceKind::GoodsInstance => "goods",
            InstanceKind::ChoresInstance => "chores",
            InstanceKind::MixedInstance => "mixed",
        };
        f.write_str(s)
    }
}

/// A validated simple graph with a valuation for every agent.
#[derive(Debug, Clone)]
pub struct Instance<V = AdditiveValuation> {
    n: usize,
    edges: Vec<Edge>,
    valuation: V,
    incident: Vec<Vec<EdgeId>>,
    by_class: Vec<[Vec<EdgeId>; 3]>,
    signs: Vec<[SignClass; 2]>,
    pair_index: HashMap<(AgentId, AgentId), EdgeId>,
}

fn class_slot(c: SignClass) -> usize {
    match c {
        SignClass::Good => 0,
        SignClass::Chore => 1,
        SignClass::Dummy => 2,
    }
}

fn validate_edges(
    n: usize,
    pairs: &[(AgentId, AgentId)],
) -> Result<(Vec<Edge>, HashMap<(AgentId, AgentId), EdgeId>), BuildError> {
    if n == 0 {
        return Err(BuildError::EmptyAgentSet);
    }
    let mut edges = Vec::with_capacity(pairs.len());
    let mut pair_index = HashMap::with_capacity(pairs.len());
    for (id, &(a, b)) in pairs.iter().enumerate() {
        for x in [a, b] {
            if x >= n {
                return Err(BuildError::EndpointOutOfRange { edge: id, agent: x, n });
            }
        }
        if a == b {
            return Err(BuildError::SelfLoop { edge: id, agent: a });
        }
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        if let Some(&first) = pair_index.get(&(u, v)) {
            return Err(BuildError::DuplicateEdge { edge: id, first });
        }
        pair_index.insert((u, v), id);
        edges.push(Edge { id, u, v });
    }
    Ok((edges, pair_index))
}

impl Instance<AdditiveValuation> {
    /// Builds an additive instance. Pairs missing from `values` are zero.
    pub fn additive(
        n: usize,
        pairs: &[(AgentId, AgentId)],
        values: impl IntoIterator<Item = (AgentId, EdgeId, Value)>,
    ) -> Result<Self, BuildError> {
        let (edges, _) = validate_edges(n, pairs)?;
        let mut table = vec![[Value::ZERO; 2]; edges.len()];
        let mut seen = vec![[false; 2]; edges.len()];
        for (agent, edge, val) in values {
            let Some(ed) = edges.get(edge) else {
                return Err(BuildError::UnknownEdge { edge });
            };
            let slot = if agent == ed.u {
                0
            } else if agent == ed.v {
                1
            } else {
                return Err(BuildError::NonIncidentValue { agent, edge });
            };
            if seen[edge][slot] {
                return Err(BuildError::DuplicateValue { agent, edge });
            }
            seen[edge][slot] = true;
            table[edge][slot] = val;
        }
        let valuation = AdditiveValuation {
            endpoints: edges.iter().map(|e| (e.u, e.v)).collect(),
            table,
        };
        Instance::new(n, pairs, valuation)
    }

    /// Convenience builder: `vals[k] = (value to lower endpoint, value to higher endpoint)`.
    pub fn from_pairs(
        n: usize,
        pairs: &[(AgentId, AgentId)],
        vals: &[(i64, i64)],
    ) -> Result<Self, BuildError> {
        assert_eq!(pairs.len(), vals.len(), "one value pair per edge");
        let mut entries = Vec::with_capacity(2 * pairs.len());
        for (k, (&(a, b), &(x, y))) in pairs.iter().zip(vals).enumerate() {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            entries.push((lo, k, Value::from(x)));
            entries.push((hi, k, Value::from(y)));
        }
        Instance::additive(n, pairs, entries)
    }

    pub fn entry(&self, agent: AgentId, edge: EdgeId) -> Value {
        self.valuation.entry(agent, edge)
    }
}

impl<V: Valuation> Instance<V> {
    pub fn new(n: usize, pairs: &[(AgentId, AgentId)], valuation: V) -> Result<Self, BuildError> {
        let (edges, pair_index) = validate_edges(n, pairs)?;
        let mut incident = vec![Vec::new(); n];
        let mut by_class: Vec<[Vec<EdgeId>; 3]> = (0..n).map(|_| Default::default()).collect();
        let mut signs = Vec::with_capacity(edges.len());
        for e in &edges {
            let su = valuation.sign(e.u, e.id);
            let sv = valuation.sign(e.v, e.id);
            incident[e.u].push(e.id);
            incident[e.v].push(e.id);
            by_class[e.u][class_slot(su)].push(e.id);
            by_class[e.v][class_slot(sv)].push(e.id);
            signs.push([su, sv]);
        }
        Ok(Instance {
            n,
            edges,
            valuation,
            incident,
            by_class,
            signs,
            pair_index,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> Edge {
        self.edges[e]
    }

    pub fn valuation(&self) -> &V {
        &self.valuation
    }

    /// E_i, ascending.
    pub fn incident(&self, a: AgentId) -> &[EdgeId] {
        &self.incident[a]
    }

    /// E_i^{>0}, ascending.
    pub fn goods_of(&self, a: AgentId) -> &[EdgeId] {
        &self.by_class[a][0]
    }

    /// E_i^{<0}, ascending.
    pub fn chores_of(&self, a: AgentId) -> &[EdgeId] {
        &self.by_class[a][1]
    }

    /// Incident edges of class Dummy for `a` (E_i^{=0}), ascending.
    pub fn dummies_of(&self, a: AgentId) -> &[EdgeId] {
        &self.by_class[a][2]
    }

    pub fn degree(&self, a: AgentId) -> usize {
        self.incident[a].len()
    }

    pub fn edge_between(&self, a: AgentId, b: AgentId) -> Option<EdgeId> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.pair_index.get(&key).copied()
    }

    /// Cached sign class; Dummy for non-incident agents.
    pub fn sign(&self, a: AgentId, e: EdgeId) -> SignClass {
        let ed = &self.edges[e];
        if a == ed.u {
            self.signs[e][0]
        } else if a == ed.v {
            self.signs[e][1]
        } else {
            SignClass::Dummy
        }
    }

    pub fn value(&self, a: AgentId, bundle: &[EdgeId]) -> Value {
        self.valuation.value(a, bundle)
    }

    pub fn value_of_edge(&self, a: AgentId, e: EdgeId) -> Value {
        self.valuation.value(a, &[e])
    }

    pub fn classify(&self) -> InstanceKind {
        let mut any_good = false;
        let mut any_chore = false;
        for s in &self.signs {
            for c in s {
                any_good |= c.is_good();
                any_chore |= c.is_chore();
            }
        }
        match (any_good, any_chore) {
            (_, false) => InstanceKind::GoodsInstance,
            (false, true) => InstanceKind::ChoresInstance,
            (true, true) => InstanceKind::MixedInstance,
        }
    }

    /// No incident pair is a Chore.
    pub fn is_goods(&self) -> bool {
        self.signs.iter().flatten().all(|c| !c.is_chore())
    }

    /// No incident pair is a Good.
    pub fn is_chores(&self) -> bool {
        self.signs.iter().flatten().all(|c| !c.is_good())
    }

    /// Endpoint classes `(class for u, class for v)`.
    pub fn edge_signs(&self, e: EdgeId) -> [SignClass; 2] {
        self.signs[e]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_good_edge() {
        let inst = Instance::from_pairs(2, &[(0, 1)], &[(1, 1)]).unwrap();
        assert_eq!(inst.classify(), InstanceKind::GoodsInstance);
        assert_eq!(inst.goods_of(0), &[0]);
        assert_eq!(inst.sign(0, 0), SignClass::Good);
    }

    #[test]
    fn path_with_chore_is_mixed() {
        let inst = Instance::from_pairs(3, &[(0, 1), (1, 2)], &[(1, 1), (-1, -1)]).unwrap();
        assert_eq!(inst.classify(), InstanceKind::MixedInstance);
        assert_eq!(inst.chores_of(1), &[1]);
        assert_eq!(inst.sign(0, 1), SignClass::Dummy);
    }

    #[test]
    fn all_chores_classify() {
        let inst = Instance::from_pairs(3, &[(0, 1), (1, 2)], &[(-1, -1), (-2, -1)]).unwrap();
        assert_eq!(inst.classify(), InstanceKind::ChoresInstance);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert_eq!(
            Instance::from_pairs(2, &[(0, 0)], &[(1, 1)]).unwrap_err(),
            BuildError::SelfLoop { edge: 0, agent: 0 }
        );
        assert_eq!(
            Instance::from_pairs(2, &[(0, 1), (1, 0)], &[(1, 1), (1, 1)]).unwrap_err(),
            BuildError::DuplicateEdge { edge: 1, first: 0 }
        );
        assert_eq!(
            Instance::from_pairs(0, &[], &[]).unwrap_err(),
            BuildError::EmptyAgentSet
        );
        assert_eq!(
            Instance::additive(3, &[(0, 1)], [(2, 0, Value::int(1))]).unwrap_err(),
            BuildError::NonIncidentValue { agent: 2, edge: 0 }
        );
    }

    #[test]
    fn additive_sum_ignores_non_incident() {
        let inst =
            Instance::from_pairs(4, &[(0, 1), (1, 2), (2, 3)], &[(3, 1), (-2, 5), (7, 7)]).unwrap();
        assert_eq!(inst.value(1, &[0, 1, 2]), Value::int(-1));
        assert_eq!(inst.value(0, &[1, 2]), Value::ZERO);
        assert_eq!(inst.edge_between(2, 1), Some(1));
        assert_eq!(inst.edge_between(0, 3), None);
    }
}
