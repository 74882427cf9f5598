use std::ops::Deref;

use crate::model::{AgentId, EdgeId, Instance, Valuation};

/// Edge-to-agent assignment, possibly partial.
///
/// Bundles are kept alongside the owner map, each sorted by edge id.
#[derive(Debug, Clone)]
pub struct Allocation {
    owner: Vec<Option<AgentId>>,
    bundles: Vec<Vec<EdgeId>>,
}

impl PartialEq for Allocation {
    fn eq(&self, other: &Self) -> bool {
        self.owner == other.owner && self.bundles.len() == other.bundles.len()
    }
}

impl Eq for Allocation {}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AllocationError {
    #[error("owner vector has {got} entries, instance has {expected} edges")]
    WrongLength { got: usize, expected: usize },
    #[error("allocation is over {got} agents, instance has {expected}")]
    WrongAgentCount { got: usize, expected: usize },
    #[error("edge {edge} assigned to agent {agent} outside 0..{n}")]
    AgentOutOfRange { edge: EdgeId, agent: AgentId, n: usize },
    #[error("edge {edge} assigned to non-endpoint agent {agent}")]
    NotAnEndpoint { edge: EdgeId, agent: AgentId },
    #[error("edge {edge} is unallocated")]
    Incomplete { edge: EdgeId },
}

impl Allocation {
    /// The empty partial allocation over `m` edges and `n` agents.
    pub fn empty(n: usize, m: usize) -> Self {
        Allocation {
            owner: vec![None; m],
            bundles: vec![Vec::new(); n],
        }
    }

    pub fn from_owners(n: usize, owners: &[AgentId]) -> Result<Self, AllocationError> {
        Self::from_partial(n, &owners.iter().map(|&a| Some(a)).collect::<Vec<_>>())
    }

    pub fn from_partial(n: usize, owners: &[Option<AgentId>]) -> Result<Self, AllocationError> {
        let mut alloc = Allocation::empty(n, owners.len());
        for (e, o) in owners.iter().enumerate() {
            if let Some(a) = *o {
                if a >= n {
                    return Err(AllocationError::AgentOutOfRange { edge: e, agent: a, n });
                }
                alloc.owner[e] = Some(a);
                alloc.bundles[a].push(e);
            }
        }
        Ok(alloc)
    }

    /// Checks that the shape matches `inst`.
    pub fn validate<V: Valuation>(&self, inst: &Instance<V>) -> Result<(), AllocationError> {
        if self.owner.len() != inst.m() {
            return Err(AllocationError::WrongLength {
                got: self.owner.len(),
                expected: inst.m(),
            });
        }
        if self.bundles.len() != inst.n() {
            return Err(AllocationError::WrongAgentCount {
                got: self.bundles.len(),
                expected: inst.n(),
            });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn m(&self) -> usize {
        self.owner.len()
    }

    pub fn owner(&self, e: EdgeId) -> Option<AgentId> {
        self.owner[e]
    }

    pub fn owners(&self) -> &[Option<AgentId>] {
        &self.owner
    }

    pub fn bundle(&self, a: AgentId) -> &[EdgeId] {
        &self.bundles[a]
    }

    pub fn bundles(&self) -> &[Vec<EdgeId>] {
        &self.bundles
    }

    pub fn is_allocated(&self, e: EdgeId) -> bool {
        self.owner[e].is_some()
    }

    pub fn is_complete(&self) -> bool {
        self.owner.iter().all(Option::is_some)
    }

    /// First unallocated edge, if any.
    pub fn first_unallocated(&self) -> Option<EdgeId> {
        self.owner.iter().position(Option::is_none)
    }

    /// R(X), ascending.
    pub fn unallocated(&self) -> Vec<EdgeId> {
        (0..self.owner.len()).filter(|&e| self.owner[e].is_none()).collect()
    }

    /// Gives `e` to `a`, moving it out of its previous bundle if needed.
    pub fn assign(&mut self, e: EdgeId, a: AgentId) {
        self.release(e);
        self.owner[e] = Some(a);
        let b = &mut self.bundles[a];
        let pos = b.partition_point(|&x| x < e);
        b.insert(pos, e);
    }

    /// Returns `e` to the unallocated pool.
    pub fn release(&mut self, e: EdgeId) {
        if let Some(prev) = self.owner[e].take() {
            let b = &mut self.bundles[prev];
            if let Ok(pos) = b.binary_search(&e) {
                b.remove(pos);
            }
        }
    }

    /// Releases every edge of `a` and returns them.
    pub fn clear_bundle(&mut self, a: AgentId) -> Vec<EdgeId> {
        let old = std::mem::take(&mut self.bundles[a]);
        for &e in &old {
            self.owner[e] = None;
        }
        old
    }

    /// True when every allocated edge sits with one of its endpoints.
    pub fn is_orientation<V: Valuation>(&self, inst: &Instance<V>) -> bool {
        self.owner
            .iter()
            .enumerate()
            .all(|(e, o)| o.map_or(true, |a| inst.edge(e).has(a)))
    }
}

/// An allocation in which every allocated edge goes to one of its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orientation(Allocation);

impl Orientation {
    pub fn new<V: Valuation>(inst: &Instance<V>, alloc: Allocation) -> Result<Self, AllocationError> {
        alloc.validate(inst)?;
        for (e, o) in alloc.owners().iter().enumerate() {
            if let Some(a) = *o {
                if !inst.edge(e).has(a) {
                    return Err(AllocationError::NotAnEndpoint { edge: e, agent: a });
                }
            }
        }
        Ok(Orientation(alloc))
    }

    /// Orientation from one bit per edge: `false` picks the lower endpoint.
    pub fn from_bits<V: Valuation>(inst: &Instance<V>, upper: &[bool]) -> Self {
        let mut alloc = Allocation::empty(inst.n(), inst.m());
        for (e, &hi) in upper.iter().enumerate() {
            let ed = inst.edge(e);
            alloc.assign(e, if hi { ed.v } else { ed.u });
        }
        Orientation(alloc)
    }

    pub fn into_allocation(self) -> Allocation {
        self.0
    }

    pub fn as_allocation(&self) -> &Allocation {
        &self.0
    }
}

impl Deref for Orientation {
    type Target = Allocation;
    fn deref(&self) -> &Allocation {
        &self.0
    }
}

/// Outcome of an existence decision, with a witness when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecideResult {
    pub exists: bool,
    pub witness: Option<Allocation>,
}

impl DecideResult {
    pub fn found(witness: Allocation) -> Self {
        DecideResult { exists: true, witness: Some(witness) }
    }

    pub fn none() -> Self {
        DecideResult { exists: false, witness: None }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assign_release_keeps_bundles_sorted() {
        let mut a = Allocation::empty(2, 4);
        a.assign(3, 0);
        a.assign(1, 0);
        a.assign(2, 1);
        assert_eq!(a.bundle(0), &[1, 3]);
        a.assign(3, 1);
        assert_eq!(a.bundle(0), &[1]);
        assert_eq!(a.bundle(1), &[2, 3]);
        a.release(2);
        assert_eq!(a.unallocated(), vec![0, 2]);
        assert!(!a.is_complete());
        assert_eq!(a.clear_bundle(1), vec![3]);
        assert_eq!(a.owner(3), None);
    }

    #[test]
    fn orientation_rejects_non_endpoint() {
        let inst = Instance::from_pairs(3, &[(0, 1)], &[(1, 1)]).unwrap();
        let alloc = Allocation::from_owners(3, &[2]).unwrap();
        assert_eq!(
            Orientation::new(&inst, alloc).unwrap_err(),
            AllocationError::NotAnEndpoint { edge: 0, agent: 2 }
        );
    }
}
