use std::fmt;

use serde::{Serialize, Serializer};

use super::envy::EnvyState;
use crate::alloc::Allocation;
use crate::model::{AgentId, EdgeId, Instance, SignClass, Valuation};
use crate::value::Value;

/// Subset of the property indices 1..=8.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PropertySet(u16);

impl PropertySet {
    pub const ALL: PropertySet = PropertySet(0b1_1111_1110);

    pub fn of(items: &[u8]) -> Self {
        let mut s = PropertySet::default();
        for &k in items {
            s.insert(k);
        }
        s
    }

    pub fn insert(&mut self, k: u8) {
        assert!((1..=8).contains(&k));
        self.0 |= 1 << k;
    }

    pub fn contains(&self, k: u8) -> bool {
        self.0 & (1 << k) != 0
    }

    pub fn is_superset(&self, other: PropertySet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (1..=8).filter(|&k| self.contains(k))
    }

    /// Smallest index in `candidates` that is not satisfied.
    pub fn first_missing(&self, candidates: &[u8]) -> Option<u8> {
        candidates.iter().copied().find(|&k| !self.contains(k))
    }
}

impl fmt::Debug for PropertySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for PropertySet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

/// E_i^{>=0} restricted to unallocated edges.
pub(crate) fn open_non_chores<V: Valuation>(
    inst: &Instance<V>,
    alloc: &Allocation,
    i: AgentId,
) -> Vec<EdgeId> {
    inst.incident(i)
        .iter()
        .copied()
        .filter(|&e| !alloc.is_allocated(e) && !inst.sign(i, e).is_chore())
        .collect()
}

fn union_relevant<V: Valuation>(
    inst: &Instance<V>,
    i: AgentId,
    bundle: &[EdgeId],
    extra: &[EdgeId],
) -> Vec<EdgeId> {
    let mut s: Vec<EdgeId> = bundle
        .iter()
        .copied()
        .filter(|&e| inst.sign(i, e) != SignClass::Dummy)
        .chain(extra.iter().copied())
        .collect();
    s.sort_unstable();
    s.dedup();
    s
}

/// `v_i(X_i) >= v_i(X_j ∪ (E_i^{>=0} ∩ R))` with `i = protected`, `j = candidate`.
pub fn safe_for<V: Valuation>(
    inst: &Instance<V>,
    alloc: &Allocation,
    candidate: AgentId,
    protected: AgentId,
) -> bool {
    let i = protected;
    let open = open_non_chores(inst, alloc, i);
    let s = union_relevant(inst, i, alloc.bundle(candidate), &open);
    inst.value(i, alloc.bundle(i)) >= inst.value(i, &s)
}

/// Safety of every agent for one protected agent, computed once.
pub(crate) struct SafetyProfile {
    /// Verdict for any candidate holding no non-dummy edge of the protected agent.
    pub generic: bool,
    /// Candidates holding such edges, with their individual verdicts.
    pub special: Vec<(AgentId, bool)>,
}

impl SafetyProfile {
    pub fn compute<V: Valuation>(inst: &Instance<V>, alloc: &Allocation, i: AgentId) -> Self {
        let own = inst.value(i, alloc.bundle(i));
        let open = open_non_chores(inst, alloc, i);
        let generic = own >= inst.value(i, &open);
        let mut holders: Vec<AgentId> = inst
            .incident(i)
            .iter()
            .filter(|&&e| inst.sign(i, e) != SignClass::Dummy)
            .filter_map(|&e| alloc.owner(e))
            .collect();
        holders.push(i);
        holders.sort_unstable();
        holders.dedup();
        let special = holders
            .into_iter()
            .map(|j| {
                let s = union_relevant(inst, i, alloc.bundle(j), &open);
                (j, own >= inst.value(i, &s))
            })
            .collect();
        SafetyProfile { generic, special }
    }

    pub fn is_safe(&self, j: AgentId) -> bool {
        match self.special.binary_search_by_key(&j, |&(a, _)| a) {
            Ok(k) => self.special[k].1,
            Err(_) => self.generic,
        }
    }
}

fn envied_profiles<V: Valuation>(inst: &Instance<V>, alloc: &Allocation, envied: &[AgentId]) -> Vec<Option<SafetyProfile>> {
    let mut v: Vec<Option<SafetyProfile>> = (0..inst.n()).map(|_| None).collect();
    for &i in envied {
        v[i] = Some(SafetyProfile::compute(inst, alloc, i));
    }
    v
}

/// Smallest pair `(a, b)`, `a <= b`, of envied agents with no non-envied agent safe for both.
fn first_p3_violation(
    envy: &EnvyState,
    profiles: &[Option<SafetyProfile>],
    envied: &[AgentId],
    non_envied_count: usize,
) -> Option<(AgentId, AgentId)> {
    let common_safe = |a: AgentId, b: AgentId| -> bool {
        let pa = profiles[a].as_ref().unwrap();
        let pb = profiles[b].as_ref().unwrap();
        if pa.generic && pb.generic {
            // Only agents listed as special by either side can be unsafe.
            let mut specials: Vec<AgentId> = pa.special.iter().chain(pb.special.iter()).map(|&(j, _)| j).collect();
            specials.sort_unstable();
            specials.dedup();
            let blocked = specials
                .into_iter()
                .filter(|&j| !envy.is_envied(j) && !(pa.is_safe(j) && pb.is_safe(j)))
                .count();
            non_envied_count > blocked
        } else {
            let small = if !pa.generic { pa } else { pb };
            small
                .special
                .iter()
                .any(|&(j, _)| !envy.is_envied(j) && pa.is_safe(j) && pb.is_safe(j))
        }
    };
    envied.iter().enumerate().find_map(|(k, &a)| {
        envied[k..].iter().find(|&&b| !common_safe(a, b)).map(|&b| (a, b))
    })
}

/// The pair reported by [`first_p3_violation`] for the current state.
pub(crate) fn property3_violation<V: Valuation>(inst: &Instance<V>, alloc: &Allocation) -> Option<(AgentId, AgentId)> {
    let envy = EnvyState::compute(inst, alloc);
    let envied = envy.envied_agents();
    let profiles = envied_profiles(inst, alloc, &envied);
    first_p3_violation(&envy, &profiles, &envied, envy.non_envied_agents().len())
}

/// Evaluates the eight properties on a partial allocation.
///
/// Property 8 is read as: every agent reachable from an envied agent `i_0`
/// along reverse envy links, from which a non-envied agent is reachable, is
/// safe for `i_0`. On an acyclic envy graph this is exactly the statement over
/// envy paths ending at non-envied agents.
pub fn audit_properties<V: Valuation>(inst: &Instance<V>, alloc: &Allocation) -> PropertySet {
    let n = inst.n();
    let envy = EnvyState::compute(inst, alloc);
    let own: Vec<Value> = (0..n).map(|i| inst.value(i, alloc.bundle(i))).collect();
    let envied = envy.envied_agents();
    let non_envied = envy.non_envied_agents();
    let mut out = PropertySet::default();

    let p1 = (0..n).all(|i| {
        inst.incident(i).iter().all(|&e| {
            alloc.is_allocated(e) || inst.sign(i, e).is_chore() || own[i] >= inst.value_of_edge(i, e)
        })
    });
    if p1 {
        out.insert(1);
    }

    let p2 = envied
        .iter()
        .all(|&i| own[i] >= inst.value(i, &open_non_chores(inst, alloc, i)));
    if p2 {
        out.insert(2);
    }

    let profiles = envied_profiles(inst, alloc, &envied);
    let p3 = first_p3_violation(&envy, &profiles, &envied, non_envied.len()).is_none();
    if p3 {
        out.insert(3);
    }

    let p4 = (0..n).all(|i| alloc.bundle(i).iter().all(|&e| !inst.sign(i, e).is_chore()));
    if p4 {
        out.insert(4);
    }
    if envied.iter().all(|&i| alloc.bundle(i).len() == 1) {
        out.insert(5);
    }
    if envied.iter().all(|&i| envy.enviers(i).len() == 1) {
        out.insert(6);
    }
    if !envy.has_cycle() {
        out.insert(7);
    }

    // Agents from which a non-envied agent can be reached along envier links.
    let mut reaches_free = vec![false; n];
    let mut stack: Vec<AgentId> = non_envied.clone();
    for &j in &stack {
        reaches_free[j] = true;
    }
    while let Some(b) = stack.pop() {
        for &a in envy.envied_by(b) {
            if !reaches_free[a] {
                reaches_free[a] = true;
                stack.push(a);
            }
        }
    }
    let p8 = envied.iter().all(|&i0| {
        let prof = profiles[i0].as_ref().unwrap();
        let mut seen = vec![false; n];
        let mut stack: Vec<AgentId> = envy.enviers(i0).to_vec();
        while let Some(a) = stack.pop() {
            if seen[a] {
                continue;
            }
            seen[a] = true;
            if reaches_free[a] && !prof.is_safe(a) {
                return false;
            }
            stack.extend_from_slice(envy.enviers(a));
        }
        true
    });
    if p8 {
        out.insert(8);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn safe_for_examples() {
        // Protected a_0 holds value 3, candidate a_1 holds e01 worth 5 to a_0.
        let inst = Instance::from_pairs(3, &[(0, 1), (0, 2)], &[(5, 1), (3, 1)]).unwrap();
        let alloc = Allocation::from_owners(3, &[1, 0]).unwrap();
        assert!(!safe_for(&inst, &alloc, 1, 0));
        assert!(safe_for(&inst, &alloc, 2, 0));

        // Protected holds 3, candidate holds dummies, one open edge worth 2.
        let inst = Instance::from_pairs(4, &[(0, 1), (0, 2), (2, 3)], &[(3, 1), (2, 1), (1, 1)]).unwrap();
        let alloc = Allocation::from_partial(4, &[Some(0), None, Some(3)]).unwrap();
        assert!(safe_for(&inst, &alloc, 3, 0));
    }

    #[test]
    fn empty_allocation_properties() {
        let goods = Instance::from_pairs(2, &[(0, 1)], &[(1, 0)]).unwrap();
        let got = audit_properties(&goods, &Allocation::empty(2, 1));
        assert_eq!(got, PropertySet::of(&[2, 3, 4, 5, 6, 7, 8]));
        let chores = Instance::from_pairs(2, &[(0, 1)], &[(-1, 0)]).unwrap();
        assert_eq!(audit_properties(&chores, &Allocation::empty(2, 1)), PropertySet::ALL);
    }

    #[test]
    fn envy_free_allocation_has_all() {
        let inst = Instance::from_pairs(3, &[(0, 1)], &[(-1, -1)]).unwrap();
        let alloc = Allocation::from_owners(3, &[2]).unwrap();
        assert_eq!(audit_properties(&inst, &alloc), PropertySet::ALL);
    }
}
