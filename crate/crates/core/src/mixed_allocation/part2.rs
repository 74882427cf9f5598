//! Part 2 of the EFX⁰₋ algorithm: hand out the edges Part 1 left over.

use serde::Serialize;

use super::part1::Part1State;
use crate::alloc::Allocation;
use crate::error::SolveError;
use crate::fairness::{safe_for, EnvyState};
use crate::model::{AgentId, EdgeId, Instance, Valuation};

/// The four groups of leftover edges, each ascending.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct RemainderGroups {
    /// Some non-envied endpoint does not see the edge as a chore.
    pub g1: Vec<EdgeId>,
    /// Both endpoints are envied.
    pub g2: Vec<EdgeId>,
    /// `(edge, envied endpoint for whom it is not a chore, non-envied endpoint for whom it is)`.
    pub g3: Vec<(EdgeId, AgentId, AgentId)>,
    /// Chores for both endpoints.
    pub g4: Vec<EdgeId>,
}

impl RemainderGroups {
    pub fn classify<V: Valuation>(inst: &Instance<V>, alloc: &Allocation) -> Self {
        let envy = EnvyState::compute(inst, alloc);
        let mut g = RemainderGroups::default();
        for e in alloc.unallocated() {
            let ed = inst.edge(e);
            let ends = [ed.u, ed.v];
            let free = |a: AgentId| !envy.is_envied(a);
            let nc = |a: AgentId| !inst.sign(a, e).is_chore();
            if ends.iter().any(|&a| free(a) && nc(a)) {
                g.g1.push(e);
            } else if ends.iter().all(|&a| !free(a)) {
                g.g2.push(e);
            } else if let Some(&a) = ends.iter().find(|&&a| !free(a) && nc(a)) {
                g.g3.push((e, a, ed.other(a)));
            } else {
                g.g4.push(e);
            }
        }
        g
    }
}

fn fail(detail: String) -> SolveError {
    SolveError::PreconditionViolated { step: "part2", detail }
}

/// Completes a Part 1 orientation into an EFX⁰₋ allocation.
pub fn part2<V: Valuation>(inst: &Instance<V>, st: &Part1State) -> Result<Allocation, SolveError> {
    let mut alloc = st.alloc.clone();
    let groups = RemainderGroups::classify(inst, &alloc);
    let n = inst.n();

    for &e in &groups.g1 {
        let envy = EnvyState::compute(inst, &alloc);
        let ed = inst.edge(e);
        let to = [ed.u, ed.v]
            .into_iter()
            .find(|&a| !envy.is_envied(a) && !inst.sign(a, e).is_chore())
            .ok_or_else(|| fail(format!("G1 edge {e} lost its non-envied endpoint")))?;
        alloc.assign(e, to);
    }

    for &e in &groups.g2 {
        let envy = EnvyState::compute(inst, &alloc);
        let ed = inst.edge(e);
        let to = envy
            .non_envied_agents()
            .into_iter()
            // An endpoint may have stopped being envied during G1, but must
            // still never take a chore.
            .find(|&k| {
                !inst.sign(k, e).is_chore() && safe_for(inst, &alloc, k, ed.u) && safe_for(inst, &alloc, k, ed.v)
            })
            .ok_or_else(|| fail(format!("no non-envied agent safe for both ends of G2 edge {e}")))?;
        alloc.assign(e, to);
    }

    for &(e, i, j) in &groups.g3 {
        let envy = EnvyState::compute(inst, &alloc);
        let to = if !envy.is_envied(i) {
            i
        } else if let Some(k) = envy
            .non_envied_agents()
            .into_iter()
            .find(|&k| k != j && safe_for(inst, &alloc, k, i))
        {
            k
        } else {
            let path = envy.path_from(i).map_err(|c| fail(c.to_string()))?;
            if path.terminal() != j {
                return Err(fail(format!("envy path from {i} ends at {} instead of {j}", path.terminal())));
            }
            path.agents[path.s() - 1]
        };
        alloc.assign(e, to);
    }

    if !groups.g4.is_empty() {
        let envy = EnvyState::compute(inst, &alloc);
        let pair = envy.envied_agents().into_iter().find_map(|i| {
            envy.enviers(i).iter().copied().find(|&j| !envy.is_envied(j)).map(|j| (i, j))
        });
        match pair {
            None => {
                for &e in &groups.g4 {
                    let ed = inst.edge(e);
                    let to = (0..n).find(|&a| !ed.has(a)).unwrap_or(ed.u);
                    alloc.assign(e, to);
                }
            }
            Some((i, j)) => {
                for &e in &groups.g4 {
                    alloc.assign(e, if inst.edge(e).has(j) { i } else { j });
                }
            }
        }
    }
    debug_assert!(alloc.is_complete());
    Ok(alloc)
}
