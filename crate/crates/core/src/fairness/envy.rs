use serde::Serialize;

use super::relevant_by_owner;
use crate::alloc::Allocation;
use crate::model::{AgentId, Instance, Valuation};

/// Directed envy graph of a (possibly partial) allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnvyState {
    envies: Vec<Vec<AgentId>>,
    enviers: Vec<Vec<AgentId>>,
}

impl EnvyState {
    pub fn compute<V: Valuation>(inst: &Instance<V>, alloc: &Allocation) -> Self {
        let n = inst.n();
        let mut envies = vec![Vec::new(); n];
        let mut enviers = vec![Vec::new(); n];
        for i in 0..n {
            let own = inst.value(i, alloc.bundle(i));
            let empty = inst.value(i, &[]);
            let rel = relevant_by_owner(inst, alloc.owners(), i);
            if empty > own {
                let mut k = 0;
                for j in (0..n).filter(|&j| j != i) {
                    let vj = match rel.get(k) {
                        Some((a, es)) if *a == j => {
                            k += 1;
                            inst.value(i, es)
                        }
                        _ => empty,
                    };
                    if vj > own {
                        envies[i].push(j);
                    }
                }
            } else {
                for (j, es) in &rel {
                    if inst.value(i, es) > own {
                        envies[i].push(*j);
                    }
                }
            }
            for &j in &envies[i] {
                enviers[j].push(i);
            }
        }
        EnvyState { envies, enviers }
    }

    pub fn n(&self) -> usize {
        self.envies.len()
    }

    pub fn envies(&self, i: AgentId, j: AgentId) -> bool {
        self.envies[i].binary_search(&j).is_ok()
    }

    /// Agents `i` envies, ascending.
    pub fn envied_by(&self, i: AgentId) -> &[AgentId] {
        &self.envies[i]
    }

    /// Agents envying `j`, ascending.
    pub fn enviers(&self, j: AgentId) -> &[AgentId] {
        &self.enviers[j]
    }

    pub fn is_envied(&self, j: AgentId) -> bool {
        !self.enviers[j].is_empty()
    }

    pub fn envied_agents(&self) -> Vec<AgentId> {
        (0..self.n()).filter(|&j| self.is_envied(j)).collect()
    }

    pub fn non_envied_agents(&self) -> Vec<AgentId> {
        (0..self.n()).filter(|&j| !self.is_envied(j)).collect()
    }

    pub fn is_envy_free(&self) -> bool {
        self.envies.iter().all(Vec::is_empty)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (AgentId, AgentId)> + '_ {
        self.envies
            .iter()
            .enumerate()
            .flat_map(|(i, js)| js.iter().map(move |&j| (i, j)))
    }

    /// True when the envy graph contains a directed cycle.
    pub fn has_cycle(&self) -> bool {
        let n = self.n();
        let mut indeg: Vec<usize> = (0..n).map(|j| self.enviers[j].len()).collect();
        let mut stack: Vec<AgentId> = (0..n).filter(|&j| indeg[j] == 0).collect();
        let mut seen = 0;
        while let Some(i) = stack.pop() {
            seen += 1;
            for &j in &self.envies[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    stack.push(j);
                }
            }
        }
        seen < n
    }

    /// Follows smallest enviers from `from` until reaching a non-envied agent.
    pub fn path_from(&self, from: AgentId) -> Result<EnvyPath, EnvyCycleDetected> {
        let mut agents = vec![from];
        let mut seen = vec![false; self.n()];
        seen[from] = true;
        let mut cur = from;
        while let Some(&next) = self.enviers[cur].first() {
            if seen[next] {
                return Err(EnvyCycleDetected { at: next });
            }
            seen[next] = true;
            agents.push(next);
            cur = next;
        }
        Ok(EnvyPath { agents })
    }
}

/// `agents[0] <- agents[1] <- ... <- agents[s]`: each agent envies its predecessor.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnvyPath {
    pub agents: Vec<AgentId>,
}

impl EnvyPath {
    /// Index of the terminal agent.
    pub fn s(&self) -> usize {
        self.agents.len() - 1
    }

    pub fn start(&self) -> AgentId {
        self.agents[0]
    }

    pub fn terminal(&self) -> AgentId {
        *self.agents.last().unwrap()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("envy cycle detected through agent {at}")]
pub struct EnvyCycleDetected {
    pub at: AgentId,
}

pub fn find_envy_path<V: Valuation>(
    inst: &Instance<V>,
    alloc: &Allocation,
    from: AgentId,
) -> Result<EnvyPath, EnvyCycleDetected> {
    EnvyState::compute(inst, alloc).path_from(from)
}
