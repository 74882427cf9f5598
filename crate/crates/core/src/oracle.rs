//! Exhaustive search over allocations or orientations.
//!
//! States are visited in mixed-radix order of the owner vector with edge 0 as
//! the most significant digit. In orientation mode digit 0 is the lower
//! endpoint. The first passing state in that order is the witness.

use std::ops::ControlFlow;

use rayon::prelude::*;

use crate::alloc::{Allocation, DecideResult};
use crate::fairness::{agent_ok, satisfies_raw};
use crate::model::{AgentId, EdgeId, Instance, Valuation};
use crate::notion::Notion;

pub const DEFAULT_BUDGET: u128 = 20_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// Any agent may own any edge: n^m states.
    Allocations,
    /// Each edge goes to an endpoint: 2^m states.
    Orientations,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpec {
    pub mode: SearchMode,
    pub notion: Notion,
    pub budget: u128,
    pub parallel: bool,
    /// Skip subtrees once an agent whose incident edges are all assigned
    /// already violates the notion. Such violations cannot be undone by
    /// assigning the remaining edges, so counts and witnesses are unchanged.
    pub prune: bool,
    /// Optional fixed owners, one slot per edge.
    pub fixed: Vec<Option<AgentId>>,
}

impl SearchSpec {
    pub fn new(mode: SearchMode, notion: Notion) -> Self {
        SearchSpec {
            mode,
            notion,
            budget: DEFAULT_BUDGET,
            parallel: false,
            prune: true,
            fixed: Vec::new(),
        }
    }

    pub fn orientations(notion: Notion) -> Self {
        Self::new(SearchMode::Orientations, notion)
    }

    pub fn allocations(notion: Notion) -> Self {
        Self::new(SearchMode::Allocations, notion)
    }

    pub fn with_budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn with_parallel(mut self, parallel: bool) -> Self {
        self.parallel = parallel;
        self
    }

    pub fn with_prune(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }

    pub fn with_fixed(mut self, fixed: Vec<Option<AgentId>>) -> Self {
        self.fixed = fixed;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OracleError {
    #[error("search space of {states} states exceeds the budget of {budget}")]
    BudgetExceeded { states: u128, budget: u128 },
    #[error("fixed owner {agent} of edge {edge} is not allowed in this mode")]
    BadFixedOwner { edge: EdgeId, agent: AgentId },
    #[error("fixed-owner vector has {got} slots, instance has {expected} edges")]
    BadFixedLength { got: usize, expected: usize },
}

fn candidates<V: Valuation>(inst: &Instance<V>, spec: &SearchSpec) -> Result<Vec<Vec<AgentId>>, OracleError> {
    if !spec.fixed.is_empty() && spec.fixed.len() != inst.m() {
        return Err(OracleError::BadFixedLength { got: spec.fixed.len(), expected: inst.m() });
    }
    let mut out = Vec::with_capacity(inst.m());
    for e in 0..inst.m() {
        let ed = inst.edge(e);
        let all: Vec<AgentId> = match spec.mode {
            SearchMode::Allocations => (0..inst.n()).collect(),
            SearchMode::Orientations => vec![ed.u, ed.v],
        };
        match spec.fixed.get(e).copied().flatten() {
            Some(a) if all.contains(&a) => out.push(vec![a]),
            Some(a) => return Err(OracleError::BadFixedOwner { edge: e, agent: a }),
            None => out.push(all),
        }
    }
    Ok(out)
}

/// Number of states the search would visit without pruning.
pub fn state_count<V: Valuation>(inst: &Instance<V>, spec: &SearchSpec) -> Result<u128, OracleError> {
    let cands = candidates(inst, spec)?;
    Ok(cands
        .iter()
        .try_fold(1u128, |acc, c| acc.checked_mul(c.len() as u128))
        .unwrap_or(u128::MAX))
}

struct Outcome {
    count: u128,
    witness: Option<Vec<AgentId>>,
}

struct Search<'a, V: Valuation> {
    inst: &'a Instance<V>,
    notion: Notion,
    cands: &'a [Vec<AgentId>],
    complete_at: &'a [Vec<AgentId>],
    prune: bool,
    first_only: bool,
    owner: Vec<Option<AgentId>>,
    bundles: Vec<Vec<EdgeId>>,
    count: u128,
    witness: Option<Vec<AgentId>>,
}

impl<V: Valuation> Search<'_, V> {
    fn place(&mut self, e: EdgeId, a: AgentId) -> bool {
        self.owner[e] = Some(a);
        self.bundles[a].push(e);
        !self.prune
            || self.complete_at[e]
                .iter()
                .all(|&i| agent_ok(self.inst, &self.owner, &self.bundles, i, self.notion))
    }

    fn unplace(&mut self, e: EdgeId, a: AgentId) {
        self.owner[e] = None;
        self.bundles[a].pop();
    }

    fn dfs(&mut self, e: EdgeId) -> ControlFlow<()> {
        if e == self.cands.len() {
            if satisfies_raw(self.inst, &self.owner, &self.bundles, self.notion) {
                self.count += 1;
                if self.witness.is_none() {
                    self.witness = Some(self.owner.iter().map(|o| o.unwrap()).collect());
                }
                if self.first_only {
                    return ControlFlow::Break(());
                }
            }
            return ControlFlow::Continue(());
        }
        for k in 0..self.cands[e].len() {
            let a = self.cands[e][k];
            let ok = self.place(e, a);
            let flow = if ok { self.dfs(e + 1) } else { ControlFlow::Continue(()) };
            self.unplace(e, a);
            flow?;
        }
        ControlFlow::Continue(())
    }
}

fn run<V: Valuation>(inst: &Instance<V>, spec: &SearchSpec, first_only: bool) -> Result<Outcome, OracleError> {
    let cands = candidates(inst, spec)?;
    let states = state_count(inst, spec)?;
    if states > spec.budget {
        return Err(OracleError::BudgetExceeded { states, budget: spec.budget });
    }
    let m = inst.m();
    let mut complete_at: Vec<Vec<AgentId>> = vec![Vec::new(); m];
    for i in 0..inst.n() {
        if let Some(&last) = inst.incident(i).last() {
            complete_at[last].push(i);
        }
    }
    let fresh = || Search {
        inst,
        notion: spec.notion,
        cands: &cands,
        complete_at: &complete_at,
        prune: spec.prune,
        first_only,
        owner: vec![None; m],
        bundles: vec![Vec::new(); inst.n()],
        count: 0,
        witness: None,
    };

    if !spec.parallel || m == 0 {
        let mut s = fresh();
        let _ = s.dfs(0);
        return Ok(Outcome { count: s.count, witness: s.witness });
    }

    // Split on a prefix of edges and search the subtrees independently.
    let mut depth = 0;
    let mut chunks: u128 = 1;
    while depth < m && chunks < 64 {
        chunks *= cands[depth].len() as u128;
        depth += 1;
    }
    let mut prefixes: Vec<Vec<AgentId>> = vec![Vec::new()];
    for c in cands.iter().take(depth) {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                c.iter().map(move |&a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    let results: Vec<Outcome> = prefixes
        .par_iter()
        .map(|prefix| {
            let mut s = fresh();
            let mut ok = true;
            for (e, &a) in prefix.iter().enumerate() {
                ok &= s.place(e, a);
            }
            if ok {
                let _ = s.dfs(depth);
            }
            Outcome { count: s.count, witness: s.witness }
        })
        .collect();
    let mut count = 0;
    let mut witness = None;
    for r in results {
        count += r.count;
        if witness.is_none() {
            witness = r.witness;
        }
    }
    Ok(Outcome { count, witness })
}

/// Whether some state passes `spec.notion`; the witness is the first in canonical order.
pub fn oracle_exists<V: Valuation>(inst: &Instance<V>, spec: &SearchSpec) -> Result<DecideResult, OracleError> {
    let out = run(inst, spec, true)?;
    Ok(match out.witness {
        Some(w) => DecideResult::found(Allocation::from_owners(inst.n(), &w).expect("owners in range")),
        None => DecideResult::none(),
    })
}

/// Number of passing states.
pub fn oracle_count<V: Valuation>(inst: &Instance<V>, spec: &SearchSpec) -> Result<u128, OracleError> {
    Ok(run(inst, spec, false)?.count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::satisfies;

    fn triangle(v: i64) -> Instance {
        Instance::from_pairs(3, &[(0, 1), (1, 2), (0, 2)], &[(v, v); 3]).unwrap()
    }

    #[test]
    fn empty_edge_set_counts_one() {
        let inst = Instance::from_pairs(3, &[], &[]).unwrap();
        for n in Notion::ALL {
            assert_eq!(oracle_count(&inst, &SearchSpec::allocations(n)).unwrap(), 1);
        }
    }

    #[test]
    fn chores_triangle_has_two_efx0_orientations() {
        let spec = SearchSpec::orientations(Notion::EFXc0);
        assert_eq!(oracle_count(&triangle(-1), &spec).unwrap(), 2);
    }

    #[test]
    fn goods_c4_all_orientations_efx_plus() {
        let inst = Instance::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], &[(1, 1); 4]).unwrap();
        let spec = SearchSpec::orientations(Notion::EFXgPlus);
        assert_eq!(oracle_count(&inst, &spec).unwrap(), 16);
    }

    #[test]
    fn single_good_never_envy_free() {
        for n in 2..=4 {
            let inst = Instance::from_pairs(n, &[(0, 1)], &[(1, 1)]).unwrap();
            let r = oracle_exists(&inst, &SearchSpec::allocations(Notion::EF)).unwrap();
            assert!(!r.exists);
        }
    }

    #[test]
    fn budget_is_enforced() {
        let inst = triangle(1);
        let spec = SearchSpec::allocations(Notion::EF).with_budget(26);
        assert_eq!(
            oracle_exists(&inst, &spec).unwrap_err(),
            OracleError::BudgetExceeded { states: 27, budget: 26 }
        );
    }

    #[test]
    fn witness_is_first_passing_state() {
        let inst = triangle(-1);
        let spec = SearchSpec::orientations(Notion::EFXc0);
        let w = oracle_exists(&inst, &spec).unwrap().witness.unwrap();
        assert!(satisfies(&inst, &w, Notion::EFXc0).unwrap());
        // Lower-endpoint digits come first: e01->0, e12->1, e02->2.
        assert_eq!(w.owners(), &[Some(0), Some(1), Some(2)]);
    }

    #[test]
    fn fixed_owner_restricts_space() {
        let inst = triangle(-1);
        let spec = SearchSpec::orientations(Notion::EFXc0).with_fixed(vec![Some(1), None, None]);
        assert_eq!(oracle_count(&inst, &spec).unwrap(), 1);
        assert_eq!(state_count(&inst, &spec).unwrap(), 4);
    }
}
