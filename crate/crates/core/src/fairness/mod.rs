//! Checkers for EF and the EFX family, the envy graph and the Property (1)-(8) audit.

mod audit;
mod envy;

use std::ops::ControlFlow;

use serde::Serialize;

use crate::alloc::{Allocation, AllocationError};
use crate::model::{AgentId, EdgeId, Instance, SignClass, Valuation};
use crate::notion::{Notion, Removal1, Removal2};

pub use audit::{audit_properties, safe_for, PropertySet};
pub(crate) use audit::{open_non_chores, property3_violation};
pub use envy::{find_envy_path, EnvyCycleDetected, EnvyPath, EnvyState};

/// Where the witness edge of a violation lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    EnviedBundle,
    OwnBundle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub envious: AgentId,
    pub envied: AgentId,
    /// `None` only for plain envy under EF.
    pub edge: Option<EdgeId>,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ViolationReport {
    pub notion: Notion,
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_satisfied(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CheckError {
    #[error("allocation is incomplete: edge {edge} has no owner")]
    IncompleteAllocation { edge: EdgeId },
    #[error(transparent)]
    Shape(#[from] AllocationError),
}

fn require_complete<V: Valuation>(inst: &Instance<V>, alloc: &Allocation) -> Result<(), CheckError> {
    alloc.validate(inst)?;
    match alloc.first_unallocated() {
        Some(edge) => Err(CheckError::IncompleteAllocation { edge }),
        None => Ok(()),
    }
}

/// Every violation of `notion`, ordered by envious agent, envied agent, then edge.
pub fn check<V: Valuation>(
    inst: &Instance<V>,
    alloc: &Allocation,
    notion: Notion,
) -> Result<ViolationReport, CheckError> {
    require_complete(inst, alloc)?;
    let mut violations = Vec::new();
    for i in 0..inst.n() {
        let _ = scan_agent(inst, alloc.owners(), alloc.bundles(), i, notion, &mut |v| {
            violations.push(v);
            ControlFlow::Continue(())
        });
    }
    Ok(ViolationReport { notion, violations })
}

/// Early-exit form of [`check`].
pub fn satisfies<V: Valuation>(
    inst: &Instance<V>,
    alloc: &Allocation,
    notion: Notion,
) -> Result<bool, CheckError> {
    require_complete(inst, alloc)?;
    Ok(satisfies_raw(inst, alloc.owners(), alloc.bundles(), notion))
}

pub fn is_envy_free<V: Valuation>(inst: &Instance<V>, alloc: &Allocation) -> Result<bool, CheckError> {
    satisfies(inst, alloc, Notion::EF)
}

pub(crate) fn satisfies_raw<V: Valuation>(
    inst: &Instance<V>,
    owner: &[Option<AgentId>],
    bundles: &[Vec<EdgeId>],
    notion: Notion,
) -> bool {
    (0..inst.n()).all(|i| agent_ok(inst, owner, bundles, i, notion))
}

/// True if agent `i` has no violation as an envier. On a partial state any
/// violation found here persists in every completion that only adds edges
/// not incident to `i`.
pub(crate) fn agent_ok<V: Valuation>(
    inst: &Instance<V>,
    owner: &[Option<AgentId>],
    bundles: &[Vec<EdgeId>],
    i: AgentId,
    notion: Notion,
) -> bool {
    scan_agent(inst, owner, bundles, i, notion, &mut |_| ControlFlow::Break(())).is_continue()
}

/// Incident non-dummy edges of `i` grouped by their current owner (owners other than `i`).
pub(crate) fn relevant_by_owner<V: Valuation>(
    inst: &Instance<V>,
    owner: &[Option<AgentId>],
    i: AgentId,
) -> Vec<(AgentId, Vec<EdgeId>)> {
    let mut rel: Vec<(AgentId, Vec<EdgeId>)> = Vec::new();
    for &e in inst.incident(i) {
        if inst.sign(i, e) == SignClass::Dummy {
            continue;
        }
        if let Some(o) = owner[e] {
            if o == i {
                continue;
            }
            match rel.iter_mut().find(|(a, _)| *a == o) {
                Some((_, v)) => v.push(e),
                None => rel.push((o, vec![e])),
            }
        }
    }
    rel.sort_by_key(|(a, _)| *a);
    rel
}

fn without(bundle: &[EdgeId], e: EdgeId) -> Vec<EdgeId> {
    bundle.iter().copied().filter(|&x| x != e).collect()
}

fn scan_agent<V: Valuation>(
    inst: &Instance<V>,
    owner: &[Option<AgentId>],
    bundles: &[Vec<EdgeId>],
    i: AgentId,
    notion: Notion,
    sink: &mut dyn FnMut(Violation) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let own_bundle = &bundles[i];
    let own = inst.value(i, own_bundle);
    let empty = inst.value(i, &[]);
    let rel = relevant_by_owner(inst, owner, i);

    let mut visit = |j: AgentId, rel_j: &[EdgeId]| -> ControlFlow<()> {
        let vj = if rel_j.is_empty() { empty } else { inst.value(i, rel_j) };
        if vj <= own {
            return ControlFlow::Continue(());
        }
        if notion == Notion::EF {
            return sink(Violation { envious: i, envied: j, edge: None, side: Side::EnviedBundle });
        }
        let mut found: Vec<(EdgeId, Side)> = Vec::new();
        if let Some(rule) = notion.condition1() {
            for &e in &bundles[j] {
                let hit = match inst.sign(i, e) {
                    SignClass::Dummy => rule == Removal1::NonChore,
                    SignClass::Good => own < inst.value(i, &without(rel_j, e)),
                    SignClass::Chore => false,
                };
                if hit {
                    found.push((e, Side::EnviedBundle));
                }
            }
        }
        if let Some(rule) = notion.condition2() {
            for &e in own_bundle {
                let hit = match inst.sign(i, e) {
                    SignClass::Dummy => rule == Removal2::NonGood,
                    SignClass::Chore => inst.value(i, &without(own_bundle, e)) < vj,
                    SignClass::Good => false,
                };
                if hit {
                    found.push((e, Side::OwnBundle));
                }
            }
        }
        found.sort_by_key(|&(e, _)| e);
        for (e, side) in found {
            sink(Violation { envious: i, envied: j, edge: Some(e), side })?;
        }
        ControlFlow::Continue(())
    };

    if empty > own {
        let mut k = 0;
        for j in 0..inst.n() {
            if j == i {
                continue;
            }
            let rel_j: &[EdgeId] = match rel.get(k) {
                Some((a, v)) if *a == j => {
                    k += 1;
                    v
                }
                _ => &[],
            };
            visit(j, rel_j)?;
        }
    } else {
        for (j, rel_j) in &rel {
            visit(*j, rel_j)?;
        }
    }
    ControlFlow::Continue(())
}
