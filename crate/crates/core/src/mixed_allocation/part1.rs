//! Part 1 of the EFX⁰₋ algorithm: a partial orientation with Properties (1)-(8).

use serde::Serialize;

use crate::alloc::Allocation;
use crate::error::SolveError;
use crate::fairness::{
    audit_properties, open_non_chores, property3_violation, safe_for, satisfies_raw, EnvyPath, EnvyState, PropertySet,
};
use crate::model::{AgentId, EdgeId, Instance, Valuation};
use crate::notion::Notion;

/// One state change of Part 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub op: &'static str,
    pub agents: Vec<AgentId>,
    pub before: PropertySet,
    pub after: PropertySet,
    /// Whether the partial orientation after the step is EFX⁰₋.
    pub efx0minus: bool,
    pub owners: Vec<Option<AgentId>>,
}

#[derive(Debug, Clone)]
pub struct Part1State {
    pub alloc: Allocation,
    pub trace: Vec<TraceStep>,
}

impl Part1State {
    pub fn properties<V: Valuation>(&self, inst: &Instance<V>) -> PropertySet {
        audit_properties(inst, &self.alloc)
    }

    fn record<V: Valuation>(&mut self, inst: &Instance<V>, op: &'static str, agents: Vec<AgentId>, before: PropertySet) {
        let after = audit_properties(inst, &self.alloc);
        self.trace.push(TraceStep {
            op,
            agents,
            before,
            after,
            efx0minus: is_efx0minus_partial(inst, &self.alloc),
            owners: self.alloc.owners().to_vec(),
        });
    }
}

pub(crate) fn is_efx0minus_partial<V: Valuation>(inst: &Instance<V>, alloc: &Allocation) -> bool {
    satisfies_raw(inst, alloc.owners(), alloc.bundles(), Notion::EFX0Minus)
}

fn precondition(step: &'static str, detail: impl Into<String>) -> SolveError {
    SolveError::PreconditionViolated { step, detail: detail.into() }
}

/// The agent's favourite free non-chore edge, smallest id on ties.
fn best_open<V: Valuation>(inst: &Instance<V>, alloc: &Allocation, i: AgentId) -> Option<EdgeId> {
    let mut best: Option<EdgeId> = None;
    for e in open_non_chores(inst, alloc, i) {
        if best.map_or(true, |b| inst.value_of_edge(i, e) > inst.value_of_edge(i, b)) {
            best = Some(e);
        }
    }
    best
}

/// Replaces the bundles of the listed agents. Their old edges that are not
/// handed out again return to the pool.
fn rebundle(alloc: &mut Allocation, changes: Vec<(AgentId, Vec<EdgeId>)>) {
    for (a, _) in &changes {
        alloc.clear_bundle(*a);
    }
    for (a, es) in changes {
        for e in es {
            debug_assert!(alloc.owner(e).is_none(), "edge {e} taken from an uninvolved agent");
            alloc.assign(e, a);
        }
    }
}

fn edge_of<V: Valuation>(inst: &Instance<V>, a: AgentId, b: AgentId, step: &'static str) -> Result<EdgeId, SolveError> {
    inst.edge_between(a, b)
        .ok_or_else(|| precondition(step, format!("agents {a} and {b} are not adjacent")))
}

/// `a_{i_l}` takes `e_{i_{l-1}, i_l}` for every `l` in `1..=s`.
fn path_shift<V: Valuation>(
    inst: &Instance<V>,
    path: &EnvyPath,
    step: &'static str,
) -> Result<Vec<(AgentId, Vec<EdgeId>)>, SolveError> {
    path.agents
        .windows(2)
        .map(|w| Ok((w[1], vec![edge_of(inst, w[0], w[1], step)?])))
        .collect()
}

/// Each agent picks her favourite free non-chore edge, handing the turn to
/// the other endpoint of the edge she picked.
pub fn initial_orientation<V: Valuation>(inst: &Instance<V>) -> Part1State {
    let mut alloc = Allocation::empty(inst.n(), inst.m());
    for start in 0..inst.n() {
        let mut k = start;
        while alloc.bundle(k).is_empty() {
            let Some(e) = best_open(inst, &alloc, k) else { break };
            alloc.assign(e, k);
            k = inst.edge(e).other(k);
        }
    }
    let mut st = Part1State { alloc, trace: Vec::new() };
    st.record(inst, "initial", Vec::new(), PropertySet::default());
    st
}

fn step_cap<V: Valuation>(inst: &Instance<V>) -> usize {
    (4 * inst.n() * inst.m()).max(16)
}

/// Envied agents trade up to all their free non-chore edges; anyone who then
/// prefers a single free edge to her bundle swaps for it.
pub fn repair_property2<V: Valuation>(inst: &Instance<V>, mut st: Part1State) -> Result<Part1State, SolveError> {
    let cap = step_cap(inst);
    let mut steps = 0;
    loop {
        let envy = EnvyState::compute(inst, &st.alloc);
        let trigger = envy.envied_agents().into_iter().find(|&i| {
            inst.value(i, st.alloc.bundle(i)) < inst.value(i, &open_non_chores(inst, &st.alloc, i))
        });
        let Some(i) = trigger else { return Ok(st) };
        let before = st.properties(inst);
        let open = open_non_chores(inst, &st.alloc, i);
        rebundle(&mut st.alloc, vec![(i, open)]);
        st.record(inst, "property2-take-all", vec![i], before);

        loop {
            steps += 1;
            if steps > cap {
                return Err(SolveError::NonTermination { cap, props: st.properties(inst) });
            }
            let upgrade = (0..inst.n()).find_map(|j| {
                let e = best_open(inst, &st.alloc, j)?;
                (inst.value(j, st.alloc.bundle(j)) < inst.value_of_edge(j, e)).then_some((j, e))
            });
            let Some((j, e)) = upgrade else { break };
            let before = st.properties(inst);
            rebundle(&mut st.alloc, vec![(j, vec![e])]);
            st.record(inst, "property2-swap", vec![j], before);
        }
    }
}

/// Gives `e_{i, i_s}` and the free non-chore edges of `i` to `i`, shifting
/// every edge of the path one step towards its envier.
fn case1_rotation<V: Valuation>(inst: &Instance<V>, alloc: &mut Allocation, path: &EnvyPath, step: &'static str) -> Result<(), SolveError> {
    let i = path.start();
    let e = edge_of(inst, i, path.terminal(), step)?;
    let mut take = open_non_chores(inst, alloc, i);
    take.push(e);
    let mut changes = vec![(i, take)];
    changes.extend(path_shift(inst, path, step)?);
    rebundle(alloc, changes);
    Ok(())
}

/// True when the terminal of `path` holds the edge to its start and is not safe for it.
fn case1_applies<V: Valuation>(inst: &Instance<V>, alloc: &Allocation, path: &EnvyPath) -> bool {
    let (i, t) = (path.start(), path.terminal());
    path.s() > 0
        && inst.edge_between(i, t).is_some_and(|e| alloc.owner(e) == Some(t))
        && !safe_for(inst, alloc, t, i)
}

/// Repairs one pair of envied agents with no common safe non-envied agent.
pub fn repair_property3<V: Valuation>(inst: &Instance<V>, mut st: Part1State) -> Result<Part1State, SolveError> {
    const STEP: &str = "property3";
    let Some((i, j)) = property3_violation(inst, &st.alloc) else { return Ok(st) };
    let before = st.properties(inst);
    let envy = EnvyState::compute(inst, &st.alloc);
    let cycle = |e: crate::fairness::EnvyCycleDetected| precondition(STEP, e.to_string());
    let pi = envy.path_from(i).map_err(cycle)?;
    let pj = envy.path_from(j).map_err(cycle)?;

    if case1_applies(inst, &st.alloc, &pi) {
        case1_rotation(inst, &mut st.alloc, &pi, STEP)?;
        st.record(inst, "property3-case1", pi.agents.clone(), before);
        return Ok(st);
    }
    if case1_applies(inst, &st.alloc, &pj) {
        case1_rotation(inst, &mut st.alloc, &pj, STEP)?;
        st.record(inst, "property3-case1", pj.agents.clone(), before);
        return Ok(st);
    }

    // Cases 2 and 3: each terminal holds the edge to the other start and is unsafe for it.
    let (is, jt) = (pi.terminal(), pj.terminal());
    let e_j_is = inst.edge_between(j, is).filter(|&e| st.alloc.owner(e) == Some(is));
    let e_i_jt = inst.edge_between(i, jt).filter(|&e| st.alloc.owner(e) == Some(jt));
    let (Some(e_j_is), Some(e_i_jt)) = (e_j_is, e_i_jt) else {
        return Err(precondition(STEP, format!("no case applies to envied pair ({i}, {j})")));
    };
    if safe_for(inst, &st.alloc, is, j) || safe_for(inst, &st.alloc, jt, i) {
        return Err(precondition(STEP, format!("terminals of ({i}, {j}) are safe")));
    }
    if pi.agents.iter().any(|a| pj.agents.contains(a)) {
        return Err(precondition(STEP, format!("envy paths of {i} and {j} intersect")));
    }

    let v_ij = inst.edge_between(i, j).map_or(crate::Value::ZERO, |e| inst.value_of_edge(i, e));
    let mut touched: Vec<AgentId> = pi.agents.clone();
    if v_ij >= inst.value_of_edge(i, e_i_jt) {
        // Case 2: a_i re-picks, the i-path shifts and e_{j, i_s} is released.
        let pick = best_open(inst, &st.alloc, i);
        let mut changes = vec![(i, pick.into_iter().collect())];
        changes.extend(path_shift(inst, &pi, STEP)?);
        rebundle(&mut st.alloc, changes);
        debug_assert!(st.alloc.owner(e_j_is).is_none());
        st.record(inst, "property3-case2", touched, before);
    } else {
        // Case 3: a_j takes e_{j, i_s} with her free non-chores, both paths shift,
        // e_{i, j_t} is released and a_i re-picks.
        let mut take = open_non_chores(inst, &st.alloc, j);
        take.push(e_j_is);
        let mut changes = vec![(i, Vec::new()), (j, take)];
        changes.extend(path_shift(inst, &pj, STEP)?);
        changes.extend(path_shift(inst, &pi, STEP)?);
        rebundle(&mut st.alloc, changes);
        debug_assert!(st.alloc.owner(e_i_jt).is_none());
        if let Some(e) = best_open(inst, &st.alloc, i) {
            st.alloc.assign(e, i);
        }
        touched.extend(pj.agents.iter().copied());
        st.record(inst, "property3-case3", touched, before);
    }
    repair_property2(inst, st)
}

/// Applies the Case-1 rotation until every agent on an envy path ending at a
/// non-envied agent is safe for the path's start.
pub fn repair_property8<V: Valuation>(inst: &Instance<V>, mut st: Part1State) -> Result<Part1State, SolveError> {
    const STEP: &str = "property8";
    let cap = step_cap(inst);
    for _ in 0..cap {
        let envy = EnvyState::compute(inst, &st.alloc);
        let mut acted = false;
        for i0 in envy.envied_agents() {
            let path = envy.path_from(i0).map_err(|e| precondition(STEP, e.to_string()))?;
            if path.agents[1..].iter().all(|&a| safe_for(inst, &st.alloc, a, i0)) {
                continue;
            }
            if !case1_applies(inst, &st.alloc, &path) {
                return Err(precondition(STEP, format!("unsafe agent on the path from {i0} is not its terminal")));
            }
            let before = st.properties(inst);
            case1_rotation(inst, &mut st.alloc, &path, STEP)?;
            st.record(inst, "property8-rotation", path.agents.clone(), before);
            acted = true;
            break;
        }
        if !acted {
            return Ok(st);
        }
    }
    Err(SolveError::NonTermination { cap, props: st.properties(inst) })
}

/// Runs the initial orientation and then repairs the lowest-numbered violated
/// property until all eight hold.
pub fn part1<V: Valuation>(inst: &Instance<V>) -> Result<Part1State, SolveError> {
    let mut st = initial_orientation(inst);
    let cap = step_cap(inst);
    for _ in 0..cap {
        let props = st.properties(inst);
        if props == PropertySet::ALL {
            if !is_efx0minus_partial(inst, &st.alloc) {
                return Err(precondition("part1", "final partial orientation is not EFX0-"));
            }
            return Ok(st);
        }
        if let Some(k) = props.first_missing(&[1, 4, 5, 6, 7]) {
            return Err(precondition("part1", format!("property {k} lost (have {props:?})")));
        }
        st = match props.first_missing(&[2, 3, 8]) {
            Some(2) => repair_property2(inst, st)?,
            Some(3) => repair_property3(inst, st)?,
            _ => repair_property8(inst, st)?,
        };
    }
    Err(SolveError::NonTermination { cap, props: st.properties(inst) })
}
