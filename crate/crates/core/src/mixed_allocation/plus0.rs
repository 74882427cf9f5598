//! EFX⁺₀ allocations for mixed instances.

use crate::alloc::Allocation;
use crate::model::{AgentId, EdgeId, Instance, SignClass, Valuation};
use crate::value::Value;

fn chore_both<V: Valuation>(inst: &Instance<V>, e: EdgeId) -> bool {
    inst.edge_signs(e).iter().all(|s| s.is_chore())
}

fn good_for_neither<V: Valuation>(inst: &Instance<V>, e: EdgeId) -> bool {
    inst.edge_signs(e).iter().all(|s| !s.is_good())
}

/// Hands every free edge to an endpoint that sees it as a good, lower one first.
fn goods_to_endpoints<V: Valuation>(inst: &Instance<V>, alloc: &mut Allocation) {
    for ed in inst.edges() {
        if alloc.is_allocated(ed.id) {
            continue;
        }
        match inst.edge_signs(ed.id) {
            [SignClass::Good, _] => alloc.assign(ed.id, ed.u),
            [_, SignClass::Good] => alloc.assign(ed.id, ed.v),
            _ => {}
        }
    }
}

/// The `(a_i, a_j)` pair used when every agent values her incident edges negatively.
///
/// Edges that are a non-chore for exactly one endpoint come first; `a_i` is an
/// endpoint for whom the edge is not a chore.
fn pick_pair<V: Valuation>(inst: &Instance<V>) -> Option<(AgentId, AgentId)> {
    let non_chore_ends = |e: EdgeId| -> Vec<AgentId> {
        let ed = inst.edge(e);
        [ed.u, ed.v].into_iter().filter(|&a| !inst.sign(a, e).is_chore()).collect()
    };
    let exact = (0..inst.m()).find(|&e| non_chore_ends(e).len() == 1);
    let e = exact.or_else(|| (0..inst.m()).find(|&e| !non_chore_ends(e).is_empty()))?;
    let i = non_chore_ends(e)[0];
    Some((i, inst.edge(e).other(i)))
}

/// EFX⁺₀ allocation for any instance.
pub fn efxplus0_allocation<V: Valuation>(inst: &Instance<V>) -> Allocation {
    let n = inst.n();
    let mut alloc = Allocation::empty(n, inst.m());
    if (0..inst.m()).all(|e| chore_both(inst, e)) {
        for ed in inst.edges() {
            // With three or more agents nobody envies a non-endpoint owner;
            // two agents share at most one edge, which goes to the lower one.
            let to = (0..n).find(|&a| !ed.has(a)).unwrap_or(ed.u);
            alloc.assign(ed.id, to);
        }
        return alloc;
    }

    if let Some(i) = (0..n).find(|&i| inst.value(i, inst.incident(i)) >= Value::ZERO) {
        for &e in inst.incident(i) {
            alloc.assign(e, i);
        }
        for e in 0..inst.m() {
            if !alloc.is_allocated(e) && good_for_neither(inst, e) {
                alloc.assign(e, i);
            }
        }
        goods_to_endpoints(inst, &mut alloc);
    } else {
        let (i, j) = pick_pair(inst).expect("some edge is not a chore for an endpoint");
        for &e in inst.incident(i) {
            if !inst.sign(i, e).is_chore() {
                alloc.assign(e, i);
            }
        }
        for ed in inst.edges() {
            if !alloc.is_allocated(ed.id) && !ed.has(i) && good_for_neither(inst, ed.id) {
                alloc.assign(ed.id, i);
            }
        }
        for &e in inst.goods_of(j) {
            if !alloc.is_allocated(e) {
                alloc.assign(e, j);
            }
        }
        for &e in inst.incident(i) {
            let k = inst.edge(e).other(i);
            if !alloc.is_allocated(e) && !inst.sign(k, e).is_good() {
                alloc.assign(e, j);
            }
        }
        goods_to_endpoints(inst, &mut alloc);
    }
    debug_assert!(alloc.is_complete());
    alloc
}
