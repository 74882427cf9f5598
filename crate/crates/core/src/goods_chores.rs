//! Goods and chores instances: orientation and allocation procedures.

use crate::alloc::{Allocation, DecideResult};
use crate::mixed_allocation::efx0minus_allocation;
use crate::error::SolveError;
use crate::model::{AgentId, EdgeId, Instance, SignClass, Valuation};

fn find_class<V: Valuation>(inst: &Instance<V>, class: SignClass) -> Option<(AgentId, EdgeId)> {
    inst.edges().iter().find_map(|ed| {
        let s = inst.edge_signs(ed.id);
        if s[0] == class {
            Some((ed.u, ed.id))
        } else if s[1] == class {
            Some((ed.v, ed.id))
        } else {
            None
        }
    })
}

pub(crate) fn require_goods<V: Valuation>(inst: &Instance<V>) -> Result<(), SolveError> {
    match find_class(inst, SignClass::Chore) {
        Some((agent, edge)) => Err(SolveError::NotGoodsInstance { agent, edge }),
        None => Ok(()),
    }
}

pub(crate) fn require_chores<V: Valuation>(inst: &Instance<V>) -> Result<(), SolveError> {
    match find_class(inst, SignClass::Good) {
        Some((agent, edge)) => Err(SolveError::NotChoresInstance { agent, edge }),
        None => Ok(()),
    }
}

/// Every edge to its lower-indexed endpoint.
pub fn goods_efxplus_orientation<V: Valuation>(inst: &Instance<V>) -> Result<Allocation, SolveError> {
    require_goods(inst)?;
    let mut alloc = Allocation::empty(inst.n(), inst.m());
    for ed in inst.edges() {
        alloc.assign(ed.id, ed.u);
    }
    Ok(alloc)
}

/// EFX⁰ allocation for goods, obtained from the EFX⁰₋ algorithm.
pub fn goods_efx0_allocation<V: Valuation>(inst: &Instance<V>) -> Result<Allocation, SolveError> {
    require_goods(inst)?;
    efx0minus_allocation(inst)
}

/// Envy-free allocation for chores: each edge goes to the smallest agent that is not an endpoint.
pub fn chores_ef_allocation<V: Valuation>(inst: &Instance<V>) -> Result<Allocation, SolveError> {
    require_chores(inst)?;
    if inst.m() > 0 && inst.n() <= 2 {
        return Err(SolveError::TooFewAgents { n: inst.n() });
    }
    let mut alloc = Allocation::empty(inst.n(), inst.m());
    for ed in inst.edges() {
        let owner = (0..inst.n()).find(|&a| !ed.has(a)).expect("n >= 3");
        alloc.assign(ed.id, owner);
    }
    Ok(alloc)
}

/// Decides whether a chores instance has an EFX₋ orientation.
///
/// Edges that are dummies for some endpoint are set aside; the rest must form
/// components with no more edges than vertices.
pub fn chores_efxminus_orientation<V: Valuation>(inst: &Instance<V>) -> Result<DecideResult, SolveError> {
    require_chores(inst)?;
    let n = inst.n();
    let mut alloc = Allocation::empty(n, inst.m());
    let mut adj: Vec<Vec<(AgentId, EdgeId)>> = vec![Vec::new(); n];
    for ed in inst.edges() {
        let [su, sv] = inst.edge_signs(ed.id);
        if su == SignClass::Dummy {
            alloc.assign(ed.id, ed.u);
        } else if sv == SignClass::Dummy {
            alloc.assign(ed.id, ed.v);
        } else {
            adj[ed.u].push((ed.v, ed.id));
            adj[ed.v].push((ed.u, ed.id));
        }
    }

    let mut comp = vec![usize::MAX; n];
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut verts = vec![start];
        comp[start] = start;
        let mut k = 0;
        let mut edge_ends = 0;
        while k < verts.len() {
            let x = verts[k];
            k += 1;
            for &(y, _) in &adj[x] {
                edge_ends += 1;
                if comp[y] == usize::MAX {
                    comp[y] = start;
                    verts.push(y);
                }
            }
        }
        let edges = edge_ends / 2;
        if edges > verts.len() {
            return Ok(DecideResult::none());
        }
        orient_component(&adj, &verts, edges == verts.len(), &mut alloc);
    }
    Ok(DecideResult::found(alloc))
}

/// Gives every vertex of a tree or unicyclic component at most one edge.
fn orient_component(adj: &[Vec<(AgentId, EdgeId)>], verts: &[AgentId], unicyclic: bool, alloc: &mut Allocation) {
    let root = *verts.iter().min().unwrap();
    let mut roots = vec![root];
    let mut done = std::collections::HashSet::new();
    if unicyclic {
        let cycle = find_cycle(adj, root);
        for k in 0..cycle.len() {
            let (x, e) = cycle[k];
            alloc.assign(e, x);
            done.insert(e);
        }
        roots = cycle.iter().map(|&(x, _)| x).collect();
    }
    // Every non-root vertex takes the edge to its parent.
    let mut visited: std::collections::HashSet<AgentId> = roots.iter().copied().collect();
    let mut stack = roots;
    while let Some(x) = stack.pop() {
        for &(y, e) in &adj[x] {
            if done.contains(&e) || visited.contains(&y) {
                continue;
            }
            visited.insert(y);
            alloc.assign(e, y);
            done.insert(e);
            stack.push(y);
        }
    }
}

/// Cycle of a unicyclic component as `(vertex, edge it receives)` pairs.
fn find_cycle(adj: &[Vec<(AgentId, EdgeId)>], start: AgentId) -> Vec<(AgentId, EdgeId)> {
    // Iterative DFS remembering the edge used to enter each vertex.
    let mut parent: std::collections::HashMap<AgentId, (AgentId, EdgeId)> = Default::default();
    let mut stack = vec![(start, usize::MAX)];
    let mut seen = std::collections::HashSet::new();
    while let Some((x, via)) = stack.pop() {
        if !seen.insert(x) {
            continue;
        }
        for &(y, e) in &adj[x] {
            if e == via {
                continue;
            }
            if seen.contains(&y) {
                // Back edge x-y closes the cycle y -> ... -> x -> y.
                let mut cyc = vec![(y, e)];
                let mut cur = x;
                let mut path = Vec::new();
                while cur != y {
                    let (p, pe) = parent[&cur];
                    path.push((cur, pe));
                    cur = p;
                }
                // Each cycle vertex receives the edge from its predecessor.
                cyc.extend(path);
                return cyc;
            }
            parent.insert(y, (x, e));
            stack.push((y, e));
        }
    }
    unreachable!("component declared unicyclic has no cycle")
}

/// Result of one push attempt.
#[derive(Debug, Clone)]
pub struct PushOutcome {
    pub flag: bool,
    pub orientation: Allocation,
    /// The agents that received edges (the set U), ascending.
    pub touched: Vec<AgentId>,
    pub remaining: Vec<EdgeId>,
}

/// Gives `e` to `target` and pushes the target's other open edges outward.
///
/// Works on a copy; on failure the input state is returned unchanged.
pub fn push<V: Valuation>(
    inst: &Instance<V>,
    state: &Allocation,
    e: EdgeId,
    target: AgentId,
    remaining: &[EdgeId],
) -> PushOutcome {
    let mut open = vec![false; inst.m()];
    for &r in remaining {
        open[r] = true;
    }
    let mut alloc = state.clone();
    let mut touched = Vec::new();
    let mut work = vec![(e, target)];
    let mut ok = true;
    while let Some((edge, u)) = work.pop() {
        // Already grabbed by `u` together with her other dummies.
        if !open[edge] && alloc.owner(edge) == Some(u) {
            continue;
        }
        if !alloc.bundle(u).is_empty() || !open[edge] {
            ok = false;
            break;
        }
        alloc.assign(edge, u);
        open[edge] = false;
        touched.push(u);
        if inst.sign(u, edge) == SignClass::Dummy {
            for &d in inst.dummies_of(u) {
                if open[d] {
                    alloc.assign(d, u);
                    open[d] = false;
                }
            }
        }
        // Push in descending id so the smallest edge is handled first.
        for &f in inst.incident(u).iter().rev() {
            if open[f] {
                work.push((f, inst.edge(f).other(u)));
            }
        }
    }
    if !ok {
        return PushOutcome {
            flag: false,
            orientation: state.clone(),
            touched: Vec::new(),
            remaining: remaining.to_vec(),
        };
    }
    touched.sort_unstable();
    touched.dedup();
    PushOutcome {
        flag: true,
        orientation: alloc,
        touched,
        remaining: (0..inst.m()).filter(|&r| open[r]).collect(),
    }
}

/// Decides whether a chores instance has an EFX₀ orientation.
pub fn chores_efx0_orientation<V: Valuation>(inst: &Instance<V>) -> Result<DecideResult, SolveError> {
    require_chores(inst)?;
    let mut alloc = Allocation::empty(inst.n(), inst.m());
    let mut remaining: Vec<EdgeId> = (0..inst.m()).collect();
    while !remaining.is_empty() {
        let i = (0..inst.n())
            .find(|&a| inst.incident(a).iter().any(|e| remaining.binary_search(e).is_ok()))
            .expect("an open edge has endpoints");
        let options: Vec<EdgeId> = inst
            .incident(i)
            .iter()
            .copied()
            .filter(|e| remaining.binary_search(e).is_ok())
            .collect();
        let mut progressed = false;
        for e in options {
            let out = push(inst, &alloc, e, i, &remaining);
            if out.flag {
                debug_assert!(is_maximal(inst, &remaining, &out));
                alloc = out.orientation;
                remaining = out.remaining;
                progressed = true;
                break;
            }
        }
        if !progressed {
            return Ok(DecideResult::none());
        }
    }
    Ok(DecideResult::found(alloc))
}

/// Every edge of the subproblem (`before`, the free edges when the push
/// started) that touches an agent of `U` is allocated within `U`.
pub fn is_maximal<V: Valuation>(inst: &Instance<V>, before: &[EdgeId], out: &PushOutcome) -> bool {
    out.touched.iter().all(|&a| {
        inst.incident(a)
            .iter()
            .filter(|e| before.binary_search(e).is_ok())
            .all(|&e| out.orientation.owner(e).is_some_and(|o| out.touched.binary_search(&o).is_ok()))
    })
}

/// The shape of EFX₀ chores orientations: every agent holds either exactly one
/// edge, which is a chore for her, or only dummies.
pub fn chores_shape_holds<V: Valuation>(inst: &Instance<V>, alloc: &Allocation) -> bool {
    (0..inst.n()).all(|a| {
        let b = alloc.bundle(a);
        (b.len() == 1 && inst.sign(a, b[0]).is_chore()) || b.iter().all(|&e| inst.sign(a, e) == SignClass::Dummy)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::{is_envy_free, satisfies};
    use crate::notion::Notion;

    fn ex31() -> Instance {
        Instance::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (0, 3), (0, 2)], &[(-1, -1); 5]).unwrap()
    }

    #[test]
    fn goods_triangle_orientation() {
        let inst = Instance::from_pairs(3, &[(0, 1), (1, 2), (0, 2)], &[(1, 1); 3]).unwrap();
        let o = goods_efxplus_orientation(&inst).unwrap();
        assert_eq!(o.owners(), &[Some(0), Some(1), Some(0)]);
        assert!(satisfies(&inst, &o, Notion::EFXgPlus).unwrap());
    }

    #[test]
    fn goods_solvers_reject_chores() {
        let inst = Instance::from_pairs(2, &[(0, 1)], &[(1, -1)]).unwrap();
        assert_eq!(
            goods_efxplus_orientation(&inst).unwrap_err(),
            SolveError::NotGoodsInstance { agent: 1, edge: 0 }
        );
    }

    #[test]
    fn chores_ef_examples() {
        let inst = Instance::from_pairs(3, &[(0, 1)], &[(-1, -1)]).unwrap();
        assert_eq!(chores_ef_allocation(&inst).unwrap().owners(), &[Some(2)]);
        let c4 = Instance::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[(-1, -1); 4]).unwrap();
        let a = chores_ef_allocation(&c4).unwrap();
        assert_eq!(a.owners(), &[Some(2), Some(0), Some(0), Some(1)]);
        assert!(is_envy_free(&c4, &a).unwrap());
        let two = Instance::from_pairs(2, &[(0, 1)], &[(-1, -1)]).unwrap();
        assert_eq!(chores_ef_allocation(&two).unwrap_err(), SolveError::TooFewAgents { n: 2 });
    }

    #[test]
    fn efxminus_examples() {
        assert!(!chores_efxminus_orientation(&ex31()).unwrap().exists);
        let tri = Instance::from_pairs(3, &[(0, 1), (1, 2), (0, 2)], &[(-1, -1); 3]).unwrap();
        let r = chores_efxminus_orientation(&tri).unwrap();
        let w = r.witness.unwrap();
        assert!((0..3).all(|a| w.bundle(a).len() == 1));
        assert!(satisfies(&tri, &w, Notion::EFXcMinus).unwrap());
        let one = Instance::from_pairs(2, &[(0, 1)], &[(-1, 0)]).unwrap();
        assert_eq!(chores_efxminus_orientation(&one).unwrap().witness.unwrap().owners(), &[Some(1)]);
    }

    #[test]
    fn efx0_examples() {
        assert!(!chores_efx0_orientation(&ex31()).unwrap().exists);
        let c4 = Instance::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)], &[(-1, -1); 4]).unwrap();
        let w = chores_efx0_orientation(&c4).unwrap().witness.unwrap();
        assert!((0..4).all(|a| w.bundle(a).len() == 1));
        assert!(satisfies(&c4, &w, Notion::EFXc0).unwrap());
        // Middle agent sees both edges as dummies, the leaves see chores. The
        // smallest agent is served first and keeps her chore.
        let p = Instance::from_pairs(3, &[(0, 1), (1, 2)], &[(-1, 0), (0, -1)]).unwrap();
        let w = chores_efx0_orientation(&p).unwrap().witness.unwrap();
        assert_eq!(w.owners(), &[Some(0), Some(1)]);
        assert!(satisfies(&p, &w, Notion::EFXc0).unwrap());
        assert!(chores_shape_holds(&p, &w));
        let both = Allocation::from_owners(3, &[1, 1]).unwrap();
        assert!(satisfies(&p, &both, Notion::EFXc0).unwrap());
    }

    #[test]
    fn push_examples() {
        let single = Instance::from_pairs(2, &[(0, 1)], &[(-1, -1)]).unwrap();
        let out = push(&single, &Allocation::empty(2, 1), 0, 0, &[0]);
        assert!(out.flag);
        assert_eq!(out.touched, vec![0]);

        let tri = Instance::from_pairs(3, &[(0, 1), (1, 2), (0, 2)], &[(-1, -1); 3]).unwrap();
        let out = push(&tri, &Allocation::empty(3, 3), 0, 0, &[0, 1, 2]);
        assert!(out.flag);
        assert_eq!(out.touched, vec![0, 1, 2]);
        assert_eq!(out.orientation.owners(), &[Some(0), Some(1), Some(2)]);
        assert!(is_maximal(&tri, &[0, 1, 2], &out));

        let mut busy = Allocation::empty(3, 3);
        busy.assign(2, 0);
        let out = push(&tri, &busy, 0, 0, &[0, 1]);
        assert!(!out.flag);
    }

    #[test]
    fn push_tolerates_edges_already_grabbed_as_dummies() {
        // a_3 grabs both of her dummies when e13 arrives, before e03 is delivered to her.
        let inst = Instance::from_pairs(
            4,
            &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3)],
            &[(-2, -2), (-1, -2), (-1, -2), (-2, 0), (-1, 0)],
        )
        .unwrap();
        let r = chores_efx0_orientation(&inst).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.owners(), &[Some(0), Some(2), Some(1), Some(3), Some(3)]);
        assert!(satisfies(&inst, &w, Notion::EFXc0).unwrap());
    }
}
