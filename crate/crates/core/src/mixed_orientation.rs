//! Orientations for mixed instances on trees, stars and paths.

use std::collections::VecDeque;

use crate::alloc::{Allocation, DecideResult};
use crate::error::SolveError;
use crate::fairness::satisfies;
use crate::model::{AgentId, EdgeId, Instance, SignClass, Valuation};
use crate::notion::Notion;

/// BFS layers of a tree, starting at 1 for the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BfsLayers {
    pub root: AgentId,
    pub layer: Vec<usize>,
    /// Vertices in BFS visiting order.
    pub order: Vec<AgentId>,
    /// Edge to the parent, `None` for the root.
    pub parent_edge: Vec<Option<EdgeId>>,
}

impl BfsLayers {
    pub fn compute<V: Valuation>(inst: &Instance<V>, root: AgentId) -> Self {
        let n = inst.n();
        let mut layer = vec![0; n];
        let mut parent_edge = vec![None; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([root]);
        layer[root] = 1;
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &e in inst.incident(x) {
                let y = inst.edge(e).other(x);
                if layer[y] == 0 {
                    layer[y] = layer[x] + 1;
                    parent_edge[y] = Some(e);
                    queue.push_back(y);
                }
            }
        }
        BfsLayers { root, layer, order, parent_edge }
    }
}

fn check_tree<V: Valuation>(inst: &Instance<V>, root: AgentId) -> Result<BfsLayers, SolveError> {
    if root >= inst.n() {
        return Err(SolveError::NotATree(format!("root {root} out of range")));
    }
    if inst.m() + 1 != inst.n() {
        return Err(SolveError::NotATree(format!("{} edges on {} vertices", inst.m(), inst.n())));
    }
    let layers = BfsLayers::compute(inst, root);
    if layers.order.len() != inst.n() {
        return Err(SolveError::NotATree("graph is disconnected".into()));
    }
    Ok(layers)
}

/// EFX⁺₀ orientation of a tree from BFS layers rooted at `root`.
///
/// The root keeps her goods; every other agent takes the edge to her parent
/// (if still free) together with her free goods.
pub fn tree_efxplus0_orientation<V: Valuation>(inst: &Instance<V>, root: AgentId) -> Result<Allocation, SolveError> {
    let layers = check_tree(inst, root)?;
    let mut alloc = Allocation::empty(inst.n(), inst.m());
    for &e in inst.goods_of(root) {
        alloc.assign(e, root);
    }
    for &a in layers.order.iter().skip(1) {
        let pe = layers.parent_edge[a].expect("non-root has a parent");
        debug_assert_eq!(layers.layer[inst.edge(pe).other(a)] + 1, layers.layer[a]);
        if !alloc.is_allocated(pe) {
            alloc.assign(pe, a);
        }
        for &e in inst.goods_of(a) {
            if !alloc.is_allocated(e) {
                alloc.assign(e, a);
            }
        }
    }
    debug_assert!(alloc.is_complete());
    Ok(alloc)
}

/// Center of a star with at least two edges.
fn star_center<V: Valuation>(inst: &Instance<V>) -> Option<AgentId> {
    let e0 = inst.edge(0);
    [e0.u, e0.v].into_iter().find(|&c| inst.edges().iter().all(|ed| ed.has(c)))
}

/// Decides EFX⁰₀ or EFX⁰₋ orientation existence on a star.
pub fn star_efx00_decide<V: Valuation>(inst: &Instance<V>, notion: Notion) -> Result<DecideResult, SolveError> {
    if !matches!(notion, Notion::EFX00 | Notion::EFX0Minus) {
        return Err(SolveError::UnsupportedNotion(notion));
    }
    let mut alloc = Allocation::empty(inst.n(), inst.m());
    if inst.m() <= 1 {
        if let Some(ed) = inst.edges().first() {
            alloc.assign(ed.id, ed.u);
        }
        return Ok(DecideResult::found(alloc));
    }
    let center = star_center(inst).ok_or(SolveError::NotAStar)?;
    let satellite_chore = inst.edges().iter().any(|ed| inst.sign(ed.other(center), ed.id).is_chore());
    for ed in inst.edges() {
        let sat = ed.other(center);
        let to_center = satellite_chore
            && match inst.sign(sat, ed.id) {
                SignClass::Chore => true,
                SignClass::Good => false,
                // Only the center cares where these go. A dummy for her is
                // harmless in her own bundle unless dummies may be removed from it.
                SignClass::Dummy => match inst.sign(center, ed.id) {
                    SignClass::Good => true,
                    SignClass::Chore => false,
                    SignClass::Dummy => notion == Notion::EFX0Minus,
                },
            };
        alloc.assign(ed.id, if to_center { center } else { sat });
    }
    if satisfies(inst, &alloc, notion).expect("complete orientation") {
        Ok(DecideResult::found(alloc))
    } else {
        Ok(DecideResult::none())
    }
}

/// Vertices of the path in order, starting from the end with the smaller id.
fn path_vertices<V: Valuation>(inst: &Instance<V>) -> Option<Vec<AgentId>> {
    let ends: Vec<AgentId> = (0..inst.n()).filter(|&a| inst.degree(a) == 1).collect();
    if ends.len() != 2 || (0..inst.n()).any(|a| inst.degree(a) > 2) {
        return None;
    }
    let mut verts = vec![ends[0]];
    let mut prev_edge = usize::MAX;
    loop {
        let x = *verts.last().unwrap();
        let next = inst.incident(x).iter().find(|&&e| e != prev_edge);
        match next {
            Some(&e) => {
                prev_edge = e;
                verts.push(inst.edge(e).other(x));
            }
            None => break,
        }
    }
    (verts.len() == inst.m() + 1).then_some(verts)
}

struct PathView<'a, V: Valuation> {
    inst: &'a Instance<V>,
    p: Vec<AgentId>,
    e: Vec<EdgeId>,
    chore: Vec<bool>,
}

impl<V: Valuation> PathView<'_, V> {
    fn v(&self, agent_pos: usize, edge_pos: usize) -> crate::Value {
        self.inst.value_of_edge(self.p[agent_pos], self.e[edge_pos])
    }

    /// The right-side pattern for chore edge `t` inside edge positions `lo..hi`.
    fn right_pattern(&self, t: usize, hi: usize) -> bool {
        t + 2 < hi
            && !self.chore[t + 1]
            && !self.chore[t + 2]
            && self.v(t + 1, t) + self.v(t + 1, t + 1) >= crate::Value::ZERO
            && self.v(t + 2, t + 1) <= self.v(t + 2, t + 2)
    }

    /// The mirrored left-side pattern.
    fn left_pattern(&self, t: usize, lo: usize) -> bool {
        t >= lo + 2
            && !self.chore[t - 1]
            && !self.chore[t - 2]
            && self.v(t, t) + self.v(t, t - 1) >= crate::Value::ZERO
            && self.v(t - 1, t - 1) <= self.v(t - 1, t - 2)
    }

    /// Solves the sub-path of edge positions `lo..hi`, writing owners by position.
    fn solve(&self, lo: usize, hi: usize, top: bool, out: &mut [usize]) -> bool {
        let k = hi - lo;
        let chores: Vec<usize> = (lo..hi).filter(|&t| self.chore[t]).collect();
        if chores.is_empty() || (top && k == 1) {
            for t in lo..hi {
                out[t] = t + 1;
            }
            return true;
        }
        // A longer path forces every agent to keep a non-negative bundle, so
        // short pieces holding a chore cannot be completed.
        if k <= 2 {
            return false;
        }
        let mut one_sided = None;
        for &t in &chores {
            let r = self.right_pattern(t, hi);
            let l = self.left_pattern(t, lo);
            if !r && !l {
                return false;
            }
            if r != l && one_sided.is_none() {
                one_sided = Some((t, r));
            }
        }
        match one_sided {
            Some((t, true)) => {
                out[t] = t + 1;
                out[t + 1] = t + 1;
                out[t + 2] = t + 2;
                self.solve(lo, t, false, out) && self.solve(t + 3, hi, false, out)
            }
            Some((t, false)) => {
                out[t] = t;
                out[t - 1] = t;
                out[t - 2] = t - 1;
                self.solve(lo, t - 2, false, out) && self.solve(t + 1, hi, false, out)
            }
            None => {
                for t in lo..hi {
                    out[t] = if self.chore[t] { t } else { t + 1 };
                }
                true
            }
        }
    }
}

/// Decides EFX⁰₋ (equivalently EFX⁰₀) orientation existence on a path whose
/// edges are each a good for both endpoints or a chore for both.
pub fn path_efx0minus_decide<V: Valuation>(inst: &Instance<V>) -> Result<DecideResult, SolveError> {
    if inst.m() == 0 {
        return Ok(DecideResult::found(Allocation::empty(inst.n(), 0)));
    }
    let p = path_vertices(inst).ok_or(SolveError::NotAPath)?;
    let e: Vec<EdgeId> = p.windows(2).map(|w| inst.edge_between(w[0], w[1]).unwrap()).collect();
    let mut chore = Vec::with_capacity(e.len());
    for &id in &e {
        match inst.edge_signs(id) {
            [SignClass::Good, SignClass::Good] => chore.push(false),
            [SignClass::Chore, SignClass::Chore] => chore.push(true),
            _ => return Err(SolveError::UnsupportedSignPattern { edge: id }),
        }
    }
    let view = PathView { inst, p, e, chore };
    let k = view.e.len();
    let mut owner_pos = vec![usize::MAX; k];
    if !view.solve(0, k, true, &mut owner_pos) {
        return Ok(DecideResult::none());
    }
    let mut alloc = Allocation::empty(inst.n(), inst.m());
    for t in 0..k {
        alloc.assign(view.e[t], view.p[owner_pos[t]]);
    }
    Ok(DecideResult::found(alloc))
}
