//! Gadgets of the circuit compiler and the priceless-edge bookkeeping.
//!
//! A signal is a priceless edge `(w, w')`; the upper endpoint `w` holds it when
//! the signal is True. Every other edge is a small good worth ε₁ = 2 or ε₂ = 1
//! to both endpoints.

use efx_core::{AgentId, Allocation, EdgeId, Instance, Value};

use crate::bundle::{Builder, EdgeRole, GadgetInfo, GadgetKind, SignalEdge};
use crate::ReductionError;

pub const EPS1: i64 = 2;
pub const EPS2: i64 = 1;

/// Smallest integer bound that keeps `priceless` edges priceless:
/// one more than the sum over every other edge of its larger endpoint |value|.
pub fn priceless_bound(inst: &Instance, priceless: &[EdgeId]) -> Value {
    let mut sum = Value::int(1);
    for ed in inst.edges() {
        if !priceless.contains(&ed.id) {
            let (a, b) = (inst.value_of_edge(ed.u, ed.id).abs(), inst.value_of_edge(ed.v, ed.id).abs());
            sum += if a > b { a } else { b };
        }
    }
    sum
}

/// Checks the setting in which priceless edges force orientations: every
/// edge is a good for both endpoints, every agent has exactly one incident
/// priceless edge, and each priceless value beats the sum of all other edges.
pub fn check_priceless_preconditions(inst: &Instance, priceless: &[EdgeId]) -> Result<(), ReductionError> {
    let fail = |msg: String| Err(ReductionError::PricelessPrecondition(msg));
    for ed in inst.edges() {
        if !inst.sign(ed.u, ed.id).is_good() || !inst.sign(ed.v, ed.id).is_good() {
            return fail(format!("edge {} is not a good for both endpoints", ed.id));
        }
    }
    for a in 0..inst.n() {
        let k = inst.incident(a).iter().filter(|e| priceless.contains(e)).count();
        if k != 1 {
            return fail(format!("agent {a} has {k} incident priceless edges"));
        }
    }
    let bound = priceless_bound(inst, priceless);
    for &e in priceless {
        let ed = inst.edge(e);
        for a in [ed.u, ed.v] {
            if inst.value_of_edge(a, e) < bound {
                return fail(format!("edge {e} is worth less than {bound} to agent {a}"));
            }
        }
    }
    Ok(())
}

/// Local view of a signal edge while gadgets are wired up.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Sig {
    pub upper: AgentId,
    pub lower: AgentId,
}

impl Sig {
    pub fn of(s: &SignalEdge) -> Self {
        Sig { upper: s.upper, lower: s.lower }
    }

    pub fn holder(self, value: bool) -> AgentId {
        if value {
            self.upper
        } else {
            self.lower
        }
    }
}

/// OR gadget edges after the three signal edges, as (local name, ε class).
pub(crate) const OR_EDGES: [&str; 10] = [
    "(b1,b1')", "(b2,b2')", "(b3,b3')", "(a1',b1')", "(b1',b2')", "(b2',b3')", "(b3',a2')", "(b2',a3)",
    "(a1,a3')", "(a2,a3')",
];

fn gadget_edge(b: &mut Builder, g: usize, kind: GadgetKind, u: AgentId, v: AgentId, val: Option<i64>, local: &str) -> EdgeId {
    b.edge(u, v, val.map(|x| (x, x)), EdgeRole::Gadget { gadget: g, kind, local: local.to_string() })
}

/// NOT: `(a1,a2)` and `(a1',a2')`. WIRE: `(a1,a2')` and `(a1',a2)`. Both at ε₁.
pub(crate) fn add_not_or_wire(b: &mut Builder, g: usize, kind: GadgetKind, i: Sig, o: Sig) -> Vec<EdgeId> {
    match kind {
        GadgetKind::Not => vec![
            gadget_edge(b, g, kind, i.upper, o.upper, Some(EPS1), "(a1,a2)"),
            gadget_edge(b, g, kind, i.lower, o.lower, Some(EPS1), "(a1',a2')"),
        ],
        GadgetKind::Wire => vec![
            gadget_edge(b, g, kind, i.upper, o.lower, Some(EPS1), "(a1,a2')"),
            gadget_edge(b, g, kind, i.lower, o.upper, Some(EPS1), "(a1',a2)"),
        ],
        _ => unreachable!("only NOT and WIRE share this shape"),
    }
}

/// OR on inputs `(a1,a1')`, `(a2,a2')` with output `(a3,a3')`.
/// Returns the six internal agents `b1,b1',b2,b2',b3,b3'` and the ten edges in [`OR_EDGES`] order.
pub(crate) fn add_or(b: &mut Builder, g: usize, prefix: &str, x: Sig, y: Sig, o: Sig) -> (Vec<AgentId>, Vec<EdgeId>) {
    let k = GadgetKind::Or;
    let bs: Vec<AgentId> =
        ["b1", "b1'", "b2", "b2'", "b3", "b3'"].iter().map(|n| b.vertex(format!("{prefix}/{n}"))).collect();
    let [b1, b1p, b2, b2p, b3, b3p] = [bs[0], bs[1], bs[2], bs[3], bs[4], bs[5]];
    let spec: [(AgentId, AgentId, Option<i64>); 10] = [
        (b1, b1p, None),
        (b2, b2p, None),
        (b3, b3p, None),
        (x.lower, b1p, Some(EPS2)),
        (b1p, b2p, Some(EPS1)),
        (b2p, b3p, Some(EPS1)),
        (b3p, y.lower, Some(EPS2)),
        (b2p, o.upper, Some(EPS2)),
        (x.upper, o.lower, Some(EPS1)),
        (y.upper, o.lower, Some(EPS1)),
    ];
    let edges = spec.iter().zip(OR_EDGES).map(|(&(u, v, val), name)| gadget_edge(b, g, k, u, v, val, name)).collect();
    (bs, edges)
}

/// Owners of the ten OR edges for inputs `(x, y)`; output is `x || y`.
pub(crate) fn or_completion(bs: &[AgentId], x: Sig, y: Sig, o: Sig, vx: bool, vy: bool) -> [AgentId; 10] {
    let [b1, b1p, b2, b2p, b3, b3p] = [bs[0], bs[1], bs[2], bs[3], bs[4], bs[5]];
    match (vx, vy) {
        (true, true) => [b1, b2, b3, x.lower, b1p, b3p, y.lower, b2p, o.lower, o.lower],
        (true, false) => [b1p, b2, b3, x.lower, b2p, b3p, b3p, b2p, o.lower, y.upper],
        (false, true) => [b1, b2, b3p, b1p, b1p, b2p, y.lower, b2p, x.upper, o.lower],
        (false, false) => [b1, b2p, b3, b1p, b1p, b3p, b3p, o.upper, x.upper, y.upper],
    }
}

/// Terminator on `(a2,a2')`: priceless `(t1,t1')` plus ε₁ edges
/// `(t1,a2')`, `(t1',a2')`, `(t1',a2)`. Returns `[t1, t1']` and the four edges.
pub(crate) fn add_terminator(b: &mut Builder, g: usize, prefix: &str, o: Sig) -> (Vec<AgentId>, Vec<EdgeId>) {
    let k = GadgetKind::Terminator;
    let t1 = b.vertex(format!("{prefix}/t1"));
    let t1p = b.vertex(format!("{prefix}/t1'"));
    let edges = vec![
        gadget_edge(b, g, k, t1, t1p, None, "(t1,t1')"),
        gadget_edge(b, g, k, t1, o.lower, Some(EPS1), "(t1,a2')"),
        gadget_edge(b, g, k, t1p, o.lower, Some(EPS1), "(t1',a2')"),
        gadget_edge(b, g, k, t1p, o.upper, Some(EPS1), "(t1',a2)"),
    ];
    (vec![t1, t1p], edges)
}

pub(crate) fn terminator_completion(t: &[AgentId], o: Sig) -> [AgentId; 4] {
    [t[0], o.lower, t[1], t[1]]
}

/// A gadget on its own: its signal edges, its internal agents and edges, nothing else.
#[derive(Debug, Clone)]
pub struct StandaloneGadget {
    pub instance: Instance,
    pub signals: Vec<SignalEdge>,
    pub info: GadgetInfo,
    pub vertex_names: Vec<String>,
}

impl StandaloneGadget {
    pub fn new(kind: GadgetKind) -> Result<Self, ReductionError> {
        let mut b = Builder::default();
        let names: &[&str] = match kind {
            GadgetKind::Or => &["a1", "a2", "a3"],
            GadgetKind::Terminator => &["a2"],
            _ => &["a1", "a2"],
        };
        let mut signals = Vec::new();
        for (k, n) in names.iter().enumerate() {
            let upper = b.vertex(*n);
            let lower = b.vertex(format!("{n}'"));
            let edge = b.edge(upper, lower, None, EdgeRole::Signal { signal: k });
            signals.push(SignalEdge { name: n.to_string(), upper, lower, edge, wire: None });
        }
        let s: Vec<Sig> = signals.iter().map(Sig::of).collect();
        let (inputs, output, internal, edges) = match kind {
            GadgetKind::Or => {
                let (bs, es) = add_or(&mut b, 0, "or", s[0], s[1], s[2]);
                (vec![0, 1], 2, bs, es)
            }
            GadgetKind::Terminator => {
                let (ts, es) = add_terminator(&mut b, 0, "term", s[0]);
                (vec![], 0, ts, es)
            }
            _ => (vec![0], 1, vec![], add_not_or_wire(&mut b, 0, kind, s[0], s[1])),
        };
        let (instance, _) = b.build()?;
        Ok(StandaloneGadget { instance, signals, info: GadgetInfo { kind, inputs, output, internal, edges }, vertex_names: b.names })
    }

    pub fn priceless_edges(&self) -> Vec<EdgeId> {
        let mut p: Vec<EdgeId> = self.signals.iter().map(|s| s.edge).collect();
        p.extend(self.info.edges.iter().copied().filter(|&e| self.instance.value_of_edge(self.instance.edge(e).u, e) > Value::from(EPS1)));
        p
    }

    /// Signal values and the matching completion; `None` when the inputs do not
    /// call for a completion (the terminator needs its signal True).
    pub fn completion(&self, inputs: &[bool]) -> Option<Allocation> {
        let s: Vec<Sig> = self.signals.iter().map(Sig::of).collect();
        let inst = &self.instance;
        let mut alloc = Allocation::empty(inst.n(), inst.m());
        let hold = |sig: Sig, e: EdgeId, v: bool, alloc: &mut Allocation| alloc.assign(e, sig.holder(v));
        let owners: Vec<AgentId> = match self.info.kind {
            GadgetKind::Or => {
                let (x, y) = (inputs[0], inputs[1]);
                hold(s[0], self.signals[0].edge, x, &mut alloc);
                hold(s[1], self.signals[1].edge, y, &mut alloc);
                hold(s[2], self.signals[2].edge, x || y, &mut alloc);
                or_completion(&self.info.internal, s[0], s[1], s[2], x, y).to_vec()
            }
            GadgetKind::Terminator => {
                if !inputs[0] {
                    return None;
                }
                hold(s[0], self.signals[0].edge, true, &mut alloc);
                terminator_completion(&self.info.internal, s[0]).to_vec()
            }
            kind => {
                let x = inputs[0];
                let out = if kind == GadgetKind::Not { !x } else { x };
                hold(s[0], self.signals[0].edge, x, &mut alloc);
                hold(s[1], self.signals[1].edge, out, &mut alloc);
                not_wire_completion(inst, &self.info.edges, &[s[0].holder(x), s[1].holder(out)])
            }
        };
        for (&e, &a) in self.info.edges.iter().zip(&owners) {
            alloc.assign(e, a);
        }
        Some(alloc)
    }
}

/// Each NOT/WIRE edge goes to its endpoint that does not hold a signal.
pub(crate) fn not_wire_completion(inst: &Instance, edges: &[EdgeId], holders: &[AgentId]) -> Vec<AgentId> {
    edges
        .iter()
        .map(|&e| {
            let ed = inst.edge(e);
            if holders.contains(&ed.u) {
                ed.v
            } else {
                ed.u
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use efx_core::fairness::satisfies;
    use efx_core::Notion;

    #[test]
    fn shapes_match_the_gadget_counts() {
        let or = StandaloneGadget::new(GadgetKind::Or).unwrap();
        assert_eq!((or.instance.n(), or.instance.m()), (12, 13));
        assert_eq!(or.priceless_edges().len(), 6);
        for kind in [GadgetKind::Not, GadgetKind::Wire] {
            let g = StandaloneGadget::new(kind).unwrap();
            assert_eq!((g.instance.n(), g.instance.m()), (4, 4));
        }
        let t = StandaloneGadget::new(GadgetKind::Terminator).unwrap();
        assert_eq!((t.instance.n(), t.instance.m()), (4, 5));
    }

    #[test]
    fn priceless_preconditions_hold_for_every_gadget() {
        for kind in [GadgetKind::Or, GadgetKind::Not, GadgetKind::Wire, GadgetKind::Terminator] {
            let g = StandaloneGadget::new(kind).unwrap();
            check_priceless_preconditions(&g.instance, &g.priceless_edges()).unwrap();
        }
    }

    #[test]
    fn priceless_precondition_failures() {
        let chore = Instance::from_pairs(2, &[(0, 1)], &[(-1, 5)]).unwrap();
        assert!(check_priceless_preconditions(&chore, &[0]).is_err());
        let cheap = Instance::from_pairs(4, &[(0, 1), (2, 3), (0, 2)], &[(2, 2), (9, 9), (3, 3)]).unwrap();
        assert!(check_priceless_preconditions(&cheap, &[0, 1]).is_err());
        assert_eq!(priceless_bound(&cheap, &[0, 1]), Value::int(4));
        let twice = Instance::from_pairs(3, &[(0, 1), (1, 2)], &[(9, 9), (9, 9)]).unwrap();
        assert!(check_priceless_preconditions(&twice, &[0, 1]).is_err());
    }

    #[test]
    fn completions_pass_the_checker() {
        for kind in [GadgetKind::Not, GadgetKind::Wire] {
            let g = StandaloneGadget::new(kind).unwrap();
            for x in [false, true] {
                let a = g.completion(&[x]).unwrap();
                assert!(satisfies(&g.instance, &a, Notion::EFX00).unwrap(), "{kind:?} {x}");
            }
        }
        let or = StandaloneGadget::new(GadgetKind::Or).unwrap();
        for (x, y) in [(false, false), (false, true), (true, false), (true, true)] {
            let a = or.completion(&[x, y]).unwrap();
            assert!(satisfies(&or.instance, &a, Notion::EFX00).unwrap(), "OR {x} {y}");
        }
        let t = StandaloneGadget::new(GadgetKind::Terminator).unwrap();
        assert!(satisfies(&t.instance, &t.completion(&[true]).unwrap(), Notion::EFX00).unwrap());
        assert!(t.completion(&[false]).is_none());
    }
}
