//! Gadget behaviour checked by exhaustive enumeration.

use std::collections::BTreeSet;

use efx_core::fairness::satisfies;
use efx_core::generate::for_each_product;
use efx_core::oracle::{oracle_count, SearchSpec};
use efx_core::{Allocation, Instance, Notion, Orientation};
use efx_reductions::{build_chore_anchor_gadget, GadgetKind, StandaloneGadget};

/// Every EFX⁰₀ orientation, as signal bits (upper endpoint holds).
fn efx_signal_patterns(g: &StandaloneGadget) -> BTreeSet<Vec<bool>> {
    let inst = &g.instance;
    let m = inst.m();
    let mut out = BTreeSet::new();
    for mask in 0u32..1 << m {
        let bits: Vec<bool> = (0..m).map(|e| mask >> e & 1 == 1).collect();
        let o = Orientation::from_bits(inst, &bits);
        if satisfies(inst, &o, Notion::EFX00).unwrap() {
            out.insert(g.signals.iter().map(|s| o.owner(s.edge) == Some(s.upper)).collect());
        }
    }
    out
}

#[test]
fn or_gadget_computes_or_in_every_efx_orientation() {
    let g = StandaloneGadget::new(GadgetKind::Or).unwrap();
    assert_eq!(g.instance.m(), 13);
    let seen = efx_signal_patterns(&g);
    for p in &seen {
        assert_eq!(p[2], p[0] || p[1], "pattern {p:?}");
    }
    // Every input pair is realizable.
    let inputs: BTreeSet<(bool, bool)> = seen.iter().map(|p| (p[0], p[1])).collect();
    assert_eq!(inputs.len(), 4);
}

#[test]
fn not_and_wire_gadgets_in_every_efx_orientation() {
    for (kind, flip) in [(GadgetKind::Not, true), (GadgetKind::Wire, false)] {
        let g = StandaloneGadget::new(kind).unwrap();
        let seen = efx_signal_patterns(&g);
        assert_eq!(seen.len(), 2, "{kind:?}");
        for p in &seen {
            assert_eq!(p[1], p[0] ^ flip, "{kind:?} {p:?}");
        }
    }
}

#[test]
fn terminator_forces_true_over_all_allocations() {
    let g = StandaloneGadget::new(GadgetKind::Terminator).unwrap();
    let inst = &g.instance;
    let (n, m) = (inst.n(), inst.m());
    assert_eq!(n.pow(m as u32), 1024);
    let agents: Vec<usize> = (0..n).collect();
    let mut passing = 0;
    for_each_product(&agents, m, |owners| {
        let a = Allocation::from_owners(n, owners).unwrap();
        if satisfies(inst, &a, Notion::EFX00).unwrap() {
            passing += 1;
            assert_eq!(a.owner(g.signals[0].edge), Some(g.signals[0].upper), "owners {owners:?}");
        }
    });
    assert!(passing > 0);
}

#[test]
fn completions_agree_with_enumeration() {
    for kind in [GadgetKind::Or, GadgetKind::Not, GadgetKind::Wire] {
        let g = StandaloneGadget::new(kind).unwrap();
        let k = g.info.inputs.len();
        for r in 0..1u32 << k {
            let x: Vec<bool> = (0..k).map(|i| r >> i & 1 == 1).collect();
            let a = g.completion(&x).unwrap();
            assert!(a.is_orientation(&g.instance));
            assert!(satisfies(&g.instance, &a, Notion::EFX00).unwrap(), "{kind:?} {x:?}");
        }
    }
}

#[test]
fn chore_anchor_forces_the_pendant_edge() {
    let inst = build_chore_anchor_gadget();
    let mut found = 0;
    for mask in 0u32..16 {
        let bits: Vec<bool> = (0..4).map(|e| mask >> e & 1 == 1).collect();
        let o = Orientation::from_bits(&inst, &bits);
        if satisfies(&inst, &o, Notion::EFXPlusMinus).unwrap() {
            found += 1;
            assert_eq!(o.owner(0), Some(0), "mask {mask:b}");
            // Each Δ agent gets exactly one triangle edge.
            for d in 1..4 {
                assert_eq!((1..4).filter(|&e| o.owner(e) == Some(d)).count(), 1);
            }
        }
    }
    assert_eq!(found, 2);
    assert_eq!(oracle_count(&inst, &SearchSpec::orientations(Notion::EFXPlusMinus)).unwrap(), 2);
}

#[test]
fn triangle_alone_gives_each_agent_one_edge() {
    let tri = Instance::from_pairs(3, &[(0, 1), (1, 2), (0, 2)], &[(-1, -1); 3]).unwrap();
    for mask in 0u32..8 {
        let bits: Vec<bool> = (0..3).map(|e| mask >> e & 1 == 1).collect();
        let o = Orientation::from_bits(&tri, &bits);
        if satisfies(&tri, &o, Notion::EFXPlusMinus).unwrap() {
            assert!((0..3).all(|a| o.bundle(a).len() == 1));
        }
    }
}

#[test]
fn without_the_pendant_nothing_is_forced() {
    // Agent 0 is isolated, so any orientation of the triangle decides everything.
    let inst = Instance::from_pairs(4, &[(1, 2), (2, 3), (1, 3)], &[(-1, -1); 3]).unwrap();
    assert_eq!(oracle_count(&inst, &SearchSpec::orientations(Notion::EFXPlusMinus)).unwrap(), 2);
    assert!(inst.incident(0).is_empty());
}
