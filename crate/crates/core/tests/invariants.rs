use efx_core::fairness::{audit_properties, is_envy_free, satisfies, PropertySet};
use efx_core::generate::{random_instance, random_tree_instance, ValueKind};
use efx_core::goods_chores::{chores_efx0_orientation, chores_efxminus_orientation, goods_efxplus_orientation};
use efx_core::json::{allocation_from_json, allocation_to_json, instance_from_json, instance_to_json};
use efx_core::mixed_orientation::tree_efxplus0_orientation;
use efx_core::notion::{Removal1, Removal2};
use efx_core::oracle::{oracle_count, oracle_exists, SearchSpec};
use efx_core::{Allocation, Instance, Notion, SignClass, Value};
use proptest::prelude::*;

fn small_instance(kind: ValueKind, max_n: usize, max_m: usize) -> impl Strategy<Value = Instance> {
    (2..=max_n, any::<u64>(), 1i64..=4).prop_flat_map(move |(n, seed, r)| {
        let cap = (n * (n - 1) / 2).min(max_m);
        (0..=cap).prop_map(move |m| random_instance(seed, kind, n, m, -r, r).unwrap())
    })
}

fn with_allocation(inst: Instance) -> impl Strategy<Value = (Instance, Allocation)> {
    let n = inst.n();
    proptest::collection::vec(0..n, inst.m()).prop_map(move |owners| {
        let a = Allocation::from_owners(n, &owners).unwrap();
        (inst.clone(), a)
    })
}

fn mixed_kind() -> impl Strategy<Value = ValueKind> {
    prop_oneof![Just(ValueKind::Goods), Just(ValueKind::Chores), Just(ValueKind::Mixed)]
}

/// Direct reading of the definitions, independent of the library checker.
fn naive_check(inst: &Instance, alloc: &Allocation, notion: Notion) -> bool {
    let n = inst.n();
    for i in 0..n {
        let own = alloc.bundle(i);
        let mine = inst.value(i, own);
        for j in 0..n {
            let theirs = alloc.bundle(j);
            let other = inst.value(i, theirs);
            if i == j || mine >= other {
                continue;
            }
            let (c1, c2) = (notion.condition1(), notion.condition2());
            if c1.is_none() && c2.is_none() {
                return false;
            }
            for &e in theirs {
                let x = inst.value_of_edge(i, e);
                let removable = match c1 {
                    Some(Removal1::NonChore) => x >= Value::ZERO,
                    Some(Removal1::Good) => x > Value::ZERO,
                    None => false,
                };
                if removable && mine < other - x {
                    return false;
                }
            }
            for &e in own {
                let x = inst.value_of_edge(i, e);
                let removable = match c2 {
                    Some(Removal2::NonGood) => x <= Value::ZERO,
                    Some(Removal2::Chore) => x < Value::ZERO,
                    None => false,
                };
                if removable && mine - x < other {
                    return false;
                }
            }
        }
    }
    true
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn marginal_value_has_the_edge_sign(inst in small_instance(ValueKind::Mixed, 6, 8)) {
        let m = inst.m();
        for i in 0..inst.n() {
            for e in 0..m {
                for mask in 0u32..(1 << m) {
                    if mask >> e & 1 == 1 {
                        continue;
                    }
                    let set: Vec<usize> = (0..m).filter(|&k| mask >> k & 1 == 1).collect();
                    let mut with = set.clone();
                    with.push(e);
                    let d = inst.value(i, &with) - inst.value(i, &set);
                    let expect = match inst.sign(i, e) {
                        SignClass::Good => d > Value::ZERO,
                        SignClass::Chore => d < Value::ZERO,
                        SignClass::Dummy => d.is_zero(),
                    };
                    prop_assert!(expect);
                }
            }
            for e in 0..m {
                if !inst.edge(e).has(i) {
                    prop_assert_eq!(inst.sign(i, e), SignClass::Dummy);
                }
            }
        }
    }

    #[test]
    fn orientation_solvers_give_edges_to_endpoints(seed in any::<u64>(), n in 1usize..14, kind in mixed_kind()) {
        let tree = random_tree_instance(seed, kind, n, -3, 3).unwrap();
        prop_assert!(tree_efxplus0_orientation(&tree, seed as usize % n).unwrap().is_orientation(&tree));
        let m = (seed as usize) % (n * n.saturating_sub(1) / 2 + 1);
        let goods = random_instance(seed, ValueKind::Goods, n, m, 0, 5).unwrap();
        prop_assert!(goods_efxplus_orientation(&goods).unwrap().is_orientation(&goods));
        let chores = random_instance(seed, ValueKind::Chores, n, m.min(10), -3, 0).unwrap();
        for r in [chores_efx0_orientation(&chores).unwrap(), chores_efxminus_orientation(&chores).unwrap()] {
            if let Some(w) = r.witness {
                prop_assert!(w.is_orientation(&chores));
            }
        }
    }

    #[test]
    fn json_round_trip_is_bit_exact(
        n in 2usize..7,
        seed in any::<u64>(),
        fracs in proptest::collection::vec((-50i128..50, 1i128..9), 30),
    ) {
        let m = (seed as usize) % (n * (n - 1) / 2 + 1);
        let base = random_instance(seed, ValueKind::Mixed, n, m, -1, 1).unwrap();
        let pairs: Vec<_> = base.edges().iter().map(|e| (e.u, e.v)).collect();
        let entries = base.edges().iter().enumerate().flat_map(|(k, e)| {
            let (a, b) = (fracs[2 * k % 30], fracs[(2 * k + 1) % 30]);
            [(e.u, e.id, Value::new(a.0, a.1)), (e.v, e.id, Value::new(b.0, b.1))]
        });
        let inst = Instance::additive(n, &pairs, entries.collect::<Vec<_>>()).unwrap();
        let text = instance_to_json(&inst);
        let back = instance_from_json(&text).unwrap();
        prop_assert_eq!(instance_to_json(&back), text);
        for e in 0..m {
            for a in 0..n {
                prop_assert_eq!(back.entry(a, e), inst.entry(a, e));
            }
        }
    }

    #[test]
    fn allocation_json_round_trips((inst, alloc) in small_instance(ValueKind::Mixed, 6, 12).prop_flat_map(with_allocation)) {
        let text = allocation_to_json(&alloc);
        prop_assert_eq!(allocation_from_json(&text, &inst).unwrap(), alloc);
    }

    #[test]
    fn checker_respects_the_implication_lattice(
        (inst, alloc) in (mixed_kind(), Just(())).prop_flat_map(|(k, _)| small_instance(k, 5, 7)).prop_flat_map(with_allocation)
    ) {
        let verdicts: Vec<(Notion, bool)> = Notion::ALL.iter().map(|&t| (t, satisfies(&inst, &alloc, t).unwrap())).collect();
        for &(a, pa) in &verdicts {
            for &(b, pb) in &verdicts {
                if a.implies(b) && pa {
                    prop_assert!(pb, "{} passes but {} fails", a, b);
                }
            }
        }
    }

    #[test]
    fn checker_matches_the_definitions(
        (inst, alloc) in (mixed_kind(), Just(())).prop_flat_map(|(k, _)| small_instance(k, 6, 10)).prop_flat_map(with_allocation)
    ) {
        for notion in Notion::ALL {
            prop_assert_eq!(satisfies(&inst, &alloc, notion).unwrap(), naive_check(&inst, &alloc, notion), "{}", notion);
        }
    }

    #[test]
    fn one_sided_instances_collapse_notions(
        (inst, alloc) in small_instance(ValueKind::Goods, 5, 8).prop_flat_map(with_allocation),
        (cinst, calloc) in small_instance(ValueKind::Chores, 5, 8).prop_flat_map(with_allocation),
    ) {
        for (a, b) in [(Notion::EFX0Minus, Notion::EFXg0), (Notion::EFXPlusMinus, Notion::EFXgPlus)] {
            prop_assert_eq!(satisfies(&inst, &alloc, a).unwrap(), satisfies(&inst, &alloc, b).unwrap());
        }
        for (a, b) in [(Notion::EFXPlus0, Notion::EFXc0), (Notion::EFXPlusMinus, Notion::EFXcMinus)] {
            prop_assert_eq!(satisfies(&cinst, &calloc, a).unwrap(), satisfies(&cinst, &calloc, b).unwrap());
        }
    }

    #[test]
    fn envy_free_allocations_have_every_property(
        (inst, alloc) in small_instance(ValueKind::Mixed, 6, 10).prop_flat_map(with_allocation)
    ) {
        if is_envy_free(&inst, &alloc).unwrap() {
            prop_assert_eq!(audit_properties(&inst, &alloc), PropertySet::ALL);
        }
    }

    #[test]
    fn oracle_is_invariant_under_relabeling(
        inst in small_instance(ValueKind::Mixed, 4, 6),
        agent_perm in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
        edge_perm in Just((0..6).collect::<Vec<usize>>()).prop_shuffle(),
        notion_ix in 0usize..9,
    ) {
        let n = inst.n();
        let m = inst.m();
        let ap: Vec<usize> = agent_perm.into_iter().filter(|&a| a < n).collect();
        let ep: Vec<usize> = edge_perm.into_iter().filter(|&e| e < m).collect();
        // Edge k of the new instance is edge ep[k] of the old one.
        let pairs: Vec<_> = ep.iter().map(|&e| (ap[inst.edge(e).u], ap[inst.edge(e).v])).collect();
        let entries: Vec<_> = ep
            .iter()
            .enumerate()
            .flat_map(|(k, &e)| {
                let ed = inst.edge(e);
                [(ap[ed.u], k, inst.entry(ed.u, e)), (ap[ed.v], k, inst.entry(ed.v, e))]
            })
            .collect();
        let relabeled = Instance::additive(n, &pairs, entries).unwrap();
        let notion = Notion::ALL[notion_ix];
        for spec in [SearchSpec::orientations(notion), SearchSpec::allocations(notion)] {
            prop_assert_eq!(oracle_count(&inst, &spec).unwrap(), oracle_count(&relabeled, &spec).unwrap());
            prop_assert_eq!(oracle_exists(&inst, &spec).unwrap().exists, oracle_exists(&relabeled, &spec).unwrap().exists);
        }
    }

    #[test]
    fn parallel_and_serial_oracle_agree(inst in small_instance(ValueKind::Mixed, 5, 7), notion_ix in 0usize..9) {
        let notion = Notion::ALL[notion_ix];
        let serial = SearchSpec::allocations(notion).with_parallel(false);
        let parallel = SearchSpec::allocations(notion).with_parallel(true);
        prop_assert_eq!(oracle_exists(&inst, &serial).unwrap(), oracle_exists(&inst, &parallel).unwrap());
        prop_assert_eq!(oracle_count(&inst, &serial).unwrap(), oracle_count(&inst, &parallel).unwrap());
    }

    #[test]
    fn pruning_never_changes_the_verdict(inst in small_instance(ValueKind::Mixed, 4, 6), notion_ix in 0usize..9) {
        let notion = Notion::ALL[notion_ix];
        for spec in [SearchSpec::orientations(notion), SearchSpec::allocations(notion)] {
            let pruned = oracle_exists(&inst, &spec.clone().with_prune(true)).unwrap();
            let plain = oracle_exists(&inst, &spec.with_prune(false)).unwrap();
            prop_assert_eq!(pruned, plain);
        }
    }
}

#[test]
fn dummies_keep_efx00_apart_from_one_sided_notions() {
    // a_2 envies a_0, whose only edge is a dummy for a_2.
    let chores = Instance::from_pairs(3, &[(0, 1), (1, 2)], &[(-1, -1), (-1, -1)]).unwrap();
    let a = Allocation::from_owners(3, &[0, 2]).unwrap();
    assert!(satisfies(&chores, &a, Notion::EFXPlus0).unwrap());
    assert!(!satisfies(&chores, &a, Notion::EFX00).unwrap());

    // a_0 holds a dummy next to her good and envies a_1.
    let goods = Instance::from_pairs(3, &[(0, 1), (1, 2)], &[(1, 1), (1, 1)]).unwrap();
    let b = Allocation::from_owners(3, &[1, 0]).unwrap();
    assert!(satisfies(&goods, &b, Notion::EFX0Minus).unwrap());
    assert!(!satisfies(&goods, &b, Notion::EFX00).unwrap());
}
