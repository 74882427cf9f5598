use efx_core::fairness::{audit_properties, satisfies, PropertySet};
use efx_core::generate::{for_each_product, nonisomorphic_graphs, random_instance, random_tree_instance, ValueKind};
use efx_core::goods_chores::{chores_ef_allocation, chores_efx0_orientation, chores_efxminus_orientation, goods_efx0_allocation, goods_efxplus_orientation};
use efx_core::mixed_allocation::{efx0minus_allocation, efxplus0_allocation};
use efx_core::mixed_orientation::{path_efx0minus_decide, star_efx00_decide, tree_efxplus0_orientation};
use efx_core::oracle::{oracle_exists, SearchSpec};
use efx_core::{DecideResult, Instance, Notion};

fn agrees(inst: &Instance, notion: Notion, got: &DecideResult) {
    let want = oracle_exists(inst, &SearchSpec::orientations(notion)).unwrap();
    assert_eq!(got.exists, want.exists, "{notion} on {inst:?}");
    if let Some(w) = &got.witness {
        assert!(w.is_orientation(inst));
        assert!(satisfies(inst, w, notion).unwrap(), "{notion} witness fails on {inst:?}");
    }
}

#[test]
fn star_decider_matches_oracle() {
    let vals = [-2i64, -1, 0, 1, 2];
    for k in 1..=3 {
        let pairs: Vec<_> = (1..=k).map(|s| (0, s)).collect();
        for_each_product(&vals, 2 * k, |v| {
            let vs: Vec<_> = v.chunks(2).map(|c| (c[0], c[1])).collect();
            let inst = Instance::from_pairs(k + 1, &pairs, &vs).unwrap();
            for notion in [Notion::EFX00, Notion::EFX0Minus] {
                agrees(&inst, notion, &star_efx00_decide(&inst, notion).unwrap());
            }
        });
    }
}

#[test]
fn star_center_need_not_be_agent_zero() {
    let inst = Instance::from_pairs(4, &[(0, 2), (1, 2), (2, 3)], &[(-1, 1), (2, -2), (1, -1)]).unwrap();
    for notion in [Notion::EFX00, Notion::EFX0Minus] {
        agrees(&inst, notion, &star_efx00_decide(&inst, notion).unwrap());
    }
}

#[test]
fn path_decider_matches_oracle() {
    // Each edge is one of eight value pairs: a good or a chore for both ends.
    let kinds: [(i64, i64); 8] = [(1, 1), (1, 2), (2, 1), (2, 2), (-1, -1), (-1, -2), (-2, -1), (-2, -2)];
    for k in 1..=4 {
        let pairs: Vec<_> = (0..k).map(|t| (t, t + 1)).collect();
        for_each_product(&kinds, k, |vs| {
            let inst = Instance::from_pairs(k + 1, &pairs, vs).unwrap();
            let got = path_efx0minus_decide(&inst).unwrap();
            agrees(&inst, Notion::EFX0Minus, &got);
            agrees(&inst, Notion::EFX00, &got);
        });
    }
}

#[test]
fn path_decider_handles_scrambled_labels() {
    // The path 3 - 0 - 4 - 1 - 2 with mixed edge kinds.
    let order = [3usize, 0, 4, 1, 2];
    let pairs: Vec<_> = order.windows(2).map(|w| (w[0], w[1])).collect();
    let kinds: [(i64, i64); 4] = [(1, 2), (-1, -1), (-2, -1), (2, 2)];
    for_each_product(&kinds, 4, |vs| {
        let inst = Instance::from_pairs(5, &pairs, vs).unwrap();
        agrees(&inst, Notion::EFX0Minus, &path_efx0minus_decide(&inst).unwrap());
    });
}

/// Chore/dummy value for one endpoint, picked from the bit pattern and a salt.
fn chore_value(dummy: bool, salt: u64) -> i64 {
    if dummy {
        0
    } else if salt % 3 == 0 {
        -2
    } else {
        -1
    }
}

#[test]
fn chores_deciders_match_oracle() {
    for n in 2..=4 {
        for pairs in nonisomorphic_graphs(n, 6, true) {
            let m = pairs.len();
            for mask in 0u64..(1 << (2 * m)) {
                let vs: Vec<_> = (0..m)
                    .map(|k| {
                        let s = mask.wrapping_mul(0x9e37_79b9) ^ k as u64;
                        (chore_value(mask >> (2 * k) & 1 == 1, s), chore_value(mask >> (2 * k + 1) & 1 == 1, s >> 3))
                    })
                    .collect();
                let inst = Instance::from_pairs(n, &pairs, &vs).unwrap();
                agrees(&inst, Notion::EFXcMinus, &chores_efxminus_orientation(&inst).unwrap());
                agrees(&inst, Notion::EFXc0, &chores_efx0_orientation(&inst).unwrap());
            }
        }
    }
}

#[test]
fn chores_ef_allocation_on_random_instances() {
    for seed in 0..200 {
        let n = 3 + (seed as usize % 6);
        let m = (seed as usize * 7) % (n * (n - 1) / 2 + 1);
        let inst = random_instance(seed, ValueKind::Chores, n, m, -5, 0).unwrap();
        let a = chores_ef_allocation(&inst).unwrap();
        assert!(satisfies(&inst, &a, Notion::EF).unwrap());
    }
}

#[test]
fn goods_solvers_on_random_instances() {
    for seed in 0..300 {
        let n = 2 + (seed as usize % 9);
        let m = (seed as usize * 5) % (n * (n - 1) / 2).min(20).max(1);
        let inst = random_instance(seed, ValueKind::Goods, n, m, 0, 9).unwrap();
        let o = goods_efxplus_orientation(&inst).unwrap();
        assert!(o.is_orientation(&inst));
        assert!(satisfies(&inst, &o, Notion::EFXgPlus).unwrap());
        let a = goods_efx0_allocation(&inst).unwrap();
        assert!(satisfies(&inst, &a, Notion::EFXg0).unwrap(), "seed {seed}");
    }
}

#[test]
fn mixed_solvers_on_random_instances() {
    for seed in 0..600 {
        let n = 2 + (seed as usize % 7);
        let m = (seed as usize * 3) % (n * (n - 1) / 2).min(14).max(1);
        let inst = random_instance(seed, ValueKind::Mixed, n, m, -5, 5).unwrap();
        let a = efx0minus_allocation(&inst).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(a.is_complete());
        assert!(satisfies(&inst, &a, Notion::EFX0Minus).unwrap(), "seed {seed}");
        let b = efxplus0_allocation(&inst);
        assert!(satisfies(&inst, &b, Notion::EFXPlus0).unwrap(), "seed {seed}");
    }
}

#[test]
fn mixed_solvers_on_dense_small_instances() {
    for seed in 0..400 {
        let n = 3 + (seed as usize % 3);
        let m = n * (n - 1) / 2;
        let inst = random_instance(seed, ValueKind::Mixed, n, m, -2, 2).unwrap();
        let a = efx0minus_allocation(&inst).unwrap_or_else(|e| panic!("seed {seed}: {e}"));
        assert!(satisfies(&inst, &a, Notion::EFX0Minus).unwrap(), "seed {seed}");
        assert!(satisfies(&inst, &efxplus0_allocation(&inst), Notion::EFXPlus0).unwrap());
    }
}

#[test]
fn part1_output_has_all_properties() {
    for seed in 0..300 {
        let n = 2 + (seed as usize % 8);
        let m = (seed as usize * 11) % (n * (n - 1) / 2).min(16).max(1);
        let inst = random_instance(seed, ValueKind::Mixed, n, m, -4, 4).unwrap();
        let st = efx_core::mixed_allocation::part1(&inst).unwrap();
        assert_eq!(audit_properties(&inst, &st.alloc), PropertySet::ALL, "seed {seed}");
    }
}

#[test]
fn tree_orientation_on_random_trees() {
    for seed in 0..300 {
        let n = 1 + (seed as usize % 12);
        let inst = random_tree_instance(seed, ValueKind::Mixed, n, -3, 3).unwrap();
        let o = tree_efxplus0_orientation(&inst, 0).unwrap();
        assert!(o.is_orientation(&inst));
        assert!(satisfies(&inst, &o, Notion::EFXPlus0).unwrap(), "seed {seed}");
    }
}
