//! Allocations for mixed instances: EFX⁰₋ in two parts, EFX⁺₀ directly, and
//! EFX⁰₀ by exhaustive search.

mod part1;
mod part2;
mod plus0;

pub use part1::{initial_orientation, part1, repair_property2, repair_property3, repair_property8, Part1State, TraceStep};
pub use part2::{part2, RemainderGroups};
pub use plus0::efxplus0_allocation;

use crate::alloc::{Allocation, DecideResult};
use crate::error::SolveError;
use crate::model::{Instance, Valuation};
use crate::notion::Notion;
use crate::oracle::{oracle_exists, SearchSpec};

/// EFX⁰₋ allocation together with the Part 1 trace.
pub fn efx0minus_allocation_traced<V: Valuation>(inst: &Instance<V>) -> Result<(Allocation, Part1State), SolveError> {
    let st = part1(inst)?;
    let alloc = part2(inst, &st)?;
    Ok((alloc, st))
}

/// EFX⁰₋ allocation for any instance.
pub fn efx0minus_allocation<V: Valuation>(inst: &Instance<V>) -> Result<Allocation, SolveError> {
    efx0minus_allocation_traced(inst).map(|(a, _)| a)
}

/// EFX⁺₋ allocation; every EFX⁺₀ allocation qualifies.
pub fn efxplusminus_allocation<V: Valuation>(inst: &Instance<V>) -> Allocation {
    efxplus0_allocation(inst)
}

/// Exact EFX⁰₀ existence over all `n^m` allocations.
pub fn efx00_allocation_bruteforce<V: Valuation>(inst: &Instance<V>, budget: u128) -> Result<DecideResult, SolveError> {
    let spec = SearchSpec::allocations(Notion::EFX00).with_budget(budget);
    Ok(oracle_exists(inst, &spec)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fairness::{audit_properties, satisfies, PropertySet};

    /// Two priceless edges 01 and 23 and four unit goods joining them.
    fn fig3() -> Instance {
        let p = 5;
        Instance::from_pairs(
            4,
            &[(0, 1), (2, 3), (0, 2), (0, 3), (1, 2), (1, 3)],
            &[(p, p), (p, p), (1, 1), (1, 1), (1, 1), (1, 1)],
        )
        .unwrap()
    }

    #[test]
    fn initial_orientation_examples() {
        let one = Instance::from_pairs(2, &[(0, 1)], &[(1, 1)]).unwrap();
        assert_eq!(initial_orientation(&one).alloc.owners(), &[Some(0)]);

        let c4 = Instance::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], &[(1, 1); 4]).unwrap();
        let st = initial_orientation(&c4);
        assert!((0..4).all(|a| st.alloc.bundle(a).len() == 1));
        assert!(st.properties(&c4).is_superset(PropertySet::of(&[1, 4, 5, 6, 7])));

        let chores = Instance::from_pairs(3, &[(0, 1), (1, 2)], &[(-1, -1), (-2, -1)]).unwrap();
        assert!(initial_orientation(&chores).alloc.unallocated().len() == 2);
    }

    #[test]
    fn star_center_takes_both_goods() {
        // a_1 envies the center a_0 holding e01; e02, e03 stay free and are dummies for their satellites.
        let inst = Instance::from_pairs(4, &[(0, 1), (0, 2), (0, 3)], &[(1, 5), (1, 0), (1, 0)]).unwrap();
        let alloc = Allocation::from_partial(4, &[Some(0), None, None]).unwrap();
        let st = Part1State { alloc, trace: Vec::new() };
        let out = repair_property2(&inst, st).unwrap();
        assert_eq!(out.alloc.bundle(0), &[1, 2]);
        assert!(out.properties(&inst).is_superset(PropertySet::of(&[1, 2, 3, 4, 5, 6, 7])));
    }

    #[test]
    fn part2_chores_triangle_with_isolated_agent() {
        let inst = Instance::from_pairs(4, &[(0, 1), (1, 2), (0, 2)], &[(-1, -1); 3]).unwrap();
        let st = part1(&inst).unwrap();
        assert_eq!(st.alloc.unallocated(), vec![0, 1, 2]);
        let out = part2(&inst, &st).unwrap();
        assert_eq!(out.owners(), &[Some(2), Some(0), Some(1)]);
        assert!(satisfies(&inst, &out, Notion::EF).unwrap());
    }

    #[test]
    fn g2_edge_never_goes_to_an_endpoint_that_sees_a_chore() {
        // Giving e35 to a_3 in G1 ends her envy of a_0, but e05 is still a chore for a_0.
        let inst = Instance::from_pairs(
            8,
            &[(0, 1), (0, 3), (0, 5), (0, 7), (1, 2), (3, 5), (3, 7), (5, 6), (5, 7)],
            &[(0, 3), (3, 5), (-4, 1), (-3, 3), (1, -2), (3, -1), (4, -3), (5, 1), (3, 0)],
        )
        .unwrap();
        let st = part1(&inst).unwrap();
        assert_eq!(RemainderGroups::classify(&inst, &st.alloc).g2, vec![2]);
        let a = part2(&inst, &st).unwrap();
        assert_ne!(a.owner(2), Some(0));
        assert!(satisfies(&inst, &a, Notion::EFX0Minus).unwrap());
    }

    #[test]
    fn fig3_allocations() {
        let inst = fig3();
        let r = efx00_allocation_bruteforce(&inst, 4096).unwrap();
        assert!(!r.exists);
        let a = efx0minus_allocation(&inst).unwrap();
        assert!(satisfies(&inst, &a, Notion::EFX0Minus).unwrap());
    }

    #[test]
    fn plus0_examples() {
        let tri = Instance::from_pairs(3, &[(0, 1), (1, 2), (0, 2)], &[(1, 1); 3]).unwrap();
        let a = efxplus0_allocation(&tri);
        assert_eq!(a.owners(), &[Some(0), Some(1), Some(0)]);
        assert!(satisfies(&tri, &a, Notion::EFXPlus0).unwrap());

        let c4 = Instance::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (0, 3)], &[(-1, -1); 4]).unwrap();
        let a = efxplus0_allocation(&c4);
        assert!(satisfies(&c4, &a, Notion::EF).unwrap());

        // Every agent is negative overall; e01 is good for a_0 only.
        let neg = Instance::from_pairs(3, &[(0, 1), (1, 2), (0, 2)], &[(1, -1), (-2, -2), (-2, -1)]).unwrap();
        assert!((0..3).all(|i| neg.value(i, neg.incident(i)) < crate::Value::ZERO));
        let a = efxplus0_allocation(&neg);
        assert_eq!(a.owner(0), Some(0));
        assert!(satisfies(&neg, &a, Notion::EFXPlus0).unwrap());

        let two = Instance::from_pairs(2, &[(0, 1)], &[(-1, -1)]).unwrap();
        let a = efxplusminus_allocation(&two);
        assert!(satisfies(&two, &a, Notion::EFXPlusMinus).unwrap());
    }

    #[test]
    fn part1_reaches_all_properties() {
        let inst = Instance::from_pairs(
            5,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (1, 3)],
            &[(3, 1), (2, -1), (-1, 4), (2, 2), (1, 3), (5, -2)],
        )
        .unwrap();
        let st = part1(&inst).unwrap();
        assert_eq!(audit_properties(&inst, &st.alloc), PropertySet::ALL);
    }
}
