use proptest::prelude::*;
use sseqbench_core::homotopy::{self, DimBound, FgAbelianGroup, HomotopyTable, Knowledge, TableEntry};

fn group() -> impl Strategy<Value = FgAbelianGroup> {
    (0u32..3, prop::collection::vec(2u64..13, 0..3)).prop_map(|(r, t)| FgAbelianGroup::new(r, t).unwrap())
}

fn shifted(pi6: FgAbelianGroup, pi8: FgAbelianGroup, k: Knowledge) -> HomotopyTable {
    homotopy::loopspace_shift(&homotopy::g2_homotopy_table_with(pi6, pi8, k).unwrap(), 3)
}

#[test]
fn default_truncation() {
    let dims = homotopy::fibre_truncation_dims(&shifted(
        FgAbelianGroup::cyclic(3).unwrap(),
        FgAbelianGroup::cyclic(2).unwrap(),
        Knowledge::ContainsSummand,
    ))
    .unwrap();
    let got: Vec<(u32, DimBound)> = dims.iter().collect();
    let mut expected = vec![(0, DimBound::Exact(1))];
    expected.extend((1..=4).map(|d| (d, DimBound::Exact(0))));
    expected.push((5, DimBound::AtLeast(1)));
    assert_eq!(got, expected);
}

#[test]
fn cyclic_ext_parity() {
    for n in 2..200u64 {
        let expected = u32::from(n % 2 == 0);
        assert_eq!(homotopy::ext1_to_f2(&FgAbelianGroup::cyclic(n).unwrap()), expected);
        assert_eq!(homotopy::hom_to_f2(&FgAbelianGroup::cyclic(n).unwrap()), expected);
    }
}

proptest! {
    #[test]
    fn hom_and_ext_are_additive(a in group(), b in group()) {
        let s = a.direct_sum(&b);
        prop_assert_eq!(homotopy::hom_to_f2(&s), homotopy::hom_to_f2(&a) + homotopy::hom_to_f2(&b));
        prop_assert_eq!(homotopy::ext1_to_f2(&s), homotopy::ext1_to_f2(&a) + homotopy::ext1_to_f2(&b));
    }

    #[test]
    fn truncation_ignores_chosen_groups(e in 1u32..5, extra in prop::collection::vec(2u64..9, 0..3), exact in any::<bool>()) {
        let pi6 = FgAbelianGroup::cyclic(3u64.pow(e)).unwrap();
        let mut torsion = vec![2];
        torsion.extend(extra);
        let pi8 = FgAbelianGroup::new(0, torsion).unwrap();
        let k = if exact { Knowledge::Exact } else { Knowledge::ContainsSummand };
        let dims = homotopy::fibre_truncation_dims(&shifted(pi6, pi8, k)).unwrap();
        for d in 1..=4 {
            prop_assert_eq!(dims.get(d), Some(DimBound::Exact(0)));
        }
        prop_assert_eq!(dims.get(0), Some(DimBound::Exact(1)));
        prop_assert!(dims.get(5).unwrap().lower() >= 1);
    }

    #[test]
    fn connectivity_shifts(zeros in 1u32..8, loops in 0u32..4) {
        // pi_i = 0 for i ≤ zeros, then Z in the next degree.
        let mut t = HomotopyTable::new();
        for d in 1..=zeros {
            t.insert(d, TableEntry::exact(FgAbelianGroup::zero(), "")).unwrap();
        }
        t.insert(zeros + 1, TableEntry::exact(FgAbelianGroup::integers(), "")).unwrap();
        let shifted = homotopy::loopspace_shift(&t, loops);
        let expected = (1..).take_while(|&c| c + loops <= zeros).last().unwrap_or(0);
        if zeros + 1 > loops {
            prop_assert_eq!(homotopy::connectivity(&shifted), Ok(expected));
        } else {
            // Every entry is looped away; nothing bounds the connectivity.
            prop_assert!(homotopy::connectivity(&shifted).is_err());
        }
    }
}
