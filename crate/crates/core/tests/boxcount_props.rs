use cantorset::boxcount::{boxcount_dimension, boxes_at_power, boxes_at_scale_exact, DEFAULT_NODE_CAP};
use cantorset::dimension::family_dimension;
use cantorset::families::FamilySpec;
use cantorset::radix::rat;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (3u32..=5).prop_map(|s| FamilySpec::s(s).unwrap()),
        (3u32..=5).prop_map(|s| FamilySpec::sminus(s).unwrap()),
        (3u32..=5).prop_map(|s| FamilySpec::nsu(s, 0).unwrap()),
        Just(FamilySpec::blocks(3, vec![vec![0], vec![2]]).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn counts_are_nonincreasing_in_eps(fam in family(), den in 2i64..200, factor in 2i64..5) {
        let fine = boxes_at_scale_exact(&fam, &rat(1, den * factor), 0, DEFAULT_NODE_CAP).unwrap();
        let coarse = boxes_at_scale_exact(&fam, &rat(1, den), 0, DEFAULT_NODE_CAP).unwrap();
        prop_assert!(coarse.count <= fine.count);
    }
}

#[test]
fn power_scales_are_monotone() {
    for fam in ["S(s=3)", "Sminus(s=4)", "Tilde(s=3)"] {
        let fam: FamilySpec = fam.parse().unwrap();
        let counts: Vec<u64> = (1..=7)
            .map(|n| boxes_at_power(&fam, n, 0, DEFAULT_NODE_CAP).unwrap().count)
            .collect();
        assert!(counts.windows(2).all(|w| w[0] <= w[1]), "{fam}: {counts:?}");
    }
}

#[test]
fn slopes_track_the_solver() {
    for s in 3..=5u32 {
        for fam in [
            FamilySpec::s(s).unwrap(),
            FamilySpec::sminus(s).unwrap(),
            FamilySpec::nsu(s, 0).unwrap(),
        ] {
            let alpha = family_dimension(&fam).unwrap().alpha;
            let rep = boxcount_dimension(&fam, 4..=10, DEFAULT_NODE_CAP).unwrap();
            assert!(
                (rep.fit.slope - alpha).abs() <= 0.02,
                "{fam}: slope {} vs {alpha}",
                rep.fit.slope
            );
        }
    }
}
