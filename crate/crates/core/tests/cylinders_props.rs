use cantorset::cylinders::{
    covering_sum, cylinder_diameter, cylinder_geometry, cylinder_hull, cylinder_interval, gap_interval,
    has_lemma_formula, ordering_check, tail_extrema_bruteforce, tail_extrema_oracle, verify, VerifyOptions,
};
use cantorset::families::{CylinderAddress, FamilySpec, DEFAULT_CAP};
use cantorset::radix::{inv_pow, rat, Rational};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn lemma_family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (3u32..=6).prop_map(|s| FamilySpec::s(s).unwrap()),
        (4u32..=6, 0u32..6).prop_map(|(s, u)| FamilySpec::su(s, u % s).unwrap()),
        (3u32..=5).prop_map(|s| FamilySpec::nsu(s, 0).unwrap()),
        (3u32..=6).prop_map(|s| FamilySpec::sminus(s).unwrap()),
    ]
}

fn address(fam: &FamilySpec, seed: &[u32]) -> CylinderAddress {
    let sy = fam.symbols_at(1).unwrap();
    CylinderAddress(seed.iter().map(|x| sy[*x as usize % sy.len()]).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn closed_form_equals_hull(fam in lemma_family(), seed in prop::collection::vec(0u32..100, 0..4)) {
        prop_assume!(has_lemma_formula(&fam));
        let a = address(&fam, &seed);
        let closed = cylinder_interval(&fam, &a).unwrap();
        let hull = cylinder_hull(&fam, &a).unwrap();
        if matches!(fam, FamilySpec::SMinus { .. }) {
            prop_assert!(closed.contains(&hull));
        } else {
            prop_assert_eq!(closed, hull);
        }
    }

    #[test]
    fn children_nest_in_parents(fam in lemma_family(), seed in prop::collection::vec(0u32..100, 0..4), c in 0u32..100) {
        let a = address(&fam, &seed);
        let child = address(&fam, &[c]).0[0];
        let parent = cylinder_geometry(&fam, &a).unwrap();
        prop_assert!(parent.contains(&cylinder_geometry(&fam, &a.child(child)).unwrap()));
    }

    #[test]
    fn diameters_follow_the_ratio_law(fam in lemma_family(), seed in prop::collection::vec(0u32..100, 0..4), c in 0u32..100) {
        let a = address(&fam, &seed);
        let p = address(&fam, &[c]).0[0];
        let d = cylinder_diameter(&fam, &a).unwrap();
        prop_assume!(!d.is_zero());
        let s = fam.base().unwrap() as u64;
        prop_assert_eq!(cylinder_diameter(&fam, &a.child(p)).unwrap() / d, inv_pow(s, p as u64));
    }

    #[test]
    fn oracle_sits_inside_within_bound(fam in lemma_family(), seed in prop::collection::vec(0u32..100, 0..3)) {
        let a = address(&fam, &seed);
        let geo = cylinder_geometry(&fam, &a).unwrap();
        let o = tail_extrema_oracle(&fam, &a, 6).unwrap();
        prop_assert!(geo.contains(&o.interval));
        prop_assert!(geo.hausdorff(&o.interval) <= o.bound);
    }

    #[test]
    fn siblings_are_separated_and_ordered(fam in lemma_family(), seed in prop::collection::vec(0u32..100, 0..3)) {
        prop_assume!(!fam.is_degenerate());
        let a = address(&fam, &seed);
        let sy = fam.symbols_at(a.rank() + 1).unwrap();
        for w in sy.windows(2) {
            let gap = gap_interval(&fam, &a, w[0]).unwrap().expect("a right sibling exists");
            prop_assert!(gap.diameter() > Rational::zero());
        }
        prop_assert!(ordering_check(&fam, &a).unwrap().passed());
    }
}

#[test]
fn dp_oracle_matches_brute_force() {
    for fam in [
        FamilySpec::s(3).unwrap(),
        FamilySpec::nsu(3, 0).unwrap(),
        FamilySpec::sminus(4).unwrap(),
    ] {
        for a in [vec![], vec![1], vec![2, 1]] {
            let a = CylinderAddress(a);
            let o = tail_extrema_oracle(&fam, &a, 4).unwrap();
            assert_eq!(o.interval, tail_extrema_bruteforce(&fam, &a, 4, DEFAULT_CAP).unwrap());
        }
    }
}

#[test]
fn covering_sums_shrink_geometrically() {
    for s in 3..=5u32 {
        for fam in [
            FamilySpec::s(s).unwrap(),
            FamilySpec::sminus(s).unwrap(),
            FamilySpec::nsu(s, 0).unwrap(),
        ] {
            // Every rank-n cylinder splits into children scaled by s^-p, p = 1..s-1.
            let q: Rational = (1..s).map(|p| inv_pow(s as u64, p as u64)).sum();
            let mut prev = covering_sum(&fam, 0, DEFAULT_CAP).unwrap();
            for n in 1..=5 {
                let next = covering_sum(&fam, n, DEFAULT_CAP).unwrap();
                assert_eq!(&next / &prev, q, "{fam} rank {n}");
                prev = next;
            }
        }
    }
}

#[test]
fn verify_passes_on_lemma_families() {
    let opts = VerifyOptions {
        depth: 3,
        oracle_depth: 6,
        cap: DEFAULT_CAP,
    };
    for fam in [
        "S(s=4)",
        "Su(s=5,u=2)",
        "NSu(s=3,u=0)",
        "Sminus(s=4)",
        "Tilde(s=4)",
        "MDper(s=2,m=[3,5])",
    ] {
        let fam: FamilySpec = fam.parse().unwrap();
        let rep = verify(&fam, opts).unwrap();
        assert!(rep.passed(), "{fam}: {:?}", rep.checks.iter().find(|c| !c.passed()));
    }
}

#[test]
fn degenerate_sets_are_points() {
    for (s, u, x) in [(3, 1, rat(5, 8)), (3, 2, rat(1, 2))] {
        let fam = FamilySpec::su(s, u).unwrap();
        let iv = cylinder_geometry(&fam, &CylinderAddress(vec![])).unwrap();
        assert_eq!((iv.lo.clone(), iv.hi.clone()), (x.clone(), x));
        assert!(iv.diameter().abs().is_zero());
    }
}
