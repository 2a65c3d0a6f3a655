use cantorset::dimension::{
    block_dimension, family_dimension, md_cardano, md_closed_form, moran_dimension, periodic_dimension,
    periodic_moran_check, Method,
};
use cantorset::families::{blocks_of_family, BlockSet, FamilySpec};
use cantorset::radix::rat;
use proptest::prelude::*;

/// Root in `α ∈ [0, 1]` of the decreasing function `Σ_k count_k · s^{-kα} - 1`.
fn oracle_alpha(s: f64, lengths: &[usize]) -> f64 {
    let f = |a: f64| lengths.iter().map(|&k| s.powf(-(k as f64) * a)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn run_lengths(s: u32, u: u32) -> Vec<usize> {
    (1..s as usize).filter(|&p| u == 0 || p != u as usize).collect()
}

#[test]
fn su_and_negasu_share_a_dimension() {
    for s in 3..=8u32 {
        for u in 0..s {
            let a = family_dimension(&FamilySpec::su(s, u).unwrap()).unwrap();
            let b = family_dimension(&FamilySpec::nsu(s, u).unwrap()).unwrap();
            assert!((a.alpha - b.alpha).abs() <= 1e-12, "s={s} u={u}");
            let lengths = run_lengths(s, u);
            if lengths.len() == 1 {
                assert!(a.degenerate && a.alpha == 0.0);
                continue;
            }
            assert!(
                (a.alpha - oracle_alpha(s as f64, &lengths)).abs() <= 1e-10,
                "s={s} u={u}"
            );
            assert!(a.residual <= 1e-10);
        }
    }
}

#[test]
fn md_routes_agree() {
    for s in 2..=16u32 {
        let closed = md_closed_form(s).unwrap();
        assert_eq!(closed.method, Method::ClosedCubic);
        let cubic = block_dimension(s, &blocks_of_family(&FamilySpec::md(s).unwrap()).unwrap()).unwrap();
        assert!((closed.alpha - md_cardano(s)).abs() <= 1e-12);
        assert!((closed.alpha - cubic.alpha).abs() <= 1e-10, "s={s}");
        let t = (s as f64).powf(-closed.alpha);
        assert!(((s as f64 - 1.0) * t.powi(3) + t * t - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn periodic_values_are_exact() {
    assert_eq!(periodic_dimension(&[3]).unwrap().exact, Some(rat(1, 3)));
    assert_eq!(periodic_dimension(&[3, 5]).unwrap().exact, Some(rat(1, 4)));
    for s in [2, 3, 5] {
        for m in [vec![1], vec![3], vec![3, 5], vec![1, 1, 7]] {
            let want = m.len() as f64 / m.iter().sum::<u32>() as f64;
            assert!((periodic_moran_check(s, &m).unwrap() - want).abs() <= 1e-12);
        }
    }
}

fn block_set() -> impl Strategy<Value = (u32, Vec<Vec<u32>>)> {
    (2u32..=5).prop_flat_map(|s| {
        let block = prop::collection::vec(0..s, 1..5);
        (Just(s), prop::collection::vec(block, 1..8))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn dimension_lies_in_unit_interval((s, blocks) in block_set()) {
        let b = BlockSet::finite(s, blocks).unwrap();
        let d = block_dimension(s, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&d.alpha));
    }

    #[test]
    fn adding_a_block_never_lowers_dimension((s, blocks) in block_set(), extra in prop::collection::vec(0u32..5, 1..5)) {
        let extra: Vec<u32> = extra.into_iter().map(|d| d % s).collect();
        let before = block_dimension(s, &BlockSet::finite(s, blocks.clone()).unwrap()).unwrap();
        let mut more = blocks.clone();
        prop_assume!(!more.contains(&extra));
        more.push(extra);
        let after = block_dimension(s, &BlockSet::finite(s, more).unwrap()).unwrap();
        prop_assert!(after.alpha >= before.alpha - 1e-12);
    }

    #[test]
    fn block_root_matches_independent_bisection((s, blocks) in block_set()) {
        let mut uniq = blocks.clone();
        uniq.sort();
        uniq.dedup();
        prop_assume!(uniq.len() >= 2);
        let lengths: Vec<usize> = uniq.iter().map(Vec::len).collect();
        let want = oracle_alpha(s as f64, &lengths).min(1.0);
        let got = block_dimension(s, &BlockSet::finite(s, blocks).unwrap()).unwrap();
        prop_assert!((got.alpha - want).abs() <= 1e-10);
    }

    #[test]
    fn moran_equal_ratios(n in 2usize..10, r in 0.01f64..0.5) {
        prop_assume!(n as f64 * r < 1.0);
        let d = moran_dimension(&vec![r; n]).unwrap();
        prop_assert!((d.alpha - (n as f64).ln() / -r.ln()).abs() <= 1e-10);
    }
}
