use cantorset::families::{
    blocks_of_family, enumerate_addresses, eval_family_point, expand_address, membership_prefix, CylinderAddress,
    FamilySpec, DEFAULT_CAP,
};
use proptest::prelude::*;

#[test]
fn tilde_block_count() {
    for s in 3..=12u32 {
        let b = blocks_of_family(&FamilySpec::tilde(s).unwrap()).unwrap();
        assert_eq!(b.len(), Some((s * s - 3 * s + 3) as usize), "s = {s}");
        let hist = b.histogram().unwrap();
        assert_eq!(hist.values().sum::<u64>(), b.len().unwrap() as u64);
    }
}

#[test]
fn run_length_block_sets() {
    for s in 3..=9u32 {
        for u in 0..s {
            let b = blocks_of_family(&FamilySpec::su(s, u).unwrap()).unwrap();
            let mut lengths: Vec<usize> = b.blocks().unwrap().iter().map(Vec::len).collect();
            lengths.sort_unstable();
            let want: Vec<usize> = (1..s as usize).filter(|&k| k != u as usize).collect();
            assert_eq!(lengths, want, "s = {s}, u = {u}");
            let count = if u == 0 { s - 1 } else { s - 2 };
            assert_eq!(b.len(), Some(count as usize));
        }
    }
}

#[test]
fn enumeration_counts() {
    for s in 3..=6u32 {
        for n in 0..=4usize {
            for fam in [
                FamilySpec::s(s).unwrap(),
                FamilySpec::nsu(s, 0).unwrap(),
                FamilySpec::sminus(s).unwrap(),
            ] {
                let got = enumerate_addresses(&fam, n, DEFAULT_CAP).unwrap();
                assert_eq!(got.len(), (s as usize - 1).pow(n as u32));
                assert!(got.windows(2).all(|w| w[0] < w[1]), "sorted and distinct");
            }
            for u in 1..s {
                let fam = FamilySpec::su(s, u).unwrap();
                assert_eq!(
                    enumerate_addresses(&fam, n, DEFAULT_CAP).unwrap().len(),
                    (s as usize - 2).pow(n as u32)
                );
            }
        }
    }
}

fn block_family() -> impl Strategy<Value = FamilySpec> {
    prop_oneof![
        (3u32..=7).prop_map(|s| FamilySpec::s(s).unwrap()),
        (3u32..=7, 0u32..7).prop_map(|(s, u)| FamilySpec::su(s, u % s).unwrap()),
        (3u32..=7, 0u32..7).prop_map(|(s, u)| FamilySpec::nsu(s, u % s).unwrap()),
        (3u32..=7).prop_map(|s| FamilySpec::sminus(s).unwrap()),
        (3u32..=6).prop_map(|s| FamilySpec::tilde(s).unwrap()),
        (2u32..=4, prop::collection::vec((1u32..4).prop_map(|k| 2 * k + 1), 1..3))
            .prop_map(|(s, m)| FamilySpec::md_periodic(s, m).unwrap()),
    ]
}

fn address_in(fam: &FamilySpec, seed: &[u32]) -> Vec<u32> {
    seed.iter()
        .enumerate()
        .map(|(i, x)| {
            let sy = fam.symbols_at(i + 1).unwrap();
            sy[*x as usize % sy.len()]
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn expansions_are_members(fam in block_family(), seed in prop::collection::vec(0u32..1000, 0..6)) {
        let addr = CylinderAddress(address_in(&fam, &seed));
        let digits = expand_address(&fam, &addr).unwrap();
        prop_assert!(membership_prefix(&fam, &digits));
    }

    #[test]
    fn symbol_maps_agree_with_series(
        fam in block_family(),
        seed in prop::collection::vec(0u32..1000, 0..5),
        tail_seed in 0u32..1000,
    ) {
        let prefix = address_in(&fam, &seed);
        let maps = fam.level_maps().unwrap();
        let period = maps.period();
        // Constant-per-level tail over one full period, starting after the prefix.
        let tail: Vec<u32> = (0..period)
            .map(|j| {
                let sy = fam.symbols_at(prefix.len() + j + 1).unwrap();
                sy[(tail_seed as usize + j) % sy.len()]
            })
            .collect();
        let point = eval_family_point(&fam, &prefix, &tail).unwrap();
        // Same point through the affine maps: F_prefix(fixed point of F_tail).
        let head = maps.address_map(&prefix).unwrap();
        let mut full: Vec<u32> = prefix.clone();
        full.extend(&tail);
        let tail_map = maps.address_map(&full).unwrap();
        // F_full = F_prefix ∘ G, so G's fixed point is recovered from both.
        let g_offset = (&tail_map.offset - &head.offset) / &head.scale;
        let g_scale = &tail_map.scale / &head.scale;
        let fixed = cantorset::ifs::Affine::new(g_offset, g_scale).fixed_point();
        prop_assert_eq!(head.apply(&fixed), point);
    }
}
