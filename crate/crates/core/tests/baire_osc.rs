use osc_core::baire::{
    k_and_image, k_index, osc_infinite, realize_bits, superperfect_image, BaireError, BinaryExpansion, BitStream,
    BitString, DyadicFamily, EvenTree, FullTree, HashStream, ListFamily, MapBudget, NodeListTree, PrefixThen,
    PrefixTriple, TreeDescriptor, TreeOracle,
};
use osc_core::ordinal::Ordinal;
use proptest::prelude::*;

fn triple(x: &[u64], y: &[u64], z: &[u64], window: u64) -> PrefixTriple<u64> {
    PrefixTriple::new(x.to_vec(), y.to_vec(), z.to_vec(), window).unwrap()
}

/// Reads the bits off a window by listing the gaps of `x` explicitly.
fn gap_oracle(x: &[u64], y: &[u64], z: &[u64]) -> Vec<bool> {
    let mut bits = Vec::new();
    let mut low = 0;
    for &high in x {
        let first = |s: &[u64]| s.iter().copied().find(|&v| v >= low && v < high);
        if let (Some(a), Some(b)) = (first(y), first(z)) {
            bits.push(a > b);
        }
        low = high + 1;
    }
    bits
}

#[test]
fn worked_window() {
    let p = triple(&[2, 5, 9], &[0, 3, 7], &[1, 4, 6], 9);
    assert_eq!(osc_infinite(&p).to_string(), "001");
    assert!(osc_infinite(&triple(&[], &[0, 3], &[1, 2], 9)).is_empty());
    let same = triple(&[4, 8, 12], &[1, 5, 9], &[1, 5, 9], 12);
    assert!(osc_infinite(&same).0.iter().all(|b| !b));
    assert!(PrefixTriple::new(vec![3, 2], vec![], vec![], 5).is_err());
    assert!(PrefixTriple::new(vec![7], vec![], vec![], 5).is_err());
}

#[test]
fn empty_target_gives_least_splitting_nodes() {
    let full: &dyn TreeOracle<u64> = &FullTree;
    let r = realize_bits([full, full, full], &BitString::default()).unwrap();
    assert!(r.triple.x.is_empty() && r.triple.y.is_empty() && r.triple.z.is_empty());
}

#[test]
fn target_0110_over_each_tree_shape() {
    let target: BitString = "0110".parse().unwrap();
    let full: &dyn TreeOracle<u64> = &FullTree;
    let even: &dyn TreeOracle<u64> = &EvenTree;
    for trees in [[full, full, full], [even, full, even], [even, even, even]] {
        let r = realize_bits(trees, &target).unwrap();
        let bits = osc_infinite(&r.triple);
        assert_eq!(BitString(bits.0[r.lead..r.lead + 4].to_vec()), target);
        assert_eq!(bits.0, gap_oracle(&r.triple.x, &r.triple.y, &r.triple.z));
        for (tree, seq) in trees.iter().zip([&r.triple.x, &r.triple.y, &r.triple.z]) {
            assert!(tree.is_member(seq));
        }
    }
}

#[test]
fn ordinal_indexed_realization() {
    let target: BitString = "1011".parse().unwrap();
    let full: &dyn TreeOracle<Ordinal> = &FullTree;
    let r = realize_bits([full, full, full], &target).unwrap();
    assert!(osc_infinite(&r.triple).starts_with(&target));
    assert!(r.triple.x.iter().any(|v| v.is_limit()));
}

#[test]
fn finite_node_lists() {
    let tree = NodeListTree::parse_list("0,2\n0,5\n0,9,10\n").unwrap();
    assert!(tree.is_member(&[0]) && tree.is_member(&[0, 9]) && !tree.is_member(&[1]));
    assert_eq!(tree.least_splitting_above(&[]).unwrap(), Vec::<u64>::new());
    assert_eq!(tree.large_extension(&[0], Some(&4)).unwrap(), vec![0, 5]);
    assert!(matches!(tree.large_extension(&[0], Some(&9)), Err(BaireError::OracleFailure(_))));
    assert!(NodeListTree::parse_list("3,1").is_err());
    assert!(matches!("nodes:/x".parse(), Ok(TreeDescriptor::Nodes(_))));
    assert!("bushy".parse::<TreeDescriptor>().is_err());
}

#[test]
fn k_index_from_the_definition() {
    // x = 1000…, d_0 = 0…, d_1 = 11…, d_2 = 101…
    let x = PrefixThen { prefix: vec![true], tail: false };
    let d = ListFamily(vec![
        Box::new(PrefixThen { prefix: vec![], tail: false }),
        Box::new(PrefixThen { prefix: vec![], tail: true }),
        Box::new(PrefixThen { prefix: vec![true, false, true], tail: false }),
    ]);
    assert_eq!(k_index(&x, &d, 0, MapBudget::default()).unwrap(), 0);
    assert_eq!(k_index(&x, &d, 1, MapBudget::default()).unwrap(), 1);
    assert_eq!(k_and_image(&x, &d, 3, MapBudget::default()).unwrap().1, vec![0, 1, 2]);
    let member = PrefixThen { prefix: vec![], tail: false };
    assert!(matches!(
        k_index(&member, &d, 1, MapBudget { depth: 64, candidates: 10 }),
        Err(BaireError::SearchBudgetExceeded { .. })
    ));
}

#[test]
fn one_third_image() {
    let x = BinaryExpansion { num: 1, den: 3 };
    let img = superperfect_image(&x, &DyadicFamily, 8, MapBudget::default()).unwrap();
    assert_eq!(img.len(), 8);
    assert!(img.windows(2).all(|w| w[0] < w[1]));
    assert!(superperfect_image(&x, &DyadicFamily, 0, MapBudget::default()).unwrap().is_empty());
}

proptest! {
    #[test]
    fn window_reading_matches_gap_oracle(
        x in prop::collection::btree_set(0u64..60, 0..10),
        y in prop::collection::btree_set(0u64..60, 0..10),
        z in prop::collection::btree_set(0u64..60, 0..10),
    ) {
        let (x, y, z): (Vec<u64>, Vec<u64>, Vec<u64>) =
            (x.into_iter().collect(), y.into_iter().collect(), z.into_iter().collect());
        let p = triple(&x, &y, &z, 60);
        prop_assert_eq!(osc_infinite(&p).0, gap_oracle(&x, &y, &z));
    }

    #[test]
    fn round_trip(bits in prop::collection::vec(any::<bool>(), 0..24)) {
        let target = BitString(bits);
        let full: &dyn TreeOracle<u64> = &FullTree;
        let r = realize_bits([full, full, full], &target).unwrap();
        prop_assert_eq!(r.lead, 0);
        prop_assert!(osc_infinite(&r.triple).starts_with(&target));
    }

    #[test]
    fn windows_only_append(bits in prop::collection::vec(any::<bool>(), 1..16), cut in 0u64..200) {
        let full: &dyn TreeOracle<u64> = &FullTree;
        let p = realize_bits([full, full, full], &BitString(bits)).unwrap().triple;
        let cut = cut.min(p.window);
        let keep = |s: &[u64]| s.iter().copied().filter(|&v| v <= cut).collect::<Vec<_>>();
        let short = osc_infinite(&triple(&keep(&p.x), &keep(&p.y), &keep(&p.z), cut));
        prop_assert!(osc_infinite(&p).starts_with(&short));
    }

    #[test]
    fn images_agree_while_streams_agree(seed in any::<u64>(), depth in 4u64..40) {
        let x = HashStream { seed };
        let mut prefix: Vec<bool> = (0..depth).map(|n| x.bit(n)).collect();
        prefix.push(!x.bit(depth));
        let y = PrefixThen { prefix, tail: true };
        let budget = MapBudget::default();
        let (fx, fy) = (
            superperfect_image(&x, &DyadicFamily, 6, budget),
            superperfect_image(&y, &DyadicFamily, 6, budget),
        );
        if let (Ok(fx), Ok(fy)) = (fx, fy) {
            for n in 0..6 {
                if fx[n] < depth {
                    prop_assert_eq!(fx[n], fy[n]);
                } else {
                    break;
                }
            }
        }
    }
}
