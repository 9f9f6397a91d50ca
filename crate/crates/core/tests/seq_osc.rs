use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigUint;
use osc_core::baire::{EvenTree, FullTree, TreeOracle};
use osc_core::seq::{
    decode_rectangle, extend_splitting, final_color, hit_target, osc_seq, rectangle_index, refined_color,
    CanonicalEnumeration, CantorPairing, PairingScheme, Rectangle, RectangleEnumeration, SeqError, SeededEnumeration,
};
use proptest::prelude::*;

fn crossings(s: &[u64], t: &[u64]) -> u64 {
    (1..s.len().min(t.len())).filter(|&n| s[n - 1] <= t[n - 1] && s[n] > t[n]).count() as u64
}

/// Cantor's inverse by walking the diagonals.
fn unpair_by_diagonals(m: u64) -> (u64, u64) {
    let mut diag = 0;
    let mut start = 0;
    while start + diag + 1 <= m {
        start += diag + 1;
        diag += 1;
    }
    let b = m - start;
    (diag - b, b)
}

/// Two sequences crossing exactly `count` times.
fn with_crossings(count: usize) -> (Vec<u64>, Vec<u64>) {
    let len = 2 * count + 1;
    let s = (0..len as u64).map(|n| 10 * n + (n % 2)).collect();
    let t = (0..len as u64).map(|n| 10 * n + 1 - (n % 2)).collect();
    (s, t)
}

#[test]
fn worked_oscillations() {
    assert_eq!(osc_seq(&[1, 4, 5, 9], &[2, 3, 7, 8]), Ok(2));
    assert_eq!(osc_seq(&[1, 4, 5], &[1, 4, 5]), Ok(0));
    assert!(matches!(osc_seq(&[1, 2], &[1]), Err(SeqError::LengthMismatch { .. })));
    for c in 0..10 {
        let (s, t) = with_crossings(c);
        assert_eq!(osc_seq(&s, &t), Ok(c as u64));
    }
}

#[test]
fn refined_color_uses_top_binary_digit() {
    let p = CantorPairing;
    let (s, t) = with_crossings(6);
    assert_eq!(refined_color(&s, &t, &p), Ok(unpair_by_diagonals(2).0));
    let (s, t) = with_crossings(1);
    assert_eq!(refined_color(&s, &t, &p), Ok(unpair_by_diagonals(0).0));
    assert_eq!(refined_color(&[1, 2], &[1, 2], &p), Err(SeqError::ZeroOscillation));
}

#[test]
fn cantor_pairing_matches_diagonals() {
    let p = CantorPairing;
    for m in 0..2000 {
        let (a, b) = p.unpair(m);
        assert_eq!((a, b), unpair_by_diagonals(m));
        assert_eq!(p.pair(a, b), m);
    }
}

#[test]
fn final_color_outside_the_rectangle_is_zero() {
    let p = CantorPairing;
    let (s, t) = with_crossings(1);
    let n = refined_color(&s, &t, &p).unwrap();
    let r = CanonicalEnumeration.rectangle(n);
    let have_value = r.value(&s, &t);
    let c = final_color(&s, &t, &CanonicalEnumeration, &p);
    match have_value {
        Some(v) => assert_eq!(c, Ok(v)),
        None if s.len() >= r.k => assert_eq!(c, Ok(0)),
        None => assert!(matches!(c, Err(SeqError::WindowTooShort { .. }))),
    }
}

#[test]
fn final_color_reads_a_built_rectangle() {
    let p = CantorPairing;
    let enumeration = SeededEnumeration::new();
    // refined color 0 sends the pair to the universal 2×2 rectangle
    let u = vec![vec![2, 1], vec![0, 3]];
    let full: &dyn TreeOracle<u64> = &FullTree;
    let demo = hit_target(full, full, &u, &p, 1 << 20).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            let len = demo.a[i].len().min(demo.b[j].len());
            let (f, g) = (&demo.a[i][..len], &demo.b[j][..len]);
            assert_eq!(refined_color(f, g, &p), Ok(demo.rectangle_index));
            assert_eq!(final_color(f, g, &enumeration, &p), Ok(u[i][j] as u64));
        }
    }
}

#[test]
fn three_by_three_targets() {
    let full: &dyn TreeOracle<u64> = &FullTree;
    let u = vec![vec![0, 1, 2], vec![3, 0, 1], vec![2, 3, 3]];
    let demo = hit_target(full, full, &u, &CantorPairing, 1 << 20).unwrap();
    let want: Vec<Vec<u64>> = u.iter().map(|r| r.iter().map(|&v| v as u64).collect()).collect();
    assert_eq!(demo.colors, want);
    assert!(hit_target(full, full, &vec![vec![0; 4]; 4], &CantorPairing, 1 << 20).is_err());
}

#[test]
fn window_too_short() {
    let (s, t) = with_crossings(1);
    let n = refined_color(&s, &t, &CantorPairing).unwrap();
    let need = SeededEnumeration::new().rectangle(n).k;
    if need > s.len() {
        assert!(matches!(
            final_color(&s, &t, &SeededEnumeration::new(), &CantorPairing),
            Err(SeqError::WindowTooShort { .. })
        ));
    }
}

#[test]
fn extension_adds_exactly_n() {
    let full: &dyn TreeOracle<u64> = &FullTree;
    let zero = extend_splitting(full, full, &[3, 9], &[4], 0).unwrap();
    assert_eq!((zero.s.as_slice(), zero.t.as_slice()), (&[3, 9][..], &[4][..]));
    assert_eq!(zero.osc, zero.baseline);
    for n in 0..=8 {
        let ext = extend_splitting(full, full, &[], &[], n).unwrap();
        assert_eq!(crossings(&ext.s, &ext.t), n);
    }
    let even: &dyn TreeOracle<u64> = &EvenTree;
    let ext = extend_splitting(even, full, &[2, 8], &[1, 3, 5], 5).unwrap();
    assert!(ext.s.iter().all(|v| v % 2 == 0));
    assert_eq!(crossings(&ext.s, &ext.t), crossings(&[2, 8], &[1, 3, 5]) + 5);
}

#[test]
fn empty_rectangle_has_a_fixed_index() {
    let empty = Rectangle::default();
    let index = rectangle_index(&empty).unwrap();
    assert_eq!(decode_rectangle(&index), empty);
    assert_eq!(decode_rectangle(&BigUint::from(0u8)), empty);
}

fn arb_rectangle() -> impl Strategy<Value = Rectangle> {
    (1usize..3)
        .prop_flat_map(|k| {
            let node = prop::collection::btree_set(0u64..20, k).prop_map(|s| s.into_iter().collect::<Vec<_>>());
            (
                Just(k),
                prop::collection::btree_set(node.clone(), 0..3),
                prop::collection::btree_set(node, 0..3),
            )
        })
        .prop_flat_map(|(k, d, e)| {
            let cells = d.len() * e.len();
            (Just(k), Just(d), Just(e), prop::collection::vec(0u64..50, cells))
        })
        .prop_map(|(k, d, e, vals): (usize, BTreeSet<Vec<u64>>, BTreeSet<Vec<u64>>, Vec<u64>)| {
            let mut t = BTreeMap::new();
            let mut vals = vals.into_iter();
            for a in &d {
                for b in &e {
                    t.insert((a.clone(), b.clone()), vals.next().unwrap());
                }
            }
            Rectangle { k, d, e, t }
        })
}

proptest! {
    #[test]
    fn rectangle_codes_round_trip(r in arb_rectangle(), other in arb_rectangle()) {
        let i = rectangle_index(&r).unwrap();
        prop_assert_eq!(decode_rectangle(&i), r.clone());
        if other != r {
            prop_assert_ne!(rectangle_index(&other).unwrap(), i);
        }
    }

    #[test]
    fn extension_is_exact(
        s in prop::collection::btree_set(0u64..40, 0..6),
        t in prop::collection::btree_set(0u64..40, 0..6),
        n in 0u64..=8,
    ) {
        let (s, t): (Vec<u64>, Vec<u64>) = (s.into_iter().collect(), t.into_iter().collect());
        let full: &dyn TreeOracle<u64> = &FullTree;
        let ext = extend_splitting(full, full, &s, &t, n).unwrap();
        prop_assert!(ext.s.starts_with(&s) && ext.t.starts_with(&t));
        prop_assert_eq!(crossings(&ext.s, &ext.t), crossings(&s, &t) + n);
    }

    #[test]
    fn crossings_only_depend_on_adjacent_entries(
        s in prop::collection::btree_set(0u64..100, 1..10),
        extra in 1u64..50,
    ) {
        let s: Vec<u64> = s.into_iter().collect();
        let t: Vec<u64> = s.iter().map(|v| v + 1).collect();
        let top = s.last().unwrap().max(t.last().unwrap()) + 1;
        let (mut s2, mut t2) = (s.clone(), t.clone());
        s2.push(top + extra);
        t2.push(top + extra + 1);
        prop_assert_eq!(osc_seq(&s2, &t2).unwrap(), osc_seq(&s, &t).unwrap());
    }
}
