use std::collections::BTreeSet;
use std::sync::Arc;

use osc_core::finite::{
    canonical_certificate, delta, delta3, derivative_tower, in_closure, osc, osc_triple, realize_osc_triple,
    realize_oscillations, search_certificate, CanonicalFamily, DerivativeCertificate, ExplicitFamily, Family,
    FamilyDescriptor, FiniteError, FiniteNatSet,
};
use proptest::prelude::*;

fn set(text: &str) -> FiniteNatSet {
    text.parse().unwrap()
}

/// Walks `0..=max` and counts maximal runs of consecutive integers that all
/// sit on one side of the symmetric difference.
fn run_count(s: &BTreeSet<u64>, t: &BTreeSet<u64>) -> u64 {
    let top = s.iter().chain(t).max().copied().unwrap_or(0);
    let mut runs = 0;
    let mut prev_side = None;
    for n in 0..=top {
        let side = match (s.contains(&n), t.contains(&n)) {
            (true, false) => Some(0),
            (false, true) => Some(1),
            _ => None,
        };
        if side.is_some() && side != prev_side {
            runs += 1;
        }
        prev_side = side;
    }
    runs
}

fn as_btree(s: &FiniteNatSet) -> BTreeSet<u64> {
    s.as_slice().iter().copied().collect()
}

fn subsets_up_to(bound: u64, size: usize) -> Vec<BTreeSet<u64>> {
    let mut out = vec![BTreeSet::new()];
    for x in 0..=bound {
        let grown: Vec<_> = out
            .iter()
            .filter(|s| s.len() < size)
            .map(|s| {
                let mut s = s.clone();
                s.insert(x);
                s
            })
            .collect();
        out.extend(grown);
    }
    out
}

/// `δ` by the definition: `s` stays when for every `n` in `(sup s, M]` some
/// other member agrees with it below `n`.
fn brute_derivative(members: &[BTreeSet<u64>], bound: u64) -> Vec<BTreeSet<u64>> {
    members
        .iter()
        .filter(|s| {
            let lowest = s.iter().max().map_or(1, |m| m + 1);
            lowest <= bound
                && (lowest..=bound).all(|n| {
                    members
                        .iter()
                        .any(|t| t != *s && t.iter().filter(|&&x| x < n).copied().collect::<BTreeSet<_>>() == **s)
                })
        })
        .cloned()
        .collect()
}

#[test]
fn worked_values() {
    assert_eq!(osc(&set("1,2,3"), &set("1,2,3")), 0);
    assert_eq!(osc(&set("1"), &set("2")), 2);
    assert_eq!(osc(&set("1,2,3"), &set("3,4")), 2);
    assert_eq!(delta(&set("1,3"), &set("1,4")), Ok(3));
    assert_eq!(delta(&set("0"), &set("")), Ok(0));
    assert_eq!(delta(&set("2"), &set("2")), Err(FiniteError::EqualSets));
    assert_eq!(osc_triple(&set("0"), &set("1"), &set("2")), Ok(1));
    assert_eq!(osc_triple(&set("1"), &set("1"), &set("2")), Err(FiniteError::NotDistinct));
    assert_eq!(delta3(&set("0,5"), &set("1,5"), &set("0,1")), Ok(1));
}

#[test]
fn four_alternating_blocks() {
    let (s, t) = (set("0,1,5,6,7"), set("2,3,4,8,9"));
    assert_eq!(osc(&s, &t), 4);
    assert_eq!(run_count(&as_btree(&s), &as_btree(&t)), 4);
}

#[test]
fn closure_examples() {
    let family = CanonicalFamily::new(2, 16);
    assert!(in_closure(&set(""), &family));
    assert!(!in_closure(&set("0,1"), &family));
    let nothing = ExplicitFamily::new([]);
    assert!(!in_closure(&set("3"), &nothing));
}

#[test]
fn truncated_derivative_matches_definition() {
    let bound = 10;
    let members = subsets_up_to(bound, 2);
    let family: Arc<dyn Family> = Arc::new(CanonicalFamily::new(2, bound));
    let tower = derivative_tower(family, 2);
    let once = brute_derivative(&members, bound);
    let twice = brute_derivative(&once, bound - 1);
    for s in &members {
        let fs = FiniteNatSet::new(s.iter().copied().collect()).unwrap();
        assert_eq!(tower[1].contains(&fs), once.contains(s), "first derivative at {fs}");
        assert_eq!(tower[2].contains(&fs), twice.contains(s), "second derivative at {fs}");
    }
    assert!(twice.contains(&BTreeSet::new()));
}

#[test]
fn explicit_family_derivative_is_empty_where_extensions_run_out() {
    let family: Arc<dyn Family> = Arc::new(ExplicitFamily::parse_list("\n1\n1,2\n4\n").unwrap());
    let tower = derivative_tower(family, 1);
    assert!(!tower[1].contains(&set("1,2")));
    assert!(!tower[1].contains(&set("4")));
}

#[test]
fn realization_for_canonical_families() {
    for k in 1..=4 {
        let family: Arc<dyn Family> = Arc::new(CanonicalFamily::new(k, 8 * k as u64));
        let cert = canonical_certificate(k);
        let pairs = realize_oscillations(family.clone(), &cert).unwrap();
        let triples = realize_osc_triple(family.clone(), &cert).unwrap();
        let want: Vec<u64> = (1..2 * k as u64).collect();
        assert_eq!(pairs.keys().copied().collect::<Vec<_>>(), want);
        assert_eq!(triples.keys().copied().collect::<Vec<_>>(), want);
        for (&v, (a, b)) in &pairs {
            assert!(family.contains(a) && family.contains(b));
            assert_eq!(run_count(&as_btree(a), &as_btree(b)), v);
        }
    }
}

#[test]
fn searched_certificate_at_larger_bound() {
    let family: Arc<dyn Family> = Arc::new(CanonicalFamily::new(2, 64));
    let cert = search_certificate(family.clone(), 2, &set(""), 10_000).unwrap();
    cert.validate(family.clone()).unwrap();
    let pairs = realize_oscillations(family, &cert).unwrap();
    assert_eq!(pairs.keys().copied().collect::<Vec<_>>(), [1, 2, 3]);
}

#[test]
fn corrupted_certificates_are_rejected() {
    let family: Arc<dyn Family> = Arc::new(CanonicalFamily::new(2, 16));
    let mut cert = canonical_certificate(2);
    cert.u[1] = set("1,2");
    assert!(matches!(realize_oscillations(family.clone(), &cert), Err(FiniteError::InvalidCertificate(_))));
    let short = DerivativeCertificate { t: vec![set("0")], ..canonical_certificate(2) };
    assert!(matches!(realize_osc_triple(family, &short), Err(FiniteError::InvalidCertificate(_))));
}

#[test]
fn descriptors() {
    let d: FamilyDescriptor = "canonical:k=3,M=24".parse().unwrap();
    let family = d.build().unwrap();
    assert_eq!(family.element_bound(), 24);
    assert!(family.contains(&set("0,5,24")));
    assert!(!family.contains(&set("0,5,7,9")));
    assert!("canonical:k=x".parse::<FamilyDescriptor>().is_err());
    assert!("list:foo".parse::<FamilyDescriptor>().is_err());
}

#[test]
fn set_text_round_trip() {
    assert_eq!(set("").to_string(), "");
    assert_eq!(set("1,2,3").to_string(), "1,2,3");
    assert!("3,1,2".parse::<FiniteNatSet>().is_err());
    assert!("1,a".parse::<FiniteNatSet>().is_err());
}

fn arb_set() -> impl Strategy<Value = FiniteNatSet> {
    prop::collection::btree_set(0u64..40, 0..12).prop_map(|s| FiniteNatSet::new(s.into_iter().collect()).unwrap())
}

proptest! {
    #[test]
    fn osc_agrees_with_run_count(s in arb_set(), t in arb_set()) {
        prop_assert_eq!(osc(&s, &t), run_count(&as_btree(&s), &as_btree(&t)));
        prop_assert_eq!(osc(&s, &t), osc(&t, &s));
    }

    #[test]
    fn triple_is_symmetric_and_local(s in arb_set(), t in arb_set(), u in arb_set()) {
        prop_assume!(s != t && t != u && s != u);
        let v = osc_triple(&s, &t, &u).unwrap();
        prop_assert_eq!(osc_triple(&u, &s, &t).unwrap(), v);
        prop_assert_eq!(osc_triple(&t, &s, &u).unwrap(), v);
        let pad = |x: &FiniteNatSet| {
            let mut e = x.as_slice().to_vec();
            e.extend(500..520);
            FiniteNatSet::new(e).unwrap()
        };
        prop_assert_eq!(osc_triple(&pad(&s), &pad(&t), &pad(&u)).unwrap(), v);
    }
}
