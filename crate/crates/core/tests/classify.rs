use easyqg::classify::{
    apply_capping, associated_easy_group, lemma_case, verify_lemma_6_2, verify_lemma_6_4, Capping,
    CappingKind,
};
use easyqg::partition::shapes_up_to;
use easyqg::{Base, CategoryId, Modulus, Partition};
use proptest::prelude::*;

fn partition(max_legs: usize) -> impl Strategy<Value = Partition> {
    (1..=max_legs)
        .prop_flat_map(|j| (0..=j, prop::collection::vec(0..j, j)))
        .prop_map(|(k, labels)| Partition::from_labels(k, labels.len() - k, &labels).unwrap())
}

fn preserved(c: &CategoryId, kind: CappingKind, max_legs: usize) -> Option<(Partition, Capping)> {
    for (k, l) in shapes_up_to(max_legs) {
        for p in c.members(k, l) {
            for cap in Capping::all(kind, p.legs()) {
                let q = apply_capping(&p, cap).unwrap();
                if !c.contains(&q) {
                    return Some((p, cap));
                }
            }
        }
    }
    None
}

#[test]
fn semicircles_preserve_every_category() {
    let moduli = [Modulus::Finite(2), Modulus::Finite(3), Modulus::Infinite];
    for c in CategoryId::all_families(&moduli) {
        assert_eq!(preserved(&c, CappingKind::Semicircle, 8), None, "{c}");
    }
}

#[test]
fn singletons_and_doubletons_preserve_their_categories() {
    for b in [Base::S, Base::B] {
        for c in [CategoryId::Classical(b), CategoryId::Free(b)] {
            assert_eq!(preserved(&c, CappingKind::Singleton, 8), None, "{c}");
        }
    }
    for b in [Base::SPrime, Base::BPrime] {
        for c in [CategoryId::Classical(b), CategoryId::Free(b)] {
            assert_eq!(preserved(&c, CappingKind::Doubleton, 8), None, "{c}");
        }
    }
}

proptest! {
    #[test]
    fn cappings_drop_the_expected_legs(p in partition(8), a in 0usize..8, b in 0usize..8) {
        let j = p.legs();
        let (a, b) = (a % j + 1, b % j + 1);
        prop_assert_eq!(apply_capping(&p, Capping::Singleton(a)).unwrap().legs(), j - 1);
        if j >= 2 {
            prop_assert_eq!(apply_capping(&p, Capping::Semicircle(a)).unwrap().legs(), j - 2);
        }
        if a != b {
            let q = apply_capping(&p, Capping::Doubleton(a, b)).unwrap();
            prop_assert_eq!(q.legs(), j - 2);
            prop_assert_eq!(q, apply_capping(&p, Capping::Doubleton(b, a)).unwrap());
        }
    }
}

#[test]
fn grouping_of_families() {
    let moduli = [Modulus::Finite(3), Modulus::Finite(4), Modulus::Infinite];
    let mut hyper = 0;
    for c in CategoryId::all_families(&moduli) {
        let k = associated_easy_group(&c, 6).unwrap();
        if k == CategoryId::Free(Base::H) {
            hyper += 1;
        }
    }
    // Ph, NCh, Eh and three moduli of both series
    assert_eq!(hyper, 3 + 2 * moduli.len());
}

#[test]
fn capping_cases_are_consistent() {
    for case in 1..=6 {
        let lc = lemma_case(case).unwrap();
        assert!(!lc.in_difference(&Partition::pair()));
        assert!(verify_lemma_6_2(case, 6).unwrap().passed());
    }
    assert!(lemma_case(7).is_err());
}

#[test]
fn dichotomies_for_small_partitions() {
    for case in 2..=5 {
        let r = verify_lemma_6_4(case, 4, 6).unwrap();
        assert!(r.passed(), "case {case}: {:?}", r.failures);
    }
}
