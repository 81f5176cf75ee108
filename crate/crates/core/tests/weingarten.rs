mod common;

use common::{group_average, monomial_group, multi_indices, permutations, Phases};
use easyqg::weingarten::{gram_matrix, haar_integral, moment, MomentRequest, Weingarten};
use easyqg::tensor::{gram_from_vectors, DEFAULT_BUDGET};
use easyqg::weingarten::diagrams;
use easyqg::{Base, CategoryId, Error, Modulus};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Pow;
use proptest::prelude::*;

fn families() -> Vec<CategoryId> {
    CategoryId::all_families(&[Modulus::Finite(3), Modulus::Finite(4), Modulus::Infinite])
}

fn indices(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(1..=n, k)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gram_bridge(f in 0usize..20, k in 1usize..5, n in 1usize..5) {
        let c = families()[f];
        let d = diagrams(&c, k).unwrap();
        prop_assert_eq!(gram_matrix(&c, k, n).unwrap(), gram_from_vectors(&d, n, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn classical_integrals_are_permutation_invariant(
        b in 0usize..4, i in indices(4, 4), j in indices(4, 4), perm in Just(()).prop_perturb(|_, mut rng| {
            let all = permutations(4);
            all[rng.random_range(0..all.len())].clone()
        })
    ) {
        let c = CategoryId::Classical([Base::O, Base::S, Base::H, Base::B][b]);
        let w = Weingarten::new(&c, 4, 4).unwrap();
        let pi: Vec<usize> = perm.iter().map(|&x| i[x]).collect();
        let pj: Vec<usize> = perm.iter().map(|&x| j[x]).collect();
        prop_assert_eq!(w.haar_integral(&pi, &pj).unwrap(), w.haar_integral(&i, &j).unwrap());
    }

    #[test]
    fn integrals_are_transpose_invariant(f in 0usize..20, i in indices(4, 3), j in indices(4, 3)) {
        let c = families()[f];
        prop_assert_eq!(haar_integral(&c, 4, &i, &j).unwrap(), haar_integral(&c, 4, &j, &i).unwrap());
    }

    #[test]
    fn symmetric_group_oracle(i in indices(4, 4), j in indices(4, 4)) {
        let g = monomial_group(4, Phases::Trivial);
        let c = CategoryId::Classical(Base::S);
        prop_assert_eq!(haar_integral(&c, 4, &i, &j).unwrap(), group_average(&g, &i, &j));
    }
}

#[test]
fn hyperoctahedral_oracle_in_four_dimensions() {
    let g = monomial_group(4, Phases::Free(2));
    let w = Weingarten::new(&CategoryId::Classical(Base::H), 2, 4).unwrap();
    for i in multi_indices(4, 2) {
        for j in multi_indices(4, 2) {
            assert_eq!(w.haar_integral(&i, &j).unwrap(), group_average(&g, &i, &j));
        }
    }
}

#[test]
fn truncated_character_moments_match_the_group() {
    // E (fixed points of σ among 1..m)^k over S_4
    let perms = permutations(4);
    for k in 1..=4 {
        for m in 1..=4 {
            let total: BigInt = perms
                .iter()
                .map(|p| BigInt::from((0..m).filter(|&x| p[x] == x).count()).pow(k as u32))
                .sum();
            let want = BigRational::new(total, BigInt::from(perms.len()));
            let req = MomentRequest::new(CategoryId::Classical(Base::S), 4, k, m).unwrap();
            assert_eq!(moment(&req).unwrap(), want, "k={k} m={m}");
        }
    }
}

#[test]
fn singular_gram_is_reported() {
    let e = Weingarten::new(&CategoryId::Classical(Base::S), 4, 2).unwrap_err();
    assert!(matches!(e, Error::GramSingular { size: 15, rank: 8 }));
}
