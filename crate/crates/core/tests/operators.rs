mod common;

use easyqg::partition::Partitions;
use easyqg::tensor::{build_operator, elements, intertwines, sample, GroupTag, DEFAULT_BUDGET};
use easyqg::{Partition, Result};
use proptest::prelude::*;

fn shaped(k: usize, l: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..(k + l).max(1), k + l)
        .prop_map(move |labels| Partition::from_labels(k, l, &labels).unwrap())
}

fn dense(p: &Partition, n: usize) -> Vec<Vec<u64>> {
    let t = build_operator(p, n, DEFAULT_BUDGET).unwrap();
    let mut m = vec![vec![0; t.columns()]; t.rows()];
    for &(j, i) in t.entries() {
        m[j][i] = 1;
    }
    m
}

fn matmul(a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| (0..cols).map(|c| (0..inner).map(|x| row[x] * b[x][c]).sum()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn composition_multiplies_operators(p in shaped(2, 2), q in shaped(2, 1), n in 1usize..4) {
        // q sits below p, so T_q T_p = n^loops T_{pq}
        let (r, loops) = p.compose(&q).unwrap();
        let prod = matmul(&dense(&q, n), &dense(&p, n));
        let scale = (n as u64).pow(loops as u32);
        let want: Vec<Vec<u64>> = dense(&r, n).into_iter().map(|row| row.into_iter().map(|x| x * scale).collect()).collect();
        prop_assert_eq!(prod, want);
    }

    #[test]
    fn tensor_is_kronecker(p in shaped(1, 2), q in shaped(2, 1), n in 1usize..4) {
        let (a, b, ab) = (dense(&p, n), dense(&q, n), dense(&p.tensor(&q), n));
        let (br, bc) = (b.len(), b[0].len());
        for (r, row) in ab.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                prop_assert_eq!(x, a[r / br][c / bc] * b[r % br][c % bc]);
            }
        }
    }

    #[test]
    fn involution_is_transpose(p in shaped(2, 3), n in 1usize..4) {
        let (a, b) = (dense(&p, n), dense(&p.involute(), n));
        for (r, row) in a.iter().enumerate() {
            for (c, &x) in row.iter().enumerate() {
                prop_assert_eq!(x, b[c][r]);
            }
        }
    }
}

fn all_up_to(legs: usize) -> Vec<Partition> {
    easyqg::partition::shapes_up_to(legs)
        .flat_map(|(k, l)| Partitions::new(k, l).collect::<Vec<_>>())
        .collect()
}

fn commutes_with_group(p: &Partition, group: &[easyqg::tensor::GroupSample]) -> Result<bool> {
    for g in group {
        if !intertwines(p, g, DEFAULT_BUDGET)?.holds {
            return Ok(false);
        }
    }
    Ok(true)
}

#[test]
fn finite_groups_detect_exactly_their_category() {
    let n = 3;
    for tag in [GroupTag::S, GroupTag::H, GroupTag::SPrime, GroupTag::BPrime, GroupTag::Hs(3)] {
        let c = tag.category();
        let group = match tag {
            // B'_n is infinite; sample instead
            GroupTag::BPrime => (0..12).map(|s| sample(tag, n, s).unwrap()).collect(),
            _ => elements(tag, n).unwrap(),
        };
        for p in all_up_to(4).iter().filter(|p| p.block_count() <= n) {
            assert_eq!(commutes_with_group(p, &group).unwrap(), c.contains(p), "{tag}: {p}");
        }
    }
}

#[test]
fn continuous_groups_detect_their_category() {
    let n = 3;
    for tag in [GroupTag::O, GroupTag::B] {
        let c = tag.category();
        let group: Vec<_> = (0..6).map(|s| sample(tag, n, 100 + s).unwrap()).collect();
        for p in all_up_to(4).iter().filter(|p| p.block_count() <= n) {
            assert_eq!(commutes_with_group(p, &group).unwrap(), c.contains(p), "{tag}: {p}");
        }
    }
}

#[test]
fn samples_are_reproducible() {
    for tag in [GroupTag::O, GroupTag::H, GroupTag::B, GroupTag::Hs(4)] {
        assert_eq!(sample(tag, 4, 9).unwrap().matrix(), sample(tag, 4, 9).unwrap().matrix());
        assert!(sample(tag, 4, 9).unwrap().unitarity_residual() < 1e-10);
    }
    assert!(sample(GroupTag::B, 5, 3).unwrap().row_sum_residual() < 1e-10);
}
