//! Brute-force oracles written independently of the library.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};

/// Set partitions of `n` points as restricted-growth label vectors.
pub fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max {
            cur.push(b);
            rec(n, cur, if b == max { max + 1 } else { max }, out);
            cur.pop();
        }
    }
    rec(n, &mut cur, 0, &mut out);
    out
}

pub fn block_count(labels: &[usize]) -> usize {
    labels.iter().max().map_or(0, |m| m + 1)
}

pub fn block_sizes(labels: &[usize]) -> Vec<usize> {
    let mut sizes = vec![0; block_count(labels)];
    for &b in labels {
        sizes[b] += 1;
    }
    sizes
}

/// Whether some `a < b < c < d` has `a, c` in one block and `b, d` in another.
pub fn crossing(labels: &[usize]) -> bool {
    let n = labels.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if labels[a] == labels[c] && labels[b] == labels[d] && labels[a] != labels[b] {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Per-block `#odd − #even` for a one-row partition on `n` points, position
/// `j` being labelled `n − j` clockwise.
pub fn block_defects(labels: &[usize]) -> Vec<i64> {
    let n = labels.len();
    let mut d = vec![0i64; block_count(labels)];
    for (j, &b) in labels.iter().enumerate() {
        d[b] += if (n - j) % 2 == 1 { 1 } else { -1 };
    }
    d
}

/// `s = None` means exact balance.
pub fn s_balanced(labels: &[usize], s: Option<i64>) -> bool {
    labels.len() % 2 == 0
        && block_defects(labels).iter().all(|&d| match s {
            Some(s) => d.rem_euclid(s) == 0,
            None => d == 0,
        })
}

pub fn int(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `Σ t^{b(p)}` over one-row partitions of `k` points accepted by `keep`.
pub fn partition_sum(k: usize, t: &BigRational, keep: impl Fn(&[usize]) -> bool) -> BigRational {
    set_partitions(k)
        .iter()
        .filter(|p| keep(p))
        .map(|p| Pow::pow(t, block_count(p)))
        .fold(BigRational::zero(), |a, x| a + x)
}

pub fn bell(n: usize) -> u128 {
    // Bell triangle
    let mut row = vec![1u128];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

pub fn catalan(n: usize) -> u128 {
    let mut c = vec![1u128];
    for m in 1..=n {
        c.push((0..m).map(|i| c[i] * c[m - 1 - i]).sum());
    }
    c[n]
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn double_factorial_odd(k: usize) -> u128 {
    // (2k − 1)!!
    (1..=k as u128).map(|i| 2 * i - 1).product()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Phase patterns of a monomial group: `Free` gives independent phases in
/// `Z_s`, `Global` a common sign.
#[derive(Clone, Copy, Debug)]
pub enum Phases {
    Trivial,
    Free(u32),
    GlobalSign,
}

/// Elements `(perm, phase)` with `g e_c = ω^{phase[c]} e_{perm[c]}`, and the
/// root of unity order.
pub fn monomial_group(n: usize, phases: Phases) -> (Vec<(Vec<usize>, Vec<u32>)>, u32) {
    let (patterns, s): (Vec<Vec<u32>>, u32) = match phases {
        Phases::Trivial => (vec![vec![0; n]], 1),
        Phases::GlobalSign => (vec![vec![0; n], vec![1; n]], 2),
        Phases::Free(s) => {
            let mut pats = vec![vec![]];
            for _ in 0..n {
                pats = pats
                    .into_iter()
                    .flat_map(|p: Vec<u32>| {
                        (0..s).map(move |x| {
                            let mut q = p.clone();
                            q.push(x);
                            q
                        })
                    })
                    .collect();
            }
            (pats, s)
        }
    };
    let mut out = Vec::new();
    for perm in permutations(n) {
        for ph in &patterns {
            out.push((perm.clone(), ph.clone()));
        }
    }
    (out, s)
}

/// Exact group average of `Π_a u_{i_a j_a}^{(ε_a)}`, 1-based indices, where
/// position `a` of a length-`k` word is conjugated when `k − a` is odd.
/// Sums of roots of unity are reduced for `s ≤ 4` and must come out rational.
pub fn group_average(group: &(Vec<(Vec<usize>, Vec<u32>)>, u32), i: &[usize], j: &[usize]) -> BigRational {
    let (els, s) = group;
    let s = *s as i64;
    let k = i.len();
    let mut counts = vec![0i64; s as usize];
    for (perm, ph) in els {
        if (0..k).all(|a| perm[j[a] - 1] == i[a] - 1) {
            let e: i64 = (0..k)
                .map(|a| {
                    let x = ph[j[a] - 1] as i64;
                    if (k - a) % 2 == 0 {
                        x
                    } else {
                        -x
                    }
                })
                .sum();
            counts[e.rem_euclid(s) as usize] += 1;
        }
    }
    let value = match s {
        1 => counts[0],
        2 => counts[0] - counts[1],
        // 1 + ω + ω² = 0
        3 => {
            assert_eq!(counts[1], counts[2], "irrational average");
            counts[0] - counts[1]
        }
        // ω = i
        4 => {
            assert_eq!(counts[1], counts[3], "irrational average");
            counts[0] - counts[2]
        }
        _ => panic!("unsupported order {s}"),
    };
    BigRational::new(value.into(), BigInt::from(els.len()))
}

/// All 1-based multi-indices of length `k` over `[n]`.
pub fn multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|v: Vec<usize>| {
                (1..=n).map(move |x| {
                    let mut w = v.clone();
                    w.push(x);
                    w
                })
            })
            .collect();
    }
    out
}

pub fn one() -> BigRational {
    BigRational::one()
}
