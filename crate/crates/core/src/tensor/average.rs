//! Exact averages over finite groups and Monte Carlo averages over sampled
//! ones.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::group::{elements, group_order, sample_with, Element, GroupTag};
use super::{check_budget, power};
use crate::error::{Error, Result};
use crate::mc::{estimate, Estimate};

/// Coefficients of the cyclotomic polynomial `Φ_s`, constant term first.
fn cyclotomic(s: usize) -> Vec<BigInt> {
    // x^s − 1 divided by Φ_d for every proper divisor d
    let mut num = vec![BigInt::zero(); s + 1];
    num[0] = -BigInt::one();
    num[s] = BigInt::one();
    for d in (1..s).filter(|d| s % d == 0) {
        num = divide_exact(&num, &cyclotomic(d));
    }
    num
}

fn divide_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for i in (0..quot.len()).rev() {
        // den is monic
        let c = rem[i + dd].clone();
        for (j, dj) in den.iter().enumerate() {
            rem[i + j] -= &c * dj;
        }
        quot[i] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

/// `Σ_e coeff[e] ω^e` for `ω = exp(2πi/s)`, if it is rational.
fn cyclotomic_value(coeff: &[BigInt]) -> Option<BigInt> {
    let s = coeff.len();
    let phi = cyclotomic(s);
    let d = phi.len() - 1;
    let mut rem = coeff.to_vec();
    for i in (d..rem.len()).rev() {
        let c = rem[i].clone();
        if c.is_zero() {
            continue;
        }
        for (j, pj) in phi.iter().enumerate() {
            rem[i - d + j] -= &c * pj;
        }
    }
    if rem[1..d.max(1)].iter().all(Zero::is_zero) {
        Some(rem[0].clone())
    } else {
        None
    }
}

/// Colours of the word `u_{i_1 j_1} … u_{i_k j_k}`: position `a` (0-based)
/// carries `u` iff `k − a` is even, otherwise its conjugate.
pub(crate) fn word_colors(k: usize) -> Vec<bool> {
    (0..k).map(|a| (k - a) % 2 == 0).collect()
}

fn finite_elements(tag: GroupTag, n: usize) -> Result<(Vec<super::GroupSample>, u32)> {
    let els = elements(tag, n)?;
    let order = match els.first().map(|g| g.element()) {
        Some(Element::Monomial { order, .. }) => *order,
        _ => 1,
    };
    Ok((els, order))
}

/// Exact average of `u_{i_1 j_1} … u_{i_k j_k}` (with the colouring of
/// [`word_colors`]) over every element of a finite group.
pub fn exact_haar_integral(tag: GroupTag, n: usize, i: &[usize], j: &[usize]) -> Result<BigRational> {
    if i.len() != j.len() {
        return Err(Error::ArityMismatch {
            expected: i.len(),
            got: j.len(),
        });
    }
    for &x in i.iter().chain(j) {
        if x == 0 || x > n {
            return Err(Error::IndexOutOfRange { index: x, n });
        }
    }
    let (els, s) = finite_elements(tag, n)?;
    let colors = word_colors(i.len());
    let mut counts = vec![BigInt::zero(); s as usize];
    for g in &els {
        let Element::Monomial { perm, phase, .. } = g.element() else {
            unreachable!()
        };
        if i.iter().zip(j).all(|(&r, &c)| perm[c - 1] == r - 1) {
            let e: i64 = j
                .iter()
                .zip(&colors)
                .map(|(&c, &plain)| {
                    let ph = phase[c - 1] as i64;
                    if plain {
                        ph
                    } else {
                        -ph
                    }
                })
                .sum();
            counts[e.rem_euclid(s as i64) as usize] += 1;
        }
    }
    let total = cyclotomic_value(&counts)
        .ok_or_else(|| Error::InvalidParameter("integral is not rational".into()))?;
    Ok(BigRational::new(total, BigInt::from(els.len())))
}

/// `∫ tr(g)^k` computed exactly by enumerating a finite group.
pub fn exact_fixed_dim(tag: GroupTag, n: usize, k: usize) -> Result<BigRational> {
    let (els, s) = finite_elements(tag, n)?;
    let s = s as usize;
    let mut total = vec![BigInt::zero(); s];
    for g in &els {
        let Element::Monomial { perm, phase, .. } = g.element() else {
            unreachable!()
        };
        // tr(g) as an element of Z[x]/(x^s − 1)
        let mut tr = vec![BigInt::zero(); s];
        for c in (0..n).filter(|&c| perm[c] == c) {
            tr[phase[c] as usize % s] += 1;
        }
        let mut acc = vec![BigInt::zero(); s];
        acc[0] = BigInt::one();
        for _ in 0..k {
            let mut next = vec![BigInt::zero(); s];
            for (a, x) in acc.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (b, y) in tr.iter().enumerate() {
                    next[(a + b) % s] += x * y;
                }
            }
            acc = next;
        }
        for (t, a) in total.iter_mut().zip(acc) {
            *t += a;
        }
    }
    let value = cyclotomic_value(&total)
        .ok_or_else(|| Error::InvalidParameter("average is not rational".into()))?;
    Ok(BigRational::new(value, BigInt::from(els.len())))
}

/// Monte Carlo estimate of `dim Fix(u^{⊗k}) = ∫ tr(g)^k`.
pub fn mc_fixed_dim(
    tag: GroupTag,
    n: usize,
    k: usize,
    samples: usize,
    seed: u64,
    budget: u128,
) -> Result<Estimate> {
    check_budget(power(n, k), budget)?;
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    // validates n and s once, so the draws below cannot fail
    sample_with(tag, n, &mut crate::mc::chunk_rng(seed, u64::MAX))?;
    Ok(estimate(samples, seed, 1, |rng, out| {
        let g = sample_with(tag, n, rng).expect("validated");
        out[0] = g.trace().powu(k as u32).re;
    })[0])
}

/// Whether a finite group is small enough for [`exact_fixed_dim`].
pub fn is_enumerable(tag: GroupTag, n: usize) -> bool {
    group_order(tag, n).is_some_and(|o| o <= super::group::MAX_GROUP_ORDER)
}
