//! The maps `T_p` on `(C^n)^{⊗k}`, classical group samples, and the
//! intertwiner relation between them.
//!
//! Multi-indices are 1-based in the public API. Internally a multi-index
//! `(i_1, …, i_k)` is encoded in base `n` with `i_1` most significant.

mod average;
mod group;

pub use average::{exact_fixed_dim, exact_haar_integral, is_enumerable, mc_fixed_dim};
pub use group::{elements, group_order, sample, sample_with, Element, GroupSample, GroupTag};

use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::RationalMatrix;

/// Default cap on `n^k`-sized arrays.
pub const DEFAULT_BUDGET: u128 = 1 << 22;

/// Residual tolerance for sampled continuous groups.
pub const TOLERANCE: f64 = 1e-9;

pub(crate) fn power(n: usize, e: usize) -> u128 {
    (n as u128).saturating_pow(e as u32)
}

pub(crate) fn check_budget(entries: u128, budget: u128) -> Result<()> {
    if entries > budget {
        return Err(Error::BudgetExceeded { entries, budget });
    }
    Ok(())
}

/// Whether `p` carries the unconjugated coordinate at point `index`:
/// upper points with odd parity label and lower points with even label.
pub(crate) fn plain_color(p: &Partition, index: usize) -> bool {
    let odd = p.parity_label(index) % 2 == 1;
    if index < p.upper() {
        odd
    } else {
        !odd
    }
}

fn check_indices(n: usize, idx: &[usize], expected: usize) -> Result<()> {
    if idx.len() != expected {
        return Err(Error::ArityMismatch {
            expected,
            got: idx.len(),
        });
    }
    for &i in idx {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, n });
        }
    }
    Ok(())
}

/// `δ_p(i, j)`: upper points carry `i`, lower points carry `j`, and the value
/// is 1 iff the assignment is constant on every block.
pub fn delta(p: &Partition, n: usize, i: &[usize], j: &[usize]) -> Result<bool> {
    check_indices(n, i, p.upper())?;
    check_indices(n, j, p.lower())?;
    Ok(delta_unchecked(p, i.iter().chain(j)))
}

pub(crate) fn delta_unchecked<'a>(p: &Partition, values: impl Iterator<Item = &'a usize>) -> bool {
    let mut seen = [0usize; 256];
    for (&b, &v) in p.labels().iter().zip(values) {
        let slot = &mut seen[b as usize];
        if *slot == 0 {
            *slot = v;
        } else if *slot != v {
            return false;
        }
    }
    true
}

/// Encodes a 1-based multi-index.
pub fn encode(n: usize, idx: &[usize]) -> usize {
    idx.iter().fold(0, |acc, &i| acc * n + (i - 1))
}

/// Decodes into a 1-based multi-index of length `len`.
pub fn decode(n: usize, mut code: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = code % n + 1;
        code /= n;
    }
    out
}

/// Sparse 0/1 matrix of `T_p : (C^n)^{⊗k} → (C^n)^{⊗l}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorOperator {
    source: usize,
    target: usize,
    n: usize,
    // (row j, column i), sorted by column then row
    entries: Vec<(usize, usize)>,
}

impl TensorOperator {
    pub fn source_arity(&self) -> usize {
        self.source
    }

    pub fn target_arity(&self) -> usize {
        self.target
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> usize {
        self.n.pow(self.target as u32)
    }

    pub fn columns(&self) -> usize {
        self.n.pow(self.source as u32)
    }

    /// Nonzero positions `(j, i)`, all with coefficient 1.
    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, j: usize, i: usize) -> bool {
        self.entries
            .binary_search_by(|&(r, c)| (c, r).cmp(&(i, j)))
            .is_ok()
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.columns());
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows()];
        for &(j, i) in &self.entries {
            out[j] += v[i];
        }
        out
    }

    /// Dense row-major copy, rows indexed by `j`.
    pub fn to_dense(&self) -> Vec<Complex64> {
        let cols = self.columns();
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows() * cols];
        for &(j, i) in &self.entries {
            out[j * cols + i] = Complex64::new(1.0, 0.0);
        }
        out
    }
}

/// Calls `f` with every assignment of values `0..n` to the blocks of `p`.
fn for_each_block_assignment(p: &Partition, n: usize, mut f: impl FnMut(&[usize])) {
    let b = p.block_count();
    let mut values = vec![0usize; b];
    loop {
        f(&values);
        let mut pos = b;
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            values[pos] += 1;
            if values[pos] < n {
                break;
            }
            values[pos] = 0;
        }
    }
}

pub fn build_operator(p: &Partition, n: usize, budget: u128) -> Result<TensorOperator> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension n must be at least 1".into()));
    }
    let (k, l) = p.shape();
    check_budget(power(n, k.max(l)), budget)?;
    check_budget(power(n, p.block_count()), budget)?;
    let labels = p.labels();
    let mut entries = Vec::with_capacity(n.pow(p.block_count() as u32));
    for_each_block_assignment(p, n, |values| {
        let code = |range: std::ops::Range<usize>| {
            labels[range]
                .iter()
                .fold(0, |acc, &b| acc * n + values[b as usize])
        };
        entries.push((code(k..k + l), code(0..k)));
    });
    entries.sort_unstable_by_key(|&(r, c)| (c, r));
    Ok(TensorOperator {
        source: k,
        target: l,
        n,
        entries,
    })
}

/// Result of an intertwiner test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Intertwining {
    pub holds: bool,
    /// Frobenius norm of `T_p g^{⊗k} − g^{⊗l} T_p`.
    pub residual: f64,
}

/// Applies the `n×n` matrix `m` to tensor mode `mode` of a tensor with
/// `modes` modes of size `n`.
fn mode_product(t: &[Complex64], n: usize, modes: usize, mode: usize, m: &[Complex64]) -> Vec<Complex64> {
    let inner = n.pow((modes - mode - 1) as u32);
    let outer = t.len() / (inner * n);
    let mut out = vec![Complex64::new(0.0, 0.0); t.len()];
    for o in 0..outer {
        for x in 0..n {
            for y in 0..n {
                let c = m[x * n + y];
                if c == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = (o * n + y) * inner;
                let dst = (o * n + x) * inner;
                for r in 0..inner {
                    out[dst + r] += c * t[src + r];
                }
            }
        }
    }
    out
}

/// Tests `T_p g^{⊗k} = g^{⊗l} T_p`, where each leg carries `g` or its
/// conjugate according to its parity label. Monomial samples are decided
/// exactly; dense samples against [`TOLERANCE`].
pub fn intertwines(p: &Partition, g: &GroupSample, budget: u128) -> Result<Intertwining> {
    let n = g.dimension();
    let (k, l) = p.shape();
    check_budget(power(n, k + l), budget)?;
    let t = build_operator(p, n, budget)?.to_dense();

    let mat = g.matrix();
    let plain: Vec<Complex64> = mat.iter().copied().collect();
    // nalgebra is column-major; convert to row-major
    let row_major = |conj: bool| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for c in 0..n {
                let v = plain[c * n + r];
                out[r * n + c] = if conj { v.conj() } else { v };
            }
        }
        out
    };
    let transpose = |m: &[Complex64]| -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); n * n];
        for r in 0..n {
            for c in 0..n {
                out[c * n + r] = m[r * n + c];
            }
        }
        out
    };

    // modes: l output modes first, then k input modes
    let modes = k + l;
    let mut left = t.clone();
    for a in 0..k {
        let m = transpose(&row_major(!plain_color(p, a)));
        left = mode_product(&left, n, modes, l + a, &m);
    }
    let mut right = t;
    for b in 0..l {
        let m = row_major(!plain_color(p, k + b));
        right = mode_product(&right, n, modes, b, &m);
    }
    let residual = left
        .iter()
        .zip(&right)
        .map(|(x, y)| (x - y).norm_sqr())
        .sum::<f64>()
        .sqrt();

    let holds = match g.element() {
        Element::Monomial { phase, order, .. } => monomial_intertwines(p, n, phase, *order),
        Element::Dense(_) => residual <= TOLERANCE,
    };
    Ok(Intertwining { holds, residual })
}

/// Exact test for a monomial element: for every index assignment compatible
/// with `p`, the phases picked up by the upper and lower legs agree.
fn monomial_intertwines(p: &Partition, n: usize, phase: &[u32], order: u32) -> bool {
    let s = order as i64;
    // weight of each block: plain upper legs minus conjugated upper legs,
    // minus the same for the lower legs
    let mut weight = vec![0i64; p.block_count()];
    for (idx, &b) in p.labels().iter().enumerate() {
        let sign = if plain_color(p, idx) { 1 } else { -1 };
        weight[b as usize] += if idx < p.upper() { sign } else { -sign };
    }
    let mut ok = true;
    for_each_block_assignment(p, n, |values| {
        if ok {
            let total: i64 = values
                .iter()
                .zip(&weight)
                .map(|(&v, &w)| w * phase[v] as i64)
                .sum();
            ok = total.rem_euclid(s) == 0;
        }
    });
    ok
}

/// `⟨ξ_p, ξ_q⟩` for `ξ_p = T_p(1)`, over partitions in one `P(0,k)`.
pub fn gram_from_vectors(d: &[Partition], n: usize, budget: u128) -> Result<RationalMatrix> {
    let k = d.first().map_or(0, |p| p.lower());
    for p in d {
        if p.shape() != (0, k) {
            return Err(Error::ShapeMismatch(format!(
                "expected P(0,{k}), got P({},{})",
                p.upper(),
                p.lower()
            )));
        }
    }
    check_budget(power(n, k), budget)?;
    let vectors: Vec<Vec<bool>> = d
        .iter()
        .map(|p| {
            let op = build_operator(p, n, budget)?;
            let mut v = vec![false; op.rows()];
            for &(j, _) in op.entries() {
                v[j] = true;
            }
            Ok(v)
        })
        .collect::<Result<_>>()?;
    Ok(RationalMatrix::from_fn(d.to_vec(), |a, b| {
        let dot = vectors[a]
            .iter()
            .zip(&vectors[b])
            .filter(|(x, y)| **x && **y)
            .count();
        BigRational::from_integer(dot.into())
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::SpecialPartition;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn delta_examples() {
        let pair = Partition::pair();
        assert!(delta(&pair, 5, &[], &[3, 3]).unwrap());
        assert!(!delta(&pair, 5, &[], &[3, 5]).unwrap());
        assert!(delta(&Partition::single_block(0, 4), 2, &[], &[2, 2, 2, 2]).unwrap());
        let h = SpecialPartition::HalfCommutation.build().unwrap();
        for a in 1..=2 {
            for b in 1..=2 {
                for c in 1..=2 {
                    for (x, y, z) in [(c, b, a), (a, b, c), (b, a, c)] {
                        let expect = (x, y, z) == (c, b, a);
                        assert_eq!(delta(&h, 2, &[a, b, c], &[x, y, z]).unwrap(), expect);
                    }
                }
            }
        }
    }

    #[test]
    fn delta_errors() {
        let pair = Partition::pair();
        assert_eq!(
            delta(&pair, 3, &[], &[1]).unwrap_err(),
            Error::ArityMismatch { expected: 2, got: 1 }
        );
        assert_eq!(
            delta(&pair, 3, &[], &[1, 4]).unwrap_err(),
            Error::IndexOutOfRange { index: 4, n: 3 }
        );
    }

    #[test]
    fn identity_and_pair_operators() {
        let id = build_operator(&Partition::identity(), 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(id.entries(), &[(0, 0), (1, 1), (2, 2), (3, 3)]);
        let pair = build_operator(&Partition::pair(), 3, DEFAULT_BUDGET).unwrap();
        let v = pair.apply(&[Complex64::new(1.0, 0.0)]);
        let ones: Vec<usize> = (0..9).filter(|&j| v[j].re == 1.0).collect();
        assert_eq!(ones, vec![0, 4, 8]);
    }

    #[test]
    fn crossing_is_the_swap() {
        let x = build_operator(&Partition::crossing(), 2, DEFAULT_BUDGET).unwrap();
        // e_a ⊗ e_b ↦ e_b ⊗ e_a
        let mut expect = vec![(0, 0), (2, 1), (1, 2), (3, 3)];
        expect.sort_by_key(|&(r, c)| (c, r));
        assert_eq!(x.entries(), expect.as_slice());
    }

    #[test]
    fn operator_matches_delta() {
        let q = p("u1 l2 | u2 | l1 l3");
        let n = 3;
        let op = build_operator(&q, n, DEFAULT_BUDGET).unwrap();
        for i in 0..op.columns() {
            for j in 0..op.rows() {
                let (ii, jj) = (decode(n, i, 2), decode(n, j, 3));
                assert_eq!(op.get(j, i), delta(&q, n, &ii, &jj).unwrap());
            }
        }
    }

    #[test]
    fn budget_is_enforced() {
        let q = Partition::singletons(0, 12);
        assert!(matches!(
            build_operator(&q, 4, DEFAULT_BUDGET),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn pair_is_orthogonally_invariant() {
        for seed in 0..5 {
            let g = sample(GroupTag::O, 3, seed).unwrap();
            let r = intertwines(&Partition::pair(), &g, DEFAULT_BUDGET).unwrap();
            assert!(r.holds && r.residual < 1e-12);
        }
    }

    #[test]
    fn odd_block_detects_sign() {
        let minus = GroupSample::monomial(GroupTag::H, vec![0, 1, 2], vec![1, 1, 1]).unwrap();
        let r = intertwines(&Partition::single_block(0, 3), &minus, DEFAULT_BUDGET).unwrap();
        assert!(!r.holds);
        assert!(r.residual > 1.0);
    }

    #[test]
    fn four_block_is_hyperoctahedral() {
        let q = Partition::single_block(0, 4);
        for seed in 0..100 {
            let g = sample(GroupTag::H, 3, seed).unwrap();
            let r = intertwines(&q, &g, DEFAULT_BUDGET).unwrap();
            assert!(r.holds && r.residual == 0.0);
        }
        let g = sample(GroupTag::O, 3, 1).unwrap();
        assert!(!intertwines(&q, &g, DEFAULT_BUDGET).unwrap().holds);
    }

    #[test]
    fn exact_and_numeric_checks_agree() {
        let q = SpecialPartition::HalfCommutation.build().unwrap();
        for seed in 0..20 {
            let g = sample(GroupTag::Hs(3), 2, seed).unwrap();
            let r = intertwines(&q, &g, DEFAULT_BUDGET).unwrap();
            assert_eq!(r.holds, r.residual < TOLERANCE, "seed {seed}");
        }
    }

    #[test]
    fn encode_round_trip() {
        assert_eq!(encode(3, &[2, 1, 3]), 3 * 3 + 2);
        assert_eq!(decode(3, 11, 3), vec![2, 1, 3]);
    }

    #[test]
    fn small_gram_matrices() {
        let g = gram_from_vectors(&[Partition::pair()], 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(g.to_strings(), vec![vec!["3/1"]]);
        let d = vec![p("l1 l2"), p("l1 | l2")];
        let g = gram_from_vectors(&d, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(g.to_strings(), vec![vec!["4/1", "4/1"], vec!["4/1", "16/1"]]);
    }

    #[test]
    fn gram_bridge_on_four_points() {
        let d: Vec<_> = crate::partition::Partitions::new(0, 4).collect();
        for n in 2..=3 {
            let g = gram_from_vectors(&d, n, DEFAULT_BUDGET).unwrap();
            for (a, x) in d.iter().enumerate() {
                for (b, y) in d.iter().enumerate() {
                    let e = BigRational::from_integer(n.pow(x.join_block_count(y) as u32).into());
                    assert_eq!(g.get(a, b), &e);
                }
            }
        }
    }
}
