//! Exact Weingarten calculus.
//!
//! For a category `c`, let `D_k = c ∩ P(0,k)`. The Gram matrix is
//! `G(p,q) = n^{b(p∨q)}` and the Weingarten matrix is its inverse. Haar
//! integrals are `Σ δ_p(i) δ_q(j) W(p,q)`. Summing the diagonal integrals
//! over `i = j ∈ {1..m}^k` contracts `δ_p(i) δ_q(i)` to `m^{b(p∨q)}`, which
//! gives the moments of the truncated character `Σ_{i≤m} u_ii`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::category::CategoryId;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::rational::RationalMatrix;
use crate::tensor::delta_unchecked;

/// Largest order accepted for Gram matrices and partition sums.
pub const MAX_MOMENT_LEGS: usize = 12;

fn check_order(k: usize) -> Result<()> {
    if k > MAX_MOMENT_LEGS {
        return Err(Error::BoundExceeded {
            legs: k,
            bound: MAX_MOMENT_LEGS,
        });
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("dimension n must be at least 1".into()));
    }
    Ok(())
}

/// `D_k`, in canonical order.
pub fn diagrams(c: &CategoryId, k: usize) -> Result<Vec<Partition>> {
    check_order(k)?;
    Ok(c.members(0, k).collect())
}

fn gram_of(d: Vec<Partition>, n: usize) -> RationalMatrix {
    let size = d.len();
    let blocks: Vec<usize> = (0..size * size)
        .into_par_iter()
        .map(|e| d[e / size].join_block_count(&d[e % size]))
        .collect();
    let nn = BigInt::from(n);
    RationalMatrix::from_fn(d, |a, b| BigRational::from_integer(Pow::pow(&nn, blocks[a * size + b])))
}

/// `G_{kn}(p,q) = n^{b(p∨q)}` over `D_k`. An empty `D_k` gives a 0×0 matrix.
pub fn gram_matrix(c: &CategoryId, k: usize, n: usize) -> Result<RationalMatrix> {
    check_n(n)?;
    Ok(gram_of(diagrams(c, k)?, n))
}

/// `W_{kn} = G_{kn}^{-1}`; `GramSingular` carries the rank when it fails.
pub fn weingarten_matrix(c: &CategoryId, k: usize, n: usize) -> Result<RationalMatrix> {
    Weingarten::new(c, k, n).map(|w| w.weights)
}

/// Gram and Weingarten matrices of one `(c, k, n)`.
#[derive(Clone, Debug)]
pub struct Weingarten {
    category: CategoryId,
    k: usize,
    n: usize,
    gram: RationalMatrix,
    weights: RationalMatrix,
}

impl Weingarten {
    pub fn new(c: &CategoryId, k: usize, n: usize) -> Result<Self> {
        let gram = gram_matrix(c, k, n)?;
        let weights = gram.inverse()?;
        assert!(
            weights.mul(&gram)?.is_identity(),
            "W·G ≠ I for {c}, k = {k}, n = {n}"
        );
        Ok(Weingarten {
            category: *c,
            k,
            n,
            gram,
            weights,
        })
    }

    pub fn category(&self) -> CategoryId {
        self.category
    }

    pub fn order(&self) -> usize {
        self.k
    }

    pub fn dimension(&self) -> usize {
        self.n
    }

    pub fn diagrams(&self) -> &[Partition] {
        self.gram.index()
    }

    pub fn gram(&self) -> &RationalMatrix {
        &self.gram
    }

    pub fn matrix(&self) -> &RationalMatrix {
        &self.weights
    }

    /// `∫ u_{i_1 j_1} … u_{i_k j_k}`, 1-based indices.
    pub fn haar_integral(&self, i: &[usize], j: &[usize]) -> Result<BigRational> {
        for idx in [i, j] {
            if idx.len() != self.k {
                return Err(Error::ArityMismatch {
                    expected: self.k,
                    got: idx.len(),
                });
            }
            if let Some(&bad) = idx.iter().find(|&&x| x == 0 || x > self.n) {
                return Err(Error::IndexOutOfRange {
                    index: bad,
                    n: self.n,
                });
            }
        }
        let d = self.diagrams();
        let rows: Vec<usize> = (0..d.len()).filter(|&a| delta_unchecked(&d[a], i.iter())).collect();
        let cols: Vec<usize> = (0..d.len()).filter(|&b| delta_unchecked(&d[b], j.iter())).collect();
        let mut total = BigRational::zero();
        for &a in &rows {
            for &b in &cols {
                total += self.weights.get(a, b);
            }
        }
        Ok(total)
    }

    /// `Σ_{p,q} W(p,q) m^{b(p∨q)}`, the k-th moment of `Σ_{i≤m} u_ii`.
    pub fn moment(&self, m: usize) -> BigRational {
        if m == self.n {
            // Σ W(p,q) G(q,p) = tr(WG)
            return BigRational::from_integer(self.diagrams().len().into());
        }
        let d = self.diagrams();
        let size = d.len();
        let mm = BigInt::from(m);
        let mut total = BigRational::zero();
        for a in 0..size {
            for b in 0..size {
                let w = self.weights.get(a, b);
                if !w.is_zero() {
                    let e = d[a].join_block_count(&d[b]);
                    total += w * BigRational::from_integer(Pow::pow(&mm, e));
                }
            }
        }
        total
    }
}

pub fn haar_integral(c: &CategoryId, n: usize, i: &[usize], j: &[usize]) -> Result<BigRational> {
    if i.len() != j.len() {
        return Err(Error::ArityMismatch {
            expected: i.len(),
            got: j.len(),
        });
    }
    Weingarten::new(c, i.len(), n)?.haar_integral(i, j)
}

/// Moment of the truncated character `χ = Σ_{i≤m} u_ii`, with `m = ⌊tn⌋`
/// given explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct MomentRequest {
    pub category: CategoryId,
    pub n: usize,
    pub k: usize,
    pub m: usize,
}

impl MomentRequest {
    pub fn new(category: CategoryId, n: usize, k: usize, m: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("moment order k must be at least 1".into()));
        }
        if m == 0 || m > n {
            return Err(Error::InvalidParameter(format!(
                "truncation m must satisfy 1 <= m <= n, got m = {m}, n = {n}"
            )));
        }
        check_order(k)?;
        Ok(MomentRequest { category, n, k, m })
    }

    /// `m = ⌊tn⌋` for a rational `t ∈ (0, 1]`.
    pub fn with_fraction(category: CategoryId, n: usize, k: usize, t: &BigRational) -> Result<Self> {
        if !(t > &BigRational::zero() && t <= &BigRational::one()) {
            return Err(Error::InvalidParameter("t must lie in (0, 1]".into()));
        }
        let m = (t * BigRational::from_integer(n.into())).floor().to_integer();
        let m = usize::try_from(m).map_err(|_| Error::InvalidParameter("m overflows".into()))?;
        Self::new(category, n, k, m)
    }
}

pub fn moment(req: &MomentRequest) -> Result<BigRational> {
    Ok(Weingarten::new(&req.category, req.k, req.n)?.moment(req.m))
}

/// `Σ_{p ∈ D_k} t^{b(p)}`.
pub fn asymptotic_moment(c: &CategoryId, k: usize, t: &BigRational) -> Result<BigRational> {
    check_order(k)?;
    let mut by_blocks = vec![0u64; k + 1];
    for p in c.members(0, k) {
        by_blocks[p.block_count()] += 1;
    }
    Ok(by_blocks
        .iter()
        .enumerate()
        .filter(|(_, &count)| count > 0)
        .map(|(b, &count)| BigRational::from_integer(count.into()) * Pow::pow(t, b))
        .fold(BigRational::zero(), |a, x| a + x))
}
