//! Exact rational matrices indexed by partitions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Formats an exact rational as `num/den`.
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num/den` or a bare integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::InvalidParameter(format!("bad rational '{s}'"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// A square matrix of exact rationals whose rows and columns are indexed by
/// the same list of partitions.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    index: Vec<Partition>,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(index: Vec<Partition>, entries: Vec<BigRational>) -> Self {
        assert_eq!(entries.len(), index.len() * index.len());
        RationalMatrix { index, entries }
    }

    pub fn from_fn(index: Vec<Partition>, mut f: impl FnMut(usize, usize) -> BigRational) -> Self {
        let n = index.len();
        let entries = (0..n * n).map(|e| f(e / n, e % n)).collect();
        RationalMatrix { index, entries }
    }

    pub fn identity(index: Vec<Partition>) -> Self {
        Self::from_fn(index, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn size(&self) -> usize {
        self.index.len()
    }

    pub fn index(&self) -> &[Partition] {
        &self.index
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.size() + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        let n = self.size();
        &self.entries[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigRational]> {
        (0..self.size()).map(move |i| self.row(i))
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_identity(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let e = self.get(i, j);
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Matrix product; the index of `self` is kept.
    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        let n = self.size();
        if other.size() != n {
            return Err(Error::ShapeMismatch(format!(
                "matrix product of sizes {n} and {}",
                other.size()
            )));
        }
        let mut out = vec![BigRational::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(RationalMatrix::new(self.index.clone(), out))
    }

    /// Exact rank by rational Gaussian elimination.
    pub fn rank(&self) -> usize {
        let n = self.size();
        let mut m: Vec<Vec<BigRational>> = self.rows().map(|r| r.to_vec()).collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(p) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            let pivot = m[rank][col].clone();
            for i in rank + 1..n {
                if m[i][col].is_zero() {
                    continue;
                }
                let f = &m[i][col] / &pivot;
                for j in col..n {
                    let sub = &f * &m[rank][j];
                    m[i][j] -= sub;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Exact inverse by fraction-free Gauss–Jordan elimination on the
    /// integer matrix obtained by clearing denominators.
    pub fn inverse(&self) -> Result<RationalMatrix> {
        let n = self.size();
        let scale = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut row: Vec<BigInt> = self
                    .row(i)
                    .iter()
                    .map(|e| (e * BigRational::from_integer(scale.clone())).to_integer())
                    .collect();
                row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                row
            })
            .collect();

        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return Err(Error::GramSingular {
                    size: n,
                    rank: self.rank(),
                });
            };
            m.swap(k, p);
            let (before, rest) = m.split_at_mut(k);
            let (pivot_row, after) = rest.split_first_mut().unwrap();
            for row in before.iter_mut().chain(after.iter_mut()) {
                let factor = row[k].clone();
                for j in 0..2 * n {
                    if j == k {
                        continue;
                    }
                    let v = &pivot_row[k] * &row[j] - &factor * &pivot_row[j];
                    debug_assert!((&v % &prev).is_zero());
                    row[j] = v / &prev;
                }
                row[k] = BigInt::zero();
            }
            prev = pivot_row[k].clone();
        }

        let scale = BigRational::from_integer(scale);
        let entries = (0..n * n)
            .map(|e| {
                let (i, j) = (e / n, e % n);
                BigRational::new(m[i][n + j].clone(), m[i][i].clone()) * &scale
            })
            .collect();
        Ok(RationalMatrix::new(self.index.clone(), entries))
    }

    /// Entries as `num/den` strings, row by row.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows()
            .map(|r| r.iter().map(format_rational).collect())
            .collect()
    }

    /// Sum of all entries.
    pub fn total(&self) -> BigRational {
        self.entries.iter().fold(BigRational::zero(), |a, e| a + e)
    }

    pub fn max_abs_entry(&self) -> BigRational {
        self.entries
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix({})", self.size())?;
        for row in self.to_strings() {
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partitions;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn index(n: usize) -> Vec<Partition> {
        Partitions::new(0, 3).take(n).collect()
    }

    #[test]
    fn inverse_of_small_matrix() {
        // [[2, 1], [1, 1]]^-1 = [[1, -1], [-1, 2]]
        let m = RationalMatrix::new(index(2), vec![r(2, 1), r(1, 1), r(1, 1), r(1, 1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(inv.to_strings(), vec![vec!["1/1", "-1/1"], vec!["-1/1", "2/1"]]);
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn inverse_with_row_swaps_and_fractions() {
        let m = RationalMatrix::new(
            index(3),
            vec![
                r(0, 1),
                r(1, 2),
                r(1, 1),
                r(1, 3),
                r(0, 1),
                r(2, 1),
                r(1, 1),
                r(1, 1),
                r(0, 1),
            ],
        );
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).unwrap().is_identity());
        assert!(inv.mul(&m).unwrap().is_identity());
    }

    #[test]
    fn singular_reports_rank() {
        let m = RationalMatrix::new(index(2), vec![r(1, 1), r(2, 1), r(2, 1), r(4, 1)]);
        assert_eq!(m.inverse().unwrap_err(), Error::GramSingular { size: 2, rank: 1 });
    }

    #[test]
    fn empty_matrix_inverts() {
        let m = RationalMatrix::new(vec![], vec![]);
        assert_eq!(m.inverse().unwrap().size(), 0);
        assert_eq!(m.rank(), 0);
    }

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&r(-3, 6)), "-1/2");
        assert_eq!(parse_rational("4/8").unwrap(), r(1, 2));
        assert_eq!(parse_rational("7").unwrap(), r(7, 1));
        assert!(parse_rational("1/0").is_err());
    }
}
