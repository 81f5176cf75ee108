//! Two-row set partitions and their categorical operations.
//!
//! A [`Partition`] in `P(k,l)` has `k` upper points and `l` lower points. Points
//! are indexed upper row left to right, then lower row left to right, and the
//! block assignment is stored as a restricted-growth string over that order, so
//! structural equality is partition equality.
//!
//! Two circular orders show up in the algebra and both are exposed here:
//!
//! * the *clockwise* order used for parity labels and for the noncrossing test:
//!   upper row left to right, then lower row right to left;
//! * the *counterclockwise* order starting at the bottom left, used for capping
//!   positions (see [`crate::classify`]).

mod enumerate;
mod text;

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};

pub use enumerate::{enumerate, shapes_up_to, Partitions};

/// Hard limit on the number of points of a single partition.
pub const MAX_POINTS: usize = 255;

pub(crate) type Labels = SmallVec<[u8; 16]>;

/// A point of a two-row diagram, 0-based within its row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Point {
    Upper(usize),
    Lower(usize),
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Upper(i) => write!(f, "u{}", i + 1),
            Point::Lower(j) => write!(f, "l{}", j + 1),
        }
    }
}

/// Which end of a row a rotation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// A row of a two-row diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Row {
    Upper,
    Lower,
}

/// A partition between `upper` upper points and `lower` lower points.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    upper: u8,
    lower: u8,
    blocks: Labels,
}

impl Partition {
    /// Builds a partition from arbitrary block labels, one per point in
    /// upper-then-lower order. Labels are canonicalized.
    pub fn from_labels<T: Copy + Eq>(upper: usize, lower: usize, labels: &[T]) -> Result<Self> {
        if labels.len() != upper + lower {
            return Err(Error::ArityMismatch {
                expected: upper + lower,
                got: labels.len(),
            });
        }
        if labels.len() > MAX_POINTS {
            return Err(Error::BoundExceeded {
                legs: labels.len(),
                bound: MAX_POINTS,
            });
        }
        let mut seen: Vec<T> = Vec::new();
        let blocks = labels
            .iter()
            .map(|l| match seen.iter().position(|s| s == l) {
                Some(i) => i as u8,
                None => {
                    seen.push(*l);
                    (seen.len() - 1) as u8
                }
            })
            .collect();
        Ok(Partition {
            upper: upper as u8,
            lower: lower as u8,
            blocks,
        })
    }

    /// Builds a partition from a list of blocks given as points.
    ///
    /// Every point of `P(upper, lower)` must occur exactly once.
    pub fn from_blocks(upper: usize, lower: usize, blocks: &[Vec<Point>]) -> Result<Self> {
        let n = upper + lower;
        if n > MAX_POINTS {
            return Err(Error::BoundExceeded {
                legs: n,
                bound: MAX_POINTS,
            });
        }
        let mut labels: Vec<Option<usize>> = vec![None; n];
        for (b, block) in blocks.iter().enumerate() {
            for &pt in block {
                let idx = match pt {
                    Point::Upper(i) if i < upper => i,
                    Point::Lower(j) if j < lower => upper + j,
                    _ => {
                        return Err(Error::PointOutOfRange {
                            point: pt.to_string(),
                            upper,
                            lower,
                        })
                    }
                };
                if labels[idx].is_some() {
                    return Err(Error::DuplicatePoint(pt.to_string()));
                }
                labels[idx] = Some(b);
            }
        }
        let labels = labels
            .into_iter()
            .enumerate()
            .map(|(idx, l)| {
                l.ok_or_else(|| {
                    let pt = if idx < upper {
                        Point::Upper(idx)
                    } else {
                        Point::Lower(idx - upper)
                    };
                    Error::MissingPoint(pt.to_string())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::from_labels(upper, lower, &labels)
    }

    pub(crate) fn from_canonical(upper: usize, lower: usize, blocks: Labels) -> Self {
        debug_assert_eq!(blocks.len(), upper + lower);
        Partition {
            upper: upper as u8,
            lower: lower as u8,
            blocks,
        }
    }

    /// Canonicalizes labels that are already small integers.
    pub(crate) fn from_raw(upper: usize, lower: usize, raw: &[u8]) -> Self {
        let mut map = [u8::MAX; 256];
        let mut next = 0u8;
        let blocks = raw
            .iter()
            .map(|&r| {
                let slot = &mut map[r as usize];
                if *slot == u8::MAX {
                    *slot = next;
                    next += 1;
                }
                *slot
            })
            .collect();
        Partition::from_canonical(upper, lower, blocks)
    }

    /// The empty partition in `P(0,0)`.
    pub fn empty() -> Self {
        Partition::from_canonical(0, 0, Labels::new())
    }

    /// The identity string `|` in `P(1,1)`.
    pub fn identity() -> Self {
        Partition::from_canonical(1, 1, smallvec::smallvec![0, 0])
    }

    /// The tensor power `|^{⊗r}` in `P(r,r)`.
    pub fn identity_on(r: usize) -> Self {
        let raw: Vec<u8> = (0..r).chain(0..r).map(|i| i as u8).collect();
        Partition::from_raw(r, r, &raw)
    }

    /// The pair partition `∩` in `P(0,2)`.
    pub fn pair() -> Self {
        Partition::from_canonical(0, 2, smallvec::smallvec![0, 0])
    }

    /// The cap `∪` in `P(2,0)`.
    pub fn cup() -> Self {
        Partition::from_canonical(2, 0, smallvec::smallvec![0, 0])
    }

    /// The lower singleton in `P(0,1)`.
    pub fn singleton() -> Self {
        Partition::from_canonical(0, 1, smallvec::smallvec![0])
    }

    /// The basic crossing `u1 l2 | u2 l1` in `P(2,2)`.
    pub fn crossing() -> Self {
        Partition::from_canonical(2, 2, smallvec::smallvec![0, 1, 1, 0])
    }

    /// The one-block partition in `P(k,l)`.
    pub fn single_block(upper: usize, lower: usize) -> Self {
        Partition::from_canonical(upper, lower, smallvec::smallvec![0; upper + lower])
    }

    /// The all-singletons partition in `P(k,l)`.
    pub fn singletons(upper: usize, lower: usize) -> Self {
        Partition::from_canonical(upper, lower, (0..(upper + lower) as u8).collect())
    }

    pub fn upper(&self) -> usize {
        self.upper as usize
    }

    pub fn lower(&self) -> usize {
        self.lower as usize
    }

    /// Total number of points `k + l`.
    pub fn legs(&self) -> usize {
        self.blocks.len()
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.upper(), self.lower())
    }

    /// Canonical block labels in upper-then-lower point order.
    pub fn labels(&self) -> &[u8] {
        &self.blocks
    }

    /// Whether the partition has even total leg count.
    pub fn is_even(&self) -> bool {
        self.legs() % 2 == 0
    }

    pub fn point(&self, index: usize) -> Point {
        if index < self.upper() {
            Point::Upper(index)
        } else {
            Point::Lower(index - self.upper())
        }
    }

    pub fn index_of(&self, point: Point) -> Option<usize> {
        match point {
            Point::Upper(i) if i < self.upper() => Some(i),
            Point::Lower(j) if j < self.lower() => Some(self.upper() + j),
            _ => None,
        }
    }

    /// Number of blocks `b(p)`.
    pub fn block_count(&self) -> usize {
        self.blocks.iter().max().map_or(0, |&m| m as usize + 1)
    }

    /// Block cardinalities, largest first.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.block_count()];
        for &b in &self.blocks {
            sizes[b as usize] += 1;
        }
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    /// Point indices of each block, blocks in canonical order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.blocks.iter().enumerate() {
            out[b as usize].push(i);
        }
        out
    }

    /// Whether every block has exactly two points.
    pub fn is_pairing(&self) -> bool {
        self.block_sizes_bounded(|s| s == 2)
    }

    pub(crate) fn block_sizes_bounded(&self, ok: impl Fn(usize) -> bool) -> bool {
        let mut sizes = [0u8; MAX_POINTS + 1];
        for &b in &self.blocks {
            sizes[b as usize] += 1;
        }
        sizes[..self.block_count()].iter().all(|&s| ok(s as usize))
    }

    /// Clockwise parity label (1-based) of the point at `index`: the upper row
    /// gets `1..=k` left to right, the lower row gets `k+1..=k+l` right to left.
    pub fn parity_label(&self, index: usize) -> usize {
        let k = self.upper();
        if index < k {
            index + 1
        } else {
            let j = index - k;
            k + self.lower() - j
        }
    }

    /// Point indices in clockwise order: upper left to right, lower right to left.
    pub fn clockwise_order(&self) -> impl Iterator<Item = usize> + '_ {
        let k = self.upper();
        let n = self.legs();
        (0..k).chain((k..n).rev())
    }

    /// Point indices in counterclockwise order starting at the bottom left:
    /// lower left to right, then upper right to left.
    pub fn counterclockwise_order(&self) -> impl Iterator<Item = usize> + '_ {
        let k = self.upper();
        let n = self.legs();
        (k..n).chain((0..k).rev())
    }

    /// Whether no two blocks cross in the clockwise circular order.
    pub fn is_noncrossing(&self) -> bool {
        let nb = self.block_count();
        let mut last = [0u8; MAX_POINTS + 1];
        let order: SmallVec<[u8; 16]> = self.clockwise_order().map(|i| self.blocks[i]).collect();
        for (pos, &b) in order.iter().enumerate() {
            last[b as usize] = pos as u8;
        }
        let mut seen = [false; MAX_POINTS + 1];
        let mut stack: SmallVec<[u8; 16]> = SmallVec::new();
        for (pos, &b) in order.iter().enumerate() {
            let bi = b as usize;
            if !seen[bi] {
                seen[bi] = true;
                if last[bi] as usize != pos {
                    stack.push(b);
                }
            } else {
                if stack.last() != Some(&b) {
                    return false;
                }
                if last[bi] as usize == pos {
                    stack.pop();
                }
            }
        }
        debug_assert!(stack.is_empty() && seen[..nb].iter().all(|&s| s));
        true
    }

    /// Horizontal concatenation `self ⊗ right`.
    pub fn tensor(&self, right: &Partition) -> Partition {
        let shift = self.block_count() as u8;
        let (k1, k2) = (self.upper(), right.upper());
        let mut raw: Labels = SmallVec::with_capacity(self.legs() + right.legs());
        raw.extend_from_slice(&self.blocks[..k1]);
        raw.extend(right.blocks[..k2].iter().map(|&b| b + shift));
        raw.extend_from_slice(&self.blocks[k1..]);
        raw.extend(right.blocks[k2..].iter().map(|&b| b + shift));
        Partition::from_raw(k1 + k2, self.lower() + right.lower(), &raw)
    }

    /// Vertical concatenation: `below` is placed under `self`, the middle row is
    /// identified and erased. Returns the composite and the number of closed
    /// components that lived entirely in the middle row.
    pub fn compose(&self, below: &Partition) -> Result<(Partition, usize)> {
        if self.lower() != below.upper() {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose P({},{}) over P({},{})",
                self.upper(),
                self.lower(),
                below.upper(),
                below.lower()
            )));
        }
        Ok(self.compose_unchecked(below))
    }

    pub(crate) fn compose_unchecked(&self, below: &Partition) -> (Partition, usize) {
        let (k, l, m) = (self.upper(), self.lower(), below.lower());
        let bp = self.block_count();
        let total = bp + below.block_count();
        let mut parent: SmallVec<[u8; 32]> = (0..total as u8).collect();
        for i in 0..l {
            let a = find(&mut parent, self.blocks[k + i]);
            let b = find(&mut parent, bp as u8 + below.blocks[i]);
            if a != b {
                parent[a.max(b) as usize] = a.min(b);
            }
        }
        let mut raw: Labels = SmallVec::with_capacity(k + m);
        for i in 0..k {
            raw.push(find(&mut parent, self.blocks[i]));
        }
        for j in 0..m {
            raw.push(find(&mut parent, bp as u8 + below.blocks[l + j]));
        }
        let mut outer: SmallVec<[bool; 32]> = smallvec::smallvec![false; total];
        for &r in &raw {
            outer[r as usize] = true;
        }
        let mut loops = 0;
        for r in 0..total {
            if find(&mut parent, r as u8) as usize == r && !outer[r] {
                loops += 1;
            }
        }
        (Partition::from_raw(k, m, &raw), loops)
    }

    /// Upside-down turn: rows are exchanged, left-right order kept.
    pub fn involute(&self) -> Partition {
        let k = self.upper();
        let raw: Labels = self.blocks[k..]
            .iter()
            .chain(self.blocks[..k].iter())
            .copied()
            .collect();
        Partition::from_raw(self.lower(), k, &raw)
    }

    /// Moves one extremal leg of row `from` to the other row on the same
    /// `side`, keeping its block.
    pub fn rotate(&self, side: Side, from: Row) -> Result<Partition> {
        let k = self.upper();
        let (up, low) = (&self.blocks[..k], &self.blocks[k..]);
        let mut new_up: Labels = up.iter().copied().collect();
        let mut new_low: Labels = low.iter().copied().collect();
        match (side, from) {
            (Side::Right, Row::Upper) => {
                let b = new_up.pop().ok_or(Error::EmptyRow)?;
                new_low.push(b);
            }
            (Side::Right, Row::Lower) => {
                let b = new_low.pop().ok_or(Error::EmptyRow)?;
                new_up.push(b);
            }
            (Side::Left, Row::Upper) => {
                if new_up.is_empty() {
                    return Err(Error::EmptyRow);
                }
                let b = new_up.remove(0);
                new_low.insert(0, b);
            }
            (Side::Left, Row::Lower) => {
                if new_low.is_empty() {
                    return Err(Error::EmptyRow);
                }
                let b = new_low.remove(0);
                new_up.insert(0, b);
            }
        }
        let (nk, nl) = (new_up.len(), new_low.len());
        new_up.extend_from_slice(&new_low);
        Ok(Partition::from_raw(nk, nl, &new_up))
    }

    /// All single-leg rotations that apply to this partition.
    pub fn rotations(&self) -> impl Iterator<Item = Partition> + '_ {
        [
            (Side::Right, Row::Upper),
            (Side::Right, Row::Lower),
            (Side::Left, Row::Upper),
            (Side::Left, Row::Lower),
        ]
        .into_iter()
        .filter_map(|(side, row)| self.rotate(side, row).ok())
    }

    /// Rotates every upper leg down so the result lies in `P(0, k+l)` with the
    /// same clockwise circular order.
    pub fn to_lower_row(&self) -> Partition {
        let raw: Labels = self
            .clockwise_order()
            .collect::<SmallVec<[usize; 16]>>()
            .into_iter()
            .rev()
            .map(|i| self.blocks[i])
            .collect();
        Partition::from_raw(0, self.legs(), &raw)
    }

    /// Partition-lattice join: the finest partition coarser than both.
    pub fn join(&self, other: &Partition) -> Result<Partition> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch(format!(
                "join of P({},{}) and P({},{})",
                self.upper(),
                self.lower(),
                other.upper(),
                other.lower()
            )));
        }
        Ok(self.join_unchecked(other))
    }

    pub(crate) fn join_unchecked(&self, other: &Partition) -> Partition {
        let bp = self.block_count();
        let total = bp + other.block_count();
        let mut parent: SmallVec<[u8; 32]> = (0..total as u8).collect();
        for (&a, &b) in self.blocks.iter().zip(other.blocks.iter()) {
            let ra = find(&mut parent, a);
            let rb = find(&mut parent, bp as u8 + b);
            if ra != rb {
                parent[ra.max(rb) as usize] = ra.min(rb);
            }
        }
        let raw: Labels = self.blocks.iter().map(|&a| find(&mut parent, a)).collect();
        Partition::from_raw(self.upper(), self.lower(), &raw)
    }

    /// Number of blocks of the join, without building it.
    pub fn join_block_count(&self, other: &Partition) -> usize {
        self.join_unchecked(other).block_count()
    }

    /// Restriction to the blocks whose bit is set in `mask`, rows preserved.
    pub fn restrict(&self, mask: u64) -> Partition {
        let k = self.upper();
        let keep = |b: u8| mask >> b & 1 == 1;
        let mut up = 0;
        let mut raw: Labels = SmallVec::new();
        for (i, &b) in self.blocks.iter().enumerate() {
            if keep(b) {
                if i < k {
                    up += 1;
                }
                raw.push(b);
            }
        }
        let low = raw.len() - up;
        Partition::from_raw(up, low, &raw)
    }

    /// All `2^b` block-subset restrictions, in increasing subset-mask order.
    pub fn subpartitions(&self) -> impl Iterator<Item = Partition> + '_ {
        let b = self.block_count();
        assert!(b < 64, "subpartitions limited to 63 blocks");
        (0..1u64 << b).map(move |mask| self.restrict(mask))
    }

    /// Removes the points at the given indices; blocks left empty vanish.
    pub(crate) fn delete_points(&self, remove: &[usize]) -> Partition {
        let k = self.upper();
        let mut up = 0;
        let mut raw: Labels = SmallVec::new();
        for (i, &b) in self.blocks.iter().enumerate() {
            if !remove.contains(&i) {
                if i < k {
                    up += 1;
                }
                raw.push(b);
            }
        }
        let low = raw.len() - up;
        Partition::from_raw(up, low, &raw)
    }

    /// Merges the blocks of points `a` and `b`.
    pub(crate) fn fuse_points(&self, a: usize, b: usize) -> Partition {
        let (ba, bb) = (self.blocks[a], self.blocks[b]);
        let raw: Labels = self
            .blocks
            .iter()
            .map(|&x| if x == bb { ba } else { x })
            .collect();
        Partition::from_raw(self.upper(), self.lower(), &raw)
    }
}

fn find(parent: &mut [u8], mut x: u8) -> u8 {
    while parent[x as usize] != x {
        let p = parent[x as usize];
        parent[x as usize] = parent[p as usize];
        x = p;
    }
    x
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.legs() == 0 {
            return f.write_str("P(0,0):");
        }
        for (bi, block) in self.blocks().iter().enumerate() {
            if bi > 0 {
                f.write_str(" | ")?;
            }
            for (pi, &idx) in block.iter().enumerate() {
                if pi > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.point(idx))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P({},{}):{}", self.upper, self.lower, self)
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        text::parse(s)
    }
}

impl Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&text::format_with_shape(self))
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Parses the partition text grammar.
pub fn parse(text: &str) -> Result<Partition> {
    text::parse(text)
}

/// Formats a partition with an explicit shape prefix, e.g. `P(0,2): l1 l2`.
pub fn format(p: &Partition) -> String {
    text::format_with_shape(p)
}
